#pragma once

#include "rlctkit/rational.hpp"
#include "rlctkit/multi_index.hpp"
#include "rlctkit/polynomial.hpp"
#include "rlctkit/io.hpp"
#include "rlctkit/blowup.hpp"
#include "rlctkit/rlct.hpp"
#include "rlctkit/simplex.hpp"
#include "rlctkit/models.hpp"
#include "rlctkit/sweep.hpp"
