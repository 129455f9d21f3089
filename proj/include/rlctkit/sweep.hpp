#pragma once

#include "rlctkit/rlct.hpp"
#include "rlctkit/simplex.hpp"

#include <random>
#include <vector>

namespace rlctkit {

// All vectors in {0, 2, ..., max_exp}^d, lexicographic.
inline std::vector<ExponentVector> even_exponent_vectors(std::size_t d, long max_exp) {
    std::vector<ExponentVector> out;
    ExponentVector v(d, 0);
    while (true) {
        out.push_back(v);
        std::size_t k = 0;
        while (k < d && v[k] >= max_exp - 1) v[k++] = 0;
        if (k == d) break;
        v[k] += 2;
    }
    return out;
}

// Unordered pairs of distinct even exponent vectors.
inline std::vector<SopPolynomial> binomial_corpus(std::size_t d, long max_exp) {
    auto vs = even_exponent_vectors(d, max_exp);
    std::vector<SopPolynomial> out;
    out.reserve(vs.size() * (vs.size() - 1) / 2);
    for (std::size_t a = 0; a < vs.size(); ++a)
        for (std::size_t b = a + 1; b < vs.size(); ++b)
            out.emplace_back(MultiIndexMatrix::from_columns({vs[a], vs[b]}));
    return out;
}

// Every outer vector with entries from `choices`; exponential in d.
inline std::vector<OuterMonomial> all_outer(std::size_t d, const std::vector<Rational>& choices) {
    std::vector<OuterMonomial> out;
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        std::vector<Rational> s(d);
        for (std::size_t h = 0; h < d; ++h) s[h] = choices[idx[h]];
        out.emplace_back(std::move(s));
        std::size_t k = 0;
        while (k < d && idx[k] + 1 == choices.size()) idx[k++] = 0;
        if (k == d) break;
        ++idx[k];
    }
    return out;
}

inline OuterMonomial random_outer(std::size_t d, const std::vector<Rational>& choices, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
    std::vector<Rational> s(d);
    for (auto& x : s) x = choices[pick(rng)];
    return OuterMonomial(std::move(s));
}

struct BinomialCheck {
    RlctValue closed;
    RlctValue tree;
    Extended lp;
    Extended extremes;
    std::size_t nodes = 0;

    bool agree() const {
        return closed.lambda == tree.lambda && closed.lambda == lp && closed.lambda == extremes &&
               (!closed.multiplicity || closed.multiplicity == tree.multiplicity);
    }
};

inline BinomialCheck check_binomial(const SopPolynomial& f, const OuterMonomial& s, const BlowupOptions& opt = {}) {
    BinomialCheck c;
    c.closed = rlct_binomial(f, s);
    BlowupTree t = blowup_between_terms(f, s, opt);
    c.nodes = t.size();
    c.tree = rlct_via_tree(t);
    c.lp = simplex_upper_bound(f, s).lambda_smplx;
    c.extremes = rlct_binomial_extremes(f, s);
    return c;
}

}  // namespace rlctkit
