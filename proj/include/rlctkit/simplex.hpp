#pragma once

#include "rlctkit/blowup.hpp"
#include "rlctkit/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace rlctkit {

inline constexpr std::size_t kDefaultPivotCap = 100'000;

// max beta  s.t.  sum_h alpha_h mu[h][j] >= beta for every column j,
//                 sum_h alpha_h = 1,  alpha, beta >= 0.
struct LpProblem {
    std::size_t d = 0;
    std::vector<std::vector<Rational>> mu;  // mu[j] is column j, length d
    std::vector<std::size_t> source;        // polynomial term index of each column
};

struct LpSolution {
    std::vector<Rational> alpha;
    Rational beta;
    std::vector<std::size_t> basis;  // alpha_h -> h, beta -> d, slack j -> d + 1 + j
    std::size_t pivots = 0;
};

// Columns a_j / s, dropping any column that dominates another one: such a
// constraint is implied and removing it leaves the optimum unchanged.
inline LpProblem make_lp(const MultiIndexMatrix& a, const OuterMonomial& g, bool prune = true) {
    const auto s = g.s();
    if (s.size() != a.rows()) throw std::invalid_argument("outer monomial dimension mismatch");
    const std::size_t d = a.rows(), n = a.cols();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<BigInt> deg(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < d; ++i) deg[j] += a(i, j);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return deg[x] < deg[y]; });
    std::vector<std::size_t> kept;
    for (auto j : order) {
        bool dominated = false;
        if (prune)
            for (auto k : kept) {
                bool le = true;
                for (std::size_t i = 0; i < d && le; ++i) le = a(i, k) <= a(i, j);
                if (le) {
                    dominated = true;
                    break;
                }
            }
        if (!dominated) kept.push_back(j);
    }
    std::sort(kept.begin(), kept.end());
    LpProblem lp;
    lp.d = d;
    for (auto j : kept) {
        std::vector<Rational> col(d);
        for (std::size_t i = 0; i < d; ++i) col[i] = Rational(a(i, j)) / s[i];
        lp.mu.push_back(std::move(col));
        lp.source.push_back(j);
    }
    return lp;
}

// Exact primal simplex in dictionary form with Bland's rule.  The start basis
// is alpha = e_1, beta = 0 with every slack basic.
inline LpSolution lp_solve(const LpProblem& lp, std::size_t pivot_cap = kDefaultPivotCap) {
    const std::size_t d = lp.d, n = lp.mu.size();
    if (d == 0 || n == 0) throw std::invalid_argument("empty linear program");
    const std::size_t beta_var = d;
    // Row 0 holds alpha_1, row 1 + j the slack of column j.
    std::vector<std::size_t> basic(n + 1), nonbasic(d);
    basic[0] = 0;
    for (std::size_t j = 0; j < n; ++j) basic[1 + j] = d + 1 + j;
    for (std::size_t h = 1; h < d; ++h) nonbasic[h - 1] = h;
    nonbasic[d - 1] = beta_var;

    // basic[r] = rhs[r] - sum_k tab[r][k] * nonbasic[k];  z = z0 + sum_k cost[k] * nonbasic[k].
    std::vector<std::vector<Rational>> tab(n + 1, std::vector<Rational>(d));
    std::vector<Rational> rhs(n + 1), cost(d);
    rhs[0] = 1;
    for (std::size_t h = 1; h < d; ++h) tab[0][h - 1] = 1;
    for (std::size_t j = 0; j < n; ++j) {
        rhs[1 + j] = lp.mu[j][0];
        for (std::size_t h = 1; h < d; ++h) tab[1 + j][h - 1] = lp.mu[j][0] - lp.mu[j][h];
        tab[1 + j][d - 1] = 1;
    }
    cost[d - 1] = 1;
    Rational z0 = 0;

    std::size_t pivots = 0;
    while (true) {
        std::optional<std::size_t> enter;
        for (std::size_t k = 0; k < d; ++k)
            if (cost[k] > 0 && (!enter || nonbasic[k] < nonbasic[*enter])) enter = k;
        if (!enter) break;
        const std::size_t k = *enter;
        std::optional<std::size_t> leave;
        Rational best;
        for (std::size_t r = 0; r <= n; ++r) {
            if (tab[r][k] <= 0) continue;
            Rational ratio = rhs[r] / tab[r][k];
            if (!leave || ratio < best || (ratio == best && basic[r] < basic[*leave])) {
                leave = r;
                best = ratio;
            }
        }
        if (!leave) throw InvariantViolation("linear program reported unbounded");
        if (++pivots > pivot_cap)
            throw CapExceeded("simplex reached the pivot cap of " + std::to_string(pivot_cap));
        const std::size_t r = *leave;
        const Rational piv = tab[r][k];
        // Solve row r for the entering variable.
        for (std::size_t m = 0; m < d; ++m)
            if (m != k) tab[r][m] /= piv;
        tab[r][k] = Rational(1) / piv;
        rhs[r] /= piv;
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == r || tab[i][k] == 0) continue;
            const Rational f = tab[i][k];
            for (std::size_t m = 0; m < d; ++m) {
                if (m == k || tab[r][m] == 0) continue;
                tab[i][m] -= f * tab[r][m];
            }
            tab[i][k] = -f * tab[r][k];
            rhs[i] -= f * rhs[r];
        }
        if (cost[k] != 0) {
            const Rational c = cost[k];
            for (std::size_t m = 0; m < d; ++m)
                if (m != k) cost[m] -= c * tab[r][m];
            cost[k] = -c * tab[r][k];
            z0 += c * rhs[r];
        }
        std::swap(basic[r], nonbasic[k]);
    }

    LpSolution sol;
    sol.alpha.assign(d, Rational(0));
    sol.beta = 0;
    for (std::size_t r = 0; r <= n; ++r) {
        if (basic[r] < d)
            sol.alpha[basic[r]] = rhs[r];
        else if (basic[r] == beta_var)
            sol.beta = rhs[r];
    }
    sol.basis = basic;
    std::sort(sol.basis.begin(), sol.basis.end());
    sol.pivots = pivots;

    Rational total = 0;
    for (const auto& x : sol.alpha) {
        if (x < 0) throw InvariantViolation("simplex returned a negative weight");
        total += x;
    }
    if (total != 1 || sol.beta != z0) throw InvariantViolation("simplex returned an infeasible point");
    for (const auto& col : lp.mu) {
        Rational v = 0;
        for (std::size_t h = 0; h < d; ++h) v += sol.alpha[h] * col[h];
        if (v < sol.beta) throw InvariantViolation("simplex returned an infeasible point");
    }
    return sol;
}

struct SimplexBound {
    Extended lambda_smplx;
    std::vector<Rational> alpha;
    Rational beta;
    std::optional<std::vector<BigInt>> weight;  // unset when beta == 0
    std::size_t constraints = 0;                // columns left after pruning
};

inline void require_nonzero(const GeneralPolynomial& f, const OuterMonomial& s) {
    if (f.is_zero()) throw std::invalid_argument("zero polynomial has no threshold");
    if (s.dim() != f.dim()) throw std::invalid_argument("outer monomial dimension mismatch");
}

inline SimplexBound simplex_upper_bound(const GeneralPolynomial& f, const OuterMonomial& s,
                                        std::size_t pivot_cap = kDefaultPivotCap) {
    require_nonzero(f, s);
    LpProblem lp = make_lp(f.exponent_matrix(), s);
    LpSolution sol = lp_solve(lp, pivot_cap);
    SimplexBound b{Extended::reciprocal(sol.beta), sol.alpha, sol.beta, std::nullopt, lp.mu.size()};
    if (sol.beta > 0) {
        const auto sv = s.s();
        std::vector<Rational> scaled(f.dim());
        for (std::size_t h = 0; h < f.dim(); ++h) scaled[h] = sol.alpha[h] / sv[h];
        b.weight = primitive_integer_vector(scaled);
    }
    return b;
}

inline SimplexBound simplex_upper_bound(const SopPolynomial& f, const OuterMonomial& s,
                                        std::size_t pivot_cap = kDefaultPivotCap) {
    return simplex_upper_bound(GeneralPolynomial::from_sop(f), s, pivot_cap);
}

inline json to_json(const SimplexBound& b) {
    json alpha = json::array();
    for (const auto& x : b.alpha) alpha.push_back(to_string(x));
    json j = {{"lambda_smplx", b.lambda_smplx.str()}, {"alpha", alpha}, {"beta", to_string(b.beta)}};
    if (b.weight) {
        json w = json::array();
        for (const auto& x : *b.weight) w.push_back(detail::integer_json(x));
        j["weight"] = w;
    } else {
        j["weight"] = nullptr;
    }
    return j;
}

// min_j q.a_j / q.s
inline Rational minimum_index_ratio(const GeneralPolynomial& f, const OuterMonomial& s,
                                    const std::vector<BigInt>& q) {
    require_nonzero(f, s);
    if (q.size() != f.dim()) throw std::invalid_argument("weight dimension mismatch");
    Rational qs = 0;
    for (std::size_t h = 0; h < q.size(); ++h) {
        if (q[h] < 0) throw std::invalid_argument("weights must be non-negative");
        qs += Rational(q[h]) * s[h];
    }
    if (qs == 0) throw std::invalid_argument("weight vector is zero");
    std::optional<BigInt> best;
    for (const auto& [e, c] : f.terms()) {
        BigInt v = 0;
        for (std::size_t h = 0; h < q.size(); ++h) v += q[h] * e[h];
        if (!best || v < *best) best = v;
    }
    return Rational(*best) / qs;
}

struct WeightResult {
    std::vector<BigInt> q;
    Rational mu;
    bool admissible = false;  // at least two positive entries
};

inline json to_json(const WeightResult& w) {
    json q = json::array();
    for (const auto& x : w.q) q.push_back(detail::integer_json(x));
    json j = {{"q", q}, {"mu", to_string(w.mu)}};
    if (!w.admissible) j["admissible"] = false;
    return j;
}

// Weight read off the LP optimum; its minimum index ratio equals beta.
inline WeightResult optimal_weight(const GeneralPolynomial& f, const OuterMonomial& s,
                                   std::size_t pivot_cap = kDefaultPivotCap) {
    SimplexBound b = simplex_upper_bound(f, s, pivot_cap);
    if (!b.weight) throw std::invalid_argument("polynomial does not vanish at the origin");
    WeightResult w{*b.weight, minimum_index_ratio(f, s, *b.weight), false};
    if (w.mu != b.beta) throw InvariantViolation("weight ratio differs from the LP optimum");
    w.admissible = std::count_if(w.q.begin(), w.q.end(), [](const BigInt& x) { return x > 0; }) >= 2;
    return w;
}

struct WeightedChart {
    GeneralPolynomial inner;
    OuterMonomial outer;
    BigInt jacobian_constant;
};

// Chart i of the weighted blow-up: w_i <- w_i^{q_i}, w_j <- w_j w_i^{q_j}.
inline WeightedChart weighted_blowup_chart(const GeneralPolynomial& f, const OuterMonomial& s,
                                           const std::vector<BigInt>& q, std::size_t i) {
    require_nonzero(f, s);
    if (q.size() != f.dim() || i >= q.size()) throw std::invalid_argument("weight dimension mismatch");
    if (q[i] <= 0) throw std::invalid_argument("chart variable needs a positive weight");
    for (const auto& x : q)
        if (x < 0) throw std::invalid_argument("weights must be non-negative");
    GeneralPolynomial g(f.dim());
    for (const auto& [e, c] : f.terms()) {
        ExponentVector ne = e;
        ne[i] = 0;
        for (std::size_t h = 0; h < q.size(); ++h) ne[i] += q[h] * e[h];
        g.add_term(ne, c);
    }
    auto so = s.s();
    so[i] = 0;
    for (std::size_t h = 0; h < q.size(); ++h) so[i] += Rational(q[h]) * s[h];
    return {std::move(g), OuterMonomial(std::move(so)), q[i]};
}

// Bound is +inf exactly when f(0) != 0.
inline bool infinite_iff_constant(const GeneralPolynomial& f, const OuterMonomial& s) {
    return simplex_upper_bound(f, s).lambda_smplx.is_infinite() == (f.constant_term() != 0);
}

// For non-negative f with f(0) = 0: lambda_smplx <= sum(s) / 2.
inline bool parameter_bound_holds(const GeneralPolynomial& f, const OuterMonomial& s) {
    if (f.constant_term() != 0) throw std::invalid_argument("polynomial does not vanish at the origin");
    return simplex_upper_bound(f, s).lambda_smplx <= Extended(s.total() / 2);
}

// Exhaustive search over q in {0..cap}^d; exponential, meant for checks.
inline std::pair<Rational, std::vector<BigInt>> brute_force_weight(const GeneralPolynomial& f,
                                                                   const OuterMonomial& s, unsigned cap) {
    const std::size_t d = f.dim();
    std::vector<BigInt> q(d, 0), best_q;
    Rational best = -1;
    while (true) {
        std::size_t k = 0;
        while (k < d && q[k] == cap) q[k++] = 0;
        if (k == d) break;
        ++q[k];
        Rational v = minimum_index_ratio(f, s, q);
        if (v > best) {
            best = v;
            best_q = q;
        }
    }
    return {best, best_q};
}

}  // namespace rlctkit
