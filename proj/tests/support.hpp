#pragma once

#include "rlctkit/rlctkit.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

namespace testing_support {

using namespace rlctkit;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    Rational rational(long max_num, long max_den) {
        long p = integer(-max_num, max_num);
        long q = integer(1, max_den);
        return Rational(p, q);
    }

    Rational positive(long max_num, long max_den) { return Rational(integer(1, max_num), integer(1, max_den)); }

    ExponentVector exponents(std::size_t d, long max_exp, bool even) {
        ExponentVector e(d);
        for (auto& x : e) x = even ? 2 * integer(0, max_exp / 2) : integer(0, max_exp);
        return e;
    }

    // n distinct columns; the zero column is excluded unless allow_constant.
    MultiIndexMatrix matrix(std::size_t d, std::size_t n, long max_exp, bool even, bool allow_constant = false) {
        std::set<ExponentVector> seen;
        std::vector<ExponentVector> cols;
        while (cols.size() < n) {
            ExponentVector e = exponents(d, max_exp, even);
            if (!allow_constant && is_zero(e)) continue;
            if (seen.insert(e).second) cols.push_back(e);
        }
        return MultiIndexMatrix::from_columns(cols);
    }

    OuterMonomial outer(std::size_t d, const std::vector<Rational>& choices) {
        std::vector<Rational> s(d);
        for (auto& x : s) x = choices[index(choices.size())];
        return OuterMonomial(s);
    }

    GeneralPolynomial polynomial(std::size_t d, std::size_t terms, long max_exp) {
        GeneralPolynomial p(d);
        while (p.size() < terms) {
            Rational c = rational(5, 3);
            if (c != 0) p.add_term(exponents(d, max_exp, false), c);
        }
        return p;
    }

    // Sum of squares of polynomials without constant term: f >= 0, f(0) = 0.
    GeneralPolynomial nonnegative(std::size_t d, std::size_t squares, long max_exp) {
        GeneralPolynomial f(d);
        for (std::size_t k = 0; k < squares; ++k) {
            GeneralPolynomial h(d);
            while (h.size() < 2) {
                ExponentVector e = exponents(d, max_exp, false);
                Rational c = rational(4, 3);
                if (!is_zero(e) && c != 0) h.add_term(e, c);
            }
            f += h * h;
        }
        return f;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

namespace oracle {

// Solves m x = rhs exactly; nullopt when singular.
inline std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(m[p], m[c]);
        std::swap(rhs[p], rhs[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rational k = m[r][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[r][j] -= k * m[c][j];
            rhs[r] -= k * rhs[c];
        }
    }
    for (std::size_t r = 0; r < n; ++r) rhs[r] /= m[r][r];
    return rhs;
}

// max over the simplex of min_j sum_h alpha_h a_hj / s_h, by enumerating
// every vertex of {(alpha, beta)}.
inline Rational lp_vertex_optimum(const MultiIndexMatrix& a, const OuterMonomial& s) {
    const std::size_t d = a.rows(), n = a.cols();
    // inequality k < d: alpha_k >= 0; k >= d: alpha . mu_j - beta >= 0
    auto row = [&](std::size_t k) {
        std::vector<Rational> r(d + 1, Rational(0));
        if (k < d) {
            r[k] = 1;
        } else {
            for (std::size_t h = 0; h < d; ++h) r[h] = Rational(a(h, k - d)) / s[h];
            r[d] = -1;
        }
        return r;
    };
    std::optional<Rational> best;
    std::vector<bool> pick(d + n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(d), true);
    std::sort(pick.begin(), pick.end());
    do {
        std::vector<std::vector<Rational>> m;
        std::vector<Rational> rhs;
        for (std::size_t k = 0; k < d + n; ++k)
            if (pick[k]) {
                m.push_back(row(k));
                rhs.push_back(0);
            }
        std::vector<Rational> sum(d + 1, Rational(1));
        sum[d] = 0;
        m.push_back(sum);
        rhs.push_back(1);
        auto x = solve(m, rhs);
        if (!x) continue;
        bool feasible = true;
        for (std::size_t k = 0; k < d + n && feasible; ++k) {
            auto r = row(k);
            Rational v = 0;
            for (std::size_t h = 0; h <= d; ++h) v += r[h] * (*x)[h];
            feasible = v >= 0;
        }
        if (feasible && (!best || (*x)[d] > *best)) best = (*x)[d];
    } while (std::next_permutation(pick.begin(), pick.end()));
    return *best;
}

// Threshold of w^a + w^b (even exponents) as the reciprocal of the distance
// at which the ray t*s meets the Newton polyhedron: min over the segment
// [a, b] of max_h x_h / s_h, a convex piecewise-linear function whose
// minimum sits at an endpoint or a crossing of two pieces.
inline Extended newton_distance_threshold(const ExponentVector& a, const ExponentVector& b, const OuterMonomial& s) {
    const std::size_t d = a.size();
    auto value = [&](const Rational& th) {
        Rational m = 0;
        for (std::size_t h = 0; h < d; ++h) m = std::max(m, ((1 - th) * Rational(a[h]) + th * Rational(b[h])) / s[h]);
        return m;
    };
    std::vector<Rational> cand{Rational(0), Rational(1)};
    for (std::size_t h = 0; h < d; ++h)
        for (std::size_t k = h + 1; k < d; ++k) {
            // (a_h + th (b_h - a_h)) / s_h == (a_k + th (b_k - a_k)) / s_k
            Rational ch = Rational(b[h] - a[h]) / s[h], ck = Rational(b[k] - a[k]) / s[k];
            Rational c0 = Rational(a[h]) / s[h] - Rational(a[k]) / s[k];
            if (ch == ck) continue;
            Rational th = c0 / (ck - ch);
            if (th > 0 && th < 1) cand.push_back(th);
        }
    Rational t = value(cand[0]);
    for (const auto& th : cand) t = std::min(t, value(th));
    return Extended::reciprocal(t);
}

// One column dominates the other.
inline bool binomial_nc(const ExponentVector& a, const ExponentVector& b) { return leq(a, b) || leq(b, a); }

inline bool has_dominated_column(const MultiIndexMatrix& m) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
        bool ok = true;
        for (std::size_t k = 0; k < m.cols() && ok; ++k) ok = leq(m.column(j), m.column(k));
        if (ok) return true;
    }
    return false;
}

}  // namespace oracle

}  // namespace testing_support
