#pragma once

#include "rlctkit/blowup.hpp"

#include <optional>
#include <set>
#include <vector>

namespace rlctkit {

struct RlctValue {
    Extended lambda;
    std::optional<std::size_t> multiplicity;  // unset when +inf or not determined
    friend bool operator==(const RlctValue&, const RlctValue&) = default;
};

inline json to_json(const RlctValue& v) {
    json j = {{"lambda", v.lambda.str()}};
    j["multiplicity"] = v.multiplicity ? json(*v.multiplicity) : json(nullptr);
    return j;
}

namespace detail {

// The factor w^p of a normal-crossing (or locally normal-crossing) node.
inline ExponentVector leading_exponent(const MultiIndexMatrix& a) {
    if (a.cols() == 2) {
        if (!is_normal_crossing_binomial(a)) throw std::invalid_argument("binomial is not normal crossing");
        return factorize(a).common;
    }
    auto k = minimal_column(a);
    if (!k) throw std::invalid_argument("polynomial is not locally normal crossing");
    return a.column(*k);
}

inline RlctValue rlct_from_leading(const ExponentVector& p, const OuterMonomial& g) {
    const auto s = g.s();
    Rational best = 0;
    std::size_t count = 0;
    for (std::size_t h = 0; h < p.size(); ++h) {
        Rational rho = Rational(p[h]) / s[h];
        if (rho > best) {
            best = rho;
            count = 1;
        } else if (rho == best && rho > 0) {
            ++count;
        }
    }
    if (best == 0) return {Extended::infinity(), std::nullopt};
    return {Extended::reciprocal(best), count};
}

inline void require_even(const MultiIndexMatrix& a) {
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            if (a(i, j) % 2 != 0) throw std::invalid_argument("odd exponent: the binomial is not non-negative");
}

}  // namespace detail

// lambda = 1 / max_h p_h / s_h for w^p (1 + w^r) with outer w^(s-1).
inline RlctValue rlct_normal_crossing(const MultiIndexMatrix& a, const OuterMonomial& s) {
    if (s.dim() != a.rows()) throw std::invalid_argument("outer monomial dimension mismatch");
    return detail::rlct_from_leading(detail::leading_exponent(a), s);
}

// Cross ratios (p_i r'_j + r_i p_j + r_i r'_j) / (s_i r'_j + r_i s_j) over
// variables i in the first term's excess and j in the second's.
struct PotentialRatios {
    std::vector<std::size_t> rows, cols;  // 0-based variable indices
    std::vector<std::vector<Rational>> values;
};

inline PotentialRatios potential_ratios(const MultiIndexMatrix& a, const OuterMonomial& g) {
    if (g.dim() != a.rows()) throw std::invalid_argument("outer monomial dimension mismatch");
    const auto s = g.s();
    auto fac = factorize(a);
    const auto& p = fac.common;
    const auto& r = fac.part1;
    const auto& rp = fac.part2;
    PotentialRatios out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (r[i] > 0) out.rows.push_back(i);
        if (rp[i] > 0) out.cols.push_back(i);
    }
    for (auto i : out.rows) {
        std::vector<Rational> row;
        for (auto j : out.cols) {
            Rational num(p[i] * rp[j] + r[i] * p[j] + r[i] * rp[j]);
            row.push_back(num / (s[i] * Rational(rp[j]) + Rational(r[i]) * s[j]));
        }
        out.values.push_back(std::move(row));
    }
    return out;
}

// Largest of the leading ratios p_h/s_h and the potential ratios.
inline Rational binomial_inverse_lambda(const MultiIndexMatrix& a, const OuterMonomial& g) {
    const auto s = g.s();
    const auto p = factorize(a).common;
    Rational best = 0;
    for (std::size_t h = 0; h < p.size(); ++h) best = std::max(best, Rational(p[h]) / s[h]);
    for (const auto& row : potential_ratios(a, g).values)
        for (const auto& x : row) best = std::max(best, x);
    return best;
}

// Closed form for a non-negative binomial.  The multiplicity is reported for
// normal-crossing inputs only.
inline RlctValue rlct_binomial(const SopPolynomial& f, const OuterMonomial& s) {
    if (!f.is_binomial()) throw std::invalid_argument("expected a binomial");
    if (s.dim() != f.dim()) throw std::invalid_argument("outer monomial dimension mismatch");
    detail::require_even(f.matrix());
    if (is_normal_crossing_binomial(f.matrix())) return rlct_normal_crossing(f.matrix(), s);
    return {Extended::reciprocal(binomial_inverse_lambda(f.matrix(), s)), std::nullopt};
}

// Same value from the per-variable extremes mu_h = min/s_h, nu_h = max/s_h.
// Only pairs whose larger exponents sit in different terms contribute.
inline Extended rlct_binomial_extremes(const SopPolynomial& f, const OuterMonomial& g) {
    const auto s = g.s();
    const auto& a = f.matrix();
    if (!f.is_binomial()) throw std::invalid_argument("expected a binomial");
    const std::size_t d = a.rows();
    std::vector<Rational> mu(d), nu(d);
    Rational best = 0;
    for (std::size_t h = 0; h < d; ++h) {
        BigInt lo = std::min(a(h, 0), a(h, 1)), hi = std::max(a(h, 0), a(h, 1));
        mu[h] = Rational(lo) / s[h];
        nu[h] = Rational(hi) / s[h];
        best = std::max(best, mu[h]);
    }
    for (std::size_t h = 0; h < d; ++h)
        for (std::size_t k = h + 1; k < d; ++k) {
            if (nu[h] == mu[h] || nu[k] == mu[k]) continue;
            bool h_first = a(h, 0) > a(h, 1), k_first = a(k, 0) > a(k, 1);
            if (h_first == k_first) continue;
            best = std::max(best, (nu[h] * nu[k] - mu[h] * mu[k]) / (nu[h] + nu[k] - mu[h] - mu[k]));
        }
    return Extended::reciprocal(best);
}

// lambda and multiplicity read off the leaves of a finished tree.
inline RlctValue rlct_via_tree(const BlowupTree& t) {
    std::optional<RlctValue> best;
    for (auto leaf : t.leaves()) {
        const auto& n = t.node(leaf);
        RlctValue v = rlct_normal_crossing(n.inner, n.outer);
        if (!best || v.lambda < best->lambda) {
            best = v;
        } else if (v.lambda == best->lambda && v.multiplicity &&
                   (!best->multiplicity || *v.multiplicity > *best->multiplicity)) {
            best->multiplicity = v.multiplicity;
        }
    }
    return *best;
}

// Leaves of trees over binomials that need not be non-negative.  A unit factor
// 1 + w^r with an odd entry in r vanishes on a smooth hypersurface, which
// caps the local threshold at 1.
inline Extended legacy_rlct(const BlowupTree& t) {
    Extended best = Extended::infinity();
    for (auto leaf : t.leaves()) {
        const auto& n = t.node(leaf);
        Extended v = rlct_normal_crossing(n.inner, n.outer).lambda;
        auto fac = factorize(n.inner);
        for (std::size_t h = 0; h < fac.part1.size(); ++h)
            if (fac.part1[h] % 2 != 0 || fac.part2[h] % 2 != 0) v = min(v, Extended(1));
        best = min(best, v);
    }
    return best;
}

// Sum of min(1/m, 1/n, 1/l) over the two terms of an exclusive binomial.
inline Extended exclusive_min_reciprocal_sum(const MultiIndexMatrix& a) {
    auto t = exclusive_triple(a);
    if (!t) throw std::invalid_argument("binomial is not exclusive");
    Extended total = 0;
    for (const auto& term : t->degrees) {
        BigInt top = 0;
        for (const auto& x : term) top = std::max(top, x);
        total = total + Extended::reciprocal(Rational(top));
    }
    return total;
}

// Bivariate node written as w1^p w2^q (w1^r + w2^r') with outer exponents (s, t).
struct StemForm {
    BigInt p, q, r, rp;
    Rational s, t;
};

inline std::optional<StemForm> stem_form(const MultiIndexMatrix& a, const OuterMonomial& g) {
    if (a.rows() != 2 || a.cols() != 2) return std::nullopt;
    auto fac = factorize(a);
    StemForm f{fac.common[0], fac.common[1], 0, 0, g[0], g[1]};
    const auto& x = fac.part1;
    const auto& y = fac.part2;
    if (x[1] == 0 && y[0] == 0) {
        f.r = x[0];
        f.rp = y[1];
    } else if (x[0] == 0 && y[1] == 0) {
        f.r = y[0];
        f.rp = x[1];
    } else {
        return std::nullopt;
    }
    return f;
}

inline StemForm require_stem_form(const BlowupNode& n) {
    auto f = stem_form(n.inner, n.outer);
    if (!f) throw std::invalid_argument("node is not a bivariate binomial in stem form");
    return *f;
}

// a (p r' + r q + r r') + b (s q - (p + r) t) + c (s r' + r t); constant
// along a stem.
inline Rational stem_invariant(const BlowupNode& n, const std::array<Rational, 3>& abc) {
    StemForm f = require_stem_form(n);
    Rational p(f.p), q(f.q), r(f.r), rp(f.rp);
    return abc[0] * (p * rp + r * q + r * rp) + abc[1] * (f.s * q - (p + r) * f.t) + abc[2] * (f.s * rp + r * f.t);
}

// Leading ratio at the end of a left stem, predicted from the root.
inline Rational predicted_stem_ratio(const BlowupNode& root) {
    StemForm f = require_stem_form(root);
    Rational p(f.p), q(f.q), r(f.r), rp(f.rp);
    return (p * rp + r * q + r * rp) / (f.s * rp + r * f.t);
}

inline std::set<Rational> index_ratios(const BlowupNode& n) {
    StemForm f = require_stem_form(n);
    return {Rational(f.p) / f.s, Rational(f.q) / f.t};
}

enum class Trend { Constant, Increasing, Decreasing, Mixed };

inline Trend trend(const std::vector<Rational>& v) {
    bool up = false, down = false;
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] > v[k - 1]) up = true;
        if (v[k] < v[k - 1]) down = true;
    }
    if (up && down) return Trend::Mixed;
    if (up) return Trend::Increasing;
    if (down) return Trend::Decreasing;
    return Trend::Constant;
}

// Leading ratios (rho) and excess ratios (nu) on each side along a stem.
struct StemSequences {
    std::vector<Rational> rho_left, rho_right, nu_left, nu_right;
};

inline StemSequences stem_sequences(const BlowupTree& t, const std::vector<std::size_t>& path) {
    StemSequences out;
    for (auto v : path) {
        StemForm f = require_stem_form(t.node(v));
        out.rho_left.push_back(Rational(f.p) / f.s);
        out.rho_right.push_back(Rational(f.q) / f.t);
        out.nu_left.push_back(Rational(f.p + f.r) / f.s);
        out.nu_right.push_back(Rational(f.q + f.rp) / f.t);
    }
    return out;
}

// Non-strict: a weakly increasing exactly when b is weakly decreasing.
inline bool regressive(Trend a, Trend b) {
    auto weak_up = [](Trend x) { return x == Trend::Increasing || x == Trend::Constant; };
    auto weak_down = [](Trend x) { return x == Trend::Decreasing || x == Trend::Constant; };
    return (weak_up(a) && weak_down(b)) || (weak_down(a) && weak_up(b));
}

// A factor of a disjoint sum or product together with its threshold.
struct Component {
    MultiIndexMatrix exponents;
    RlctValue value;
};

namespace detail {

inline void require_disjoint(const std::vector<Component>& parts) {
    if (parts.empty()) throw std::invalid_argument("no components");
    const std::size_t d = parts.front().exponents.rows();
    std::vector<int> owner(d, -1);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto& a = parts[k].exponents;
        if (a.rows() != d) throw std::invalid_argument("components live in different dimensions");
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                if (a(i, j) != 0) {
                    if (owner[i] != -1 && owner[i] != static_cast<int>(k))
                        throw std::invalid_argument("components share variable w" + std::to_string(i + 1));
                    owner[i] = static_cast<int>(k);
                }
    }
}

}  // namespace detail

// Sum of polynomials in disjoint variables.
inline RlctValue rlct_of_sum(const std::vector<Component>& parts) {
    detail::require_disjoint(parts);
    Extended lambda = 0;
    std::optional<std::size_t> m = 1;
    for (const auto& p : parts) {
        lambda = lambda + p.value.lambda;
        if (m && p.value.multiplicity)
            *m += *p.value.multiplicity - 1;
        else
            m.reset();
    }
    if (lambda.is_infinite()) m.reset();
    return {lambda, m};
}

// Product of polynomials in disjoint variables.
inline RlctValue rlct_of_product(const std::vector<Component>& parts) {
    detail::require_disjoint(parts);
    Extended lambda = Extended::infinity();
    for (const auto& p : parts) lambda = min(lambda, p.value.lambda);
    if (lambda.is_infinite()) return {lambda, std::nullopt};
    std::optional<std::size_t> m = 0;
    for (const auto& p : parts) {
        if (p.value.lambda != lambda) continue;
        if (m && p.value.multiplicity)
            *m += *p.value.multiplicity;
        else
            m.reset();
    }
    return {lambda, m};
}

}  // namespace rlctkit
