#pragma once

#include "rlctkit/simplex.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace rlctkit {

struct ReducedRankRegression {
    int M = 0, N = 0, H = 0, r = 0;
};

struct PoissonMixture {
    int M = 0, H = 0, r = 0;
    std::vector<Rational> true_weights;             // length r, sums to 1
    std::vector<std::vector<Rational>> true_rates;  // r rows of length M
    std::optional<std::vector<Rational>> expansion_point;
};

struct VandermondeMatrix {
    int M = 0, N = 0, H = 0, Q = 1, m = 1, r = 0;
};

using ModelSpec = std::variant<ReducedRankRegression, PoissonMixture, VandermondeMatrix>;

inline constexpr std::size_t kDefaultTermCap = 100'000;

namespace detail {

inline void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// Adds (sum of the given monomials)^2, all coefficients one.
inline void add_square_of_sum(GeneralPolynomial& out, const std::vector<ExponentVector>& monos) {
    ExponentVector e(out.dim());
    for (std::size_t x = 0; x < monos.size(); ++x)
        for (std::size_t y = x; y < monos.size(); ++y) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = monos[x][i] + monos[y][i];
            out.add_term(e, Rational(x == y ? 1 : 2));
        }
}

inline ExponentVector unit(std::size_t d, std::size_t i, long k = 1) {
    ExponentVector e(d);
    e[i] = k;
    return e;
}

inline void compositions(std::size_t parts, long total, std::vector<long>& cur,
                         const std::function<void(const std::vector<long>&)>& emit) {
    if (cur.size() + 1 == parts) {
        cur.push_back(total);
        emit(cur);
        cur.pop_back();
        return;
    }
    for (long k = 0; k <= total; ++k) {
        cur.push_back(k);
        compositions(parts, total - k, cur, emit);
        cur.pop_back();
    }
}

inline BigInt binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    BigInt out = 1;
    for (long i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

}  // namespace detail

// ||C1||^2 + ||C2||^2 + ||C3||^2 + ||B4 A4||^2 in the local coordinates of a
// rank-r true matrix.  Variables: C1 (r x r), C2 ((N-r) x r), C3 (r x (M-r)),
// A4 ((H-r) x (M-r)), B4 ((N-r) x (H-r)), each row-major.
inline GeneralPolynomial rrr_polynomial(const ReducedRankRegression& spec) {
    const int M = spec.M, N = spec.N, H = spec.H, r = spec.r;
    detail::require(M >= 1 && N >= 1 && H >= 1, "reduced-rank regression needs M, N, H >= 1");
    detail::require(r >= 0 && r <= H && r <= M && r <= N, "true rank must satisfy 0 <= r <= min(M, N, H)");
    const std::size_t nc = static_cast<std::size_t>(r * r + (N - r) * r + r * (M - r));
    const std::size_t a4 = nc, b4 = a4 + static_cast<std::size_t>((H - r) * (M - r));
    const std::size_t d = b4 + static_cast<std::size_t>((N - r) * (H - r));
    detail::require(d >= 1, "model has no parameters");
    GeneralPolynomial f(d);
    for (std::size_t i = 0; i < nc; ++i) f.add_term(detail::unit(d, i, 2), Rational(1));
    const int k = H - r;
    for (int i = 0; i < N - r; ++i)
        for (int j = 0; j < M - r; ++j) {
            std::vector<ExponentVector> monos;
            for (int l = 0; l < k; ++l) {
                ExponentVector e(d);
                e[b4 + static_cast<std::size_t>(i * k + l)] = 1;
                e[a4 + static_cast<std::size_t>(l * (M - r) + j)] = 1;
                monos.push_back(std::move(e));
            }
            detail::add_square_of_sum(f, monos);
        }
    return f;
}

inline Rational rrr_rlct(const ReducedRankRegression& spec) {
    const long M = spec.M, N = spec.N, H = spec.H, r = spec.r;
    detail::require(r >= 0 && r <= H && r <= M && r <= N, "true rank must satisfy 0 <= r <= min(M, N, H)");
    std::optional<Rational> best;
    for (long s = 0; s <= std::min(M - r, H - r); ++s) {
        Rational v((N + M) * r - r * r + s * (N - r) + (M - r - s) * (H - r - s), 2);
        if (!best || v < *best) best = v;
    }
    return *best;
}

inline std::size_t poisson_dimension(const PoissonMixture& spec) {
    return static_cast<std::size_t>((spec.M + 1) * spec.H - 1);
}

// True parameters placed in the last r components, the rest zero.
inline std::vector<Rational> poisson_default_expansion_point(const PoissonMixture& spec) {
    const int H = spec.H, M = spec.M, r = spec.r;
    std::vector<Rational> pt(poisson_dimension(spec));
    for (int h = 2; h <= H; ++h)
        if (h > H - r) pt[static_cast<std::size_t>(h - 2)] = spec.true_weights[static_cast<std::size_t>(h - (H - r) - 1)];
    for (int m = 0; m < M; ++m)
        for (int h = 1; h <= H; ++h)
            if (h > H - r)
                pt[static_cast<std::size_t>(H - 1 + m * H + h - 1)] =
                    spec.true_rates[static_cast<std::size_t>(h - (H - r) - 1)][static_cast<std::size_t>(m)];
    return pt;
}

// Fills defaults: a single component with weight 1 and unit rates.
inline PoissonMixture poisson_with_defaults(PoissonMixture spec) {
    if (spec.true_weights.empty() && spec.r == 1) spec.true_weights = {Rational(1)};
    if (spec.true_rates.empty() && spec.r == 1)
        spec.true_rates = {std::vector<Rational>(static_cast<std::size_t>(spec.M), Rational(1))};
    return spec;
}

// sum over x in {0..H+r-1}^M of (sum_h a_h prod_m b_mh^x_m - true value)^2,
// with a_1 = 1 - a_2 - ... - a_H, translated so the expansion point is the
// origin.  Variables: a_2..a_H, then b_m1..b_mH for m = 1..M.
inline GeneralPolynomial poisson_polynomial(PoissonMixture spec) {
    spec = poisson_with_defaults(std::move(spec));
    const int M = spec.M, H = spec.H, r = spec.r;
    detail::require(M >= 1 && H >= 1 && r >= 1 && r <= H, "Poisson mixture needs M, H >= 1 and 1 <= r <= H");
    detail::require(spec.true_weights.size() == static_cast<std::size_t>(r), "need r true weights");
    detail::require(spec.true_rates.size() == static_cast<std::size_t>(r), "need r rows of true rates");
    Rational wsum = 0;
    for (const auto& w : spec.true_weights) {
        detail::require(w > 0, "true weights must be positive");
        wsum += w;
    }
    detail::require(wsum == 1, "true weights must sum to 1");
    for (const auto& row : spec.true_rates) {
        detail::require(row.size() == static_cast<std::size_t>(M), "true rate rows need M entries");
        for (const auto& x : row) detail::require(x > 0, "true rates must be positive");
    }
    const std::size_t d = poisson_dimension(spec);
    std::vector<Rational> pt = spec.expansion_point ? *spec.expansion_point : poisson_default_expansion_point(spec);
    detail::require(pt.size() == d, "expansion point has the wrong dimension");

    auto var = [&](std::size_t i) {
        return GeneralPolynomial::variable(d, i) + GeneralPolynomial::constant(d, pt[i]);
    };
    std::vector<GeneralPolynomial> a(static_cast<std::size_t>(H));
    a[0] = GeneralPolynomial::constant(d, Rational(1));
    for (int h = 2; h <= H; ++h) {
        a[static_cast<std::size_t>(h - 1)] = var(static_cast<std::size_t>(h - 2));
        a[0] -= a[static_cast<std::size_t>(h - 1)];
    }
    const int top = H + r - 1;
    // powers[m][h][x] = b_mh^x
    std::vector<std::vector<std::vector<GeneralPolynomial>>> powers(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        powers[static_cast<std::size_t>(m)].resize(static_cast<std::size_t>(H));
        for (int h = 0; h < H; ++h) {
            auto b = var(static_cast<std::size_t>(H - 1 + m * H + h));
            auto& row = powers[static_cast<std::size_t>(m)][static_cast<std::size_t>(h)];
            row.push_back(GeneralPolynomial::constant(d, Rational(1)));
            for (int x = 1; x <= top; ++x) row.push_back(row.back() * b);
        }
    }
    GeneralPolynomial out(d);
    std::vector<int> x(static_cast<std::size_t>(M), 0);
    while (true) {
        GeneralPolynomial px(d);
        for (int h = 0; h < H; ++h) {
            GeneralPolynomial t = a[static_cast<std::size_t>(h)];
            for (int m = 0; m < M; ++m)
                t = t * powers[static_cast<std::size_t>(m)][static_cast<std::size_t>(h)][static_cast<std::size_t>(x[static_cast<std::size_t>(m)])];
            px += t;
        }
        Rational truth = 0;
        for (int h = 0; h < r; ++h) {
            Rational t = spec.true_weights[static_cast<std::size_t>(h)];
            for (int m = 0; m < M; ++m)
                t *= rlctkit::pow(spec.true_rates[static_cast<std::size_t>(h)][static_cast<std::size_t>(m)],
                                                static_cast<unsigned>(x[static_cast<std::size_t>(m)]));
            truth += t;
        }
        px -= GeneralPolynomial::constant(d, truth);
        if (px.constant_term() != 0) throw std::invalid_argument("expansion point does not realise the true distribution");
        out += px * px;
        std::size_t k = 0;
        while (k < x.size() && x[k] == top) x[k++] = 0;
        if (k == x.size()) break;
        ++x[k];
    }
    return out;
}

inline Rational poisson_rlct(const PoissonMixture& spec) {
    detail::require(spec.M >= 1 && spec.H >= 1 && spec.r >= 1 && spec.r <= spec.H, "bad Poisson mixture shape");
    if (spec.M == 1) return Rational(3 * spec.r + spec.H - 2, 4);
    return Rational(spec.M * spec.r + spec.H - 1, 2);
}

// Number of columns of the Vandermonde factor.
inline BigInt vandermonde_columns(const VandermondeMatrix& spec) {
    BigInt total = 0;
    for (int n = 0; n <= spec.H; ++n) total += detail::binomial(spec.Q * n + spec.m + spec.N - 1, spec.N - 1);
    return total;
}

inline BigInt vandermonde_term_estimate(const VandermondeMatrix& spec) {
    return BigInt(spec.M) * vandermonde_columns(spec) * (spec.H * (spec.H + 1) / 2);
}

// ||A B||^2 with A (M x H) and B the columns b_h^L over |L| = Q n + m,
// n = 0..H.  Variables: a_mh row-major, then b_hj row-major.
inline GeneralPolynomial vandermonde_polynomial(const VandermondeMatrix& spec, std::size_t term_cap = kDefaultTermCap) {
    const int M = spec.M, N = spec.N, H = spec.H;
    detail::require(M >= 1 && N >= 1 && H >= 1 && spec.Q >= 1 && spec.m >= 0,
                    "Vandermonde model needs M, N, H, Q >= 1 and m >= 0");
    detail::require(spec.r == 0, "only a zero true rank is supported for the Vandermonde model");
    BigInt est = vandermonde_term_estimate(spec);
    if (est > term_cap)
        throw CapExceeded("Vandermonde expansion would produce about " + est.str() + " terms, above the cap of " +
                          std::to_string(term_cap));
    const std::size_t d = static_cast<std::size_t>(M * H + H * N);
    GeneralPolynomial f(d);
    for (int n = 0; n <= H; ++n) {
        std::vector<long> cur;
        detail::compositions(static_cast<std::size_t>(N), spec.Q * n + spec.m, cur, [&](const std::vector<long>& L) {
            for (int row = 0; row < M; ++row) {
                std::vector<ExponentVector> monos;
                for (int h = 0; h < H; ++h) {
                    ExponentVector e(d);
                    e[static_cast<std::size_t>(row * H + h)] = 1;
                    for (int j = 0; j < N; ++j) e[static_cast<std::size_t>(M * H + h * N + j)] = L[static_cast<std::size_t>(j)];
                    monos.push_back(std::move(e));
                }
                detail::add_square_of_sum(f, monos);
            }
        });
    }
    return f;
}

// Known thresholds for r = 0, m = 1: any H when N = 1, H <= 4 otherwise.
inline std::optional<Rational> vandermonde_rlct(const VandermondeMatrix& spec) {
    const long M = spec.M, N = spec.N, H = spec.H, Q = spec.Q;
    if (spec.r != 0 || spec.m != 1 || M < 1 || N < 1 || H < 1 || Q < 1) return std::nullopt;
    if (N == 1) {
        long k = 0;
        while (2 * H >= M * ((k + 1) * k * Q + 2 * (k + 1))) ++k;
        return Rational(M * Q * k * (k + 1) + 2 * H, 4 * (1 + k * Q));
    }
    if (H > 4) return std::nullopt;
    std::vector<Rational> c;
    if (H == 1) return std::min(Rational(M, 2), Rational(N, 2));
    for (long b = 0; b <= H; ++b) c.emplace_back(b * N + (H - b) * M, 2);
    for (long b = 2; b <= H; ++b)
        for (long a = 1; a <= b - 1; ++a)
            c.emplace_back(b * N + (H - b) * M + Q * (a * (N + a - b) + (H - a) * M), 2 * (Q + 1));
    if (H == 3) {
        c.emplace_back(3 * N + Q * (3 * N - 3 + 3 * M), 2 * (2 * Q + 1));
    } else if (H == 4) {
        for (long a = 2; a <= 4; ++a) c.emplace_back(4 * N + Q * (a * N - a - 1 + (8 - a) * M), 2 * (2 * Q + 1));
        c.emplace_back(4 * N + Q * (5 * N - 5 + 3 * M), 2 * (2 * Q + 1));
        for (long a = 2; a <= 3; ++a) c.emplace_back(3 * N + M + Q * (a * N - a + (8 - a) * M), 2 * (2 * Q + 1));
        c.emplace_back(4 * N + Q * (6 * N - 6 + 6 * M), 2 * (3 * Q + 1));
    }
    return *std::min_element(c.begin(), c.end());
}

inline std::string model_name(const ModelSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ReducedRankRegression>) return "rrr";
            else if constexpr (std::is_same_v<T, PoissonMixture>) return "poisson";
            else return "vandermonde";
        },
        spec);
}

inline int model_hidden(const ModelSpec& spec) {
    return std::visit([](const auto& s) { return s.H; }, spec);
}

inline ModelSpec with_hidden(ModelSpec spec, int H) {
    std::visit([H](auto& s) { s.H = H; }, spec);
    return spec;
}

struct ComparisonRow {
    int H = 0;
    std::optional<Rational> lambda_rlct;
    Extended lambda_smplx;
    Rational param_bound;
    std::size_t terms = 0;
};

inline GeneralPolynomial model_polynomial(const ModelSpec& spec, std::size_t term_cap = kDefaultTermCap) {
    return std::visit(
        [&](const auto& s) -> GeneralPolynomial {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ReducedRankRegression>) return rrr_polynomial(s);
            else if constexpr (std::is_same_v<T, PoissonMixture>) return poisson_polynomial(s);
            else return vandermonde_polynomial(s, term_cap);
        },
        spec);
}

inline std::optional<Rational> model_rlct(const ModelSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::optional<Rational> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ReducedRankRegression>) return rrr_rlct(s);
            else if constexpr (std::is_same_v<T, PoissonMixture>) return poisson_rlct(s);
            else return vandermonde_rlct(s);
        },
        spec);
}

// Parameters of the original model; the reduced-rank coordinates above are a
// local chart of smaller dimension.
inline std::size_t model_parameter_count(const ModelSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::size_t {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ReducedRankRegression>) return static_cast<std::size_t>((s.M + s.N) * s.H);
            else if constexpr (std::is_same_v<T, PoissonMixture>) return poisson_dimension(s);
            else return static_cast<std::size_t>((s.M + s.N) * s.H);
        },
        spec);
}

inline ComparisonRow compare_model(const ModelSpec& spec, std::size_t term_cap = kDefaultTermCap,
                                   std::size_t pivot_cap = kDefaultPivotCap) {
    GeneralPolynomial f = model_polynomial(spec, term_cap);
    OuterMonomial s = OuterMonomial::ones(f.dim());
    ComparisonRow row;
    row.H = model_hidden(spec);
    row.lambda_rlct = model_rlct(spec);
    row.lambda_smplx = simplex_upper_bound(f, s, pivot_cap).lambda_smplx;
    row.param_bound = Rational(static_cast<long>(model_parameter_count(spec)), 2);
    row.terms = f.size();
    return row;
}

}  // namespace rlctkit
