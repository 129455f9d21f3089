#include "support.hpp"

#include <gtest/gtest.h>

using namespace rlctkit;
using testing_support::Gen;

namespace {

Rational smplx(const ModelSpec& spec) {
    GeneralPolynomial f = model_polynomial(spec);
    return simplex_upper_bound(f, OuterMonomial::ones(f.dim())).lambda_smplx.value();
}

// Case split of the reduced-rank regression threshold, written independently
// of the minimisation used by the library.
Rational rrr_case_split(long M, long N, long H, long r) {
    if (M + H < N + r) return Rational(H * M - H * r + N * r, 2);
    if (N + H < M + r) return Rational(H * N - H * r + M * r, 2);
    if (M + N < H + r) return Rational(M * N, 2);
    long v = 2 * (H + r) * (M + N) - (M - N) * (M - N) - (H + r) * (H + r);
    if ((M + H + N + r) % 2 != 0) v += 1;
    return Rational(v, 8);
}

}  // namespace

TEST(ModelZoo, RrrSmallestInstance) {
    // a^2 b^2 with both coordinates free
    auto f = rrr_polynomial({1, 1, 1, 0});
    EXPECT_EQ(f, parse_polynomial("w1^2*w2^2"));
    EXPECT_EQ(smplx(ReducedRankRegression{1, 1, 1, 0}), Rational(1, 2));
}

TEST(ModelZoo, RrrPolynomialMatchesDirectEvaluation) {
    Gen g(11);
    for (int M = 1; M <= 3; ++M)
        for (int N = 1; N <= 3; ++N)
            for (int H = 1; H <= 3; ++H)
                for (int r = 0; r <= std::min({M, N, H}); ++r) {
                    auto f = rrr_polynomial({M, N, H, r});
                    const std::size_t nc = static_cast<std::size_t>(r * r + (N - r) * r + r * (M - r));
                    const int k = H - r;
                    ASSERT_EQ(f.dim(), nc + static_cast<std::size_t>(k * (M - r) + (N - r) * k));
                    std::vector<Rational> x(f.dim());
                    for (auto& v : x) v = g.rational(3, 2);
                    Rational want = 0;
                    for (std::size_t i = 0; i < nc; ++i) want += x[i] * x[i];
                    auto A = [&](int l, int j) { return x[nc + static_cast<std::size_t>(l * (M - r) + j)]; };
                    auto B = [&](int i, int l) {
                        return x[nc + static_cast<std::size_t>(k * (M - r) + i * k + l)];
                    };
                    for (int i = 0; i < N - r; ++i)
                        for (int j = 0; j < M - r; ++j) {
                            Rational e = 0;
                            for (int l = 0; l < k; ++l) e += B(i, l) * A(l, j);
                            want += e * e;
                        }
                    EXPECT_EQ(f.evaluate(x), want) << M << N << H << r;
                }
}

TEST(ModelZoo, RrrThresholdAgreesWithCaseSplit) {
    for (int M = 1; M <= 7; ++M)
        for (int N = 1; N <= 7; ++N)
            for (int H = 1; H <= 7; ++H)
                for (int r = 0; r <= std::min({M, N, H}); ++r)
                    EXPECT_EQ(rrr_rlct({M, N, H, r}), rrr_case_split(M, N, H, r)) << M << N << H << r;
}

TEST(ModelZoo, RrrFigureSetting) {
    EXPECT_EQ(rrr_rlct({5, 5, 2, 2}), Rational(8));
    EXPECT_EQ(smplx(ReducedRankRegression{5, 5, 2, 2}), Rational(8));
    EXPECT_EQ(smplx(ReducedRankRegression{5, 5, 3, 2}), Rational(19, 2));
    EXPECT_EQ(rrr_rlct({5, 5, 7, 2}), rrr_rlct({5, 5, 8, 2}));
    for (int H = 4; H <= 8; ++H) EXPECT_GT(smplx(ReducedRankRegression{5, 5, H, 2}), rrr_rlct({5, 5, H, 2}));
}

TEST(ModelZoo, RrrFullRankIsSumOfSquares) {
    // r = H leaves only squared coordinates, so the bound is half their count
    for (int M = 1; M <= 4; ++M)
        for (int N = 1; N <= 4; ++N)
            for (int H = 1; H <= std::min(M, N); ++H) {
                auto f = rrr_polynomial({M, N, H, H});
                EXPECT_EQ(smplx(ReducedRankRegression{M, N, H, H}), Rational(static_cast<long>(f.dim()), 2));
            }
}

TEST(ModelZoo, RrrRejectsBadRank) {
    EXPECT_THROW(rrr_polynomial({2, 2, 1, 2}), std::invalid_argument);
    EXPECT_THROW(rrr_polynomial({0, 2, 1, 0}), std::invalid_argument);
}

TEST(ModelZoo, PoissonFormula) {
    EXPECT_EQ(poisson_rlct({1, 1, 1}), Rational(1, 2));
    EXPECT_EQ(poisson_rlct({2, 3, 1}), Rational(2));
    EXPECT_EQ(poisson_rlct({1, 5, 1}), Rational(3, 2));
}

TEST(ModelZoo, PoissonPolynomialMatchesDirectEvaluation) {
    Gen g(5);
    for (int M = 1; M <= 2; ++M)
        for (int H = 1; H <= 3; ++H) {
            PoissonMixture spec{M, H, 1, {}, {}, {}};
            auto f = poisson_polynomial(spec);
            auto full = poisson_with_defaults(spec);
            auto pt = poisson_default_expansion_point(full);
            ASSERT_EQ(f.dim(), static_cast<std::size_t>((M + 1) * H - 1));
            for (int trial = 0; trial < 3; ++trial) {
                std::vector<Rational> x(f.dim());
                for (auto& v : x) v = g.rational(2, 3);
                // mixture in absolute coordinates
                std::vector<Rational> p(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) p[i] = x[i] + pt[i];
                std::vector<Rational> weight(static_cast<std::size_t>(H));
                weight[0] = 1;
                for (int h = 1; h < H; ++h) {
                    weight[static_cast<std::size_t>(h)] = p[static_cast<std::size_t>(h - 1)];
                    weight[0] -= p[static_cast<std::size_t>(h - 1)];
                }
                auto rate = [&](int m, int h) { return p[static_cast<std::size_t>(H - 1 + m * H + h)]; };
                const int top = H;
                Rational want = 0;
                std::vector<int> cnt(static_cast<std::size_t>(M), 0);
                while (true) {
                    Rational v = -1;  // true rates are one
                    for (int h = 0; h < H; ++h) {
                        Rational t = weight[static_cast<std::size_t>(h)];
                        for (int m = 0; m < M; ++m)
                            for (int e = 0; e < cnt[static_cast<std::size_t>(m)]; ++e) t *= rate(m, h);
                        v += t;
                    }
                    want += v * v;
                    std::size_t k = 0;
                    while (k < cnt.size() && cnt[k] == top) cnt[k++] = 0;
                    if (k == cnt.size()) break;
                    ++cnt[k];
                }
                EXPECT_EQ(f.evaluate(x), want) << M << H;
            }
        }
}

TEST(ModelZoo, PoissonFigureSettings) {
    for (int H = 1; H <= 6; ++H) EXPECT_EQ(smplx(PoissonMixture{2, H, 1, {}, {}, {}}), Rational(H + 1, 2)) << H;
    EXPECT_EQ(smplx(PoissonMixture{1, 1, 1, {}, {}, {}}), Rational(1, 2));
    for (int H = 3; H <= 6; ++H) {
        Rational step = smplx(PoissonMixture{1, H, 1, {}, {}, {}}) - smplx(PoissonMixture{1, H - 1, 1, {}, {}, {}});
        EXPECT_EQ(step, Rational(1, 2));
        EXPECT_EQ(poisson_rlct({1, H, 1}) - poisson_rlct({1, H - 1, 1}), Rational(1, 4));
    }
}

TEST(ModelZoo, PoissonRejectsInconsistentInput) {
    PoissonMixture bad{1, 2, 1, {Rational(1, 2)}, {{Rational(1)}}, {}};
    EXPECT_THROW(poisson_polynomial(bad), std::invalid_argument);
    PoissonMixture shifted{1, 2, 1, {}, {}, std::vector<Rational>{Rational(0), Rational(0), Rational(0)}};
    EXPECT_THROW(poisson_polynomial(shifted), std::invalid_argument);
}

TEST(ModelZoo, VandermondeTinyInstanceByHand) {
    // A = a, columns b^1 and b^2
    VandermondeMatrix spec{1, 1, 1, 1, 1, 0};
    EXPECT_EQ(vandermonde_polynomial(spec), parse_polynomial("w1^2*w2^2 + w1^2*w2^4"));
    EXPECT_EQ(smplx(spec), Rational(1, 2));
    EXPECT_EQ(*vandermonde_rlct(spec), Rational(1, 2));
}

TEST(ModelZoo, VandermondeMatchesDirectProduct) {
    Gen g(3);
    const int M = 2, N = 2, H = 2, Q = 1;
    VandermondeMatrix spec{M, N, H, Q, 1, 0};
    auto f = vandermonde_polynomial(spec);
    ASSERT_EQ(f.dim(), static_cast<std::size_t>(M * H + H * N));
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Rational> x(f.dim());
        for (auto& v : x) v = g.rational(3, 2);
        auto a = [&](int m, int h) { return x[static_cast<std::size_t>(m * H + h)]; };
        auto b = [&](int h, int j) { return x[static_cast<std::size_t>(M * H + h * N + j)]; };
        Rational want = 0;
        // |L| in {1, 2, 3}: L = (l, t - l)
        for (int t : {1, 2, 3})
            for (int l = 0; l <= t; ++l)
                for (int m = 0; m < M; ++m) {
                    Rational e = 0;
                    for (int h = 0; h < H; ++h) e += a(m, h) * pow(b(h, 0), l) * pow(b(h, 1), t - l);
                    want += e * e;
                }
        EXPECT_EQ(f.evaluate(x), want);
    }
}

TEST(ModelZoo, VandermondeFormulas) {
    EXPECT_EQ(*vandermonde_rlct({3, 3, 1, 2, 1, 0}), Rational(3, 2));
    for (int M = 1; M <= 4; ++M)
        for (int N = 1; N <= 4; ++N) EXPECT_EQ(*vandermonde_rlct({M, N, 1, 2, 1, 0}), Rational(std::min(M, N), 2));
    EXPECT_EQ(*vandermonde_rlct({5, 1, 5, 2, 1, 0}), Rational(5, 2));
    EXPECT_EQ(*vandermonde_rlct({3, 3, 2, 2, 1, 0}), Rational(8, 3));
    EXPECT_FALSE(vandermonde_rlct({3, 2, 5, 2, 1, 0}).has_value());
    EXPECT_FALSE(vandermonde_rlct({3, 1, 2, 2, 1, 1}).has_value());
}

TEST(ModelZoo, VandermondeFigureSettings) {
    for (int H = 1; H <= 4; ++H) {
        VandermondeMatrix spec{3, 3, H, 2, 1, 0};
        Rational b = smplx(spec);
        EXPECT_EQ(b, Rational((3 + 3) * H, 4)) << H;
        EXPECT_EQ(b == *vandermonde_rlct(spec), H == 1) << H;
    }
    for (int H = 1; H <= 8; ++H) {
        VandermondeMatrix spec{5, 1, H, 2, 1, 0};
        Rational b = smplx(spec), l = *vandermonde_rlct(spec);
        if (H <= 5) EXPECT_EQ(b, l) << H;
        else EXPECT_GT(b, l) << H;
    }
}

TEST(ModelZoo, VandermondeTermCap) {
    VandermondeMatrix spec{3, 3, 4, 2, 1, 0};
    EXPECT_THROW(vandermonde_polynomial(spec, 100), CapExceeded);
    EXPECT_THROW(vandermonde_polynomial(VandermondeMatrix{3, 3, 2, 2, 1, 1}), std::invalid_argument);
}

TEST(ModelZoo, SoundnessAcrossInstances) {
    std::vector<ModelSpec> specs;
    for (int M = 1; M <= 3; ++M)
        for (int N = 1; N <= 3; ++N)
            for (int H = 1; H <= 3; ++H)
                for (int r = 0; r <= std::min({M, N, H}); ++r) specs.push_back(ReducedRankRegression{M, N, H, r});
    for (int M = 1; M <= 2; ++M)
        for (int H = 1; H <= 4; ++H) specs.push_back(PoissonMixture{M, H, 1, {}, {}, {}});
    for (int M = 1; M <= 3; ++M)
        for (int N = 1; N <= 2; ++N)
            for (int H = 1; H <= 3; ++H) specs.push_back(VandermondeMatrix{M, N, H, 1 + H % 2, 1, 0});
    for (const auto& spec : specs) {
        auto f = model_polynomial(spec);
        EXPECT_EQ(f.constant_term(), 0) << model_name(spec);
        auto row = compare_model(spec);
        ASSERT_TRUE(row.lambda_smplx.is_finite());
        EXPECT_LE(row.lambda_smplx.value(), Rational(static_cast<long>(f.dim()), 2));
        EXPECT_LE(row.lambda_smplx.value(), row.param_bound);
        if (row.lambda_rlct) EXPECT_LE(*row.lambda_rlct, row.lambda_smplx.value()) << model_name(spec);
    }
}
