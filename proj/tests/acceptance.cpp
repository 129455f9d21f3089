// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace rlctkit;
using testing_support::Gen;
namespace oracle = testing_support::oracle;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Records the first few failures, keeps counting the rest.
class Tally {
public:
    void check(bool cond, const std::string& what) {
        ++checks_;
        if (cond) return;
        ++failures_;
        if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
    }
    std::size_t checks() const { return checks_; }
    std::size_t failures() const { return failures_; }
    Outcome outcome(const std::string& summary) const {
        std::ostringstream os;
        os << summary << ", " << checks_ << " checks";
        if (failures_) os << ", " << failures_ << " failed: " << notes_.str();
        return {failures_ == 0, os.str()};
    }

private:
    std::size_t checks_ = 0, failures_ = 0;
    std::ostringstream notes_;
};

const std::vector<Rational> kChoices{Rational(1), Rational(1, 2), Rational(2)};

Rational smplx(const ModelSpec& spec) {
    GeneralPolynomial f = model_polynomial(spec);
    return simplex_upper_bound(f, OuterMonomial::ones(f.dim())).lambda_smplx.value();
}

Outcome weighted_example() {
    Tally t;
    GeneralPolynomial h = parse_polynomial("w1^2 + w2^4 + w3^6");
    OuterMonomial s = OuterMonomial::ones(3);
    t.check(simplex_upper_bound(h, s).lambda_smplx == Extended(Rational(11, 12)), "lambda_smplx");
    WeightResult w = optimal_weight(h, s);
    t.check(w.q == std::vector<BigInt>{6, 3, 2}, "q");
    t.check(w.mu == Rational(12, 11), "mu");
    t.check(minimum_index_ratio(h, s, w.q) == Rational(12, 11), "index ratio");
    const char* charts[] = {"w1^12 + w1^12*w2^4 + w1^12*w3^6", "w2^12*w1^2 + w2^12 + w2^12*w3^6",
                            "w3^12*w1^2 + w3^12*w2^4 + w3^12"};
    const char* factored[] = {"w1^12*(w2^4 + w3^6 + 1)", "w2^12*(w1^2 + w3^6 + 1)", "w3^12*(w1^2 + w2^4 + 1)"};
    for (std::size_t i = 0; i < 3; ++i) {
        WeightedChart c = weighted_blowup_chart(h, s, w.q, i);
        t.check(c.inner == parse_polynomial(charts[i], 3), "chart " + std::to_string(i + 1));
        t.check(format_factored(c.inner) == factored[i], "factored chart " + std::to_string(i + 1));
    }
    return t.outcome("11/12, q = (6,3,2), mu = 12/11, three charts");
}

Outcome binomial_sweep() {
    Tally t;
    std::size_t n = 0;
    auto one = [&](const SopPolynomial& f, const OuterMonomial& s) {
        BinomialCheck c = check_binomial(f, s);
        Extended want = oracle::newton_distance_threshold(f.matrix().column(0), f.matrix().column(1), s);
        t.check(c.agree() && c.closed.lambda == want, format_sop(f));
    };
    for (const auto& f : binomial_corpus(2, 8))
        for (const auto& s : all_outer(2, kChoices)) one(f, s);
    for (const auto& f : binomial_corpus(3, 8))
        for (const auto& s : all_outer(3, kChoices)) one(f, s);
    std::mt19937_64 rng(2);
    for (const auto& f : binomial_corpus(4, 8)) {
        one(f, random_outer(4, kChoices, rng));
        ++n;
    }
    return t.outcome("d = 2, 3 with every s; d = 4 (" + std::to_string(n) + " binomials) with one sampled s");
}

Outcome leaf_predicates() {
    Tally t;
    std::size_t caps = 0;
    for (std::size_t d = 2; d <= 4; ++d)
        for (const auto& f : binomial_corpus(d, 8)) {
            OuterMonomial s = OuterMonomial::ones(d);
            try {
                BlowupTree bt = blowup_between_terms(f, s);
                bool nc = true;
                for (auto l : bt.leaves()) nc = nc && is_normal_crossing_binomial(bt.node(l).inner);
                t.check(nc, "between-terms leaf " + format_sop(f));
                BlowupTree lt = local_nc_blowup(f, s);
                bool lnc = true;
                for (auto l : lt.leaves()) lnc = lnc && oracle::has_dominated_column(lt.node(l).inner);
                t.check(lnc, "local-nc leaf " + format_sop(f));
            } catch (const CapExceeded&) {
                ++caps;
                t.check(false, "cap " + format_sop(f));
            }
        }
    Gen g(1);
    std::size_t random_caps = 0;
    for (int k = 0; k < 1000; ++k) {
        std::size_t d = g.integer(1, 6), n = g.integer(2, 6);
        SopPolynomial f(g.matrix(d, n, 10, true, true));
        try {
            BlowupTree lt = local_nc_blowup(f, OuterMonomial::ones(d));
            bool lnc = true;
            for (auto l : lt.leaves()) lnc = lnc && oracle::has_dominated_column(lt.node(l).inner);
            t.check(lnc, "local-nc leaf " + format_sop(f));
        } catch (const CapExceeded&) {
            ++random_caps;
            t.check(false, "cap " + format_sop(f));
        }
    }
    return t.outcome("binomial sweep cap hits " + std::to_string(caps) + ", random sop cap hits " +
                     std::to_string(random_caps) + "/1000 at " + std::to_string(kDefaultMaxNodes) + " nodes");
}

std::set<Rational> ir(const BlowupNode& n) {
    auto p = factorize(n.inner).common;
    return {Rational(p[0]) / n.outer[0], Rational(p[1]) / n.outer[1]};
}

Outcome stems() {
    Tally t;
    const std::array<std::array<Rational, 3>, 3> basis{{{Rational(1), Rational(0), Rational(0)},
                                                        {Rational(0), Rational(1), Rational(0)},
                                                        {Rational(0), Rational(0), Rational(1)}}};
    auto weak_up = [](Trend x) { return x == Trend::Increasing || x == Trend::Constant; };
    for (const auto& f : binomial_corpus(2, 8))
        for (const auto& s : all_outer(2, kChoices)) {
            if (is_normal_crossing_binomial(f.matrix())) continue;
            const std::string name = format_sop(f);
            BlowupTree tr = blowup_between_variables_with_jacobian(f, s, 0, 1);
            std::set<Rational> leaf_ir;
            for (auto l : tr.leaves())
                for (auto x : ir(tr.node(l))) leaf_ir.insert(x);
            for (StemSide side : {StemSide::Left, StemSide::Right}) {
                auto path = stem(tr, side);
                bool constant = true;
                for (auto v : path)
                    for (const auto& abc : basis)
                        constant = constant && stem_invariant(tr.node(v), abc) == stem_invariant(tr.root(), abc);
                t.check(constant, "invariant " + name);
                std::set<Rational> stem_ir;
                for (auto v : path)
                    for (auto x : ir(tr.node(v))) stem_ir.insert(x);
                t.check(stem_ir == leaf_ir, "index ratios " + name);
                StemSequences q = stem_sequences(tr, path);
                Trend rl = trend(q.rho_left), rr = trend(q.rho_right), nl = trend(q.nu_left), nr = trend(q.nu_right);
                bool monotone = rl != Trend::Mixed && rr != Trend::Mixed && nl != Trend::Mixed && nr != Trend::Mixed;
                t.check(monotone, "monotone " + name);
                t.check(regressive(rl, nr) && regressive(rr, nl), "regressive " + name);
                t.check(weak_up(rl) || weak_up(rr), "increasing " + name);
            }
        }
    return t.outcome("bivariate sweep, both stems");
}

Outcome reduced_rank() {
    Tally t;
    const int M = 5, N = 5, r = 2;
    for (int H = 2; H <= 8; ++H) {
        Rational b = smplx(ReducedRankRegression{M, N, H, r});
        Rational l = rrr_rlct({M, N, H, r});
        if (H <= 3) t.check(b == l, "equal at H=" + std::to_string(H));
        else t.check(b > l, "strict at H=" + std::to_string(H));
        t.check(b <= Rational((M + N) * H, 2), "parameter bound at H=" + std::to_string(H));
    }
    t.check(rrr_rlct({M, N, 7, r}) == rrr_rlct({M, N, 8, r}), "plateau");
    return t.outcome("M = N = 5, r = 2, H = 2..8");
}

Outcome poisson() {
    Tally t;
    for (int H = 1; H <= 6; ++H)
        t.check(smplx(PoissonMixture{2, H, 1, {}, {}, {}}) == Rational(H + 1, 2), "M=2 H=" + std::to_string(H));
    t.check(smplx(PoissonMixture{1, 1, 1, {}, {}, {}}) == Rational(1, 2), "M=1 H=1 bound");
    t.check(poisson_rlct({1, 1, 1}) == Rational(1, 2), "M=1 H=1 threshold");
    for (int H = 3; H <= 6; ++H) {
        Rational db = smplx(PoissonMixture{1, H, 1, {}, {}, {}}) - smplx(PoissonMixture{1, H - 1, 1, {}, {}, {}});
        Rational dl = poisson_rlct({1, H, 1}) - poisson_rlct({1, H - 1, 1});
        t.check(db == Rational(1, 2) && dl == Rational(1, 4), "slopes at H=" + std::to_string(H));
    }
    return t.outcome("M = 2 equality for H = 1..6; M = 1 slopes 1/2 vs 1/4");
}

Outcome vandermonde() {
    Tally t;
    for (int H = 1; H <= 4; ++H) {
        VandermondeMatrix spec{3, 3, H, 2, 1, 0};
        Rational b = smplx(spec);
        t.check(b == Rational(static_cast<long>(model_parameter_count(spec)), 4), "d/4 at H=" + std::to_string(H));
        t.check((b == *vandermonde_rlct(spec)) == (H == 1), "N=3 equality only at H=1, H=" + std::to_string(H));
    }
    for (int H = 1; H <= 8; ++H) {
        VandermondeMatrix spec{5, 1, H, 2, 1, 0};
        Rational b = smplx(spec), l = *vandermonde_rlct(spec);
        t.check(H <= 5 ? b == l : b > l, "N=1 at H=" + std::to_string(H));
    }
    return t.outcome("N = 3 (M,Q) = (3,2) H = 1..4; N = 1 (M,Q) = (5,2) H = 1..8");
}

Outcome soundness() {
    Tally t;
    Gen g(8);
    const std::vector<Rational> choices{Rational(1), Rational(1, 2), Rational(2), Rational(3, 2)};
    std::size_t compared = 0;
    for (int k = 0; k < 1000; ++k) {
        std::size_t d = g.integer(1, 4);
        GeneralPolynomial f = g.polynomial(d, g.integer(1, 6), 6);
        OuterMonomial s = g.outer(d, choices);
        SimplexBound b = simplex_upper_bound(f, s);
        t.check(b.lambda_smplx.is_infinite() == (f.constant_term() != 0), "infinite iff constant");
        GeneralPolynomial scaled(d);
        for (const auto& [e, c] : f.terms()) {
            Rational m = 0;
            while (m == 0) m = g.rational(7, 5);
            scaled.add_term(e, c * m);
        }
        t.check(simplex_upper_bound(scaled, s).lambda_smplx == b.lambda_smplx, "coefficients " + format_polynomial(f));
    }
    // the parameter bound needs f >= 0 as well as f(0) = 0
    for (int k = 0; k < 1000; ++k) {
        std::size_t d = g.integer(1, 4);
        GeneralPolynomial f = g.nonnegative(d, g.integer(1, 3), 3);
        if (f.is_zero()) continue;
        OuterMonomial s = g.outer(d, choices);
        t.check(simplex_upper_bound(f, s).lambda_smplx <= Extended(s.total() / 2), "sum s / 2 " + format_polynomial(f));
    }
    for (int k = 0; k < 1000; ++k) {
        std::size_t d = g.integer(2, 3);
        GeneralPolynomial f = g.polynomial(d, g.integer(2, 5), 8);
        if (f.constant_term() != 0) continue;
        OuterMonomial s = g.outer(d, choices);
        WeightResult w = optimal_weight(f, s);
        auto [best, bq] = brute_force_weight(f, s, 20);
        t.check(best <= w.mu, "search beats lp " + format_polynomial(f));
        if (std::all_of(w.q.begin(), w.q.end(), [](const BigInt& x) { return x <= 20; })) {
            ++compared;
            t.check(best == w.mu, "search misses lp " + format_polynomial(f));
        }
    }
    return t.outcome("3 x 1000 random instances, " + std::to_string(compared) + " weight optima within 20");
}

Outcome legacy() {
    Tally t;
    // exclusive triples: variables x1 y1 z1 | x2 y2 z2
    auto exclusive = [](const std::array<long, 3>& a, const std::array<long, 3>& b) {
        return SopPolynomial::from_rows({{a[0], 0}, {a[1], 0}, {a[2], 0}, {0, b[0]}, {0, b[1]}, {0, b[2]}}, false);
    };
    std::vector<std::array<long, 3>> triples;
    for (long m = 0; m <= 3; ++m)
        for (long n = 0; n <= 3; ++n)
            for (long l = 0; l <= 3; ++l) triples.push_back({m, n, l});
    std::size_t g_count = 0, f_count = 0;
    for (const auto& a : triples)
        for (const auto& b : triples) {
            if (a == std::array<long, 3>{0, 0, 0} || b == std::array<long, 3>{0, 0, 0}) continue;
            SopPolynomial k = exclusive(a, b);
            DomainMembership m = classify_exclusive(k.matrix());
            const std::string name = format_sop(k);
            if (m.in_g_prime && !m.in_f) {
                ++g_count;
                SelectiveResult r = max_degree_selective(k);
                t.check(r.halted, "max-deg halts " + name);
                if (r.halted) t.check(legacy_rlct(r.tree) == exclusive_min_reciprocal_sum(k.matrix()), "max-deg " + name);
            }
            if (m.in_f) {
                ++f_count;
                SelectiveResult r = min_degree_selective(k);
                t.check(r.halted, "min-deg halts " + name);
                if (r.halted) t.check(legacy_rlct(r.tree) == Extended(1), "min-deg " + name);
            }
        }
    return t.outcome("max-degree on " + std::to_string(g_count) + " members of G' outside F, min-degree on " +
                     std::to_string(f_count) + " members of F with no constant term (degrees <= 3)");
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double limit;  // seconds; 0 when none is set
    };
    const std::vector<Criterion> criteria{
        {"weighted blow-up example", weighted_example, 1},
        {"binomial closed form = LP = tree", binomial_sweep, 300},
        {"halting and leaf predicates", leaf_predicates, 600},
        {"stem invariants", stems, 0},
        {"reduced rank regression", reduced_rank, 60},
        {"Poisson mixture", poisson, 120},
        {"Vandermonde matrix", vandermonde, 300},
        {"soundness properties", soundness, 300},
        {"legacy selective algorithms", legacy, 300},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criteria[i].limit > 0 && secs > criteria[i].limit) {
            o.ok = false;
            o.detail += ", over the time limit";
        }
        if (!o.ok) ++failed;
        std::printf("%s %zu %s (%.1f s", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].name, secs);
        if (criteria[i].limit > 0) std::printf(", limit %.0f s", criteria[i].limit);
        std::printf("): %s\n", o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
