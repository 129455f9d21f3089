#include "rlctkit/rlctkit.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace rlctkit;

namespace {

enum Exit { kOk = 0, kUsage = 1, kCap = 2, kInternal = 3 };

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Input {
    std::string text;
    std::string file;
    std::string s;
    std::string format = "json";
    std::size_t max_nodes = kDefaultMaxNodes;
    std::size_t pivot_cap = kDefaultPivotCap;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string source_text(const Input& in) {
    if (!in.file.empty() && !in.text.empty()) throw UsageError("give the polynomial inline or with --file, not both");
    if (!in.file.empty()) return read_file(in.file);
    if (in.text.empty()) throw UsageError("no polynomial given");
    return in.text;
}

std::size_t requested_dim(const Input& in) { return in.s.empty() ? 0 : parse_rational_list(in.s).size(); }

OuterMonomial outer_for(const Input& in, std::size_t d) {
    if (in.s.empty()) return OuterMonomial::ones(d);
    auto s = parse_rational_list(in.s);
    if (s.size() != d) throw UsageError("--s has " + std::to_string(s.size()) + " entries, polynomial has " +
                                        std::to_string(d) + " variables");
    for (const auto& x : s)
        if (x <= 0) throw UsageError("--s entries must be positive");
    return OuterMonomial(s);
}

void add_common(CLI::App* cmd, Input& in, bool positional = true) {
    if (positional) cmd->add_option("polynomial", in.text, "polynomial, e.g. \"w1^2 + w2^4\"");
    cmd->add_option("--file", in.file, "read the polynomial from a file");
    cmd->add_option("--s", in.s, "outer monomial exponents plus one, comma separated (default all 1)");
    cmd->add_option("--max-nodes", in.max_nodes, "blow-up node cap")->envname("RLCTKIT_MAX_NODES");
    cmd->add_option("--pivot-cap", in.pivot_cap, "simplex pivot cap");
}

void write_dot_file(const std::string& path, const BlowupTree& t) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    write_dot(out, t);
}

std::string rational_list(const std::vector<Rational>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + to_string(v[i]);
    return out;
}

std::string integer_list(const std::vector<BigInt>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].str();
    return out;
}

// ---- rlct

struct RlctArgs {
    Input in;
    std::string method = "both";
    std::string dot;
};

int cmd_rlct(const RlctArgs& a) {
    std::string text = source_text(a.in);
    SopPolynomial f = parse_sop(text, requested_dim(a.in));
    if (!f.is_binomial())
        throw UsageError("rlct takes a binomial; use `bound` for the simplex upper bound of general polynomials");
    OuterMonomial s = outer_for(a.in, f.dim());

    std::optional<RlctValue> closed, tree;
    if (a.method != "tree") closed = rlct_binomial(f, s);
    if (a.method != "closed" || !a.dot.empty()) {
        BlowupTree t = blowup_between_terms(f, s, {a.in.max_nodes});
        if (!a.dot.empty()) write_dot_file(a.dot, t);
        if (a.method != "closed") tree = rlct_via_tree(t);
    }
    if (closed && tree) {
        if (closed->lambda != tree->lambda ||
            (closed->multiplicity && closed->multiplicity != tree->multiplicity))
            throw InvariantViolation("closed form " + to_json(*closed).dump() + " disagrees with tree " +
                                     to_json(*tree).dump());
    }
    RlctValue v = tree ? *tree : *closed;

    if (a.in.format == "text") {
        std::cout << "lambda = " << v.lambda.str();
        if (v.multiplicity) std::cout << ", multiplicity = " << *v.multiplicity;
        std::cout << "\n";
    } else {
        std::cout << to_json(v).dump() << "\n";
    }
    return kOk;
}

// ---- bound

struct BoundArgs {
    Input in;
    std::string translate;
    std::string transform;
};

RationalMatrix parse_matrix(const std::string& text) {
    RationalMatrix m;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) m.push_back(parse_rational_list(row));
    return m;
}

int cmd_bound(const BoundArgs& a) {
    std::string text = source_text(a.in);
    GeneralPolynomial f = parse_polynomial(text, requested_dim(a.in));
    if (!a.translate.empty()) {
        auto p = parse_rational_list(a.translate);
        if (p.size() != f.dim()) throw UsageError("--translate needs one entry per variable");
        f = translate(f, p);
    }
    if (!a.transform.empty()) f = linear_transform(f, parse_matrix(a.transform));
    OuterMonomial s = outer_for(a.in, f.dim());
    SimplexBound b = simplex_upper_bound(f, s, a.in.pivot_cap);

    if (a.in.format == "text") {
        if (!a.translate.empty() || !a.transform.empty()) std::cout << "polynomial   = " << format_polynomial(f) << "\n";
        std::cout << "lambda_smplx = " << b.lambda_smplx.str() << "\n"
                  << "alpha        = (" << rational_list(b.alpha) << ")\n"
                  << "beta         = " << to_string(b.beta) << "\n";
        if (b.weight) std::cout << "weight       = (" << integer_list(*b.weight) << ")\n";
    } else {
        std::cout << to_json(b).dump() << "\n";
    }
    return kOk;
}

// ---- tree

struct TreeArgs {
    Input in;
    std::string algorithm = "between-terms";
    std::string vars = "1,2";
    std::string dot;
    std::string out;
};

json tree_summary(const BlowupTree& t) {
    return {{"algorithm", algorithm_name(t.algorithm())},
            {"nodes", t.size()},
            {"leaves", t.leaves().size()},
            {"depth", t.depth()}};
}

void export_tree(const TreeArgs& a, const BlowupTree& t) {
    if (!a.dot.empty()) write_dot_file(a.dot, t);
    if (!a.out.empty()) {
        std::ofstream o(a.out);
        if (!o) throw UsageError("cannot write " + a.out);
        o << to_json(t).dump(1) << "\n";
    }
    if (a.in.format == "dot") write_dot(std::cout, t);
}

void print_summary(const TreeArgs& a, const json& j) {
    if (a.in.format == "dot") return;
    if (a.in.format == "text") {
        for (const auto& [k, v] : j.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    } else {
        std::cout << j.dump() << "\n";
    }
}

int cmd_tree(const TreeArgs& a) {
    std::string text = source_text(a.in);
    const std::string& alg = a.algorithm;
    const bool selective = alg == "min-deg" || alg == "max-deg";
    SopPolynomial f = parse_sop(text, requested_dim(a.in), !selective);
    BlowupOptions opt{a.in.max_nodes};

    if (selective) {
        if (!a.in.s.empty()) throw UsageError("selective algorithms use s = 1");
        SelectiveResult r = alg == "min-deg" ? min_degree_selective(f, opt) : max_degree_selective(f, opt);
        export_tree(a, r.tree);
        json j = tree_summary(r.tree);
        j["halted"] = r.halted;
        j["domain"] = {{"exclusive", r.membership.exclusive},
                       {"in_F", r.membership.in_f},
                       {"in_G_prime", r.membership.in_g_prime}};
        if (r.halted) {
            j["lambda"] = legacy_rlct(r.tree).str();
        } else {
            // deepest node reached before the cap
            std::size_t deepest = 0;
            for (std::size_t i = 0; i < r.tree.size(); ++i)
                if (r.tree.node(i).depth > r.tree.node(deepest).depth) deepest = i;
            j["deepest"] = node_label(r.tree.node(deepest));
        }
        print_summary(a, j);
        if (!r.halted) std::cerr << "node cap of " << a.in.max_nodes << " reached; the run did not halt\n";
        return r.halted ? kOk : kCap;
    }

    OuterMonomial s = outer_for(a.in, f.dim());
    BlowupTree t = [&] {
        if (alg == "between-terms") return blowup_between_terms(f, s, opt);
        if (alg == "local-nc") return local_nc_blowup(f, s, opt);
        if (alg == "between-vars") {
            auto v = parse_rational_list(a.vars);
            if (v.size() != 2 || denominator(v[0]) != 1 || denominator(v[1]) != 1)
                throw UsageError("--vars takes two variable indices");
            long i = static_cast<long>(numerator(v[0])), jv = static_cast<long>(numerator(v[1]));
            if (i < 1 || jv < 1) throw UsageError("--vars indices start at 1");
            return blowup_between_variables_with_jacobian(f, s, static_cast<std::size_t>(i - 1),
                                                          static_cast<std::size_t>(jv - 1), opt);
        }
        throw UsageError("unknown algorithm " + alg);
    }();
    export_tree(a, t);
    json j = tree_summary(t);
    if (f.is_binomial() && alg == "between-terms") j["lambda"] = rlct_via_tree(t).lambda.str();
    print_summary(a, j);
    return kOk;
}

// ---- weight

struct WeightArgs {
    Input in;
    std::size_t chart = 0;
    unsigned weight_cap = 0;
};

int cmd_weight(const WeightArgs& a) {
    std::string text = source_text(a.in);
    GeneralPolynomial f = parse_polynomial(text, requested_dim(a.in));
    OuterMonomial s = outer_for(a.in, f.dim());
    WeightResult w = optimal_weight(f, s, a.in.pivot_cap);
    json j = to_json(w);

    if (a.chart) {
        if (a.chart > f.dim()) throw UsageError("--chart is out of range");
        WeightedChart c = weighted_blowup_chart(f, s, w.q, a.chart - 1);
        json sv = json::array();
        for (const auto& x : c.outer.s()) sv.push_back(to_string(x));
        j["chart"] = {{"index", a.chart},
                      {"polynomial", format_polynomial(c.inner)},
                      {"factored", format_factored(c.inner)},
                      {"s", sv},
                      {"jacobian_constant", detail::integer_json(c.jacobian_constant)}};
    }
    if (a.weight_cap) {
        auto [best, q] = brute_force_weight(f, s, a.weight_cap);
        if (best > w.mu) throw InvariantViolation("exhaustive search beat the LP weight");
        json qj = json::array();
        for (const auto& x : q) qj.push_back(detail::integer_json(x));
        j["search"] = {{"cap", a.weight_cap}, {"q", qj}, {"mu", to_string(best)}};
    }

    if (a.in.format == "text") {
        std::cout << "q  = (" << integer_list(w.q) << ")\nmu = " << to_string(w.mu) << "\n";
        if (!w.admissible) std::cout << "note: fewer than two positive weights\n";
        if (j.contains("chart"))
            std::cout << "chart " << a.chart << ": " << j["chart"]["factored"].get<std::string>() << "\n";
        if (j.contains("search"))
            std::cout << "search (entries <= " << a.weight_cap << "): mu = " << j["search"]["mu"].get<std::string>()
                      << "\n";
    } else {
        std::cout << j.dump() << "\n";
    }
    return kOk;
}

// ---- model-compare

struct ModelArgs {
    std::string spec;
    std::string model;
    int M = 0, N = 0, r = -1, Q = 1;
    std::string hidden = "1:4";
    std::string format = "csv";
    std::size_t term_cap = kDefaultTermCap;
    std::size_t pivot_cap = kDefaultPivotCap;
};

std::pair<int, int> parse_range(const std::string& text) {
    auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            int h = std::stoi(text);
            return {h, h};
        }
        return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
    } catch (const std::logic_error&) {
        throw UsageError("bad H range " + text + " (expected lo:hi)");
    }
}

ModelSpec spec_from(const ModelArgs& a) {
    json j;
    if (!a.spec.empty()) {
        std::string raw = a.spec.front() == '{' ? a.spec : read_file(a.spec);
        j = json::parse(raw);
    } else {
        j = {{"model", a.model}, {"M", a.M}, {"N", a.N}, {"Q", a.Q}};
        if (a.r >= 0) j["r"] = a.r;
    }
    const std::string name = j.at("model").get<std::string>();
    auto get = [&](const char* k, int dflt) { return j.contains(k) ? j[k].get<int>() : dflt; };
    if (name == "rrr") return ReducedRankRegression{get("M", 0), get("N", 0), get("H", 1), get("r", 0)};
    if (name == "poisson") return poisson_with_defaults(PoissonMixture{get("M", 0), get("H", 1), get("r", 1), {}, {}, {}});
    if (name == "vandermonde")
        return VandermondeMatrix{get("M", 0), get("N", 0), get("H", 1), get("Q", 1), get("m", 1), get("r", 0)};
    throw UsageError("unknown model " + name);
}

int cmd_model_compare(const ModelArgs& a) {
    ModelSpec base = spec_from(a);
    auto [lo, hi] = parse_range(a.hidden);
    if (lo < 1 || hi < lo) throw UsageError("H range must satisfy 1 <= lo <= hi");

    json rows = json::array();
    if (a.format == "csv") std::cout << "H,lambda_rlct,lambda_smplx,param_bound,equal\n";
    for (int H = lo; H <= hi; ++H) {
        ComparisonRow row = compare_model(with_hidden(base, H), a.term_cap, a.pivot_cap);
        std::string rl = row.lambda_rlct ? to_string(*row.lambda_rlct) : "";
        std::string eq = row.lambda_rlct ? (Extended(*row.lambda_rlct) == row.lambda_smplx ? "true" : "false") : "";
        if (a.format == "csv") {
            std::cout << H << "," << rl << "," << row.lambda_smplx.str() << "," << to_string(row.param_bound) << ","
                      << eq << "\n";
        } else {
            rows.push_back({{"H", H},
                            {"lambda_rlct", row.lambda_rlct ? json(rl) : json(nullptr)},
                            {"lambda_smplx", row.lambda_smplx.str()},
                            {"param_bound", to_string(row.param_bound)},
                            {"equal", row.lambda_rlct ? json(eq == "true") : json(nullptr)},
                            {"terms", row.terms}});
        }
    }
    if (a.format != "csv") std::cout << json{{"model", model_name(base)}, {"rows", rows}}.dump() << "\n";
    return kOk;
}

// ---- sweep

struct SweepArgs {
    std::size_t d = 2;
    long max_exp = 8;
    std::string s_set = "1,1/2,2";
    std::size_t samples = 0;  // 0: every s vector
    std::uint64_t seed = 1;
    std::size_t max_nodes = kDefaultMaxNodes;
    std::string format = "json";
};

int cmd_sweep(const SweepArgs& a) {
    if (a.d < 1) throw UsageError("--d must be positive");
    auto choices = parse_rational_list(a.s_set);
    if (choices.empty()) throw UsageError("--s-set is empty");
    std::mt19937_64 rng(a.seed);
    auto corpus = binomial_corpus(a.d, a.max_exp);
    std::vector<OuterMonomial> every;
    if (!a.samples) every = all_outer(a.d, choices);

    std::size_t checks = 0, mismatches = 0;
    if (a.format == "csv") std::cout << "binomial,s,closed,tree,lp,extremes,agree\n";
    for (const auto& f : corpus) {
        std::vector<OuterMonomial> ss = every;
        for (std::size_t k = 0; k < a.samples; ++k) ss.push_back(random_outer(a.d, choices, rng));
        for (const auto& s : ss) {
            BinomialCheck c = check_binomial(f, s, {a.max_nodes});
            ++checks;
            bool ok = c.agree();
            if (!ok) ++mismatches;
            if (a.format == "csv") {
                std::cout << '"' << format_sop(f) << "\",\"" << rational_list(s.s()) << "\"," << c.closed.lambda.str()
                          << "," << c.tree.lambda.str() << "," << c.lp.str() << "," << c.extremes.str() << ","
                          << (ok ? "true" : "false") << "\n";
            } else if (!ok) {
                std::cerr << "mismatch: " << format_sop(f) << " s=(" << rational_list(s.s()) << ")\n";
            }
        }
    }
    json j = {{"d", a.d}, {"max_exp", a.max_exp}, {"binomials", corpus.size()}, {"checks", checks},
              {"mismatches", mismatches}};
    if (a.format == "csv") std::cerr << j.dump() << "\n";
    else std::cout << j.dump() << "\n";
    return mismatches ? kInternal : kOk;
}

void check_format(const std::string& f, std::initializer_list<const char*> allowed) {
    for (auto* x : allowed)
        if (f == x) return;
    throw UsageError("unsupported --format " + f);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact real log canonical thresholds and simplex upper bounds"};
    app.require_subcommand(1);

    RlctArgs ra;
    auto* rlct = app.add_subcommand("rlct", "threshold and multiplicity of a binomial");
    add_common(rlct, ra.in);
    rlct->add_option("--method", ra.method, "closed, tree or both")->check(CLI::IsMember({"closed", "tree", "both"}));
    rlct->add_option("--dot", ra.dot, "write the between-terms tree as DOT");
    rlct->add_option("--format", ra.in.format, "json or text");

    BoundArgs ba;
    auto* bound = app.add_subcommand("bound", "simplex upper bound of a polynomial");
    add_common(bound, ba.in);
    bound->add_option("--translate", ba.translate, "expand around this point, comma separated");
    bound->add_option("--transform", ba.transform, "substitute w <- P^{-1} w; rows separated by ';'");
    bound->add_option("--format", ba.in.format, "json or text");

    TreeArgs ta;
    auto* tree = app.add_subcommand("tree", "build a blow-up tree");
    add_common(tree, ta.in);
    tree->add_option("--algorithm", ta.algorithm, "between-vars, between-terms, local-nc, min-deg, max-deg")
        ->check(CLI::IsMember({"between-vars", "between-terms", "local-nc", "min-deg", "max-deg"}));
    tree->add_option("--vars", ta.vars, "variable pair for between-vars (1-based)");
    tree->add_option("--dot", ta.dot, "write the tree as DOT");
    tree->add_option("--out", ta.out, "write the tree as JSON");
    tree->add_option("--format", ta.in.format, "json, text or dot");

    WeightArgs wa;
    auto* weight = app.add_subcommand("weight", "optimal weighted blow-up");
    add_common(weight, wa.in);
    weight->add_option("--chart", wa.chart, "print chart i (1-based)");
    weight->add_option("--weight-cap", wa.weight_cap, "also search all weights with entries up to this cap");
    weight->add_option("--format", wa.in.format, "json or text");

    ModelArgs ma;
    auto* model = app.add_subcommand("model-compare", "true threshold against the simplex bound over H");
    model->add_option("--spec", ma.spec, "model spec as JSON text or a path to a JSON file");
    model->add_option("--model", ma.model, "rrr, poisson or vandermonde");
    model->add_option("--M", ma.M);
    model->add_option("--N", ma.N);
    model->add_option("--r", ma.r);
    model->add_option("--Q", ma.Q);
    model->add_option("--H", ma.hidden, "hidden size range lo:hi");
    model->add_option("--term-cap", ma.term_cap, "refuse expansions with more terms");
    model->add_option("--pivot-cap", ma.pivot_cap);
    model->add_option("--format", ma.format, "csv or json");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "closed form, tree and LP agreement over even binomials");
    sweep->add_option("--d", sa.d, "number of variables");
    sweep->add_option("--max-exp", sa.max_exp, "largest exponent");
    sweep->add_option("--s-set", sa.s_set, "values allowed in s");
    sweep->add_option("--samples", sa.samples, "random s vectors per binomial (0: all of them)");
    sweep->add_option("--seed", sa.seed);
    sweep->add_option("--max-nodes", sa.max_nodes)->envname("RLCTKIT_MAX_NODES");
    sweep->add_option("--format", sa.format, "json or csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*rlct) return check_format(ra.in.format, {"json", "text"}), cmd_rlct(ra);
        if (*bound) return check_format(ba.in.format, {"json", "text"}), cmd_bound(ba);
        if (*tree) return check_format(ta.in.format, {"json", "text", "dot"}), cmd_tree(ta);
        if (*weight) return check_format(wa.in.format, {"json", "text"}), cmd_weight(wa);
        if (*model) return check_format(ma.format, {"csv", "json"}), cmd_model_compare(ma);
        if (*sweep) return check_format(sa.format, {"json", "csv"}), cmd_sweep(sa);
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCap;
    } catch (const InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
