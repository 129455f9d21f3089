#pragma once

#include "rlctkit/io.hpp"
#include "rlctkit/polynomial.hpp"

#include <array>
#include <deque>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlctkit {

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

inline constexpr std::size_t kDefaultMaxNodes = 1'000'000;

struct BlowupOptions {
    std::size_t max_nodes = kDefaultMaxNodes;
};

// Chart w_target <- w_target * w_partner.
struct Chart {
    std::size_t target = 0;
    std::size_t partner = 0;
    friend bool operator==(const Chart&, const Chart&) = default;
};

struct BlowupNode {
    MultiIndexMatrix inner;
    OuterMonomial outer;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
    std::size_t depth = 0;
    std::optional<Chart> chart;
    std::optional<std::array<std::size_t, 2>> counters;  // 1-based term positions, local-NC trees only
};

enum class Algorithm { BetweenVariables, BetweenTerms, LocalNormalCrossing, MinDegreeSelective, MaxDegreeSelective };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::BetweenVariables: return "between_variables";
        case Algorithm::BetweenTerms: return "between_terms";
        case Algorithm::LocalNormalCrossing: return "local_normal_crossing";
        case Algorithm::MinDegreeSelective: return "min_degree_selective";
        case Algorithm::MaxDegreeSelective: return "max_degree_selective";
    }
    return "?";
}

struct QueueEntry {
    std::size_t node;
    std::size_t n1, n2;
};

class BlowupTree {
public:
    BlowupTree(const MultiIndexMatrix& root, const OuterMonomial& s, Algorithm algo,
               std::size_t max_nodes = kDefaultMaxNodes)
        : algo_(algo), max_nodes_(max_nodes) {
        if (s.dim() != root.rows()) throw std::invalid_argument("outer monomial dimension mismatch");
        BlowupNode n;
        n.inner = root;
        n.outer = s;
        nodes_.push_back(std::move(n));
    }

    Algorithm algorithm() const { return algo_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t dim() const { return nodes_.front().inner.rows(); }
    const BlowupNode& root() const { return nodes_.front(); }
    const BlowupNode& node(std::size_t i) const { return nodes_.at(i); }
    BlowupNode& node_mut(std::size_t i) { return nodes_.at(i); }
    const std::vector<BlowupNode>& nodes() const { return nodes_; }

    std::vector<std::size_t> leaves() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].children.empty()) out.push_back(i);
        return out;
    }

    // Product of the elementary charts from the root: node.inner equals
    // cumulative^T applied to the root's inner matrix.
    BlowMatrix cumulative(std::size_t i) const {
        std::vector<Chart> path;
        for (std::size_t v = i; nodes_.at(v).parent; v = *nodes_[v].parent) path.push_back(*nodes_[v].chart);
        BlowMatrix b = BlowMatrix::identity(dim());
        for (auto it = path.rbegin(); it != path.rend(); ++it) b.apply_chart(it->target, it->partner);
        return b;
    }

    std::size_t depth() const {
        std::size_t m = 0;
        for (const auto& n : nodes_) m = std::max(m, n.depth);
        return m;
    }

    // Appends the chart w_target <- w_target * w_partner below `parent`.
    std::size_t add_child(std::size_t parent, Chart c) {
        if (nodes_.size() >= max_nodes_)
            throw CapExceeded("blow-up tree reached the node cap of " + std::to_string(max_nodes_));
        const std::size_t d = dim();
        if (c.target >= d || c.partner >= d || c.target == c.partner)
            throw std::invalid_argument("chart needs two distinct variables");
        BlowupNode n;
        {
            const BlowupNode& p = nodes_[parent];
            n.inner = p.inner;
            for (std::size_t j = 0; j < n.inner.cols(); ++j) n.inner(c.partner, j) += n.inner(c.target, j);
            n.outer = p.outer;
            n.outer.apply_chart(c.target, c.partner);
            n.depth = p.depth + 1;
        }
        n.parent = parent;
        n.chart = c;
        nodes_.push_back(std::move(n));
        std::size_t id = nodes_.size() - 1;
        nodes_[parent].children.push_back(id);
        return id;
    }

    std::vector<QueueEntry>& queue_trace() { return trace_; }
    const std::vector<QueueEntry>& queue_trace() const { return trace_; }

private:
    Algorithm algo_;
    std::size_t max_nodes_;
    std::vector<BlowupNode> nodes_;
    std::vector<QueueEntry> trace_;
};

namespace detail {

inline bool pair_nc_in_plane(const MultiIndexMatrix& a, std::size_t c1, std::size_t c2, std::size_t i,
                             std::size_t j) {
    int si = a(i, c1) < a(i, c2) ? -1 : (a(i, c1) > a(i, c2) ? 1 : 0);
    int sj = a(j, c1) < a(j, c2) ? -1 : (a(j, c1) > a(j, c2) ? 1 : 0);
    return si * sj >= 0;
}

inline bool pair_nc(const MultiIndexMatrix& a, std::size_t c1, std::size_t c2) {
    bool le = true, ge = true;
    for (std::size_t i = 0; i < a.rows() && (le || ge); ++i) {
        if (a(i, c1) > a(i, c2)) le = false;
        if (a(i, c1) < a(i, c2)) ge = false;
    }
    return le || ge;
}

// Variable of largest (or smallest) positive degree; ties to the smallest index.
inline std::size_t select_variable(const ExponentVector& part, bool largest) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < part.size(); ++i) {
        if (part[i] <= 0) continue;
        if (!best || (largest ? part[i] > part[*best] : part[i] < part[*best])) best = i;
    }
    if (!best) throw InvariantViolation("coprime part is constant");
    return *best;
}

// Repeated blow-ups with centre {w_i = w_j = 0} until the columns c1, c2 are
// normal crossing in the (i, j) plane.  Returns the leaves in FIFO order.
inline std::vector<std::size_t> grow_between_variables(BlowupTree& t, std::size_t start, std::size_t c1,
                                                       std::size_t c2, std::size_t i, std::size_t j) {
    std::vector<std::size_t> leaves;
    std::deque<std::size_t> q{start};
    while (!q.empty()) {
        std::size_t v = q.front();
        q.pop_front();
        if (pair_nc_in_plane(t.node(v).inner, c1, c2, i, j)) {
            leaves.push_back(v);
            continue;
        }
        q.push_back(t.add_child(v, Chart{i, j}));
        q.push_back(t.add_child(v, Chart{j, i}));
    }
    return leaves;
}

// Blow-up between terms on columns c1, c2.  Returns leaves where the pair is
// normal crossing.
inline std::vector<std::size_t> grow_between_terms(BlowupTree& t, std::size_t start, std::size_t c1,
                                                   std::size_t c2) {
    std::vector<std::size_t> leaves;
    std::deque<std::size_t> q{start};
    while (!q.empty()) {
        std::size_t v = q.front();
        q.pop_front();
        const auto& a = t.node(v).inner;
        if (pair_nc(a, c1, c2)) {
            leaves.push_back(v);
            continue;
        }
        auto fac = factorize(a.select_columns({c1, c2}));
        std::size_t s1 = select_variable(fac.part1, true);
        std::size_t s2 = select_variable(fac.part2, true);
        for (auto leaf : grow_between_variables(t, v, c1, c2, s1, s2)) q.push_back(leaf);
    }
    return leaves;
}

inline void require_sop_binomial(const SopPolynomial& f) {
    if (!f.is_binomial()) throw std::invalid_argument("expected a binomial");
}

}  // namespace detail

// Bivariate binomial: blow up {w1 = w2 = 0} until normal crossing.
inline BlowupTree blowup_between_variables_with_jacobian(const SopPolynomial& f, const OuterMonomial& s,
                                                         std::size_t i, std::size_t j,
                                                         const BlowupOptions& opt = {}) {
    detail::require_sop_binomial(f);
    if (i == j || i >= f.dim() || j >= f.dim()) throw std::invalid_argument("need two distinct variables");
    BlowupTree t(f.matrix(), s, Algorithm::BetweenVariables, opt.max_nodes);
    detail::grow_between_variables(t, 0, 0, 1, i, j);
    return t;
}

inline BlowupTree blowup_between_variables(const SopPolynomial& f, const BlowupOptions& opt = {}) {
    if (f.dim() != 2) throw std::invalid_argument("between-variables blow-up is bivariate");
    return blowup_between_variables_with_jacobian(f, OuterMonomial::ones(2), 0, 1, opt);
}

inline BlowupTree blowup_between_terms(const SopPolynomial& f, const OuterMonomial& s,
                                       const BlowupOptions& opt = {}) {
    detail::require_sop_binomial(f);
    BlowupTree t(f.matrix(), s, Algorithm::BetweenTerms, opt.max_nodes);
    detail::grow_between_terms(t, 0, 0, 1);
    return t;
}

// Blow-up centre chosen by blowup_between_terms at a non-normal-crossing node.
inline std::array<std::size_t, 2> between_terms_center(const MultiIndexMatrix& a) {
    auto fac = factorize(a);
    return {detail::select_variable(fac.part1, true), detail::select_variable(fac.part2, true)};
}

inline BlowupTree local_nc_blowup(const SopPolynomial& f, const OuterMonomial& s, const BlowupOptions& opt = {}) {
    BlowupTree t(f.matrix(), s, Algorithm::LocalNormalCrossing, opt.max_nodes);
    const std::size_t n = f.terms();
    std::deque<QueueEntry> q{{0, 1, 2}};
    t.node_mut(0).counters = std::array<std::size_t, 2>{1, 2};
    while (!q.empty()) {
        QueueEntry e = q.front();
        q.pop_front();
        t.queue_trace().push_back(e);
        if (is_local_normal_crossing(t.node(e.node).inner)) continue;
        if (std::max(e.n1, e.n2) > n)
            throw InvariantViolation("term counters ran past the last term on a non-LNC node");
        for (auto leaf : detail::grow_between_terms(t, e.node, e.n1 - 1, e.n2 - 1)) {
            const auto& a = t.node(leaf).inner;
            std::size_t top = std::max(e.n1, e.n2) + 1;
            QueueEntry next{leaf, e.n1, e.n2};
            if (leq(a.column(e.n1 - 1), a.column(e.n2 - 1)))
                next.n2 = top;
            else
                next.n1 = top;
            t.node_mut(leaf).counters = std::array<std::size_t, 2>{next.n1, next.n2};
            q.push_back(next);
        }
    }
    return t;
}

// Exponent triples of an exclusive binomial: disjoint supports with at most
// three variables per term, padded with zeros and kept in variable order.
struct ExclusiveTriple {
    std::array<std::array<BigInt, 3>, 2> degrees;
};

inline std::optional<ExclusiveTriple> exclusive_triple(const MultiIndexMatrix& a) {
    if (a.cols() != 2) return std::nullopt;
    ExclusiveTriple out{};
    for (std::size_t j = 0; j < 2; ++j) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (a(i, j) == 0) continue;
            if (a(i, 1 - j) != 0 || k == 3) return std::nullopt;
            out.degrees[j][k++] = a(i, j);
        }
    }
    return out;
}

struct DomainMembership {
    bool exclusive = false;
    bool in_f = false;        // some term has every exponent <= 1
    bool in_g_prime = false;  // exponents <= 3 with at least one equal to 1
};

inline DomainMembership classify_exclusive(const MultiIndexMatrix& a) {
    DomainMembership m;
    auto t = exclusive_triple(a);
    if (!t) return m;
    m.exclusive = true;
    bool any_one = false, all_le3 = true, nonzero = false;
    for (const auto& term : t->degrees) {
        bool all_le1 = true;
        for (const auto& x : term) {
            if (x > 1) all_le1 = false;
            if (x > 3) all_le3 = false;
            if (x == 1) any_one = true;
            if (x != 0) nonzero = true;
        }
        if (all_le1) m.in_f = true;
    }
    m.in_f = m.in_f && nonzero;
    m.in_g_prime = all_le3 && any_one;
    return m;
}

struct SelectiveResult {
    BlowupTree tree;
    bool halted = true;  // false when the node cap stopped the run
    DomainMembership membership;
};

namespace detail {

inline SelectiveResult selective(const SopPolynomial& f, bool largest, const BlowupOptions& opt) {
    require_sop_binomial(f);
    SelectiveResult r{BlowupTree(f.matrix(), OuterMonomial::ones(f.dim()),
                                 largest ? Algorithm::MaxDegreeSelective : Algorithm::MinDegreeSelective,
                                 opt.max_nodes),
                      true, classify_exclusive(f.matrix())};
    BlowupTree& t = r.tree;
    std::deque<std::size_t> q{0};
    try {
        while (!q.empty()) {
            std::size_t v = q.front();
            q.pop_front();
            const auto& a = t.node(v).inner;
            if (is_normal_crossing_binomial(a)) continue;
            auto fac = factorize(a);
            std::size_t s1 = select_variable(fac.part1, largest);
            std::size_t s2 = select_variable(fac.part2, largest);
            q.push_back(t.add_child(v, Chart{s1, s2}));
            q.push_back(t.add_child(v, Chart{s2, s1}));
        }
    } catch (const CapExceeded&) {
        r.halted = false;
    }
    return r;
}

}  // namespace detail

// One blow-up per node at the least-degree variables of the coprime parts.
inline SelectiveResult min_degree_selective(const SopPolynomial& f, const BlowupOptions& opt = {}) {
    return detail::selective(f, false, opt);
}

inline SelectiveResult max_degree_selective(const SopPolynomial& f, const BlowupOptions& opt = {}) {
    return detail::selective(f, true, opt);
}

enum class StemSide { Left, Right };

// Root to a deepest leaf.  At a tie the left side follows the chart that
// substitutes the larger-index centre variable (its w1-part vanishes in the
// bivariate case), the right side the other one.
inline std::vector<std::size_t> stem(const BlowupTree& t, StemSide side) {
    std::vector<std::size_t> height(t.size(), 0);
    for (std::size_t k = t.size(); k-- > 0;) {
        const auto& n = t.node(k);
        if (!n.children.empty() && n.children.size() != 2)
            throw std::invalid_argument("stem needs a binary tree");
        for (auto c : n.children) height[k] = std::max(height[k], height[c] + 1);
    }
    std::vector<std::size_t> path{0};
    std::size_t v = 0;
    while (!t.node(v).children.empty()) {
        std::size_t a = t.node(v).children[0], b = t.node(v).children[1];
        std::size_t next;
        if (height[a] != height[b]) {
            next = height[a] > height[b] ? a : b;
        } else {
            bool a_larger = t.node(a).chart->target > t.node(b).chart->target;
            next = (side == StemSide::Left) == a_larger ? a : b;
        }
        path.push_back(next);
        v = next;
    }
    return path;
}

inline std::string chart_label(const Chart& c) {
    std::string t = "w" + std::to_string(c.target + 1);
    return t + " <- " + t + "*w" + std::to_string(c.partner + 1);
}

inline std::string node_label(const BlowupNode& n) {
    std::string inner;
    for (std::size_t j = 0; j < n.inner.cols(); ++j) {
        if (j) inner += " + ";
        std::string m = format_monomial(n.inner.column(j));
        inner += m.empty() ? "1" : m;
    }
    std::string s;
    for (std::size_t h = 0; h < n.outer.dim(); ++h) s += (h ? "," : "") + to_string(n.outer[h]);
    return inner + " | s=(" + s + ")";
}

inline void write_dot(std::ostream& os, const BlowupTree& t) {
    os << "digraph blowup {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& n = t.node(i);
        os << "  n" << i << " [label=\"" << node_label(n) << "\"" << (n.children.empty() ? ", style=bold" : "")
           << "];\n";
    }
    for (std::size_t i = 0; i < t.size(); ++i)
        for (auto c : t.node(i).children)
            os << "  n" << i << " -> n" << c << " [label=\"" << chart_label(*t.node(c).chart) << "\"];\n";
    os << "}\n";
}

inline json to_json(const BlowupTree& t) {
    json nodes = json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& n = t.node(i);
        json cols = json::array();
        for (std::size_t j = 0; j < n.inner.cols(); ++j) {
            json c = json::array();
            for (std::size_t h = 0; h < n.inner.rows(); ++h) c.push_back(detail::integer_json(n.inner(h, j)));
            cols.push_back(c);
        }
        json s = json::array();
        for (const auto& x : n.outer.s()) s.push_back(to_string(x));
        json jn = {{"id", i},        {"depth", n.depth},         {"exponents", cols}, {"s", s},
                   {"children", n.children}, {"leaf", n.children.empty()}};
        if (n.parent) jn["parent"] = *n.parent;
        if (n.chart) jn["chart"] = {{"target", n.chart->target + 1}, {"partner", n.chart->partner + 1}};
        if (n.counters) jn["counters"] = {(*n.counters)[0], (*n.counters)[1]};
        const BlowMatrix b = t.cumulative(i);
        json rows = json::array();
        for (std::size_t r = 0; r < b.dim(); ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < b.dim(); ++c) row.push_back(detail::integer_json(b(r, c)));
            rows.push_back(row);
        }
        jn["blow_matrix"] = rows;
        nodes.push_back(std::move(jn));
    }
    return {{"algorithm", algorithm_name(t.algorithm())}, {"nodes", nodes}};
}

}  // namespace rlctkit
