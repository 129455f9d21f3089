#pragma once

#include "rlctkit/polynomial.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

namespace rlctkit {

using json = nlohmann::ordered_json;

namespace detail {

class PolyParser {
public:
    explicit PolyParser(std::string_view text) : s_(text) {}

    struct RawTerm {
        Rational coeff;
        std::map<std::size_t, BigInt> exps;  // 0-based variable -> exponent
    };

    std::vector<RawTerm> parse() {
        std::vector<RawTerm> out;
        skip();
        bool first = true;
        while (true) {
            skip();
            if (at_end()) break;
            bool neg = false;
            if (peek() == '+' || peek() == '-') {
                neg = peek() == '-';
                ++pos_;
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            RawTerm t = term();
            if (neg) t.coeff = -t.coeff;
            out.push_back(std::move(t));
            first = false;
        }
        if (out.empty()) fail("empty polynomial");
        return out;
    }

private:
    RawTerm term() {
        RawTerm t{Rational(1), {}};
        bool any = false;
        while (true) {
            skip();
            if (at_end()) break;
            char c = peek();
            if (c == '*') {
                if (!any) fail("dangling '*'");
                ++pos_;
                skip();
                c = at_end() ? '\0' : peek();
                if (c != 'w' && !std::isdigit(static_cast<unsigned char>(c))) fail("expected factor after '*'");
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                BigInt num = integer();
                skip();
                BigInt den = 1;
                if (!at_end() && peek() == '/') {
                    ++pos_;
                    skip();
                    den = integer();
                    if (den == 0) fail("zero denominator");
                }
                t.coeff *= Rational(num, den);
            } else if (c == 'w') {
                ++pos_;
                if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected variable index");
                BigInt idx = integer();
                if (idx < 1 || idx > 100000) fail("variable index out of range");
                BigInt e = 1;
                skip();
                if (!at_end() && peek() == '^') {
                    ++pos_;
                    skip();
                    e = integer();
                }
                t.exps[idx.convert_to<std::size_t>() - 1] += e;
            } else {
                break;
            }
            any = true;
        }
        if (!any) fail("expected a term");
        return t;
    }

    BigInt integer() {
        std::size_t start = pos_;
        BigInt v = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) v = v * 10 + (s_[pos_++] - '0');
        if (pos_ == start) fail("expected digits");
        return v;
    }

    void skip() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

inline BigInt json_integer(const json& j) {
    if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) return parse_integer(j.get<std::string>());
    throw ParseError("expected integer in JSON, got " + j.dump());
}

inline Rational json_rational(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    throw ParseError("expected rational string in JSON, got " + j.dump());
}

inline json integer_json(const BigInt& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return json(v.convert_to<std::int64_t>());
    return json(v.str());
}

}  // namespace detail

// Text form: terms joined by '+' or '-', each "c * w1^a1 w2^a2" with optional
// coefficient, optional '*' between factors and "^1" omissible.  The
// dimension is the largest variable index unless `dim` is larger.
inline GeneralPolynomial parse_polynomial(std::string_view text, std::size_t dim = 0) {
    auto raw = detail::PolyParser(text).parse();
    std::size_t d = dim;
    for (const auto& t : raw)
        for (const auto& [i, e] : t.exps) d = std::max(d, i + 1);
    if (d == 0) d = 1;
    GeneralPolynomial p(d);
    for (const auto& t : raw) {
        ExponentVector e(d);
        for (const auto& [i, x] : t.exps) e[i] = x;
        p.add_term(e, t.coeff);
    }
    return p;
}

inline SopPolynomial parse_sop(std::string_view text, std::size_t dim = 0, bool nonneg_asserted = true) {
    auto raw = detail::PolyParser(text).parse();
    std::size_t d = dim;
    for (const auto& t : raw)
        for (const auto& [i, e] : t.exps) d = std::max(d, i + 1);
    if (d == 0) d = 1;
    std::vector<ExponentVector> cols;
    for (const auto& t : raw) {
        if (t.coeff != 1) throw std::invalid_argument("sum of monomials needs unit coefficients");
        ExponentVector e(d);
        for (const auto& [i, x] : t.exps) e[i] = x;
        cols.push_back(std::move(e));
    }
    return SopPolynomial(MultiIndexMatrix::from_columns(cols), nonneg_asserted);
}

inline std::string format_monomial(const ExponentVector& e) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += '*';
        out += 'w' + std::to_string(i + 1);
        if (e[i] != 1) out += '^' + e[i].str();
    }
    return out;
}

inline std::string format_polynomial(const GeneralPolynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    // Highest degree terms first reads more naturally; ties follow map order.
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [e, c] = *it;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        std::string mono = format_monomial(e);
        if (mono.empty())
            out += to_string(mag);
        else if (mag == 1)
            out += mono;
        else
            out += to_string(mag) + "*" + mono;
    }
    return out;
}

// w^m * (rest) with m the coordinatewise minimum exponent.
inline std::string format_factored(const GeneralPolynomial& g) {
    ExponentVector m;
    for (const auto& [e, c] : g.terms()) {
        if (m.empty()) m = e;
        for (std::size_t h = 0; h < e.size(); ++h) m[h] = std::min(m[h], e[h]);
    }
    GeneralPolynomial rest(g.dim());
    for (const auto& [e, c] : g.terms()) {
        ExponentVector r = e;
        for (std::size_t h = 0; h < e.size(); ++h) r[h] -= m[h];
        rest.add_term(r, c);
    }
    std::string mono = format_monomial(m);
    std::string body = format_polynomial(rest);
    if (mono.empty()) return body;
    return mono + "*(" + body + ")";
}

inline std::string format_sop(const SopPolynomial& f) {
    std::string out;
    for (std::size_t j = 0; j < f.terms(); ++j) {
        if (j) out += " + ";
        std::string m = format_monomial(f.matrix().column(j));
        out += m.empty() ? "1" : m;
    }
    return out;
}

inline json to_json(const GeneralPolynomial& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) {
        json exps = json::array();
        for (const auto& x : e) exps.push_back(detail::integer_json(x));
        terms.push_back({{"coeff", to_string(c)}, {"exps", exps}});
    }
    return {{"d", p.dim()}, {"terms", terms}};
}

inline json to_json(const SopPolynomial& f) { return to_json(GeneralPolynomial::from_sop(f)); }

inline GeneralPolynomial polynomial_from_json(const json& j) {
    if (!j.is_object() || !j.contains("d") || !j.contains("terms"))
        throw ParseError("polynomial JSON needs \"d\" and \"terms\"");
    std::size_t d = j.at("d").get<std::size_t>();
    GeneralPolynomial p(d);
    for (const auto& t : j.at("terms")) {
        ExponentVector e;
        for (const auto& x : t.at("exps")) e.push_back(detail::json_integer(x));
        if (e.size() != d) throw ParseError("term exponent length differs from d");
        p.add_term(e, t.contains("coeff") ? detail::json_rational(t.at("coeff")) : Rational(1));
    }
    return p;
}

inline json to_json(const OuterMonomial& s) {
    json arr = json::array();
    for (const auto& x : s.s()) arr.push_back(to_string(x));
    return {{"s", arr}};
}

inline OuterMonomial outer_from_json(const json& j) {
    std::vector<Rational> s;
    for (const auto& x : j.at("s")) s.push_back(detail::json_rational(x));
    return OuterMonomial(std::move(s));
}

// "1,1/2,2" -> (1, 1/2, 2).
inline std::vector<Rational> parse_rational_list(std::string_view text) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(parse_rational(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace rlctkit
