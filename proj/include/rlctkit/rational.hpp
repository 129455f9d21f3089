#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <concepts>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rlctkit {

// Expression templates off: values behave like plain arithmetic types.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>, boost::multiprecision::et_off>;

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PositiveInfinity {
    friend bool operator==(PositiveInfinity, PositiveInfinity) { return true; }
};

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("zero denominator");
    return Rational(num, den);
}

inline std::string to_string(const BigInt& v) { return v.str(); }

// "p/q" with q > 0, or plain "p" when the value is integral.
inline std::string to_string(const Rational& v) {
    const BigInt& den = boost::multiprecision::denominator(v);
    if (den == 1) return boost::multiprecision::numerator(v).str();
    return boost::multiprecision::numerator(v).str() + "/" + den.str();
}

namespace detail {

inline BigInt parse_integer(std::string_view text) {
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }
    if (i == text.size()) throw ParseError("expected integer, got '" + std::string(text) + "'");
    BigInt out = 0;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c < '0' || c > '9') throw ParseError("bad digit in '" + std::string(text) + "'");
        out = out * 10 + (c - '0');
    }
    return neg ? BigInt(-out) : out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n')) s.remove_suffix(1);
    return s;
}

}  // namespace detail

inline Rational parse_rational(std::string_view text) {
    text = detail::trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(detail::parse_integer(text));
    BigInt den = detail::parse_integer(detail::trim(text.substr(slash + 1)));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(detail::parse_integer(detail::trim(text.substr(0, slash))), den);
}

// A rational extended by +inf; the RLCT of a polynomial without a zero at the
// origin is +inf.
class Extended {
public:
    Extended() = default;
    Extended(const Rational& v) : value_(v) {}
    Extended(PositiveInfinity) {}
    template <std::integral T>
    Extended(T v) : value_(Rational(v)) {}

    static Extended infinity() { return Extended(PositiveInfinity{}); }

    // 1/x with 1/0 read as +inf.  x must be non-negative.
    static Extended reciprocal(const Rational& x) {
        if (x < 0) throw std::domain_error("reciprocal of negative value");
        if (x == 0) return infinity();
        return Extended(Rational(1) / x);
    }

    bool is_infinite() const { return !value_.has_value(); }
    bool is_finite() const { return value_.has_value(); }

    const Rational& value() const {
        if (!value_) throw std::logic_error("value() on +inf");
        return *value_;
    }

    // 1/this with 1/inf read as 0.
    Rational reciprocal_value() const {
        if (!value_) return Rational(0);
        if (*value_ == 0) throw std::domain_error("reciprocal of zero");
        return Rational(1) / *value_;
    }

    std::string str() const { return value_ ? to_string(*value_) : std::string("inf"); }

    static Extended parse(std::string_view text) {
        text = detail::trim(text);
        if (text == "inf" || text == "+inf" || text == "infinity") return infinity();
        return Extended(parse_rational(text));
    }

    friend bool operator==(const Extended& a, const Extended& b) { return a.value_ == b.value_; }

    friend std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
        if (!a.value_ || !b.value_) {
            if (!a.value_ && !b.value_) return std::strong_ordering::equal;
            return a.value_ ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        if (*a.value_ < *b.value_) return std::strong_ordering::less;
        if (*b.value_ < *a.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend Extended operator+(const Extended& a, const Extended& b) {
        if (!a.value_ || !b.value_) return infinity();
        return Extended(*a.value_ + *b.value_);
    }

private:
    std::optional<Rational> value_;
};

inline Extended min(const Extended& a, const Extended& b) { return b < a ? b : a; }

inline BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

inline BigInt lcm(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::abs(a / gcd(a, b) * b);
}

inline Rational pow(Rational base, unsigned long k) {
    Rational out = 1;
    while (k) {
        if (k & 1) out *= base;
        k >>= 1;
        if (k) base *= base;
    }
    return out;
}

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

// Smallest positive integer vector proportional to v (v >= 0, not all zero).
inline std::vector<BigInt> primitive_integer_vector(const std::vector<Rational>& v) {
    BigInt l = 1;
    for (const auto& x : v) {
        if (x < 0) throw std::domain_error("primitive vector of negative entries");
        if (x != 0) l = lcm(l, denominator(x));
    }
    std::vector<BigInt> out;
    out.reserve(v.size());
    BigInt g = 0;
    for (const auto& x : v) {
        BigInt k = numerator(x) * (l / denominator(x));
        g = gcd(g, k);
        out.push_back(k);
    }
    if (g == 0) throw std::domain_error("primitive vector of zero vector");
    for (auto& k : out) k /= g;
    return out;
}

}  // namespace rlctkit
