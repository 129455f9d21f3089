#pragma once

#include "rlctkit/multi_index.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rlctkit {

// Sum of monomials with unit coefficients.  Columns are pairwise distinct and
// at least two terms are present.
class SopPolynomial {
public:
    SopPolynomial() = default;
    explicit SopPolynomial(MultiIndexMatrix a, bool nonneg_asserted = true)
        : a_(std::move(a)), nonneg_(nonneg_asserted) {
        if (a_.cols() < 2) throw std::invalid_argument("a sum of monomials needs at least two terms");
        if (a_.rows() < 1) throw std::invalid_argument("a sum of monomials needs at least one variable");
        std::set<ExponentVector> seen;
        for (std::size_t j = 0; j < a_.cols(); ++j) {
            auto c = a_.column(j);
            for (const auto& x : c)
                if (x < 0) throw std::invalid_argument("negative exponent");
            if (!seen.insert(c).second) throw std::invalid_argument("repeated term");
        }
        // A binomial with an odd exponent changes sign near the origin.
        if (nonneg_ && a_.cols() == 2)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t i = 0; i < a_.rows(); ++i)
                    if (a_(i, j) % 2 != 0)
                        throw std::invalid_argument("non-negative binomial needs even exponents");
    }

    static SopPolynomial from_rows(const std::vector<std::vector<long>>& rows, bool nonneg_asserted = true) {
        return SopPolynomial(MultiIndexMatrix::from_rows(rows), nonneg_asserted);
    }
    static SopPolynomial from_columns(const std::vector<ExponentVector>& cols, bool nonneg_asserted = true) {
        return SopPolynomial(MultiIndexMatrix::from_columns(cols), nonneg_asserted);
    }

    const MultiIndexMatrix& matrix() const { return a_; }
    std::size_t dim() const { return a_.rows(); }
    std::size_t terms() const { return a_.cols(); }
    bool nonneg_asserted() const { return nonneg_; }
    bool is_binomial() const { return a_.cols() == 2; }

    friend bool operator==(const SopPolynomial& x, const SopPolynomial& y) { return x.a_ == y.a_; }

private:
    MultiIndexMatrix a_;
    bool nonneg_ = true;
};

struct Factorization {
    ExponentVector common;  // componentwise minimum of the two columns
    ExponentVector part1;   // column 1 minus common
    ExponentVector part2;   // column 2 minus common
};

inline void require_binomial(const MultiIndexMatrix& a) {
    if (a.cols() != 2) throw std::invalid_argument("expected a binomial (two columns)");
}

inline Factorization factorize(const MultiIndexMatrix& a) {
    require_binomial(a);
    Factorization f;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const BigInt& x = a(i, 0);
        const BigInt& y = a(i, 1);
        BigInt c = x < y ? x : y;
        f.part1.push_back(x - c);
        f.part2.push_back(y - c);
        f.common.push_back(std::move(c));
    }
    return f;
}

// Column 1 minus column 2.
inline std::vector<BigInt> d_statistic(const MultiIndexMatrix& a) {
    require_binomial(a);
    std::vector<BigInt> out;
    for (std::size_t i = 0; i < a.rows(); ++i) out.push_back(a(i, 0) - a(i, 1));
    return out;
}

// Bivariate product of the two coordinates of the d-statistic.
inline BigInt d_scalar(const MultiIndexMatrix& a) {
    if (a.rows() != 2) throw std::invalid_argument("scalar d-statistic is bivariate only");
    auto v = d_statistic(a);
    return v[0] * v[1];
}

// One column dominates the other componentwise.
inline bool is_normal_crossing_binomial(const MultiIndexMatrix& a) {
    require_binomial(a);
    bool le = true, ge = true;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (a(i, 0) > a(i, 1)) le = false;
        if (a(i, 0) < a(i, 1)) ge = false;
    }
    return le || ge;
}

// Normal crossing of the binomial restricted to the plane of variables i, j.
inline bool is_normal_crossing_in_plane(const MultiIndexMatrix& a, std::size_t i, std::size_t j) {
    require_binomial(a);
    BigInt di = a(i, 0) - a(i, 1);
    BigInt dj = a(j, 0) - a(j, 1);
    return di * dj >= 0;
}

// Index of a column that is componentwise <= every other column, if any.
inline std::optional<std::size_t> minimal_column(const MultiIndexMatrix& a) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
        bool ok = true;
        for (std::size_t j = 0; j < a.cols() && ok; ++j) {
            if (j == k) continue;
            for (std::size_t i = 0; i < a.rows(); ++i)
                if (a(i, k) > a(i, j)) {
                    ok = false;
                    break;
                }
        }
        if (ok) return k;
    }
    return std::nullopt;
}

inline bool is_local_normal_crossing(const MultiIndexMatrix& a) { return minimal_column(a).has_value(); }

inline MultiIndexMatrix apply_blow_matrix(const BlowMatrix& b, const MultiIndexMatrix& a) {
    if (b.dim() != a.rows()) throw std::invalid_argument("blow matrix dimension mismatch");
    MultiIndexMatrix out(a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        auto c = b.transpose_apply(a.column(j));
        for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = std::move(c[i]);
    }
    return out;
}

inline OuterMonomial apply_blow_matrix(const BlowMatrix& b, const OuterMonomial& s) {
    return OuterMonomial(b.transpose_apply(s.s()));
}

// Same transform, rejecting matrices outside the admissible monoid.
inline std::pair<MultiIndexMatrix, OuterMonomial> apply_blow_matrix_checked(const BlowMatrix& b,
                                                                             const MultiIndexMatrix& a,
                                                                             const OuterMonomial& s) {
    if (!b.is_admissible()) throw std::invalid_argument("blow matrix must be non-negative with determinant 1");
    if (s.dim() != a.rows()) throw std::invalid_argument("outer monomial dimension mismatch");
    return {apply_blow_matrix(b, a), apply_blow_matrix(b, s)};
}

// Polynomial with rational coefficients.  Terms are kept sorted by exponent
// and zero coefficients are dropped.
class GeneralPolynomial {
public:
    using TermMap = std::map<ExponentVector, Rational>;

    GeneralPolynomial() = default;
    explicit GeneralPolynomial(std::size_t d) : d_(d) {}

    static GeneralPolynomial constant(std::size_t d, const Rational& c) {
        GeneralPolynomial p(d);
        p.add_term(ExponentVector(d), c);
        return p;
    }
    static GeneralPolynomial variable(std::size_t d, std::size_t i) {
        if (i >= d) throw std::invalid_argument("variable index out of range");
        GeneralPolynomial p(d);
        ExponentVector e(d);
        e[i] = 1;
        p.add_term(e, Rational(1));
        return p;
    }
    static GeneralPolynomial monomial(const ExponentVector& e, const Rational& c = Rational(1)) {
        GeneralPolynomial p(e.size());
        p.add_term(e, c);
        return p;
    }
    static GeneralPolynomial from_sop(const SopPolynomial& f) {
        GeneralPolynomial p(f.dim());
        for (std::size_t j = 0; j < f.terms(); ++j) p.add_term(f.matrix().column(j), Rational(1));
        return p;
    }

    std::size_t dim() const { return d_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    void add_term(const ExponentVector& e, const Rational& c) {
        if (e.size() != d_) throw std::invalid_argument("exponent length does not match polynomial dimension");
        for (const auto& x : e)
            if (x < 0) throw std::invalid_argument("negative exponent");
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Rational constant_term() const {
        auto it = terms_.find(ExponentVector(d_));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    MultiIndexMatrix exponent_matrix() const {
        std::vector<ExponentVector> cols;
        for (const auto& [e, c] : terms_) cols.push_back(e);
        return MultiIndexMatrix::from_columns(cols);
    }

    // Sum of monomials view; requires unit coefficients and >= 2 terms.
    SopPolynomial to_sop(bool nonneg_asserted = true) const {
        std::vector<ExponentVector> cols;
        for (const auto& [e, c] : terms_) {
            if (c != 1) throw std::invalid_argument("not a sum of monomials: coefficient " + to_string(c));
            cols.push_back(e);
        }
        if (cols.empty()) throw std::invalid_argument("zero polynomial");
        return SopPolynomial(MultiIndexMatrix::from_columns(cols), nonneg_asserted);
    }

    GeneralPolynomial& operator+=(const GeneralPolynomial& o) {
        check_dim(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    GeneralPolynomial& operator-=(const GeneralPolynomial& o) {
        check_dim(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    GeneralPolynomial& operator*=(const Rational& k) {
        if (k == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= k;
        return *this;
    }

    friend GeneralPolynomial operator+(GeneralPolynomial a, const GeneralPolynomial& b) { return a += b; }
    friend GeneralPolynomial operator-(GeneralPolynomial a, const GeneralPolynomial& b) { return a -= b; }
    friend GeneralPolynomial operator*(GeneralPolynomial a, const Rational& k) { return a *= k; }

    friend GeneralPolynomial operator*(const GeneralPolynomial& a, const GeneralPolynomial& b) {
        a.check_dim(b);
        GeneralPolynomial out(a.d_);
        ExponentVector e(a.d_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < a.d_; ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }

    GeneralPolynomial pow(unsigned long k) const {
        GeneralPolynomial result = constant(d_, Rational(1));
        GeneralPolynomial base = *this;
        while (k) {
            if (k & 1) result = result * base;
            k >>= 1;
            if (k) base = base * base;
        }
        return result;
    }

    Rational evaluate(const std::vector<Rational>& x) const {
        if (x.size() != d_) throw std::invalid_argument("evaluation point dimension mismatch");
        Rational total = 0;
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < d_; ++i) {
                if (e[i] == 0) continue;
                t *= rlctkit::pow(x[i], e[i].convert_to<unsigned>());
            }
            total += t;
        }
        return total;
    }

    friend bool operator==(const GeneralPolynomial&, const GeneralPolynomial&) = default;

private:
    void check_dim(const GeneralPolynomial& o) const {
        if (o.d_ != d_) throw std::invalid_argument("polynomial dimension mismatch");
    }
    std::size_t d_ = 0;
    TermMap terms_;
};

inline GeneralPolynomial apply_blow_matrix(const BlowMatrix& b, const GeneralPolynomial& f) {
    if (b.dim() != f.dim()) throw std::invalid_argument("blow matrix dimension mismatch");
    GeneralPolynomial out(f.dim());
    for (const auto& [e, c] : f.terms()) out.add_term(b.transpose_apply(e), c);
    return out;
}

namespace detail {

inline unsigned long small_exponent(const BigInt& e) {
    if (e > 1000000) throw std::invalid_argument("exponent too large to expand");
    return e.convert_to<unsigned long>();
}

// Substitutes w_i <- image[i] into f and expands.
inline GeneralPolynomial substitute(const GeneralPolynomial& f, const std::vector<GeneralPolynomial>& image,
                                    std::size_t out_dim) {
    if (image.size() != f.dim()) throw std::invalid_argument("substitution arity mismatch");
    std::vector<std::map<unsigned long, GeneralPolynomial>> powers(f.dim());
    auto power = [&](std::size_t i, unsigned long k) -> const GeneralPolynomial& {
        auto it = powers[i].find(k);
        if (it != powers[i].end()) return it->second;
        return powers[i].emplace(k, image[i].pow(k)).first->second;
    };
    GeneralPolynomial out(out_dim);
    for (const auto& [e, c] : f.terms()) {
        GeneralPolynomial t = GeneralPolynomial::constant(out_dim, c);
        for (std::size_t i = 0; i < f.dim(); ++i)
            if (e[i] != 0) t = t * power(i, small_exponent(e[i]));
        out += t;
    }
    return out;
}

}  // namespace detail

// f(w + p).
inline GeneralPolynomial translate(const GeneralPolynomial& f, const std::vector<Rational>& p) {
    if (p.size() != f.dim()) throw std::invalid_argument("translation vector dimension mismatch");
    std::vector<GeneralPolynomial> image;
    for (std::size_t i = 0; i < f.dim(); ++i)
        image.push_back(GeneralPolynomial::variable(f.dim(), i) + GeneralPolynomial::constant(f.dim(), p[i]));
    return detail::substitute(f, image, f.dim());
}

using RationalMatrix = std::vector<std::vector<Rational>>;

inline Rational determinant(RationalMatrix m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (m[k].size() != n) throw std::invalid_argument("matrix must be square");
        std::size_t piv = k;
        while (piv < n && m[piv][k] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            std::swap(m[piv], m[k]);
            det = -det;
        }
        det *= m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            Rational r = m[i][k] / m[k][k];
            if (r == 0) continue;
            for (std::size_t j = k; j < n; ++j) m[i][j] -= r * m[k][j];
        }
    }
    return det;
}

// f(P^{-1} u), given P^{-1} directly: w_i = sum_j pinv[i][j] u_j.
inline GeneralPolynomial linear_transform(const GeneralPolynomial& f, const RationalMatrix& pinv) {
    const std::size_t d = f.dim();
    if (pinv.size() != d) throw std::invalid_argument("transform matrix dimension mismatch");
    for (const auto& row : pinv)
        if (row.size() != d) throw std::invalid_argument("transform matrix must be square");
    if (determinant(pinv) == 0) throw std::invalid_argument("transform matrix is singular");
    std::vector<GeneralPolynomial> image;
    for (std::size_t i = 0; i < d; ++i) {
        GeneralPolynomial w(d);
        for (std::size_t j = 0; j < d; ++j) w += GeneralPolynomial::variable(d, j) * pinv[i][j];
        image.push_back(std::move(w));
    }
    return detail::substitute(f, image, d);
}

}  // namespace rlctkit
