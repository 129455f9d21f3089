#pragma once

#include "rlctkit/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rlctkit {

using ExponentVector = std::vector<BigInt>;

// d x n matrix of non-negative integers, one column per term.  Columns keep
// input order.
class MultiIndexMatrix {
public:
    MultiIndexMatrix() = default;
    MultiIndexMatrix(std::size_t d, std::size_t n) : d_(d), n_(n), data_(d * n) {}

    static MultiIndexMatrix from_columns(const std::vector<ExponentVector>& cols) {
        if (cols.empty()) throw std::invalid_argument("multi-index matrix needs at least one column");
        MultiIndexMatrix m(cols.front().size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != m.d_) throw std::invalid_argument("columns of unequal length");
            for (std::size_t i = 0; i < m.d_; ++i) {
                if (cols[j][i] < 0) throw std::invalid_argument("negative exponent");
                m(i, j) = cols[j][i];
            }
        }
        return m;
    }

    // Row-major nested initializer, convenient for small literal matrices.
    static MultiIndexMatrix from_rows(const std::vector<std::vector<long>>& rows) {
        if (rows.empty() || rows.front().empty()) throw std::invalid_argument("empty matrix");
        MultiIndexMatrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.n_) throw std::invalid_argument("ragged rows");
            for (std::size_t j = 0; j < m.n_; ++j) {
                if (rows[i][j] < 0) throw std::invalid_argument("negative exponent");
                m(i, j) = rows[i][j];
            }
        }
        return m;
    }

    std::size_t rows() const { return d_; }
    std::size_t cols() const { return n_; }

    BigInt& operator()(std::size_t i, std::size_t j) { return data_[j * d_ + i]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[j * d_ + i]; }

    ExponentVector column(std::size_t j) const {
        return ExponentVector(data_.begin() + static_cast<std::ptrdiff_t>(j * d_),
                              data_.begin() + static_cast<std::ptrdiff_t>((j + 1) * d_));
    }

    std::vector<ExponentVector> columns() const {
        std::vector<ExponentVector> out;
        for (std::size_t j = 0; j < n_; ++j) out.push_back(column(j));
        return out;
    }

    MultiIndexMatrix select_columns(const std::vector<std::size_t>& idx) const {
        MultiIndexMatrix m(d_, idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k)
            for (std::size_t i = 0; i < d_; ++i) m(i, k) = (*this)(i, idx[k]);
        return m;
    }

    friend bool operator==(const MultiIndexMatrix&, const MultiIndexMatrix&) = default;

private:
    std::size_t d_ = 0, n_ = 0;
    std::vector<BigInt> data_;
};

// Integer d x d matrix acting on exponent columns by its transpose.  Elements
// of the monoid generated by the elementary matrices I + E(i,j), i != j.
class BlowMatrix {
public:
    BlowMatrix() = default;
    explicit BlowMatrix(std::size_t d) : d_(d), data_(d * d) {}

    static BlowMatrix identity(std::size_t d) {
        BlowMatrix b(d);
        for (std::size_t i = 0; i < d; ++i) b(i, i) = 1;
        return b;
    }

    // Chart w_target <- w_target * w_partner: identity plus a one at
    // (target, partner).
    static BlowMatrix elementary(std::size_t d, std::size_t target, std::size_t partner) {
        if (target == partner || target >= d || partner >= d)
            throw std::invalid_argument("elementary blow matrix needs two distinct variables");
        BlowMatrix b = identity(d);
        b(target, partner) = 1;
        return b;
    }

    static BlowMatrix from_rows(const std::vector<std::vector<long>>& rows) {
        BlowMatrix b(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw std::invalid_argument("blow matrix must be square");
            for (std::size_t j = 0; j < rows.size(); ++j) b(i, j) = rows[i][j];
        }
        return b;
    }

    std::size_t dim() const { return d_; }
    BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * d_ + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * d_ + j]; }

    friend BlowMatrix operator*(const BlowMatrix& a, const BlowMatrix& b) {
        if (a.d_ != b.d_) throw std::invalid_argument("blow matrix dimension mismatch");
        BlowMatrix c(a.d_);
        for (std::size_t i = 0; i < a.d_; ++i)
            for (std::size_t k = 0; k < a.d_; ++k) {
                if (a(i, k) == 0) continue;
                for (std::size_t j = 0; j < a.d_; ++j) c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    // Right multiplication by an elementary chart, in place: adds column
    // `target` to column `partner`.
    void apply_chart(std::size_t target, std::size_t partner) {
        for (std::size_t i = 0; i < d_; ++i) (*this)(i, partner) += (*this)(i, target);
    }

    ExponentVector transpose_apply(const ExponentVector& a) const {
        check_len(a.size());
        ExponentVector out(d_);
        for (std::size_t j = 0; j < d_; ++j)
            for (std::size_t i = 0; i < d_; ++i)
                if ((*this)(i, j) != 0) out[j] += (*this)(i, j) * a[i];
        return out;
    }

    std::vector<Rational> transpose_apply(const std::vector<Rational>& a) const {
        check_len(a.size());
        std::vector<Rational> out(d_);
        for (std::size_t j = 0; j < d_; ++j)
            for (std::size_t i = 0; i < d_; ++i)
                if ((*this)(i, j) != 0) out[j] += Rational((*this)(i, j)) * a[i];
        return out;
    }

    BigInt determinant() const {
        // Bareiss fraction-free elimination.
        std::vector<BigInt> m = data_;
        auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return m[i * d_ + j]; };
        BigInt prev = 1;
        int sign = 1;
        for (std::size_t k = 0; k < d_; ++k) {
            std::size_t piv = k;
            while (piv < d_ && at(piv, k) == 0) ++piv;
            if (piv == d_) return 0;
            if (piv != k) {
                for (std::size_t j = 0; j < d_; ++j) std::swap(at(k, j), at(piv, j));
                sign = -sign;
            }
            for (std::size_t i = k + 1; i < d_; ++i) {
                for (std::size_t j = k + 1; j < d_; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
                at(i, k) = 0;
            }
            prev = at(k, k);
        }
        return d_ == 0 ? BigInt(1) : BigInt(sign * at(d_ - 1, d_ - 1));
    }

    // Non-negative integer entries with unit determinant.
    bool is_admissible() const {
        for (const auto& x : data_)
            if (x < 0) return false;
        return determinant() == 1;
    }

    friend bool operator==(const BlowMatrix&, const BlowMatrix&) = default;

private:
    void check_len(std::size_t n) const {
        if (n != d_) throw std::invalid_argument("vector length does not match blow matrix");
    }
    std::size_t d_ = 0;
    std::vector<BigInt> data_;
};

// g = w^(s-1) with every s_h a positive rational; the prior/Jacobian factor.
// Stored as integer numerators over one common denominator, which blow-ups
// never change.
class OuterMonomial {
public:
    OuterMonomial() = default;
    explicit OuterMonomial(const std::vector<Rational>& s) : den_(1) {
        for (const auto& x : s) {
            if (x <= 0) throw std::invalid_argument("outer monomial exponents must be positive");
            BigInt dx = boost::multiprecision::denominator(x);
            den_ = den_ / boost::multiprecision::gcd(den_, dx) * dx;
        }
        for (const auto& x : s)
            num_.push_back(boost::multiprecision::numerator(x) * (den_ / boost::multiprecision::denominator(x)));
    }
    static OuterMonomial ones(std::size_t d) { return OuterMonomial(std::vector<Rational>(d, Rational(1))); }

    std::size_t dim() const { return num_.size(); }
    Rational operator[](std::size_t h) const { return Rational(num_[h], den_); }
    std::vector<Rational> s() const {
        std::vector<Rational> out;
        for (std::size_t h = 0; h < num_.size(); ++h) out.push_back((*this)[h]);
        return out;
    }
    Rational total() const {
        BigInt t = 0;
        for (const auto& x : num_) t += x;
        return Rational(t, den_);
    }

    // Exponent update of the chart w_target <- w_target * w_partner.
    void apply_chart(std::size_t target, std::size_t partner) { num_[partner] += num_[target]; }

    friend bool operator==(const OuterMonomial& a, const OuterMonomial& b) {
        return a.dim() == b.dim() && a.s() == b.s();
    }

private:
    std::vector<BigInt> num_;
    BigInt den_ = 1;
};

inline bool leq(const ExponentVector& a, const ExponentVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline bool is_zero(const ExponentVector& a) {
    return std::all_of(a.begin(), a.end(), [](const BigInt& x) { return x == 0; });
}

}  // namespace rlctkit
