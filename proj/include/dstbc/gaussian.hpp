#pragma once

#include <complex>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dstbc {

// Complex number with integer real and imaginary parts. All the structural
// code checks reduce to sums and products of entries from {0, ±1, ±j}, so
// every intermediate quantity stays a Gaussian integer and every comparison
// is exact. int64 is far beyond what any desk-scale code can overflow.
struct GaussInt {
    std::int64_t re = 0;
    std::int64_t im = 0;

    constexpr GaussInt() = default;
    constexpr GaussInt(std::int64_t r, std::int64_t i) : re(r), im(i) {}

    constexpr bool is_zero() const { return re == 0 && im == 0; }
    constexpr GaussInt conj() const { return {re, -im}; }

    friend constexpr GaussInt operator+(GaussInt a, GaussInt b) { return {a.re + b.re, a.im + b.im}; }
    friend constexpr GaussInt operator-(GaussInt a, GaussInt b) { return {a.re - b.re, a.im - b.im}; }
    friend constexpr GaussInt operator-(GaussInt a) { return {-a.re, -a.im}; }
    friend constexpr GaussInt operator*(GaussInt a, GaussInt b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend constexpr bool operator==(GaussInt a, GaussInt b) { return a.re == b.re && a.im == b.im; }
    friend constexpr bool operator!=(GaussInt a, GaussInt b) { return !(a == b); }

    // |z|^2, always a plain non-negative integer.
    constexpr std::int64_t norm2() const { return re * re + im * im; }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    std::string str() const {
        if (im == 0) return std::to_string(re);
        if (re == 0) return std::to_string(im) + "j";
        return std::to_string(re) + (im > 0 ? "+" : "") + std::to_string(im) + "j";
    }

    friend std::ostream& operator<<(std::ostream& os, GaussInt z) { return os << z.str(); }
};

// Dense matrix over the Gaussian integers. Only the handful of operations
// the verification checks need; everything is exact.
class GaussMatrix {
   public:
    GaussMatrix() : rows_(0), cols_(0) {}
    GaussMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static GaussMatrix identity(std::size_t n) {
        GaussMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = {1, 0};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    GaussInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const GaussInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    GaussMatrix conj_transpose() const {
        GaussMatrix m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c).conj();
        return m;
    }

    GaussMatrix transpose() const {
        GaussMatrix m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
        return m;
    }

    GaussMatrix conj() const {
        GaussMatrix m(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c).conj();
        return m;
    }

    friend GaussMatrix operator+(const GaussMatrix& a, const GaussMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("GaussMatrix: shape mismatch in +");
        GaussMatrix m(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) m.data_[i] = a.data_[i] + b.data_[i];
        return m;
    }

    friend GaussMatrix operator*(const GaussMatrix& a, const GaussMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("GaussMatrix: shape mismatch in *");
        GaussMatrix m(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const GaussInt v = a(r, k);
                if (v.is_zero()) continue;
                for (std::size_t c = 0; c < b.cols_; ++c) m(r, c) = m(r, c) + v * b(k, c);
            }
        return m;
    }

    friend bool operator==(const GaussMatrix& a, const GaussMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (!v.is_zero()) return false;
        return true;
    }

    bool is_diagonal() const {
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (r != c && !(*this)(r, c).is_zero()) return false;
        return true;
    }

   private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<GaussInt> data_;
};

}  // namespace dstbc
