#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dstbc/gaussian.hpp"
#include "dstbc/mono.hpp"
#include "dstbc/rational.hpp"

namespace dstbc {

// N x T grid of symbolic coefficients. Row index = symbol index,
// column index = time slot.
class MonoGrid {
   public:
    MonoGrid() : rows_(0), cols_(0) {}
    MonoGrid(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, MonoCoeff::Zero) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    MonoCoeff& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    MonoCoeff operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend bool operator==(const MonoGrid& a, const MonoGrid& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const MonoGrid& a, const MonoGrid& b) { return !(a == b); }

    bool all_zero() const {
        for (MonoCoeff c : data_)
            if (!is_zero(c)) return false;
        return true;
    }

    GaussMatrix to_gauss() const {
        GaussMatrix m(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(r, c) = dstbc::to_gauss((*this)(r, c));
        return m;
    }

   private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<MonoCoeff> data_;
};

// The pair (A_k, B_k) through which relay k maps its received vector and the
// conjugate of its received vector into the T transmit slots. Entry (n, t) of
// `a` scales s_n in slot t; entry (n, t) of `b` scales s_n* in slot t.
struct AssociatedPair {
    MonoGrid a;
    MonoGrid b;

    AssociatedPair() = default;
    AssociatedPair(std::size_t n, std::size_t t) : a(n, t), b(n, t) {}

    friend bool operator==(const AssociatedPair& x, const AssociatedPair& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const AssociatedPair& x, const AssociatedPair& y) { return !(x == y); }
};

// Complete description of a code: K pairs of N x T associated matrices.
// Immutable by convention after construction; all operations on codes are
// pure functions.
struct DistributedCode {
    std::size_t n_symbols = 0;  // N
    std::size_t n_relays = 0;   // K
    std::size_t n_slots = 0;    // T
    std::vector<AssociatedPair> relays;

    DistributedCode() = default;
    DistributedCode(std::size_t n, std::size_t k, std::size_t t)
        : n_symbols(n), n_relays(k), n_slots(t), relays(k, AssociatedPair(n, t)) {}

    Rational data_rate() const {
        return Rational(static_cast<std::int64_t>(n_symbols), static_cast<std::int64_t>(n_slots));
    }

    // Throws if the dimension invariants do not hold.
    void validate() const {
        if (n_symbols == 0 || n_relays == 0 || n_slots == 0)
            throw std::invalid_argument("code dimensions must be positive");
        if (relays.size() != n_relays)
            throw std::invalid_argument("relay list length does not match K");
        for (const auto& p : relays) {
            if (p.a.rows() != n_symbols || p.a.cols() != n_slots || p.b.rows() != n_symbols ||
                p.b.cols() != n_slots)
                throw std::invalid_argument("associated matrix dimensions do not match N x T");
        }
    }

    friend bool operator==(const DistributedCode& x, const DistributedCode& y) {
        return x.n_symbols == y.n_symbols && x.n_relays == y.n_relays && x.n_slots == y.n_slots &&
               x.relays == y.relays;
    }
    friend bool operator!=(const DistributedCode& x, const DistributedCode& y) { return !(x == y); }
};

}  // namespace dstbc
