#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dstbc {

// Square Gray-mapped constellations with unit average energy.
class Constellation {
   public:
    static Constellation qpsk() { return Constellation("qpsk", 2); }
    static Constellation qam16() { return Constellation("qam16", 4); }
    static Constellation qam64() { return Constellation("qam64", 6); }
    static Constellation qam256() { return Constellation("qam256", 8); }

    static Constellation from_name(const std::string& name) {
        if (name == "qpsk") return qpsk();
        if (name == "qam16") return qam16();
        if (name == "qam64") return qam64();
        if (name == "qam256") return qam256();
        throw std::invalid_argument("unknown constellation: " + name);
    }

    const std::string& name() const { return name_; }
    std::size_t bits_per_symbol() const { return bits_; }
    std::size_t size() const { return points_.size(); }
    std::complex<double> point(std::size_t idx) const { return points_[idx]; }

    // Gray-coded bits of constellation point idx, MSB first.
    std::uint32_t bits_of(std::size_t idx) const { return labels_[idx]; }

    // Hamming distance between the labels of two points.
    static int bit_errors(std::uint32_t a, std::uint32_t b) {
        return __builtin_popcount(a ^ b);
    }

   private:
    Constellation(std::string name, std::size_t bits) : name_(std::move(name)), bits_(bits) {
        const std::size_t side = std::size_t{1} << (bits / 2);
        const std::size_t m = side * side;
        points_.resize(m);
        labels_.resize(m);
        // Per-axis Gray mapping over levels {-(side-1), ..., -1, 1, ..., side-1}
        // stepped by 2, then global scaling to unit average energy:
        // E[|x|^2] = 2 (side^2 - 1) / 3 per square constellation.
        const double scale = std::sqrt(3.0 / (2.0 * (static_cast<double>(side * side) - 1.0)));
        std::size_t idx = 0;
        for (std::size_t i = 0; i < side; ++i) {
            for (std::size_t q = 0; q < side; ++q) {
                const double re = (2.0 * static_cast<double>(i) - (side - 1.0)) * scale;
                const double im = (2.0 * static_cast<double>(q) - (side - 1.0)) * scale;
                points_[idx] = {re, im};
                labels_[idx] = static_cast<std::uint32_t>((gray(i) << (bits / 2)) | gray(q));
                ++idx;
            }
        }
    }

    static std::size_t gray(std::size_t v) { return v ^ (v >> 1); }

    std::string name_;
    std::size_t bits_;
    std::vector<std::complex<double>> points_;
    std::vector<std::uint32_t> labels_;
};

}  // namespace dstbc
