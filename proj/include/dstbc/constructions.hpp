#pragma once

#include <array>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "dstbc/code.hpp"

namespace dstbc {

// A rate-one real orthogonal design, stored as (symbol, sign) per cell.
// symbol is 1-based, sign is +1/-1. G G^T = (sum_n x_n^2) I holds exactly;
// the test suite asserts it for every table below.
struct RealOrthogonalDesign {
    std::size_t order = 0;                          // square: order x order
    std::vector<std::array<int, 2>> cells;          // row-major (symbol, sign)

    std::array<int, 2> at(std::size_t r, std::size_t c) const { return cells[r * order + c]; }
};

inline RealOrthogonalDesign real_orthogonal_design(std::size_t order) {
    // Tables for orders 2, 4 and 8; these are the classical rate-one
    // generator patterns for real symbols.
    static const int g2[2][2][2] = {
        {{1, +1}, {2, -1}},
        {{2, +1}, {1, +1}},
    };
    static const int g4[4][4][2] = {
        {{1, +1}, {2, -1}, {3, -1}, {4, -1}},
        {{2, +1}, {1, +1}, {4, +1}, {3, -1}},
        {{3, +1}, {4, -1}, {1, +1}, {2, +1}},
        {{4, +1}, {3, +1}, {2, -1}, {1, +1}},
    };
    static const int g8[8][8][2] = {
        {{1, +1}, {2, +1}, {3, +1}, {4, +1}, {5, +1}, {6, +1}, {7, +1}, {8, +1}},
        {{2, -1}, {1, +1}, {4, +1}, {3, -1}, {6, +1}, {5, -1}, {8, -1}, {7, +1}},
        {{3, -1}, {4, -1}, {1, +1}, {2, +1}, {7, +1}, {8, +1}, {5, -1}, {6, -1}},
        {{4, -1}, {3, +1}, {2, -1}, {1, +1}, {8, +1}, {7, -1}, {6, +1}, {5, -1}},
        {{5, -1}, {6, -1}, {7, -1}, {8, -1}, {1, +1}, {2, +1}, {3, +1}, {4, +1}},
        {{6, -1}, {5, +1}, {8, -1}, {7, +1}, {2, -1}, {1, +1}, {4, -1}, {3, +1}},
        {{7, -1}, {8, +1}, {5, +1}, {6, -1}, {3, -1}, {4, +1}, {1, +1}, {2, -1}},
        {{8, -1}, {7, -1}, {6, +1}, {5, +1}, {4, -1}, {3, -1}, {2, +1}, {1, +1}},
    };

    RealOrthogonalDesign d;
    d.order = order;
    d.cells.resize(order * order);
    auto fill = [&](const int(*tab)[2], std::size_t n) {
        for (std::size_t i = 0; i < n * n; ++i) d.cells[i] = {tab[i][0], tab[i][1]};
    };
    switch (order) {
        case 2: fill(&g2[0][0], 2); break;
        case 4: fill(&g4[0][0], 4); break;
        case 8: fill(&g8[0][0], 8); break;
        default: throw std::invalid_argument("real orthogonal design: order must be 2, 4 or 8");
    }
    return d;
}

// K=2, N=2, T=2, rate 1. Relay 1 forwards the received pair unchanged,
// relay 2 forwards the conjugate pair in swapped slots with a sign.
inline DistributedCode construct_alamouti() {
    DistributedCode code(2, 2, 2);
    code.relays[0].a(0, 0) = MonoCoeff::PlusOne;
    code.relays[0].a(1, 1) = MonoCoeff::PlusOne;
    code.relays[1].b(0, 1) = MonoCoeff::PlusOne;
    code.relays[1].b(1, 0) = MonoCoeff::MinusOne;
    return code;
}

// N=1, T=K, relay k forwards the single symbol in its own slot.
inline DistributedCode construct_repetition(std::size_t k) {
    if (k < 1) throw std::invalid_argument("construct_repetition: k must be >= 1");
    DistributedCode code(1, k, k);
    for (std::size_t i = 0; i < k; ++i) code.relays[i].a(0, i) = MonoCoeff::PlusOne;
    return code;
}

// Rate-1/2 code [G(s), G(s)*]: the rate-one real orthogonal design evaluated
// on complex symbols, column-concatenated with its conjugate. T = 2N.
// Supported sizes: k in {2,4,8} with n = k; smaller relay counts reuse the
// next design up with the bottom rows deleted (row deletion removes
// constraints, so all structural conditions survive): k=3 uses the first 3
// rows of the order-4 design (n=4), k in {5,6,7} the order-8 design (n=8).
inline DistributedCode construct_rate_halving(std::size_t n, std::size_t k) {
    std::size_t order = 0;
    if (k == 2) order = 2;
    else if (k == 3 || k == 4) order = 4;
    else if (k >= 5 && k <= 8) order = 8;
    else throw std::invalid_argument("construct_rate_halving: unsupported relay count");
    if (n != order)
        throw std::invalid_argument("construct_rate_halving: n must equal the design order (" +
                                    std::to_string(order) + " for k=" + std::to_string(k) + ")");

    const RealOrthogonalDesign g = real_orthogonal_design(order);
    DistributedCode code(n, k, 2 * n);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t t = 0; t < n; ++t) {
            const auto [sym, sign] = g.at(r, t);
            const MonoCoeff c = sign > 0 ? MonoCoeff::PlusOne : MonoCoeff::MinusOne;
            code.relays[r].a(static_cast<std::size_t>(sym - 1), t) = c;
            code.relays[r].b(static_cast<std::size_t>(sym - 1), n + t) = c;
        }
    }
    return code;
}

// No-CSI code meeting the ceil(NK/2) slot bound for even N and even K.
// Relays are paired; pair p owns a dedicated block of N slots. The first
// relay of the pair forwards the symbols unchanged (A = I on the block), the
// second forwards conjugates through the antisymmetric permutation J =
// blockdiag([[0,1],[-1,0]], ...), which keeps every cross condition zero.
// T = N K / 2, rate 2/K.
inline DistributedCode construct_paired(std::size_t n, std::size_t k) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("construct_paired: n must be even");
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("construct_paired: k must be even");
    const std::size_t t_total = n * k / 2;
    DistributedCode code(n, k, t_total);
    for (std::size_t p = 0; p < k / 2; ++p) {
        const std::size_t base = p * n;
        AssociatedPair& first = code.relays[2 * p];
        AssociatedPair& second = code.relays[2 * p + 1];
        for (std::size_t i = 0; i < n; ++i) first.a(i, base + i) = MonoCoeff::PlusOne;
        for (std::size_t i = 0; i + 1 < n; i += 2) {
            second.b(i, base + i + 1) = MonoCoeff::PlusOne;
            second.b(i + 1, base + i) = MonoCoeff::MinusOne;
        }
    }
    return code;
}

}  // namespace dstbc
