#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "dstbc/gaussian.hpp"

namespace dstbc {

// One symbolic entry of an associated matrix: an element of {0, +1, -1, +j, -j}.
// Closed under negation, conjugation and multiplication (product of two
// non-zero values is again one of the four units).
enum class MonoCoeff : std::uint8_t { Zero = 0, PlusOne, MinusOne, PlusJ, MinusJ };

constexpr GaussInt to_gauss(MonoCoeff c) {
    switch (c) {
        case MonoCoeff::Zero: return {0, 0};
        case MonoCoeff::PlusOne: return {1, 0};
        case MonoCoeff::MinusOne: return {-1, 0};
        case MonoCoeff::PlusJ: return {0, 1};
        case MonoCoeff::MinusJ: return {0, -1};
    }
    return {0, 0};
}

constexpr MonoCoeff mono_from_gauss(GaussInt z) {
    if (z == GaussInt{0, 0}) return MonoCoeff::Zero;
    if (z == GaussInt{1, 0}) return MonoCoeff::PlusOne;
    if (z == GaussInt{-1, 0}) return MonoCoeff::MinusOne;
    if (z == GaussInt{0, 1}) return MonoCoeff::PlusJ;
    if (z == GaussInt{0, -1}) return MonoCoeff::MinusJ;
    throw std::invalid_argument("mono_from_gauss: not a unit or zero");
}

constexpr bool is_zero(MonoCoeff c) { return c == MonoCoeff::Zero; }

constexpr MonoCoeff negate(MonoCoeff c) { return mono_from_gauss(-to_gauss(c)); }
constexpr MonoCoeff conjugate(MonoCoeff c) { return mono_from_gauss(to_gauss(c).conj()); }
constexpr MonoCoeff mul(MonoCoeff a, MonoCoeff b) { return mono_from_gauss(to_gauss(a) * to_gauss(b)); }

// Token forms used by the code-file format.
inline std::string mono_token(MonoCoeff c) {
    switch (c) {
        case MonoCoeff::Zero: return "0";
        case MonoCoeff::PlusOne: return "1";
        case MonoCoeff::MinusOne: return "-1";
        case MonoCoeff::PlusJ: return "j";
        case MonoCoeff::MinusJ: return "-j";
    }
    return "0";
}

inline MonoCoeff mono_parse_token(const std::string& tok) {
    if (tok == "0") return MonoCoeff::Zero;
    if (tok == "1") return MonoCoeff::PlusOne;
    if (tok == "-1") return MonoCoeff::MinusOne;
    if (tok == "j") return MonoCoeff::PlusJ;
    if (tok == "-j") return MonoCoeff::MinusJ;
    throw std::invalid_argument("unknown entry token: '" + tok + "'");
}

constexpr std::array<MonoCoeff, 5> kAllMonoCoeffs = {MonoCoeff::Zero, MonoCoeff::PlusOne,
                                                     MonoCoeff::MinusOne, MonoCoeff::PlusJ,
                                                     MonoCoeff::MinusJ};

// The four units, indexed 0..3. Used by the search enumeration.
constexpr std::array<MonoCoeff, 4> kUnitMonoCoeffs = {MonoCoeff::PlusOne, MonoCoeff::MinusOne,
                                                      MonoCoeff::PlusJ, MonoCoeff::MinusJ};

}  // namespace dstbc
