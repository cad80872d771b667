#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dstbc/bounds.hpp"
#include "dstbc/code.hpp"
#include "dstbc/verify.hpp"

namespace dstbc {

enum class SpaceStructure { RowMonomialCpi, ColumnMonomialDostbc };

inline std::string space_structure_name(SpaceStructure s) {
    return s == SpaceStructure::RowMonomialCpi ? "row_monomial_cpi" : "column_monomial_dostbc";
}

// Finite candidate space for the exhaustive search. In the row-monomial
// space every row of every associated matrix picks one slot (or none) and a
// unit coefficient: (4T+1)^(2KN) raw candidates. The column-monomial space
// is parametrized per column instead: (4N+1)^(2KT).
struct SearchSpace {
    std::size_t n = 1;
    std::size_t k = 1;
    std::size_t t = 1;
    SpaceStructure structure = SpaceStructure::RowMonomialCpi;
    bool canonicalize = false;
    std::uint64_t budget = 1000000000ull;
};

// Saturating raw candidate count.
inline std::uint64_t raw_count(const SearchSpace& s) {
    const std::uint64_t base = s.structure == SpaceStructure::RowMonomialCpi ? 4 * s.t + 1
                                                                             : 4 * s.n + 1;
    const std::uint64_t digits = s.structure == SpaceStructure::RowMonomialCpi ? 2 * s.k * s.n
                                                                               : 2 * s.k * s.t;
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < digits; ++i) {
        acc *= base;
        if (acc > static_cast<unsigned __int128>(UINT64_MAX)) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(acc);
}

enum class EnumStatus { Completed, StoppedBySink, BudgetExceeded };

struct EnumStats {
    EnumStatus status = EnumStatus::Completed;
    std::uint64_t raw = 0;      // raw candidates visited
    std::uint64_t yielded = 0;  // candidates passed to the sink
};

namespace detail {

// Applies one digit vector to the (reused) code object. Row-monomial layout:
// digit per (relay, matrix, row) selecting slot and coefficient.
inline void decode_row_monomial(const std::vector<std::uint32_t>& digits, DistributedCode& code) {
    const std::size_t nn = code.n_symbols, tt = code.n_slots;
    std::size_t d = 0;
    for (std::size_t k = 0; k < code.n_relays; ++k) {
        for (int m = 0; m < 2; ++m) {
            MonoGrid& g = m == 0 ? code.relays[k].a : code.relays[k].b;
            for (std::size_t n = 0; n < nn; ++n) {
                for (std::size_t t = 0; t < tt; ++t) g(n, t) = MonoCoeff::Zero;
                const std::uint32_t v = digits[d++];
                if (v != 0) g(n, (v - 1) / 4) = kUnitMonoCoeffs[(v - 1) % 4];
            }
        }
    }
}

inline void decode_column_monomial(const std::vector<std::uint32_t>& digits, DistributedCode& code) {
    const std::size_t nn = code.n_symbols, tt = code.n_slots;
    std::size_t d = 0;
    for (std::size_t k = 0; k < code.n_relays; ++k) {
        for (int m = 0; m < 2; ++m) {
            MonoGrid& g = m == 0 ? code.relays[k].a : code.relays[k].b;
            for (std::size_t t = 0; t < tt; ++t) {
                for (std::size_t n = 0; n < nn; ++n) g(n, t) = MonoCoeff::Zero;
                const std::uint32_t v = digits[d++];
                if (v != 0) g((v - 1) / 4, t) = kUnitMonoCoeffs[(v - 1) % 4];
            }
        }
    }
}

// A candidate whose every symbol row vanishes in all relays can never carry
// that symbol; such candidates are pruned before the sink sees them.
inline bool has_all_zero_symbol(const DistributedCode& code) {
    for (std::size_t n = 0; n < code.n_symbols; ++n) {
        bool used = false;
        for (std::size_t k = 0; k < code.n_relays && !used; ++k)
            for (std::size_t t = 0; t < code.n_slots; ++t)
                if (!is_zero(code.relays[k].a(n, t)) || !is_zero(code.relays[k].b(n, t))) {
                    used = true;
                    break;
                }
        if (!used) return true;
    }
    return false;
}

inline std::vector<std::uint8_t> code_key(const DistributedCode& code) {
    std::vector<std::uint8_t> key;
    key.reserve(2 * code.n_relays * code.n_symbols * code.n_slots);
    for (const auto& p : code.relays) {
        for (std::size_t n = 0; n < code.n_symbols; ++n)
            for (std::size_t t = 0; t < code.n_slots; ++t)
                key.push_back(static_cast<std::uint8_t>(p.a(n, t)));
        for (std::size_t n = 0; n < code.n_symbols; ++n)
            for (std::size_t t = 0; t < code.n_slots; ++t)
                key.push_back(static_cast<std::uint8_t>(p.b(n, t)));
    }
    return key;
}

// True iff `code` is the lexicographically smallest member of its orbit
// under column permutations combined with per-symbol unit rotations
// (s_n -> u s_n maps row n of A by u and row n of B by u*).
inline bool is_canonical(const DistributedCode& code) {
    const auto ref = code_key(code);
    std::vector<std::size_t> perm(code.n_slots);
    std::iota(perm.begin(), perm.end(), 0);
    DistributedCode tmp(code.n_symbols, code.n_relays, code.n_slots);
    std::vector<std::size_t> rot(code.n_symbols, 0);
    do {
        std::fill(rot.begin(), rot.end(), 0);
        while (true) {
            for (std::size_t k = 0; k < code.n_relays; ++k)
                for (std::size_t n = 0; n < code.n_symbols; ++n) {
                    const MonoCoeff u = rot[n] == 0 ? MonoCoeff::PlusOne : kUnitMonoCoeffs[rot[n]];
                    for (std::size_t t = 0; t < code.n_slots; ++t) {
                        tmp.relays[k].a(n, perm[t]) = mul(u, code.relays[k].a(n, t));
                        tmp.relays[k].b(n, perm[t]) = mul(conjugate(u), code.relays[k].b(n, t));
                    }
                }
            if (code_key(tmp) < ref) return false;
            // odometer over per-symbol rotations
            std::size_t pos = 0;
            while (pos < rot.size() && ++rot[pos] == 4) rot[pos++] = 0;
            if (pos == rot.size()) break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
}

}  // namespace detail

// Enumerates every structurally valid candidate in deterministic order. The
// sink receives a reference to a reused object; it must copy the code if it
// wants to keep it. Returning false from the sink stops the enumeration.
inline EnumStats enumerate_codes(const SearchSpace& space,
                                 const std::function<bool(const DistributedCode&)>& sink,
                                 const std::function<void(std::uint64_t)>& progress = nullptr) {
    EnumStats stats;
    const std::uint64_t total = raw_count(space);
    if (total > space.budget) {
        stats.status = EnumStatus::BudgetExceeded;
        stats.raw = total;
        return stats;
    }

    const bool row_space = space.structure == SpaceStructure::RowMonomialCpi;
    const std::uint32_t base = static_cast<std::uint32_t>(row_space ? 4 * space.t + 1 : 4 * space.n + 1);
    const std::size_t n_digits = row_space ? 2 * space.k * space.n : 2 * space.k * space.t;

    std::vector<std::uint32_t> digits(n_digits, 0);
    DistributedCode code(space.n, space.k, space.t);

    while (true) {
        ++stats.raw;
        if (progress && stats.raw % 1000000 == 0) progress(stats.raw);
        if (row_space)
            detail::decode_row_monomial(digits, code);
        else
            detail::decode_column_monomial(digits, code);
        if (!detail::has_all_zero_symbol(code) &&
            (!space.canonicalize || detail::is_canonical(code))) {
            ++stats.yielded;
            if (!sink(code)) {
                stats.status = EnumStatus::StoppedBySink;
                return stats;
            }
        }
        // odometer, last digit fastest
        std::size_t pos = n_digits;
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++digits[pos] < base) {
                done = false;
                break;
            }
            digits[pos] = 0;
        }
        if (done) break;
    }
    return stats;
}

enum class SearchVerdict { Found, ExhaustedNone, BudgetExceeded };

struct SearchOutcome {
    SearchVerdict verdict = SearchVerdict::ExhaustedNone;
    std::uint64_t raw_count = 0;
    std::uint64_t enumerated = 0;
    std::optional<DistributedCode> witness;
};

// Exhaustive existence check. A Found verdict carries a witness verified by
// the full definitional check of the requested structure; ExhaustedNone
// means no candidate in the space passes.
inline SearchOutcome exists_code(const SearchSpace& space,
                                 const std::function<void(std::uint64_t)>& progress = nullptr) {
    SearchOutcome out;
    out.raw_count = raw_count(space);
    if (out.raw_count > space.budget) {
        out.verdict = SearchVerdict::BudgetExceeded;
        return out;
    }
    const bool cpi = space.structure == SpaceStructure::RowMonomialCpi;
    const auto stats = enumerate_codes(
        space,
        [&](const DistributedCode& code) {
            bool pass = false;
            if (cpi) {
                pass = check_cpi_exact(code) && check_definition2(code, 8, 1e-9).report.pass;
            } else {
                pass = check_theorem1(code).report.pass;
            }
            if (pass) {
                out.witness = code;  // copy
                return false;
            }
            return true;
        },
        progress);
    out.enumerated = stats.yielded;
    out.verdict = out.witness ? SearchVerdict::Found : SearchVerdict::ExhaustedNone;
    return out;
}

struct MaxRateOutcome {
    bool found = false;
    Rational best_rate;           // N / minimal_t when found
    std::size_t minimal_t = 0;
    std::optional<DistributedCode> witness;
    std::vector<SearchOutcome> per_t;  // outcomes for T = 1, 2, ... up to the stop point
};

// Sweeps T upward for fixed (N, K) and reports the smallest slot count that
// admits a valid code (existence is monotone in T: a valid code stays valid
// with a zero column appended).
inline MaxRateOutcome max_rate(std::size_t n, std::size_t k, std::size_t t_max,
                               SpaceStructure structure, std::uint64_t budget = 1000000000ull,
                               const std::function<void(std::uint64_t)>& progress = nullptr) {
    MaxRateOutcome out;
    for (std::size_t t = 1; t <= t_max; ++t) {
        SearchSpace space{n, k, t, structure, false, budget};
        SearchOutcome res = exists_code(space, progress);
        const bool found = res.verdict == SearchVerdict::Found;
        if (found) {
            out.found = true;
            out.best_rate = Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(t));
            out.minimal_t = t;
            out.witness = res.witness;
        }
        out.per_t.push_back(std::move(res));
        if (found) break;
    }
    return out;
}

struct NamedSearchSpace {
    std::string name;
    SearchSpace space;
};

// Small spaces bundled with the CLI; every one is exhaustively searchable
// well inside the raw budget, and no witness from these may ever beat the
// rate bounds.
inline std::vector<NamedSearchSpace> shipped_search_presets() {
    using S = SpaceStructure;
    return {
        {"cpi-n1k1t1", {1, 1, 1, S::RowMonomialCpi, false, 1000000}},
        {"cpi-n1k1t2", {1, 1, 2, S::RowMonomialCpi, false, 1000000}},
        {"cpi-n1k2t1", {1, 2, 1, S::RowMonomialCpi, false, 1000000}},
        {"cpi-n1k2t2", {1, 2, 2, S::RowMonomialCpi, false, 1000000}},
        {"cpi-n1k3t1", {1, 3, 1, S::RowMonomialCpi, false, 1000000}},
        {"cpi-n1k3t2", {1, 3, 2, S::RowMonomialCpi, false, 1000000}},
        {"cpi-n2k1t2", {2, 1, 2, S::RowMonomialCpi, false, 1000000}},
        {"dostbc-n1k1t1", {1, 1, 1, S::ColumnMonomialDostbc, false, 1000000}},
        {"dostbc-n1k2t1", {1, 2, 1, S::ColumnMonomialDostbc, false, 1000000}},
        {"dostbc-n1k2t2", {1, 2, 2, S::ColumnMonomialDostbc, false, 1000000}},
        {"dostbc-n1k3t1", {1, 3, 1, S::ColumnMonomialDostbc, false, 1000000}},
    };
}

}  // namespace dstbc
