#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dstbc/code.hpp"
#include "dstbc/rational.hpp"
#include "dstbc/verify.hpp"

namespace dstbc {

// Slot-count bound for no-CSI codes: N / ceil(NK/2).
inline Rational dostbc_rate_bound(std::size_t n, std::size_t k) {
    if (n < 1 || k < 1) throw std::invalid_argument("dostbc_rate_bound: n, k must be >= 1");
    const std::int64_t nn = static_cast<std::int64_t>(n);
    const std::int64_t kk = static_cast<std::int64_t>(k);
    return Rational(nn, (nn * kk + 1) / 2);
}

// Rate bound for row-monomial CPI codes: 1 for up to two relays (met by the
// Alamouti pattern), 1/2 for any larger relay count.
inline Rational cpi_rate_bound(std::size_t k) {
    if (k < 1) throw std::invalid_argument("cpi_rate_bound: k must be >= 1");
    return k <= 2 ? Rational(1) : Rational(1, 2);
}

// Classical generalized-orthogonal-design bound; informational only (the
// CPI bound above is tighter for every K > 2).
inline Rational god_rate_bound() { return Rational(4, 5); }

enum class BoundSource { DostbcCeilHalf, CpiHalf, CpiPairRateOne, GodFourFifths };

inline std::string bound_source_name(BoundSource s) {
    switch (s) {
        case BoundSource::DostbcCeilHalf: return "dostbc-ceil-half";
        case BoundSource::CpiHalf: return "cpi-half";
        case BoundSource::CpiPairRateOne: return "cpi-pair-rate-one";
        case BoundSource::GodFourFifths: return "god-4/5";
    }
    return "";
}

struct RateReport {
    Rational rate;
    Rational bound;
    bool achieves_bound = false;
    BoundSource bound_source = BoundSource::CpiHalf;
};

inline RateReport rate_report_dostbc(const DistributedCode& code) {
    RateReport r;
    r.rate = code.data_rate();
    r.bound = dostbc_rate_bound(code.n_symbols, code.n_relays);
    r.achieves_bound = (r.rate == r.bound);
    r.bound_source = BoundSource::DostbcCeilHalf;
    return r;
}

inline RateReport rate_report_cpi(const DistributedCode& code) {
    RateReport r;
    r.rate = code.data_rate();
    r.bound = cpi_rate_bound(code.n_relays);
    r.achieves_bound = (r.rate == r.bound);
    r.bound_source =
        code.n_relays <= 2 ? BoundSource::CpiPairRateOne : BoundSource::CpiHalf;
    return r;
}

// ---------------------------------------------------------------------------
// Column partition by covariance signature
// ---------------------------------------------------------------------------

struct PartitionBlock {
    std::vector<std::size_t> columns;         // 0-based slot indices
    std::vector<std::size_t> relays;          // 0-based non-zero rows
    std::vector<std::size_t> symbols;         // 0-based symbols appearing
    std::vector<std::int64_t> signature;      // per-relay Gram diagonal value
    DistributedCode sub_code;                 // valid when relays is non-empty
};

struct PartitionResult {
    std::vector<PartitionBlock> blocks;

    std::size_t width() const { return blocks.size(); }
};

// Groups the columns of the code matrix so that two columns share a group
// exactly when their per-relay Gram contributions coincide, i.e. when their
// covariance diagonal entries are equal for every channel realization. The
// code must have a generically diagonal covariance: every relay Gram
// A_k^H A_k + B_k^H B_k has to be diagonal, which is checked exactly.
inline PartitionResult partition(const DistributedCode& code) {
    code.validate();
    const std::size_t kk = code.n_relays, nn = code.n_symbols, tt = code.n_slots;

    std::vector<GaussMatrix> grams(kk);
    for (std::size_t k = 0; k < kk; ++k) {
        grams[k] = relay_gram(code, k);
        if (!grams[k].is_diagonal())
            throw std::invalid_argument(
                "partition: covariance is not diagonal for generic channels (relay " +
                std::to_string(k + 1) + ")");
    }

    PartitionResult out;
    for (std::size_t t = 0; t < tt; ++t) {
        std::vector<std::int64_t> sig(kk);
        for (std::size_t k = 0; k < kk; ++k) sig[k] = grams[k](t, t).re;
        PartitionBlock* blk = nullptr;
        for (auto& b : out.blocks)
            if (b.signature == sig) {
                blk = &b;
                break;
            }
        if (!blk) {
            out.blocks.emplace_back();
            blk = &out.blocks.back();
            blk->signature = sig;
        }
        blk->columns.push_back(t);
    }

    for (auto& b : out.blocks) {
        std::vector<bool> relay_used(kk, false), symbol_used(nn, false);
        for (std::size_t t : b.columns)
            for (std::size_t k = 0; k < kk; ++k)
                for (std::size_t n = 0; n < nn; ++n) {
                    const bool hit = !is_zero(code.relays[k].a(n, t)) ||
                                     !is_zero(code.relays[k].b(n, t));
                    if (hit) {
                        relay_used[k] = true;
                        symbol_used[n] = true;
                    }
                }
        for (std::size_t k = 0; k < kk; ++k)
            if (relay_used[k]) b.relays.push_back(k);
        for (std::size_t n = 0; n < nn; ++n)
            if (symbol_used[n]) b.symbols.push_back(n);

        if (!b.relays.empty()) {
            DistributedCode sub(b.symbols.size(), b.relays.size(), b.columns.size());
            for (std::size_t rk = 0; rk < b.relays.size(); ++rk)
                for (std::size_t rn = 0; rn < b.symbols.size(); ++rn)
                    for (std::size_t rt = 0; rt < b.columns.size(); ++rt) {
                        sub.relays[rk].a(rn, rt) = code.relays[b.relays[rk]].a(b.symbols[rn], b.columns[rt]);
                        sub.relays[rk].b(rn, rt) = code.relays[b.relays[rk]].b(b.symbols[rn], b.columns[rt]);
                    }
            b.sub_code = sub;
        }
    }
    return out;
}

struct BlockRateVerdict {
    std::size_t block_index = 0;
    std::size_t k_w = 0;
    Rational rate;
    bool sub_code_valid = false;  // sub-code passes the CPI definitional check
    bool rate_ok = false;         // K_w > 2 implies rate == 1/2; otherwise rate <= 1
    std::string note;
};

// Per-block rate analysis: each extracted sub-code must itself satisfy the
// CPI defining conditions, and its rate is pinned to exactly 1/2 whenever it
// has more than two non-zero rows.
inline std::vector<BlockRateVerdict> block_rate_check(const PartitionResult& pr,
                                                      std::size_t draws = 20, double tol = 1e-9) {
    std::vector<BlockRateVerdict> out;
    for (std::size_t i = 0; i < pr.blocks.size(); ++i) {
        const auto& b = pr.blocks[i];
        BlockRateVerdict v;
        v.block_index = i;
        v.k_w = b.relays.size();
        if (b.relays.empty()) {
            v.rate = Rational(0);
            v.sub_code_valid = true;
            v.rate_ok = true;
            v.note = "all-zero columns";
            out.push_back(v);
            continue;
        }
        v.rate = Rational(static_cast<std::int64_t>(b.symbols.size()),
                          static_cast<std::int64_t>(b.columns.size()));
        const auto check = check_definition2(b.sub_code, draws, tol);
        v.sub_code_valid = check.report.pass;
        if (!check.report.pass) v.note = "sub-code check failed: " + check.report.failed_condition;
        v.rate_ok = v.k_w > 2 ? (v.rate == Rational(1, 2)) : (v.rate <= Rational(1));
        out.push_back(v);
    }
    return out;
}

}  // namespace dstbc
