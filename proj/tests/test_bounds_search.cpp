#include <catch2/catch.hpp>

#include <algorithm>
#include <set>

#include "dstbc/bounds.hpp"
#include "dstbc/code_io.hpp"
#include "dstbc/constructions.hpp"
#include "dstbc/rng.hpp"
#include "dstbc/search.hpp"

using namespace dstbc;

TEST_CASE("no-CSI rate bound values") {
    REQUIRE(dostbc_rate_bound(4, 4) == Rational(1, 2));
    REQUIRE(dostbc_rate_bound(8, 6) == Rational(1, 3));
    REQUIRE(dostbc_rate_bound(1, 1) == Rational(1));
    REQUIRE(dostbc_rate_bound(3, 3) == Rational(3, 5));
    REQUIRE_THROWS_AS(dostbc_rate_bound(0, 1), std::invalid_argument);
}

TEST_CASE("CPI rate bound values") {
    REQUIRE(cpi_rate_bound(1) == Rational(1));
    REQUIRE(cpi_rate_bound(2) == Rational(1));
    REQUIRE(cpi_rate_bound(4) == Rational(1, 2));
    REQUIRE(cpi_rate_bound(100) == Rational(1, 2));
    REQUIRE(god_rate_bound() == Rational(4, 5));
}

TEST_CASE("rate reports") {
    const auto rr = rate_report_cpi(construct_rate_halving(4, 4));
    REQUIRE(rr.rate == Rational(1, 2));
    REQUIRE(rr.bound == Rational(1, 2));
    REQUIRE(rr.achieves_bound);
    REQUIRE(rr.rate <= rr.bound);

    const auto rd = rate_report_dostbc(construct_paired(8, 6));
    REQUIRE(rd.rate == Rational(1, 3));
    REQUIRE(rd.bound == Rational(1, 3));
    REQUIRE(rd.achieves_bound);
}

namespace {

// Alamouti on relays 1-2 / slots 1-2 pasted with a single-symbol forward on
// relay 3 / slot 3.
DistributedCode paste_code() {
    DistributedCode code(2, 3, 3);
    code.relays[0].a(0, 0) = MonoCoeff::PlusOne;
    code.relays[0].a(1, 1) = MonoCoeff::PlusOne;
    code.relays[1].b(0, 1) = MonoCoeff::PlusOne;
    code.relays[1].b(1, 0) = MonoCoeff::MinusOne;
    code.relays[2].a(0, 2) = MonoCoeff::PlusOne;
    return code;
}

}  // namespace

TEST_CASE("column partition") {
    SECTION("conjugate-block code forms a single group") {
        const auto pr = partition(construct_rate_halving(4, 4));
        REQUIRE(pr.width() == 1);
        REQUIRE(pr.blocks[0].columns.size() == 8);
        REQUIRE(pr.blocks[0].relays.size() == 4);
        REQUIRE(pr.blocks[0].symbols.size() == 4);
    }
    SECTION("repetition splits into singleton groups") {
        const auto pr = partition(construct_repetition(3));
        REQUIRE(pr.width() == 3);
        for (const auto& b : pr.blocks) {
            REQUIRE(b.columns.size() == 1);
            REQUIRE(b.relays.size() == 1);
            REQUIRE(b.sub_code.n_symbols == 1);
            REQUIRE(b.sub_code.n_slots == 1);
        }
    }
    SECTION("pasted code splits by coefficient vector") {
        const auto pr = partition(paste_code());
        REQUIRE(pr.width() == 2);
        std::set<std::size_t> sizes;
        for (const auto& b : pr.blocks) sizes.insert(b.relays.size());
        REQUIRE(sizes == std::set<std::size_t>{1, 2});
    }
    SECTION("non-diagonal covariance is rejected") {
        DistributedCode code(1, 1, 2);
        code.relays[0].a(0, 0) = MonoCoeff::PlusOne;
        code.relays[0].a(0, 1) = MonoCoeff::PlusOne;
        REQUIRE_THROWS_AS(partition(code), std::invalid_argument);
    }
}

TEST_CASE("per-block rate verdicts") {
    SECTION("single full-width block of more than two rows pins rate 1/2") {
        const auto pr = partition(construct_rate_halving(4, 4));
        const auto verdicts = block_rate_check(pr);
        REQUIRE(verdicts.size() == 1);
        REQUIRE(verdicts[0].k_w == 4);
        REQUIRE(verdicts[0].rate == Rational(1, 2));
        REQUIRE(verdicts[0].sub_code_valid);
        REQUIRE(verdicts[0].rate_ok);
    }
    SECTION("two-row block may reach rate one") {
        const auto pr = partition(construct_alamouti());
        const auto verdicts = block_rate_check(pr);
        REQUIRE(verdicts.size() == 1);
        REQUIRE(verdicts[0].k_w == 2);
        REQUIRE(verdicts[0].rate == Rational(1));
        REQUIRE(verdicts[0].rate_ok);
    }
    SECTION("single-row blocks are unconstrained") {
        const auto verdicts = block_rate_check(partition(construct_repetition(3)));
        REQUIRE(verdicts.size() == 3);
        for (const auto& v : verdicts) {
            REQUIRE(v.k_w == 1);
            REQUIRE(v.rate == Rational(1));
            REQUIRE(v.rate_ok);
            REQUIRE(v.sub_code_valid);
        }
    }
}

TEST_CASE("partition is stable under column permutation") {
    SplitMix rng(5150);
    auto signature_multiset = [](const PartitionResult& pr) {
        std::vector<std::tuple<std::vector<std::int64_t>, std::size_t, std::vector<std::size_t>>>
            sigs;
        for (const auto& b : pr.blocks)
            sigs.emplace_back(b.signature, b.columns.size(), b.relays);
        std::sort(sigs.begin(), sigs.end());
        return sigs;
    };
    for (const auto& base :
         {construct_rate_halving(4, 4), construct_repetition(3), paste_code()}) {
        const auto before = signature_multiset(partition(base));
        for (int rep = 0; rep < 5; ++rep) {
            // random column permutation
            std::vector<std::size_t> perm(base.n_slots);
            for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
            for (std::size_t i = perm.size(); i > 1; --i)
                std::swap(perm[i - 1], perm[rng.next_u64() % i]);
            DistributedCode shuffled = base;
            for (std::size_t k = 0; k < base.n_relays; ++k)
                for (std::size_t n = 0; n < base.n_symbols; ++n)
                    for (std::size_t t = 0; t < base.n_slots; ++t) {
                        shuffled.relays[k].a(n, perm[t]) = base.relays[k].a(n, t);
                        shuffled.relays[k].b(n, perm[t]) = base.relays[k].b(n, t);
                    }
            REQUIRE(signature_multiset(partition(shuffled)) == before);
        }
    }
}

TEST_CASE("blocks jointly cover all columns and at least all symbols") {
    for (const auto& code :
         {construct_rate_halving(4, 4), construct_repetition(4), paste_code()}) {
        const auto pr = partition(code);
        std::size_t total_syms = 0, total_cols = 0;
        std::set<std::size_t> seen_cols;
        for (const auto& b : pr.blocks) {
            total_syms += b.symbols.size();
            total_cols += b.columns.size();
            for (auto c : b.columns) seen_cols.insert(c);
        }
        REQUIRE(total_syms >= code.n_symbols);
        REQUIRE(total_cols == code.n_slots);
        REQUIRE(seen_cols.size() == code.n_slots);
    }
}

// ---------------------------------------------------------------------------
// Exhaustive search
// ---------------------------------------------------------------------------

TEST_CASE("raw candidate counts") {
    REQUIRE(raw_count({1, 1, 1, SpaceStructure::RowMonomialCpi}) == 25);
    REQUIRE(raw_count({1, 2, 1, SpaceStructure::RowMonomialCpi}) == 625);
    REQUIRE(raw_count({1, 2, 2, SpaceStructure::RowMonomialCpi}) == 6561);
    REQUIRE(raw_count({1, 3, 1, SpaceStructure::RowMonomialCpi}) == 15625);
    REQUIRE(raw_count({1, 2, 1, SpaceStructure::ColumnMonomialDostbc}) == 625);
}

TEST_CASE("enumeration yields all non-degenerate candidates") {
    SECTION("single cell space") {
        std::uint64_t seen = 0;
        const auto stats = enumerate_codes({1, 1, 1, SpaceStructure::RowMonomialCpi},
                                           [&](const DistributedCode&) {
                                               ++seen;
                                               return true;
                                           });
        REQUIRE(stats.status == EnumStatus::Completed);
        REQUIRE(stats.raw == 25);
        REQUIRE(stats.yielded == 24);  // all-zero pair pruned
        REQUIRE(seen == 24);
    }
    SECTION("two relays") {
        const auto stats = enumerate_codes({1, 2, 1, SpaceStructure::RowMonomialCpi},
                                           [](const DistributedCode&) { return true; });
        REQUIRE(stats.raw == 625);
        REQUIRE(stats.yielded == 624);
    }
    SECTION("budget enforcement") {
        SearchSpace space{2, 2, 2, SpaceStructure::RowMonomialCpi};
        space.budget = 100;
        const auto stats =
            enumerate_codes(space, [](const DistributedCode&) { return true; });
        REQUIRE(stats.status == EnumStatus::BudgetExceeded);
        REQUIRE(stats.yielded == 0);
    }
}

TEST_CASE("existence verdicts at desk scale") {
    SECTION("two relays cannot share a single slot (CPI)") {
        const auto out = exists_code({1, 2, 1, SpaceStructure::RowMonomialCpi});
        REQUIRE(out.verdict == SearchVerdict::ExhaustedNone);
        REQUIRE(out.raw_count == 625);
    }
    SECTION("three relays cannot share a single slot (CPI)") {
        const auto out = exists_code({1, 3, 1, SpaceStructure::RowMonomialCpi});
        REQUIRE(out.verdict == SearchVerdict::ExhaustedNone);
    }
    SECTION("two relays, two slots: witness exists (CPI)") {
        const auto out = exists_code({1, 2, 2, SpaceStructure::RowMonomialCpi});
        REQUIRE(out.verdict == SearchVerdict::Found);
        REQUIRE(out.witness.has_value());
        REQUIRE(check_definition2(*out.witness, 20, 1e-9).report.pass);
        REQUIRE(out.witness->data_rate() <= cpi_rate_bound(2));
    }
    SECTION("two relays cannot share a single slot (no-CSI)") {
        const auto out = exists_code({1, 2, 1, SpaceStructure::ColumnMonomialDostbc});
        REQUIRE(out.verdict == SearchVerdict::ExhaustedNone);
    }
    SECTION("single relay, single slot: witness exists (both structures)") {
        REQUIRE(exists_code({1, 1, 1, SpaceStructure::RowMonomialCpi}).verdict ==
                SearchVerdict::Found);
        REQUIRE(exists_code({1, 1, 1, SpaceStructure::ColumnMonomialDostbc}).verdict ==
                SearchVerdict::Found);
    }
}

TEST_CASE("existence is monotone in the slot count") {
    for (std::size_t t = 2; t <= 3; ++t) {
        const auto out = exists_code({1, 2, t, SpaceStructure::RowMonomialCpi});
        REQUIRE(out.verdict == SearchVerdict::Found);
    }
    // direct argument: a zero column appended to a witness stays valid
    const auto base = exists_code({1, 2, 2, SpaceStructure::RowMonomialCpi});
    REQUIRE(base.witness.has_value());
    DistributedCode padded(1, 2, 3);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t t = 0; t < 2; ++t) {
            padded.relays[k].a(0, t) = base.witness->relays[k].a(0, t);
            padded.relays[k].b(0, t) = base.witness->relays[k].b(0, t);
        }
    REQUIRE(check_definition2(padded, 10, 1e-9).report.pass);
}

TEST_CASE("minimal slot sweeps") {
    SECTION("one symbol, two relays") {
        const auto out = max_rate(1, 2, 2, SpaceStructure::RowMonomialCpi);
        REQUIRE(out.found);
        REQUIRE(out.minimal_t == 2);
        REQUIRE(out.best_rate == Rational(1, 2));
        REQUIRE(out.per_t.size() == 2);
        REQUIRE(out.per_t[0].verdict == SearchVerdict::ExhaustedNone);
    }
    SECTION("two symbols, two relays: a rate-one pattern is rediscovered") {
        const auto out = max_rate(2, 2, 2, SpaceStructure::RowMonomialCpi);
        REQUIRE(out.found);
        REQUIRE(out.minimal_t == 2);
        REQUIRE(out.best_rate == Rational(1));
        REQUIRE(out.witness.has_value());
        REQUIRE(check_definition2(*out.witness, 20, 1e-9).report.pass);
        REQUIRE(out.witness->data_rate() == Rational(1));
    }
}

TEST_CASE("canonical and raw enumeration agree on existence") {
    const std::vector<SearchSpace> spaces = {
        {1, 1, 1, SpaceStructure::RowMonomialCpi},
        {1, 1, 2, SpaceStructure::RowMonomialCpi},
        {1, 2, 1, SpaceStructure::RowMonomialCpi},
        {1, 2, 2, SpaceStructure::RowMonomialCpi},
        {1, 2, 1, SpaceStructure::ColumnMonomialDostbc},
        {1, 2, 2, SpaceStructure::ColumnMonomialDostbc},
    };
    for (SearchSpace s : spaces) {
        s.canonicalize = false;
        const auto raw = exists_code(s);
        s.canonicalize = true;
        const auto canon = exists_code(s);
        REQUIRE(raw.verdict == canon.verdict);
    }
}

TEST_CASE("canonicalization strictly reduces the stream") {
    SearchSpace raw{1, 2, 2, SpaceStructure::RowMonomialCpi, false};
    SearchSpace canon{1, 2, 2, SpaceStructure::RowMonomialCpi, true};
    std::uint64_t raw_n = 0, canon_n = 0;
    enumerate_codes(raw, [&](const DistributedCode&) {
        ++raw_n;
        return true;
    });
    enumerate_codes(canon, [&](const DistributedCode&) {
        ++canon_n;
        return true;
    });
    REQUIRE(raw_n == 6560);
    REQUIRE(canon_n < raw_n);
    REQUIRE(canon_n > 0);
}

TEST_CASE("no preset witness beats the rate bounds") {
    for (const auto& preset : shipped_search_presets()) {
        const auto out = exists_code(preset.space);
        REQUIRE(out.verdict != SearchVerdict::BudgetExceeded);
        if (out.verdict == SearchVerdict::Found) {
            const auto& w = *out.witness;
            if (preset.space.structure == SpaceStructure::RowMonomialCpi) {
                REQUIRE(w.data_rate() <= cpi_rate_bound(w.n_relays));
            } else {
                REQUIRE(w.data_rate() <= dostbc_rate_bound(w.n_symbols, w.n_relays));
            }
        }
    }
}
