#include <catch2/catch.hpp>

#include <complex>
#include <set>

#include "dstbc/constellation.hpp"
#include "dstbc/constructions.hpp"
#include "dstbc/report_io.hpp"
#include "dstbc/sim.hpp"

using namespace dstbc;

namespace {

ChannelRealization random_channels(std::size_t k, SplitMix& rng) {
    ChannelRealization ch;
    ch.h.resize(k);
    ch.f.resize(k);
    for (auto& v : ch.h) v = rng.cn01();
    for (auto& v : ch.f) v = rng.cn01();
    return ch;
}

}  // namespace

TEST_CASE("power configuration") {
    const auto p = PowerConfig::from_powers(8.0, 2.0);
    REQUIRE(std::abs(p.rho * p.rho * (1.0 + p.es) - p.er) <= 1e-12 * p.er);

    const auto q = PowerConfig::from_snr_per_bit(10.0, 4, 4);
    REQUIRE(q.er == Approx(40.0));   // 10 dB -> 10, times 4 bits
    REQUIRE(q.es == Approx(160.0));  // K E_r allocation
    REQUIRE(std::abs(q.rho * q.rho * (1.0 + q.es) - q.er) <= 1e-12 * q.er);
}

TEST_CASE("constellations are unit energy and Gray mapped") {
    for (const auto& name : {"qpsk", "qam16", "qam64", "qam256"}) {
        const auto cst = Constellation::from_name(name);
        double e = 0.0;
        for (std::size_t i = 0; i < cst.size(); ++i) e += std::norm(cst.point(i));
        e /= static_cast<double>(cst.size());
        REQUIRE(e == Approx(1.0).epsilon(1e-12));
        // labels are a permutation of 0..M-1
        std::set<std::uint32_t> labels;
        for (std::size_t i = 0; i < cst.size(); ++i) labels.insert(cst.bits_of(i));
        REQUIRE(labels.size() == cst.size());
        REQUIRE(*labels.rbegin() == cst.size() - 1);
    }
    SECTION("qpsk points") {
        const auto cst = Constellation::qpsk();
        for (std::size_t i = 0; i < 4; ++i) {
            REQUIRE(std::abs(std::abs(cst.point(i).real()) - 1.0 / std::sqrt(2.0)) < 1e-12);
            REQUIRE(std::abs(std::abs(cst.point(i).imag()) - 1.0 / std::sqrt(2.0)) < 1e-12);
        }
    }
    SECTION("axis neighbors differ in one bit") {
        const auto cst = Constellation::qam16();
        // points are laid out in a 4x4 grid, row-major by construction
        for (int i = 0; i < 4; ++i)
            for (int q = 0; q < 4; ++q) {
                if (q + 1 < 4)
                    REQUIRE(Constellation::bit_errors(cst.bits_of(i * 4 + q),
                                                      cst.bits_of(i * 4 + q + 1)) == 1);
                if (i + 1 < 4)
                    REQUIRE(Constellation::bit_errors(cst.bits_of(i * 4 + q),
                                                      cst.bits_of((i + 1) * 4 + q)) == 1);
            }
    }
    REQUIRE_THROWS_AS(Constellation::from_name("qam32"), std::invalid_argument);
}

TEST_CASE("relay processing") {
    const auto code = construct_alamouti();
    const double rho = 0.7;
    SplitMix rng(3);
    const std::complex<double> h = rng.cn01();
    const std::vector<std::complex<double>> s = {{1.0, 0.5}, {-0.25, 2.0}};

    std::vector<std::complex<double>> y(2);
    for (int n = 0; n < 2; ++n) y[n] = h * s[n];  // noiseless

    SECTION("no CSI: channel phase stays in the forwarded signal") {
        const auto x = relay_process(code, 0, y, false, std::arg(h), rho);
        REQUIRE(std::abs(x[0] - rho * h * s[0]) < 1e-12);
        REQUIRE(std::abs(x[1] - rho * h * s[1]) < 1e-12);
    }
    SECTION("CPI: the rotation cancels the phase") {
        const auto x = relay_process(code, 0, y, true, std::arg(h), rho);
        REQUIRE(std::abs(x[0] - rho * std::abs(h) * s[0]) < 1e-12);
        REQUIRE(std::abs(x[1] - rho * std::abs(h) * s[1]) < 1e-12);
    }
    SECTION("conjugate branch") {
        const auto x = relay_process(code, 1, y, false, std::arg(h), rho);
        REQUIRE(std::abs(x[0] - (-rho * std::conj(h * s[1]))) < 1e-12);
        REQUIRE(std::abs(x[1] - rho * std::conj(h * s[0])) < 1e-12);
    }
    SECTION("zero in, zero out") {
        const std::vector<std::complex<double>> z(2, {0.0, 0.0});
        for (const auto& v : relay_process(code, 0, z, true, 0.3, rho))
            REQUIRE(std::abs(v) == 0.0);
    }
}

TEST_CASE("destination superposition") {
    const auto code = construct_repetition(2);
    const std::vector<std::vector<std::complex<double>>> x = {{{1.0, 0.0}, {0.0, 0.0}},
                                                              {{0.0, 0.0}, {0.0, 2.0}}};
    SECTION("single gain passthrough") {
        const auto y = destination_receive(code, x, {{1.0, 0.0}, {0.0, 0.0}},
                                           {{0.0, 0.0}, {0.0, 0.0}});
        REQUIRE(y[0] == x[0][0]);
        REQUIRE(y[1] == std::complex<double>{0.0, 0.0});
    }
    SECTION("all gains zero leaves pure noise") {
        const std::vector<std::complex<double>> noise = {{0.5, -0.5}, {1.5, 0.25}};
        const auto y = destination_receive(code, x, {{0.0, 0.0}, {0.0, 0.0}}, noise);
        REQUIRE(y == noise);
    }
    SECTION("disjoint slots concatenate") {
        const std::vector<std::complex<double>> f = {{2.0, 0.0}, {3.0, 0.0}};
        const auto y = destination_receive(code, x, f, {{0.0, 0.0}, {0.0, 0.0}});
        REQUIRE(y[0] == 2.0 * x[0][0]);
        REQUIRE(y[1] == 3.0 * x[1][1]);
    }
}

namespace {

// End-to-end noiseless pass through the chain; decoding must be exact.
void require_noiseless_recovery(const DistributedCode& code, bool cpi,
                                const Constellation& cst, std::uint64_t seed) {
    SplitMix rng(seed);
    const PowerConfig power = PowerConfig::from_snr_per_bit(12.0, cst.bits_per_symbol(),
                                                            code.n_relays);
    for (int rep = 0; rep < 25; ++rep) {
        auto ch = random_channels(code.n_relays, rng);
        std::vector<std::size_t> tx(code.n_symbols);
        std::vector<std::complex<double>> s(code.n_symbols);
        for (std::size_t n = 0; n < code.n_symbols; ++n) {
            tx[n] = rng.next_u64() % cst.size();
            s[n] = std::sqrt(power.es) * cst.point(tx[n]);
        }
        std::vector<std::vector<std::complex<double>>> x(code.n_relays);
        for (std::size_t k = 0; k < code.n_relays; ++k) {
            std::vector<std::complex<double>> yk(code.n_symbols);
            for (std::size_t n = 0; n < code.n_symbols; ++n) yk[n] = ch.h[k] * s[n];
            x[k] = relay_process(code, k, yk, cpi, ch.theta(k), power.rho);
        }
        const std::vector<std::complex<double>> zero_noise(code.n_slots, {0.0, 0.0});
        const auto y = destination_receive(code, x, ch.f, zero_noise);
        REQUIRE(ss_ml_decode(y, ch, code, power, cpi, cst) == tx);
    }
}

}  // namespace

TEST_CASE("noiseless decoding is exact") {
    require_noiseless_recovery(construct_alamouti(), true, Constellation::qpsk(), 101);
    require_noiseless_recovery(construct_rate_halving(4, 4), true, Constellation::qam16(), 102);
    require_noiseless_recovery(construct_paired(4, 4), false, Constellation::qpsk(), 103);
    require_noiseless_recovery(construct_repetition(3), false, Constellation::qpsk(), 104);
}

namespace {

std::uint64_t count_decoder_mismatches(const DistributedCode& code, bool cpi,
                                       const Constellation& cst, int instances,
                                       std::uint64_t seed, double snr_db) {
    SplitMix rng(seed);
    const PowerConfig power =
        PowerConfig::from_snr_per_bit(snr_db, cst.bits_per_symbol(), code.n_relays);
    std::uint64_t mism = 0;
    for (int rep = 0; rep < instances; ++rep) {
        auto ch = random_channels(code.n_relays, rng);
        std::vector<std::complex<double>> s(code.n_symbols);
        for (std::size_t n = 0; n < code.n_symbols; ++n)
            s[n] = std::sqrt(power.es) * cst.point(rng.next_u64() % cst.size());
        std::vector<std::vector<std::complex<double>>> x(code.n_relays);
        for (std::size_t k = 0; k < code.n_relays; ++k) {
            std::vector<std::complex<double>> yk(code.n_symbols);
            for (std::size_t n = 0; n < code.n_symbols; ++n) yk[n] = ch.h[k] * s[n] + rng.cn01();
            x[k] = relay_process(code, k, yk, cpi, ch.theta(k), power.rho);
        }
        std::vector<std::complex<double>> nd(code.n_slots);
        for (auto& v : nd) v = rng.cn01();
        const auto y = destination_receive(code, x, ch.f, nd);
        if (ss_ml_decode(y, ch, code, power, cpi, cst) !=
            joint_ml_decode(y, ch, code, power, cpi, cst))
            ++mism;
    }
    return mism;
}

}  // namespace

TEST_CASE("single-symbol decisions equal the joint decoder") {
    REQUIRE(count_decoder_mismatches(construct_alamouti(), true, Constellation::qpsk(), 2000, 17,
                                     8.0) == 0);
    REQUIRE(count_decoder_mismatches(construct_rate_halving(4, 4), true, Constellation::qpsk(),
                                     500, 18, 8.0) == 0);
    REQUIRE(count_decoder_mismatches(construct_repetition(3), false, Constellation::qpsk(), 1000,
                                     19, 8.0) == 0);
    REQUIRE(count_decoder_mismatches(construct_paired(4, 4), false, Constellation::qpsk(), 300,
                                     20, 8.0) == 0);
}

TEST_CASE("repetition decoding matches the combining closed form") {
    // For the repetition code, the per-symbol metric reduces to maximum
    // ratio combining with per-slot noise variance 1 + |rho f_t|^2.
    const auto code = construct_repetition(3);
    const auto cst = Constellation::qpsk();
    SplitMix rng(23);
    const PowerConfig power = PowerConfig::from_snr_per_bit(6.0, 2, 3);
    for (int rep = 0; rep < 500; ++rep) {
        auto ch = random_channels(3, rng);
        const std::size_t tx = rng.next_u64() % 4;
        const std::complex<double> s = std::sqrt(power.es) * cst.point(tx);
        std::vector<std::vector<std::complex<double>>> x(3);
        for (std::size_t k = 0; k < 3; ++k) {
            const std::vector<std::complex<double>> yk = {ch.h[k] * s + rng.cn01()};
            x[k] = relay_process(code, k, yk, false, ch.theta(k), power.rho);
        }
        std::vector<std::complex<double>> nd(3);
        for (auto& v : nd) v = rng.cn01();
        const auto y = destination_receive(code, x, ch.f, nd);

        // independent combining implementation
        std::size_t best = 0;
        double best_metric = 1e300;
        for (std::size_t cand = 0; cand < 4; ++cand) {
            const std::complex<double> sc = std::sqrt(power.es) * cst.point(cand);
            double metric = 0.0;
            for (std::size_t t = 0; t < 3; ++t) {
                const std::complex<double> gain = power.rho * ch.f[t] * ch.h[t];
                const double var = 1.0 + std::norm(power.rho * ch.f[t]);
                metric += std::norm(y[t] - gain * sc) / var;
            }
            if (metric < best_metric) {
                best_metric = metric;
                best = cand;
            }
        }
        const auto dec = ss_ml_decode(y, ch, code, power, false, cst);
        REQUIRE(dec[0] == best);
    }
}

TEST_CASE("simulation runs are deterministic and honest about noise") {
    SimConfig cfg;
    cfg.scheme = "dostbc_cpi";
    cfg.code = construct_alamouti();
    cfg.constellation = "qpsk";
    cfg.snr_db_points = {6.0, 10.0};
    cfg.min_trials = 2000;
    cfg.min_bit_errors = 10;
    cfg.max_trials = 20000;
    cfg.seed = 99;

    const auto run1 = run_ber(cfg, 2);
    const auto run2 = run_ber(cfg, 1);  // different worker count
    REQUIRE(run1.size() == run2.size());
    for (std::size_t i = 0; i < run1.size(); ++i) {
        REQUIRE(run1[i].trials == run2[i].trials);
        REQUIRE(run1[i].bit_errors == run2[i].bit_errors);
        REQUIRE(run1[i].ber == run2[i].ber);
    }
    REQUIRE(ber_csv(run1, {}) == ber_csv(run2, {}));

    SECTION("a different seed perturbs the counts") {
        SimConfig other = cfg;
        other.seed = 100;
        REQUIRE(run_ber(other, 2)[0].bit_errors != run1[0].bit_errors);
    }
    SECTION("the noiseless debug switch forces zero errors") {
        SimConfig clean = cfg;
        clean.noiseless = true;
        clean.min_trials = 500;
        clean.max_trials = 500;
        clean.min_bit_errors = 0;
        for (const auto& p : run_ber(clean, 2)) {
            REQUIRE(p.bit_errors == 0);
            REQUIRE(p.ber == 0.0);
        }
    }
    SECTION("ber accounting") {
        for (const auto& p : run1) {
            REQUIRE(p.ber ==
                    static_cast<double>(p.bit_errors) / (static_cast<double>(p.trials) * 2 * 2));
            REQUIRE(p.ber >= 0.0);
            REQUIRE(p.ber <= 1.0);
        }
    }
}

TEST_CASE("ber is non-increasing in snr within confidence") {
    SimConfig cfg;
    cfg.scheme = "dostbc_cpi";
    cfg.code = construct_alamouti();
    cfg.constellation = "qpsk";
    cfg.snr_db_points = {0.0, 4.0, 8.0, 12.0};
    cfg.min_trials = 20000;
    cfg.min_bit_errors = 200;
    cfg.max_trials = 400000;
    cfg.seed = 555;
    const auto pts = run_ber(cfg, 2);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double bits_i = static_cast<double>(pts[i].trials) * 4.0;
        const double bits_j = static_cast<double>(pts[i + 1].trials) * 4.0;
        const double sigma = std::sqrt(pts[i].ber / bits_i + pts[i + 1].ber / bits_j);
        REQUIRE(pts[i + 1].ber <= pts[i].ber + 3.0 * sigma);
    }
}

TEST_CASE("very high snr drives the error rate down") {
    SimConfig cfg;
    cfg.scheme = "dostbc_cpi";
    cfg.code = construct_alamouti();
    cfg.constellation = "qpsk";
    cfg.snr_db_points = {57.0};  // per-relay power ~10^6
    cfg.min_trials = 10000;
    cfg.min_bit_errors = 0;
    cfg.max_trials = 16384;
    cfg.seed = 3;
    const auto pts = run_ber(cfg, 2);
    REQUIRE(pts[0].ber < 1e-3);
}

TEST_CASE("csv format") {
    BerPoint p;
    p.scheme = "repetition";
    p.snr_db = 12.5;
    p.trials = 10000;
    p.bit_errors = 42;
    p.ber = 42.0 / (10000.0 * 2.0);
    const auto csv = ber_csv({p}, {"seed=1"});
    REQUIRE(csv ==
            "# seed=1\nscheme,snr_db,trials,bit_errors,ber\nrepetition,12.5,10000,42,0.0021\n");
}
