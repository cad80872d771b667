#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dstbc/code.hpp"
#include "dstbc/constellation.hpp"
#include "dstbc/render.hpp"
#include "dstbc/rng.hpp"
#include "dstbc/verify.hpp"

namespace dstbc {

// Source symbol power E_s, per-relay power E_r and the derived amplifying
// coefficient rho = sqrt(E_r / (1 + E_s)).
struct PowerConfig {
    double es = 0.0;
    double er = 0.0;
    double rho = 0.0;

    static PowerConfig from_powers(double es, double er) {
        PowerConfig p;
        p.es = es;
        p.er = er;
        p.rho = std::sqrt(er / (1.0 + es));
        return p;
    }

    // SNR per bit is the ratio of E_r to the bit count of the modulation;
    // the source power follows the K E_r allocation.
    static PowerConfig from_snr_per_bit(double snr_db, std::size_t bits_per_symbol,
                                        std::size_t n_relays) {
        const double er = std::pow(10.0, snr_db / 10.0) * static_cast<double>(bits_per_symbol);
        return from_powers(static_cast<double>(n_relays) * er, er);
    }
};

// Relay-side amplify-and-forward step: x_k = rho (y_k A_k + y_k^* B_k).
// With CPI the relay first de-rotates its received vector by e^{-j theta_k}.
inline std::vector<std::complex<double>> relay_process(const DistributedCode& code,
                                                       std::size_t k,
                                                       const std::vector<std::complex<double>>& y_k,
                                                       bool cpi, double theta_k, double rho) {
    if (y_k.size() != code.n_symbols)
        throw std::invalid_argument("relay_process: received vector must have length N");
    std::vector<std::complex<double>> y = y_k;
    if (cpi) {
        const std::complex<double> rot = std::polar(1.0, -theta_k);
        for (auto& v : y) v *= rot;
    }
    std::vector<std::complex<double>> x(code.n_slots, {0.0, 0.0});
    for (std::size_t n = 0; n < code.n_symbols; ++n) {
        const std::complex<double> yn = y[n];
        const std::complex<double> ycn = std::conj(y[n]);
        for (std::size_t t = 0; t < code.n_slots; ++t) {
            const GaussInt ca = to_gauss(code.relays[k].a(n, t));
            if (!ca.is_zero()) x[t] += ca.to_complex() * yn;
            const GaussInt cb = to_gauss(code.relays[k].b(n, t));
            if (!cb.is_zero()) x[t] += cb.to_complex() * ycn;
        }
    }
    for (auto& v : x) v *= rho;
    return x;
}

// Destination superposition y = sum_k f_k x_k + n_d.
inline std::vector<std::complex<double>> destination_receive(
    const DistributedCode& code, const std::vector<std::vector<std::complex<double>>>& x_per_relay,
    const std::vector<std::complex<double>>& f, const std::vector<std::complex<double>>& noise) {
    if (x_per_relay.size() != code.n_relays || f.size() != code.n_relays)
        throw std::invalid_argument("destination_receive: need one transmit vector per relay");
    if (noise.size() != code.n_slots)
        throw std::invalid_argument("destination_receive: noise must have length T");
    std::vector<std::complex<double>> y = noise;
    for (std::size_t k = 0; k < code.n_relays; ++k)
        for (std::size_t t = 0; t < code.n_slots; ++t) y[t] += f[k] * x_per_relay[k][t];
    return y;
}

// Draws the effective destination noise vector (relay-forwarded noise plus
// local noise) for one channel realization. Used to validate the covariance
// model empirically.
inline std::vector<std::complex<double>> sample_destination_noise(const DistributedCode& code,
                                                                  const ChannelRealization& ch,
                                                                  double rho, bool cpi,
                                                                  SplitMix& rng) {
    std::vector<std::complex<double>> total(code.n_slots, {0.0, 0.0});
    for (std::size_t k = 0; k < code.n_relays; ++k) {
        std::vector<std::complex<double>> nk(code.n_symbols);
        for (auto& v : nk) v = rng.cn01();
        const std::complex<double> rot =
            cpi ? std::polar(1.0, -ch.theta(k)) : std::complex<double>{1.0, 0.0};
        for (std::size_t n = 0; n < code.n_symbols; ++n) {
            const std::complex<double> ny = rot * nk[n];
            for (std::size_t t = 0; t < code.n_slots; ++t) {
                const GaussInt ca = to_gauss(code.relays[k].a(n, t));
                if (!ca.is_zero()) total[t] += rho * ch.f[k] * ca.to_complex() * ny;
                const GaussInt cb = to_gauss(code.relays[k].b(n, t));
                if (!cb.is_zero()) total[t] += rho * ch.f[k] * cb.to_complex() * std::conj(ny);
            }
        }
    }
    for (auto& v : total) v += rng.cn01();
    return total;
}

// ---------------------------------------------------------------------------
// ML decoding
// ---------------------------------------------------------------------------

namespace detail {

// Channel-independent decoding plan for one (code, cpi) pair: sparse
// per-symbol slot support with integer coefficients, non-zero cells per
// relay, and the exact Gram diagonals when every relay Gram is diagonal.
// Built once and shared read-only across trials and threads.
struct CodePlan {
    std::size_t n_symbols = 0;
    std::size_t n_relays = 0;
    std::size_t n_slots = 0;
    bool cpi = false;

    struct Contribution {
        std::size_t k;
        GaussInt a;
        GaussInt b;
    };
    struct SlotSupport {
        std::size_t t;
        std::vector<Contribution> terms;
    };
    std::vector<std::vector<SlotSupport>> per_symbol;  // [n]

    bool diag_gram = false;
    std::vector<std::vector<std::int64_t>> gram_diag;  // [k][t] when diag_gram
};

inline CodePlan make_code_plan(const DistributedCode& code, bool cpi) {
    CodePlan plan;
    plan.n_symbols = code.n_symbols;
    plan.n_relays = code.n_relays;
    plan.n_slots = code.n_slots;
    plan.cpi = cpi;
    plan.per_symbol.resize(code.n_symbols);

    for (std::size_t n = 0; n < code.n_symbols; ++n)
        for (std::size_t t = 0; t < code.n_slots; ++t) {
            CodePlan::SlotSupport slot{t, {}};
            for (std::size_t k = 0; k < code.n_relays; ++k) {
                const GaussInt ca = to_gauss(code.relays[k].a(n, t));
                const GaussInt cb = to_gauss(code.relays[k].b(n, t));
                if (!ca.is_zero() || !cb.is_zero()) slot.terms.push_back({k, ca, cb});
            }
            if (!slot.terms.empty()) plan.per_symbol[n].push_back(std::move(slot));
        }

    plan.diag_gram = true;
    plan.gram_diag.assign(code.n_relays, std::vector<std::int64_t>(code.n_slots, 0));
    for (std::size_t k = 0; k < code.n_relays && plan.diag_gram; ++k) {
        const GaussMatrix g = relay_gram(code, k);
        if (!g.is_diagonal()) {
            plan.diag_gram = false;
            break;
        }
        for (std::size_t t = 0; t < code.n_slots; ++t) plan.gram_diag[k][t] = g(t, t).re;
    }
    return plan;
}

// Per-trial decoding context: effective gains, the per-symbol sparse slot
// contributions v_n(s)[t] = alpha s + beta s^*, and the (diagonal when
// possible) inverse noise covariance.
struct DecoderContext {
    std::size_t n_symbols = 0;
    std::size_t n_slots = 0;
    struct SlotTerm {
        std::size_t t;
        std::complex<double> alpha;
        std::complex<double> beta;
    };
    std::vector<std::vector<SlotTerm>> per_symbol;
    bool diag_r = false;
    std::vector<double> r_diag_inv;  // when diag_r
    Eigen::MatrixXcd r_inv;          // otherwise
};

inline DecoderContext make_decoder_context(const DistributedCode& code, const CodePlan& plan,
                                           const ChannelRealization& ch, const PowerConfig& power) {
    DecoderContext ctx;
    ctx.n_symbols = plan.n_symbols;
    ctx.n_slots = plan.n_slots;
    ctx.per_symbol.assign(plan.n_symbols, {});

    const bool cpi = plan.cpi;
    std::vector<std::complex<double>> w(plan.n_relays);
    for (std::size_t k = 0; k < plan.n_relays; ++k)
        w[k] = cpi ? power.rho * ch.f[k] * std::abs(ch.h[k]) : power.rho * ch.f[k];

    for (std::size_t n = 0; n < plan.n_symbols; ++n) {
        ctx.per_symbol[n].reserve(plan.per_symbol[n].size());
        for (const auto& slot : plan.per_symbol[n]) {
            std::complex<double> alpha{0.0, 0.0}, beta{0.0, 0.0};
            for (const auto& term : slot.terms) {
                if (!term.a.is_zero())
                    alpha += w[term.k] * term.a.to_complex() * (cpi ? 1.0 : ch.h[term.k]);
                if (!term.b.is_zero())
                    beta += w[term.k] * term.b.to_complex() * (cpi ? 1.0 : std::conj(ch.h[term.k]));
            }
            ctx.per_symbol[n].push_back({slot.t, alpha, beta});
        }
    }

    if (plan.diag_gram) {
        ctx.diag_r = true;
        ctx.r_diag_inv.assign(plan.n_slots, 1.0);
        for (std::size_t t = 0; t < plan.n_slots; ++t) {
            double diag = 1.0;
            for (std::size_t k = 0; k < plan.n_relays; ++k) {
                if (plan.gram_diag[k][t] == 0) continue;
                diag += std::norm(power.rho * ch.f[k]) * static_cast<double>(plan.gram_diag[k][t]);
            }
            ctx.r_diag_inv[t] = 1.0 / diag;
        }
    } else {
        const Eigen::MatrixXcd r = noise_covariance(code, ch, power.rho);
        ctx.r_inv = r.ldlt().solve(Eigen::MatrixXcd::Identity(r.rows(), r.cols()));
    }
    return ctx;
}

// Whitened inner products for one hypothesis value of symbol n.
inline double symbol_metric(const DecoderContext& ctx, const std::vector<std::complex<double>>& z,
                            std::size_t n, std::complex<double> s) {
    double cross = 0.0;
    double quad = 0.0;
    if (ctx.diag_r) {
        for (const auto& term : ctx.per_symbol[n]) {
            const std::complex<double> v = term.alpha * s + term.beta * std::conj(s);
            cross += (z[term.t] * std::conj(v)).real();
            quad += std::norm(v) * ctx.r_diag_inv[term.t];
        }
    } else {
        const auto& terms = ctx.per_symbol[n];
        for (const auto& term : terms) {
            const std::complex<double> v = term.alpha * s + term.beta * std::conj(s);
            cross += (z[term.t] * std::conj(v)).real();
        }
        for (const auto& t1 : terms) {
            const std::complex<double> v1 = t1.alpha * s + t1.beta * std::conj(s);
            for (const auto& t2 : terms) {
                const std::complex<double> v2 = t2.alpha * s + t2.beta * std::conj(s);
                quad += (v1 * ctx.r_inv(t1.t, t2.t) * std::conj(v2)).real();
            }
        }
    }
    return -2.0 * cross + quad;
}

// z = y R^-1 as a row vector.
inline std::vector<std::complex<double>> whiten(const DecoderContext& ctx,
                                                const std::vector<std::complex<double>>& y) {
    std::vector<std::complex<double>> z(ctx.n_slots);
    if (ctx.diag_r) {
        for (std::size_t t = 0; t < ctx.n_slots; ++t) z[t] = y[t] * ctx.r_diag_inv[t];
    } else {
        Eigen::RowVectorXcd yv(ctx.n_slots);
        for (std::size_t t = 0; t < ctx.n_slots; ++t) yv(t) = y[t];
        const Eigen::RowVectorXcd zv = yv * ctx.r_inv;
        for (std::size_t t = 0; t < ctx.n_slots; ++t) z[t] = zv(t);
    }
    return z;
}

}  // namespace detail

// Single-symbol ML decoding: each symbol is decided independently by
// minimizing its own term of the whitened metric. Valid for codes whose
// weighted quadratic form is diagonal (the defining property); returns
// constellation point indices.
inline std::vector<std::size_t> ss_ml_decode_planned(
    const std::vector<std::complex<double>>& y, const ChannelRealization& ch,
    const DistributedCode& code, const detail::CodePlan& plan, const PowerConfig& power,
    const Constellation& constellation) {
    const auto ctx = detail::make_decoder_context(code, plan, ch, power);
    const auto z = detail::whiten(ctx, y);
    const double amp = std::sqrt(power.es);
    std::vector<std::size_t> out(code.n_symbols, 0);
    for (std::size_t n = 0; n < code.n_symbols; ++n) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        for (std::size_t idx = 0; idx < constellation.size(); ++idx) {
            const std::complex<double> s = amp * constellation.point(idx);
            const double m = detail::symbol_metric(ctx, z, n, s);
            if (m < best) {
                best = m;
                best_idx = idx;
            }
        }
        out[n] = best_idx;
    }
    return out;
}

inline std::vector<std::size_t> ss_ml_decode(const std::vector<std::complex<double>>& y,
                                             const ChannelRealization& ch,
                                             const DistributedCode& code, const PowerConfig& power,
                                             bool cpi, const Constellation& constellation) {
    return ss_ml_decode_planned(y, ch, code, detail::make_code_plan(code, cpi), power,
                                constellation);
}

// Exhaustive joint ML decoding over all |constellation|^N hypotheses of the
// full whitened metric. Deterministic tie-break: the lexicographically first
// hypothesis wins. Serves as the reference decoder.
inline std::vector<std::size_t> joint_ml_decode(const std::vector<std::complex<double>>& y,
                                                const ChannelRealization& ch,
                                                const DistributedCode& code,
                                                const PowerConfig& power, bool cpi,
                                                const Constellation& constellation,
                                                std::size_t hypothesis_budget = 1000000) {
    const std::size_t m = constellation.size();
    double total = 1.0;
    for (std::size_t n = 0; n < code.n_symbols; ++n) total *= static_cast<double>(m);
    if (total > static_cast<double>(hypothesis_budget))
        throw std::invalid_argument("joint_ml_decode: hypothesis budget exceeded");

    const auto plan = detail::make_code_plan(code, cpi);
    const auto ctx = detail::make_decoder_context(code, plan, ch, power);
    const double amp = std::sqrt(power.es);

    std::vector<std::size_t> idx(code.n_symbols, 0);
    std::vector<std::size_t> best_idx = idx;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::complex<double>> wx(code.n_slots);
    while (true) {
        std::fill(wx.begin(), wx.end(), std::complex<double>{0.0, 0.0});
        for (std::size_t n = 0; n < code.n_symbols; ++n) {
            const std::complex<double> s = amp * constellation.point(idx[n]);
            for (const auto& term : ctx.per_symbol[n])
                wx[term.t] += term.alpha * s + term.beta * std::conj(s);
        }
        double metric = 0.0;
        if (ctx.diag_r) {
            for (std::size_t t = 0; t < code.n_slots; ++t)
                metric += std::norm(y[t] - wx[t]) * ctx.r_diag_inv[t];
        } else {
            Eigen::RowVectorXcd e(code.n_slots);
            for (std::size_t t = 0; t < code.n_slots; ++t) e(t) = y[t] - wx[t];
            metric = (e * ctx.r_inv * e.adjoint())(0, 0).real();
        }
        if (metric < best) {
            best = metric;
            best_idx = idx;
        }
        // lexicographic odometer, first symbol most significant
        std::size_t pos = code.n_symbols;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < m) break;
            idx[pos] = 0;
            if (pos == 0) return best_idx;
        }
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo BER estimation
// ---------------------------------------------------------------------------

struct SimConfig {
    std::string scheme;  // "dostbc", "dostbc_cpi" or "repetition"
    DistributedCode code;
    std::string constellation = "qpsk";
    std::vector<double> snr_db_points;
    std::uint64_t min_trials = 10000;
    std::uint64_t min_bit_errors = 100;
    std::uint64_t max_trials = 50000000;  // hard cap so a run always terminates
    std::uint64_t seed = 1;
    bool noiseless = false;  // debug switch: disables every noise source

    bool cpi() const { return scheme == "dostbc_cpi"; }
};

struct BerPoint {
    std::string scheme;
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
};

namespace detail {

// One end-to-end codeword trial; returns the number of bit errors.
inline std::uint64_t run_trial(const SimConfig& cfg, const CodePlan& plan,
                               const Constellation& cst, const PowerConfig& power,
                               std::uint64_t point_idx, std::uint64_t trial_idx) {
    const DistributedCode& code = cfg.code;
    SplitMix rng(stream_key(cfg.seed, point_idx, trial_idx));
    const double amp = std::sqrt(power.es);
    const bool cpi = cfg.cpi();

    std::vector<std::size_t> tx_idx(code.n_symbols);
    std::vector<std::complex<double>> s(code.n_symbols);
    for (std::size_t n = 0; n < code.n_symbols; ++n) {
        tx_idx[n] = static_cast<std::size_t>(rng.next_u64() % cst.size());
        s[n] = amp * cst.point(tx_idx[n]);
    }

    ChannelRealization ch;
    ch.h.resize(code.n_relays);
    ch.f.resize(code.n_relays);
    for (auto& v : ch.h) v = rng.cn01();
    for (auto& v : ch.f) v = rng.cn01();

    std::vector<std::vector<std::complex<double>>> x(code.n_relays);
    for (std::size_t k = 0; k < code.n_relays; ++k) {
        std::vector<std::complex<double>> yk(code.n_symbols);
        for (std::size_t n = 0; n < code.n_symbols; ++n) {
            const std::complex<double> nk = cfg.noiseless ? std::complex<double>{0.0, 0.0}
                                                          : rng.cn01();
            yk[n] = ch.h[k] * s[n] + nk;
        }
        x[k] = relay_process(code, k, yk, cpi, ch.theta(k), power.rho);
    }
    std::vector<std::complex<double>> nd(code.n_slots, {0.0, 0.0});
    if (!cfg.noiseless)
        for (auto& v : nd) v = rng.cn01();
    const auto y = destination_receive(code, x, ch.f, nd);

    const auto rx_idx = ss_ml_decode_planned(y, ch, code, plan, power, cst);
    std::uint64_t errs = 0;
    for (std::size_t n = 0; n < code.n_symbols; ++n)
        errs += static_cast<std::uint64_t>(
            Constellation::bit_errors(cst.bits_of(tx_idx[n]), cst.bits_of(rx_idx[n])));
    return errs;
}

}  // namespace detail

// Runs the Monte Carlo sweep. Trials are processed in fixed batches with one
// independent RNG stream per (seed, point, trial), so the output is
// bit-identical for a given config regardless of thread count.
inline std::vector<BerPoint> run_ber(const SimConfig& cfg, unsigned threads = 0) {
    cfg.code.validate();
    const Constellation cst = Constellation::from_name(cfg.constellation);
    const detail::CodePlan plan = detail::make_code_plan(cfg.code, cfg.cpi());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    constexpr std::uint64_t kBatch = 8192;

    std::vector<BerPoint> points;
    for (std::size_t p = 0; p < cfg.snr_db_points.size(); ++p) {
        const double snr_db = cfg.snr_db_points[p];
        const PowerConfig power =
            PowerConfig::from_snr_per_bit(snr_db, cst.bits_per_symbol(), cfg.code.n_relays);

        std::uint64_t trials = 0;
        std::uint64_t errors = 0;
        while (true) {
            const std::uint64_t batch =
                std::min<std::uint64_t>(kBatch, cfg.max_trials > trials ? cfg.max_trials - trials : 0);
            if (batch == 0) break;
            std::vector<std::uint64_t> partial(threads, 0);
            std::vector<std::thread> pool;
            const std::uint64_t base = trials;
            for (unsigned w = 0; w < threads; ++w) {
                pool.emplace_back([&, w]() {
                    std::uint64_t local = 0;
                    for (std::uint64_t i = w; i < batch; i += threads)
                        local += detail::run_trial(cfg, plan, cst, power, p, base + i);
                    partial[w] = local;
                });
            }
            for (auto& th : pool) th.join();
            for (const auto v : partial) errors += v;
            trials += batch;
            if (trials >= cfg.min_trials && errors >= cfg.min_bit_errors) break;
            if (trials >= cfg.max_trials) break;
        }

        BerPoint pt;
        pt.scheme = cfg.scheme;
        pt.snr_db = snr_db;
        pt.trials = trials;
        pt.bit_errors = errors;
        pt.ber = static_cast<double>(errors) /
                 (static_cast<double>(trials) * static_cast<double>(cfg.code.n_symbols) *
                  static_cast<double>(cst.bits_per_symbol()));
        points.push_back(pt);
    }
    return points;
}

}  // namespace dstbc
