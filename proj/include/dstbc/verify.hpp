#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dstbc/code.hpp"
#include "dstbc/render.hpp"
#include "dstbc/rng.hpp"

namespace dstbc {

// ---------------------------------------------------------------------------
// Monomial structure predicates
// ---------------------------------------------------------------------------

// True iff every row has at most one non-zero entry.
inline bool is_row_monomial(const MonoGrid& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        int nz = 0;
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (!is_zero(m(r, c)) && ++nz > 1) return false;
    }
    return true;
}

// True iff every column has at most one non-zero entry.
inline bool is_column_monomial(const MonoGrid& m) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
        int nz = 0;
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (!is_zero(m(r, c)) && ++nz > 1) return false;
    }
    return true;
}

// True iff every entry of the code matrix is a single monomial, i.e. for each
// relay and each slot at most one coefficient among all rows of A_k and B_k
// is non-zero. A violating slot would transmit a sum of symbols.
inline bool has_monomial_entries(const DistributedCode& code) {
    for (std::size_t k = 0; k < code.n_relays; ++k) {
        for (std::size_t t = 0; t < code.n_slots; ++t) {
            int nz = 0;
            for (std::size_t n = 0; n < code.n_symbols; ++n) {
                if (!is_zero(code.relays[k].a(n, t))) ++nz;
                if (!is_zero(code.relays[k].b(n, t))) ++nz;
                if (nz > 1) return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Reports and profiles
// ---------------------------------------------------------------------------

struct VerificationReport {
    bool pass = true;
    std::string failed_condition;  // first violated condition, e.g. "Econd1 k1=1 k2=3"
    std::string witness;           // offending block / numeric residual

    void fail(const std::string& cond, const std::string& wit) {
        if (pass) {
            failed_condition = cond;
            witness = wit;
        }
        pass = false;
    }
};

// Per-symbol, per-relay diagonal coefficients. E and G profiles are exact
// integers; D and F are numeric (they depend on the channel realization).
struct IntProfile {
    char kind = 'E';  // 'E' or 'G'
    std::vector<std::vector<std::int64_t>> values;  // [n][k]
};

struct NumProfile {
    char kind = 'D';  // 'D' or 'F'
    std::vector<std::vector<double>> values;  // [n][k]
};

namespace detail {

inline std::string gauss_block_str(const GaussMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r) os << "; ";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << " ";
            os << m(r, c);
        }
    }
    os << "]";
    return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Noise covariance
// ---------------------------------------------------------------------------

// Integer Gram matrix A_k^H A_k + B_k^H B_k of one relay; the channel-free
// building block of the noise covariance.
inline GaussMatrix relay_gram(const DistributedCode& code, std::size_t k) {
    const GaussMatrix a = code.relays[k].a.to_gauss();
    const GaussMatrix b = code.relays[k].b.to_gauss();
    return a.conj_transpose() * a + b.conj_transpose() * b;
}

// T x T destination-noise covariance R = sum_k |rho f_k|^2 (A_k^H A_k +
// B_k^H B_k) + I. The same formula applies with and without CPI at the
// relays (the phase rotation does not change the noise second moments).
inline Eigen::MatrixXcd noise_covariance(const DistributedCode& code,
                                         const ChannelRealization& channels, double rho) {
    code.validate();
    if (rho <= 0.0) throw std::invalid_argument("noise_covariance: rho must be positive");
    if (channels.f.size() != code.n_relays)
        throw std::invalid_argument("noise_covariance: channel count must equal K");
    const auto t = static_cast<Eigen::Index>(code.n_slots);
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(t, t);
    for (std::size_t k = 0; k < code.n_relays; ++k) {
        const double w = std::norm(rho * channels.f[k]);
        if (w == 0.0) continue;
        const GaussMatrix g = relay_gram(code, k);
        for (Eigen::Index i = 0; i < t; ++i)
            for (Eigen::Index j = 0; j < t; ++j)
                r(i, j) += w * g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).to_complex();
    }
    return r;
}

// ---------------------------------------------------------------------------
// Exact unweighted conditions (no-CSI codes)
// ---------------------------------------------------------------------------

struct Theorem1Result {
    VerificationReport report;
    bool column_monomial = true;  // reported separately from the conditions
    IntProfile e;                 // valid when report.pass
};

// Exact check of the five unweighted condition families on the associated
// matrices, plus strict positivity of the resulting E profile:
//   A_{k1} A_{k2}^H = 0 and B_{k1} B_{k2}^H = 0 for k1 != k2,
//   A_{k1} B_{k2}^H + B_{k2}^* A_{k1}^T = 0 for all pairs (and the mirrored
//   family), and A_k A_k^H + B_k^* B_k^T diagonal with positive entries.
// Column-monomiality of every A_k, B_k is a structural prerequisite and is
// reported separately.
inline Theorem1Result check_theorem1(const DistributedCode& code) {
    code.validate();
    Theorem1Result res;
    const std::size_t kk = code.n_relays;

    for (std::size_t k = 0; k < kk; ++k) {
        if (!is_column_monomial(code.relays[k].a) || !is_column_monomial(code.relays[k].b)) {
            res.column_monomial = false;
            res.report.fail("column-monomial prerequisite k=" + std::to_string(k + 1),
                            "matrix has a column with more than one non-zero entry");
            break;
        }
    }

    std::vector<GaussMatrix> a(kk), b(kk);
    for (std::size_t k = 0; k < kk; ++k) {
        a[k] = code.relays[k].a.to_gauss();
        b[k] = code.relays[k].b.to_gauss();
    }

    bool fam1 = true, fam2 = true, fam3 = true, fam4 = true, fam5 = true;
    for (std::size_t k1 = 0; k1 < kk && fam1; ++k1)
        for (std::size_t k2 = 0; k2 < kk && fam1; ++k2) {
            if (k1 == k2) continue;
            const GaussMatrix p = a[k1] * a[k2].conj_transpose();
            if (!p.is_zero()) {
                res.report.fail("Econd1 k1=" + std::to_string(k1 + 1) + " k2=" + std::to_string(k2 + 1),
                                detail::gauss_block_str(p));
                fam1 = false;
            }
        }
    for (std::size_t k1 = 0; k1 < kk && fam2; ++k1)
        for (std::size_t k2 = 0; k2 < kk && fam2; ++k2) {
            if (k1 == k2) continue;
            const GaussMatrix p = b[k1] * b[k2].conj_transpose();
            if (!p.is_zero()) {
                res.report.fail("Econd2 k1=" + std::to_string(k1 + 1) + " k2=" + std::to_string(k2 + 1),
                                detail::gauss_block_str(p));
                fam2 = false;
            }
        }
    for (std::size_t k1 = 0; k1 < kk && fam3; ++k1)
        for (std::size_t k2 = 0; k2 < kk && fam3; ++k2) {
            const GaussMatrix p = a[k1] * b[k2].conj_transpose() + b[k2].conj() * a[k1].transpose();
            if (!p.is_zero()) {
                res.report.fail("Econd3 k1=" + std::to_string(k1 + 1) + " k2=" + std::to_string(k2 + 1),
                                detail::gauss_block_str(p));
                fam3 = false;
            }
        }
    for (std::size_t k1 = 0; k1 < kk && fam4; ++k1)
        for (std::size_t k2 = 0; k2 < kk && fam4; ++k2) {
            const GaussMatrix p = b[k1] * a[k2].conj_transpose() + a[k2].conj() * b[k1].transpose();
            if (!p.is_zero()) {
                res.report.fail("Econd4 k1=" + std::to_string(k1 + 1) + " k2=" + std::to_string(k2 + 1),
                                detail::gauss_block_str(p));
                fam4 = false;
            }
        }

    res.e.kind = 'E';
    res.e.values.assign(code.n_symbols, std::vector<std::int64_t>(kk, 0));
    for (std::size_t k = 0; k < kk && fam5; ++k) {
        const GaussMatrix p = a[k] * a[k].conj_transpose() + b[k].conj() * b[k].transpose();
        if (!p.is_diagonal()) {
            res.report.fail("Econd5 k=" + std::to_string(k + 1) + " off-diagonal",
                            detail::gauss_block_str(p));
            fam5 = false;
            break;
        }
        for (std::size_t n = 0; n < code.n_symbols; ++n) {
            const GaussInt d = p(n, n);
            res.e.values[n][k] = d.re;  // diagonal of a Gram sum: real
            if (d.im != 0 || d.re <= 0) {
                res.report.fail("Econd5 k=" + std::to_string(k + 1) + " E not positive at n=" +
                                    std::to_string(n + 1),
                                d.str());
                fam5 = false;
                break;
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Numeric definitional checks
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::complex<double>> draw_cn_vector(SplitMix& rng, std::size_t n) {
    std::vector<std::complex<double>> v(n);
    for (auto& z : v) z = rng.cn01();
    return v;
}

// Symbols with well-spread magnitudes keep the |s_n|^2 fitting system well
// conditioned.
inline std::vector<std::complex<double>> draw_symbols(SplitMix& rng, std::size_t n) {
    std::vector<std::complex<double>> v(n);
    for (auto& z : v) {
        const double mag = 0.5 + rng.uniform01();
        const double ph = 2.0 * M_PI * rng.uniform01();
        z = std::polar(mag, ph);
    }
    return v;
}

struct DiagFit {
    bool ok = true;
    std::string what;
    // c[n][k] with diag_k = sum_n |s_n|^2 c[n][k] for the given (code, cpi,
    // channels, R^-1).
    std::vector<std::vector<double>> c;
};

// Fits the per-symbol diagonal coefficients of X R^-1 X^H from independent
// symbol draws, checks the off-diagonals vanish on every draw, and verifies
// the fit on extra draws.
inline DiagFit fit_diagonal_profile(const DistributedCode& code, bool cpi,
                                    const ChannelRealization& ch, const Eigen::MatrixXcd& r_inv,
                                    double tol, SplitMix& rng) {
    DiagFit out;
    const std::size_t nn = code.n_symbols, kk = code.n_relays;
    const std::size_t fit_draws = nn, extra_draws = 2;

    Eigen::MatrixXd mags(fit_draws + extra_draws, nn);
    Eigen::MatrixXd diags(fit_draws + extra_draws, kk);

    for (std::size_t d = 0; d < fit_draws + extra_draws; ++d) {
        const auto s = draw_symbols(rng, nn);
        const auto xr = render_numeric(code, cpi, s, &ch);
        Eigen::MatrixXcd x(kk, code.n_slots);
        for (std::size_t k = 0; k < kk; ++k)
            for (std::size_t t = 0; t < code.n_slots; ++t) x(k, t) = xr[k][t];
        const Eigen::MatrixXcd gram = x * r_inv * x.adjoint();
        const double scale = x.squaredNorm();

        for (std::size_t k1 = 0; k1 < kk; ++k1)
            for (std::size_t k2 = 0; k2 < kk; ++k2) {
                if (k1 == k2) continue;
                if (std::abs(gram(k1, k2)) > tol * std::max(scale, 1.0)) {
                    out.ok = false;
                    out.what = "off-diagonal k1=" + std::to_string(k1 + 1) + " k2=" +
                               std::to_string(k2 + 1) + " |value|=" +
                               std::to_string(std::abs(gram(k1, k2)));
                    return out;
                }
            }
        for (std::size_t n = 0; n < nn; ++n) mags(d, n) = std::norm(s[n]);
        for (std::size_t k = 0; k < kk; ++k) {
            const std::complex<double> dk = gram(k, k);
            if (std::abs(dk.imag()) > tol * std::max(scale, 1.0)) {
                out.ok = false;
                out.what = "diagonal entry not real at k=" + std::to_string(k + 1);
                return out;
            }
            diags(d, k) = dk.real();
        }
    }

    const Eigen::MatrixXd m_fit = mags.topRows(fit_draws);
    const Eigen::MatrixXd d_fit = diags.topRows(fit_draws);
    const Eigen::MatrixXd coef = m_fit.partialPivLu().solve(d_fit);  // nn x kk

    // Verify the linear model on the held-out draws.
    const Eigen::MatrixXd pred = mags.bottomRows(extra_draws) * coef;
    const Eigen::MatrixXd got = diags.bottomRows(extra_draws);
    const double ref = std::max(got.cwiseAbs().maxCoeff(), 1.0);
    if (((pred - got).cwiseAbs().maxCoeff()) > 1e3 * tol * ref) {
        out.ok = false;
        out.what = "diagonal is not |s_n|^2-linear (holdout residual " +
                   std::to_string((pred - got).cwiseAbs().maxCoeff()) + ")";
        return out;
    }

    out.c.assign(nn, std::vector<double>(kk));
    for (std::size_t n = 0; n < nn; ++n)
        for (std::size_t k = 0; k < kk; ++k) out.c[n][k] = coef(n, k);
    return out;
}

}  // namespace detail

struct Definition1Result {
    VerificationReport report;
    NumProfile d;  // profile from the last passing draw
};

// Numeric check of the weighted orthogonality condition for no-CSI codes
// over `draws` random channel realizations: X R^-1 X^H must be diagonal with
// diagonal sum_n |s_n|^2 |h_k|^2 D_{n,k}, D_{n,k} non-zero. The |h_k|^2
// factorization is verified by fitting the profile under two independent h
// draws against the same f draw. Entries with |D| <= tol * max|D| are
// treated as zero.
inline Definition1Result check_definition1(const DistributedCode& code, std::size_t draws,
                                           double tol, std::uint64_t seed = 0x9e3779b97f4a7c15ull,
                                           double rho = 1.0) {
    code.validate();
    if (draws < 1) throw std::invalid_argument("check_definition1: draws must be >= 1");
    if (tol <= 0) throw std::invalid_argument("check_definition1: tol must be positive");
    Definition1Result res;
    res.d.kind = 'D';
    SplitMix rng(seed);

    const std::size_t nn = code.n_symbols, kk = code.n_relays;
    for (std::size_t d = 0; d < draws && res.report.pass; ++d) {
        ChannelRealization ch;
        ch.f = detail::draw_cn_vector(rng, kk);
        ch.h = detail::draw_cn_vector(rng, kk);
        const Eigen::MatrixXcd r = noise_covariance(code, ch, rho);
        const Eigen::MatrixXcd r_inv =
            r.ldlt().solve(Eigen::MatrixXcd::Identity(r.rows(), r.cols()));

        const auto fit1 = detail::fit_diagonal_profile(code, /*cpi=*/false, ch, r_inv, tol, rng);
        if (!fit1.ok) {
            res.report.fail("D1.2 draw " + std::to_string(d + 1), fit1.what);
            break;
        }
        // Second h draw, same f (hence same R): coefficients must scale as
        // |h_k|^2 with an h-independent D profile.
        ChannelRealization ch2 = ch;
        ch2.h = detail::draw_cn_vector(rng, kk);
        const auto fit2 = detail::fit_diagonal_profile(code, /*cpi=*/false, ch2, r_inv, tol, rng);
        if (!fit2.ok) {
            res.report.fail("D1.2 draw " + std::to_string(d + 1) + " (second h)", fit2.what);
            break;
        }

        std::vector<std::vector<double>> prof(nn, std::vector<double>(kk));
        double max_abs = 0.0;
        bool structure_ok = true;
        for (std::size_t n = 0; n < nn && structure_ok; ++n)
            for (std::size_t k = 0; k < kk; ++k) {
                const double d1 = fit1.c[n][k] / std::norm(ch.h[k]);
                const double d2 = fit2.c[n][k] / std::norm(ch2.h[k]);
                const double ref = std::max({std::abs(d1), std::abs(d2), 1e-3});
                if (std::abs(d1 - d2) > 1e3 * tol * ref) {
                    res.report.fail("D1.2 draw " + std::to_string(d + 1) +
                                        " coefficients not proportional to |h_k|^2",
                                    "n=" + std::to_string(n + 1) + " k=" + std::to_string(k + 1));
                    structure_ok = false;
                    break;
                }
                prof[n][k] = d1;
                max_abs = std::max(max_abs, std::abs(d1));
            }
        if (!structure_ok) break;
        for (std::size_t n = 0; n < nn && res.report.pass; ++n)
            for (std::size_t k = 0; k < kk; ++k)
                if (std::abs(prof[n][k]) <= tol * std::max(max_abs, 1e-300)) {
                    res.report.fail("D1.2 zero coefficient",
                                    "D n=" + std::to_string(n + 1) + " k=" + std::to_string(k + 1));
                    break;
                }
        if (res.report.pass) res.d.values = std::move(prof);
    }
    return res;
}

struct Definition2Result {
    VerificationReport report;
    IntProfile g;   // exact profile, valid when the unweighted check passed
    NumProfile f;   // numeric profile from the last passing draw
};

namespace detail {

// Exact polynomial expansion of [X_C X_C^H]_{k1,k2} restricted to a column
// subset. The three coefficient families are, in order: s_a s_b^*
// (A1 A2^H + (B1 B2^H)^T), s_a s_b (A1 B2^H), s_a^* s_b^* (B1 A2^H); the
// latter two only matter symmetrized.
struct CpiGramFamilies {
    GaussMatrix ss_conj;  // coefficient of s_a s_b^*
    GaussMatrix ss;       // coefficient of s_a s_b (before symmetrization)
    GaussMatrix conj_conj;
};

inline CpiGramFamilies cpi_gram_families(const DistributedCode& code, std::size_t k1,
                                         std::size_t k2, const std::vector<std::size_t>& cols) {
    const std::size_t nn = code.n_symbols;
    CpiGramFamilies f{GaussMatrix(nn, nn), GaussMatrix(nn, nn), GaussMatrix(nn, nn)};
    const auto& p1 = code.relays[k1];
    const auto& p2 = code.relays[k2];
    for (std::size_t t : cols) {
        for (std::size_t a = 0; a < nn; ++a) {
            const GaussInt a1 = to_gauss(p1.a(a, t));
            const GaussInt b1 = to_gauss(p1.b(a, t));
            if (a1.is_zero() && b1.is_zero()) continue;
            for (std::size_t b = 0; b < nn; ++b) {
                const GaussInt a2c = to_gauss(p2.a(b, t)).conj();
                const GaussInt b2c = to_gauss(p2.b(b, t)).conj();
                // s_a s_b^*: A-entries of k1 against A of k2, plus B of k1
                // against B of k2 transposed.
                f.ss_conj(a, b) = f.ss_conj(a, b) + a1 * a2c;
                f.ss_conj(b, a) = f.ss_conj(b, a) + b1 * b2c;
                f.ss(a, b) = f.ss(a, b) + a1 * b2c;
                f.conj_conj(a, b) = f.conj_conj(a, b) + b1 * a2c;
            }
        }
    }
    return f;
}

inline bool symmetrized_zero(const GaussMatrix& m) {
    for (std::size_t a = 0; a < m.rows(); ++a)
        for (std::size_t b = a; b < m.cols(); ++b) {
            if (a == b) {
                if (!m(a, a).is_zero()) return false;
            } else if (!(m(a, b) + m(b, a)).is_zero()) {
                return false;
            }
        }
    return true;
}

}  // namespace detail

// Checks the channel-free quadratic form X_C X_C^H == sum_n |s_n|^2 G_n with
// G_n diagonal and strictly positive, exactly (symbolic expansion over all
// columns). On pass fills the G profile.
inline bool check_unweighted_cpi_gram(const DistributedCode& code, IntProfile& g,
                                      VerificationReport& report) {
    std::vector<std::size_t> all_cols(code.n_slots);
    for (std::size_t t = 0; t < code.n_slots; ++t) all_cols[t] = t;
    const std::size_t nn = code.n_symbols, kk = code.n_relays;
    g.kind = 'G';
    g.values.assign(nn, std::vector<std::int64_t>(kk, 0));
    for (std::size_t k1 = 0; k1 < kk; ++k1)
        for (std::size_t k2 = 0; k2 < kk; ++k2) {
            const auto fam = detail::cpi_gram_families(code, k1, k2, all_cols);
            const std::string pair = " k1=" + std::to_string(k1 + 1) + " k2=" + std::to_string(k2 + 1);
            if (!detail::symmetrized_zero(fam.ss)) {
                report.fail("Gcond s*s term" + pair, detail::gauss_block_str(fam.ss));
                return false;
            }
            if (!detail::symmetrized_zero(fam.conj_conj)) {
                report.fail("Gcond conj*conj term" + pair, detail::gauss_block_str(fam.conj_conj));
                return false;
            }
            if (k1 != k2) {
                if (!fam.ss_conj.is_zero()) {
                    report.fail("Gcond cross row" + pair, detail::gauss_block_str(fam.ss_conj));
                    return false;
                }
            } else {
                if (!fam.ss_conj.is_diagonal()) {
                    report.fail("Gcond off-diagonal profile k=" + std::to_string(k1 + 1),
                                detail::gauss_block_str(fam.ss_conj));
                    return false;
                }
                for (std::size_t n = 0; n < nn; ++n) {
                    const GaussInt v = fam.ss_conj(n, n);
                    g.values[n][k1] = v.re;
                    if (v.im != 0 || v.re <= 0) {
                        report.fail("Gcond G not positive n=" + std::to_string(n + 1) + " k=" +
                                        std::to_string(k1 + 1),
                                    v.str());
                        return false;
                    }
                }
            }
        }
    return true;
}

// Full check of the CPI defining conditions:
//  (i)   every entry of the code matrix is a single monomial and every A_k,
//        B_k is row-monomial (exact),
//  (ii)  the channel-free quadratic form is diagonal with strictly positive
//        G (exact), and
//  (iii) X_C R^-1 X_C^H is diagonal with non-zero per-symbol coefficients
//        over `draws` random channel realizations (numeric).
inline Definition2Result check_definition2(const DistributedCode& code, std::size_t draws,
                                           double tol, std::uint64_t seed = 0x2545f4914f6cdd1dull,
                                           double rho = 1.0) {
    code.validate();
    if (draws < 1) throw std::invalid_argument("check_definition2: draws must be >= 1");
    if (tol <= 0) throw std::invalid_argument("check_definition2: tol must be positive");
    Definition2Result res;
    res.f.kind = 'F';

    if (!has_monomial_entries(code)) {
        res.report.fail("D1.1 entry structure", "a slot transmits a sum of symbols");
        return res;
    }
    for (std::size_t k = 0; k < code.n_relays; ++k) {
        if (!is_row_monomial(code.relays[k].a)) {
            res.report.fail("row-monomial A k=" + std::to_string(k + 1), "");
            return res;
        }
        if (!is_row_monomial(code.relays[k].b)) {
            res.report.fail("row-monomial B k=" + std::to_string(k + 1), "");
            return res;
        }
    }

    if (!check_unweighted_cpi_gram(code, res.g, res.report)) return res;

    SplitMix rng(seed);
    const std::size_t nn = code.n_symbols, kk = code.n_relays;
    for (std::size_t d = 0; d < draws && res.report.pass; ++d) {
        ChannelRealization ch;
        ch.f = detail::draw_cn_vector(rng, kk);
        ch.h = detail::draw_cn_vector(rng, kk);
        const Eigen::MatrixXcd r = noise_covariance(code, ch, rho);
        const Eigen::MatrixXcd r_inv =
            r.ldlt().solve(Eigen::MatrixXcd::Identity(r.rows(), r.cols()));
        const auto fit = detail::fit_diagonal_profile(code, /*cpi=*/true, ch, r_inv, tol, rng);
        if (!fit.ok) {
            res.report.fail("Fcond draw " + std::to_string(d + 1), fit.what);
            break;
        }
        double max_abs = 0.0;
        for (std::size_t n = 0; n < nn; ++n)
            for (std::size_t k = 0; k < kk; ++k) max_abs = std::max(max_abs, std::abs(fit.c[n][k]));
        for (std::size_t n = 0; n < nn && res.report.pass; ++n)
            for (std::size_t k = 0; k < kk; ++k)
                if (std::abs(fit.c[n][k]) <= tol * std::max(max_abs, 1e-300)) {
                    res.report.fail("Fcond zero coefficient",
                                    "F n=" + std::to_string(n + 1) + " k=" + std::to_string(k + 1));
                    break;
                }
        if (res.report.pass) {
            res.f.values = fit.c;
        }
    }
    return res;
}

// Channel-free exact version of the weighted CPI condition: groups columns
// by their per-relay Gram contribution (columns sharing a group have the
// same covariance diagonal for every channel draw) and requires the
// quadratic-form cancellations within every group. Equivalent to the
// weighted condition holding for all channel realizations; used as the fast
// exact filter by the exhaustive search and cross-validated against
// check_definition2 in the tests.
inline bool check_cpi_exact(const DistributedCode& code) {
    if (!has_monomial_entries(code)) return false;
    for (std::size_t k = 0; k < code.n_relays; ++k)
        if (!is_row_monomial(code.relays[k].a) || !is_row_monomial(code.relays[k].b)) return false;

    // Row-monomial matrices have diagonal Grams; group columns by the vector
    // of per-relay diagonal contributions.
    const std::size_t kk = code.n_relays, nn = code.n_symbols, tt = code.n_slots;
    std::vector<std::vector<std::int64_t>> col_sig(tt, std::vector<std::int64_t>(kk, 0));
    for (std::size_t k = 0; k < kk; ++k)
        for (std::size_t n = 0; n < nn; ++n)
            for (std::size_t t = 0; t < tt; ++t) {
                col_sig[t][k] += to_gauss(code.relays[k].a(n, t)).norm2();
                col_sig[t][k] += to_gauss(code.relays[k].b(n, t)).norm2();
            }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::vector<std::int64_t>> sigs;
    for (std::size_t t = 0; t < tt; ++t) {
        bool placed = false;
        for (std::size_t g = 0; g < sigs.size(); ++g)
            if (sigs[g] == col_sig[t]) {
                groups[g].push_back(t);
                placed = true;
                break;
            }
        if (!placed) {
            sigs.push_back(col_sig[t]);
            groups.push_back({t});
        }
    }

    std::vector<std::vector<std::int64_t>> coverage(nn, std::vector<std::int64_t>(kk, 0));
    for (const auto& cols : groups) {
        for (std::size_t k1 = 0; k1 < kk; ++k1)
            for (std::size_t k2 = 0; k2 < kk; ++k2) {
                const auto fam = detail::cpi_gram_families(code, k1, k2, cols);
                if (!detail::symmetrized_zero(fam.ss)) return false;
                if (!detail::symmetrized_zero(fam.conj_conj)) return false;
                if (k1 != k2) {
                    if (!fam.ss_conj.is_zero()) return false;
                } else {
                    if (!fam.ss_conj.is_diagonal()) return false;
                    for (std::size_t n = 0; n < nn; ++n) {
                        const GaussInt v = fam.ss_conj(n, n);
                        if (v.im != 0 || v.re < 0) return false;
                        coverage[n][k1] += v.re;
                    }
                }
            }
    }
    for (std::size_t n = 0; n < nn; ++n)
        for (std::size_t k = 0; k < kk; ++k)
            if (coverage[n][k] <= 0) return false;
    return true;
}

}  // namespace dstbc
