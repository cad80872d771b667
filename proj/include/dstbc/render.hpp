#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "dstbc/code.hpp"

namespace dstbc {

// First-hop gains h_k (theta_k = arg h_k) and second-hop gains f_k for one
// channel realization.
struct ChannelRealization {
    std::vector<std::complex<double>> h;
    std::vector<std::complex<double>> f;

    std::size_t n_relays() const { return h.size(); }
    double theta(std::size_t k) const { return std::arg(h[k]); }
};

namespace detail {

// "", "-", "j " or "-j " followed by the factors.
inline std::string coeff_prefix(MonoCoeff c) {
    switch (c) {
        case MonoCoeff::PlusOne: return "";
        case MonoCoeff::MinusOne: return "-";
        case MonoCoeff::PlusJ: return "j ";
        case MonoCoeff::MinusJ: return "-j ";
        case MonoCoeff::Zero: break;
    }
    return "";
}

}  // namespace detail

// Symbolic K x T rendering of the code matrix. With cpi=true row k reads
// s A_k + s* B_k; with cpi=false each s-factor additionally carries h_k and
// each conjugate factor h_k*. Entries that sum several monomials are rendered
// with " + " separators (such codes are structurally invalid, but rendering
// them aids diagnostics).
inline std::vector<std::vector<std::string>> render_symbolic(const DistributedCode& code,
                                                             bool cpi) {
    code.validate();
    std::vector<std::vector<std::string>> out(code.n_relays,
                                              std::vector<std::string>(code.n_slots));
    for (std::size_t k = 0; k < code.n_relays; ++k) {
        for (std::size_t t = 0; t < code.n_slots; ++t) {
            std::string entry;
            auto append = [&](const std::string& term) {
                if (!entry.empty()) entry += " + ";
                entry += term;
            };
            for (std::size_t n = 0; n < code.n_symbols; ++n) {
                const MonoCoeff ca = code.relays[k].a(n, t);
                if (!is_zero(ca)) {
                    std::string term = detail::coeff_prefix(ca);
                    if (!cpi) term += "h" + std::to_string(k + 1) + " ";
                    term += "s" + std::to_string(n + 1);
                    append(term);
                }
                const MonoCoeff cb = code.relays[k].b(n, t);
                if (!is_zero(cb)) {
                    std::string term = detail::coeff_prefix(cb);
                    if (!cpi) term += "h" + std::to_string(k + 1) + "* ";
                    term += "s" + std::to_string(n + 1) + "*";
                    append(term);
                }
            }
            out[k][t] = entry.empty() ? "0" : entry;
        }
    }
    return out;
}

// Numeric K x T code matrix for given symbol values. For cpi=false the
// entries carry the first-hop gains, so a channel realization is required.
inline std::vector<std::vector<std::complex<double>>> render_numeric(
    const DistributedCode& code, bool cpi, const std::vector<std::complex<double>>& symbols,
    const ChannelRealization* channels = nullptr) {
    code.validate();
    if (symbols.size() != code.n_symbols)
        throw std::invalid_argument("render_numeric: symbol count must equal N");
    if (!cpi && (channels == nullptr || channels->h.size() != code.n_relays))
        throw std::invalid_argument("render_numeric: channel gains required without CPI");

    std::vector<std::vector<std::complex<double>>> x(
        code.n_relays, std::vector<std::complex<double>>(code.n_slots, {0.0, 0.0}));
    for (std::size_t k = 0; k < code.n_relays; ++k) {
        const std::complex<double> hk = cpi ? 1.0 : channels->h[k];
        for (std::size_t t = 0; t < code.n_slots; ++t) {
            std::complex<double> v{0.0, 0.0};
            for (std::size_t n = 0; n < code.n_symbols; ++n) {
                const GaussInt ca = to_gauss(code.relays[k].a(n, t));
                if (!ca.is_zero()) v += ca.to_complex() * hk * symbols[n];
                const GaussInt cb = to_gauss(code.relays[k].b(n, t));
                if (!cb.is_zero()) v += cb.to_complex() * std::conj(hk) * std::conj(symbols[n]);
            }
            x[k][t] = v;
        }
    }
    return x;
}

}  // namespace dstbc
