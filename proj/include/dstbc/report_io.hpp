#pragma once

#include <charconv>
#include <string>
#include <vector>

#include <json.hpp>

#include "dstbc/bounds.hpp"
#include "dstbc/code_io.hpp"
#include "dstbc/search.hpp"
#include "dstbc/sim.hpp"
#include "dstbc/verify.hpp"

namespace dstbc {

// Shortest decimal representation that round-trips to the same double.
inline std::string double_str(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline nlohmann::json to_json(const VerificationReport& r) {
    return {{"verdict", r.pass ? "pass" : "fail"},
            {"failed_condition", r.failed_condition},
            {"witness", r.witness}};
}

inline nlohmann::json to_json(const IntProfile& p) {
    return {{"kind", std::string(1, p.kind)}, {"values", p.values}};
}

inline nlohmann::json to_json(const NumProfile& p) {
    return {{"kind", std::string(1, p.kind)}, {"values", p.values}};
}

inline nlohmann::json to_json(const Theorem1Result& r) {
    nlohmann::json j = to_json(r.report);
    j["column_monomial"] = r.column_monomial;
    if (r.report.pass) j["profiles"] = {{"E", to_json(r.e)}};
    return j;
}

inline nlohmann::json to_json(const Definition1Result& r) {
    nlohmann::json j = to_json(r.report);
    if (r.report.pass) j["profiles"] = {{"D", to_json(r.d)}};
    return j;
}

inline nlohmann::json to_json(const Definition2Result& r) {
    nlohmann::json j = to_json(r.report);
    if (r.report.pass) j["profiles"] = {{"G", to_json(r.g)}, {"F", to_json(r.f)}};
    return j;
}

inline nlohmann::json to_json(const RateReport& r) {
    return {{"rate", r.rate.str()},
            {"bound", r.bound.str()},
            {"achieves_bound", r.achieves_bound},
            {"bound_source", bound_source_name(r.bound_source)}};
}

inline nlohmann::json partition_to_json(const DistributedCode& code, const PartitionResult& pr,
                                        const std::vector<BlockRateVerdict>& verdicts) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : pr.blocks) {
        nlohmann::json jb;
        jb["columns"] = nlohmann::json::array();
        for (auto c : b.columns) jb["columns"].push_back(c + 1);
        jb["relays"] = nlohmann::json::array();
        for (auto r : b.relays) jb["relays"].push_back(r + 1);
        jb["n_w"] = b.symbols.size();
        blocks.push_back(jb);
    }
    nlohmann::json jv = nlohmann::json::array();
    for (const auto& v : verdicts) {
        jv.push_back({{"block", v.block_index + 1},
                      {"k_w", v.k_w},
                      {"rate", v.rate.str()},
                      {"sub_code_valid", v.sub_code_valid},
                      {"rate_ok", v.rate_ok},
                      {"note", v.note}});
    }
    const RateReport rr = rate_report_cpi(code);
    return {{"rate", rr.rate.str()},
            {"bound", rr.bound.str()},
            {"partition", blocks},
            {"verdicts", jv}};
}

inline nlohmann::json search_to_json(const SearchSpace& space, const SearchOutcome& out) {
    nlohmann::json j;
    j["space"] = {{"n", space.n},
                  {"k", space.k},
                  {"t", space.t},
                  {"structure", space_structure_name(space.structure)},
                  {"canonicalize", space.canonicalize},
                  {"budget", space.budget}};
    j["raw_count"] = out.raw_count;
    j["enumerated"] = out.enumerated;
    switch (out.verdict) {
        case SearchVerdict::Found: j["verdict"] = "found"; break;
        case SearchVerdict::ExhaustedNone: j["verdict"] = "none"; break;
        case SearchVerdict::BudgetExceeded: j["verdict"] = "budget_exceeded"; break;
    }
    j["witnesses"] = nlohmann::json::array();
    if (out.witness) j["witnesses"].push_back(serialize_code(*out.witness));
    return j;
}

// CSV with the resolved configuration echoed in '#' comment lines, then the
// fixed header and one row per point. Floating values use shortest
// round-trip decimals, so identical runs produce identical bytes.
inline std::string ber_csv(const std::vector<BerPoint>& points,
                           const std::vector<std::string>& config_echo) {
    std::string out;
    for (const auto& line : config_echo) out += "# " + line + "\n";
    out += "scheme,snr_db,trials,bit_errors,ber\n";
    for (const auto& p : points) {
        out += p.scheme + "," + double_str(p.snr_db) + "," + std::to_string(p.trials) + "," +
               std::to_string(p.bit_errors) + "," + double_str(p.ber) + "\n";
    }
    return out;
}

}  // namespace dstbc
