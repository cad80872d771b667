// Command-line front end: construct, verify, bound, partition, search and
// simulate distributed space-time block codes for two-hop amplify-and-forward
// relay networks.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "dstbc/bounds.hpp"
#include "dstbc/code_io.hpp"
#include "dstbc/constructions.hpp"
#include "dstbc/report_io.hpp"
#include "dstbc/search.hpp"
#include "dstbc/sim.hpp"
#include "dstbc/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainFail = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + out_path);
    out << text;
}

dstbc::DistributedCode construct_by_family(const std::string& family, std::size_t n,
                                           std::size_t k) {
    if (family == "alamouti") return dstbc::construct_alamouti();
    if (family == "repetition") return dstbc::construct_repetition(k);
    if (family == "rate-halving") return dstbc::construct_rate_halving(n, k);
    if (family == "paired") return dstbc::construct_paired(n, k);
    throw std::runtime_error("unknown code family: " + family);
}

// ---------------------------------------------------------------------------
// simulate: config handling
// ---------------------------------------------------------------------------

struct RunSpec {
    std::string label;
    dstbc::SimConfig cfg;
    std::string code_desc;
};

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::map<std::string, std::string> parse_kv_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string v) {
            while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.erase(0, 1);
            while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
            return v;
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

std::map<std::string, std::string> parse_json_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    const auto j = nlohmann::json::parse(text);
    std::function<void(const nlohmann::json&, const std::string&)> flatten =
        [&](const nlohmann::json& node, const std::string& prefix) {
            for (const auto& [key, value] : node.items()) {
                const std::string full = prefix.empty() ? key : prefix + "." + key;
                if (value.is_object()) {
                    flatten(value, full);
                } else if (value.is_array()) {
                    std::string list;
                    for (const auto& v : value) {
                        if (!list.empty()) list += ",";
                        list += v.is_string() ? v.get<std::string>() : v.dump();
                    }
                    kv[full] = list;
                } else if (value.is_string()) {
                    kv[full] = value.get<std::string>();
                } else {
                    kv[full] = value.dump();
                }
            }
        };
    flatten(j, "");
    return kv;
}

// Environment overrides: DSTBC_<KEY> with separators mapped to '_'.
void apply_env_overrides(std::map<std::string, std::string>& kv) {
    for (const auto& key : {"scheme", "constellation", "snr_db", "min_trials", "min_bit_errors",
                            "max_trials", "seed", "code.family", "code.file", "code.n", "code.k"}) {
        std::string env = "DSTBC_";
        for (const char c : std::string(key))
            env += (c == '.' || c == '-') ? '_' : static_cast<char>(std::toupper(c));
        if (const char* v = std::getenv(env.c_str())) kv[key] = v;
    }
}

RunSpec run_spec_from_kv(const std::map<std::string, std::string>& kv) {
    RunSpec spec;
    auto get = [&](const std::string& key, const std::string& fallback) {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };
    spec.cfg.scheme = get("scheme", "dostbc_cpi");
    if (spec.cfg.scheme != "dostbc" && spec.cfg.scheme != "dostbc_cpi" &&
        spec.cfg.scheme != "repetition")
        throw std::runtime_error("scheme must be dostbc, dostbc_cpi or repetition");
    if (kv.count("code.file")) {
        spec.cfg.code = dstbc::parse_code(read_file(kv.at("code.file")));
        spec.code_desc = "file:" + kv.at("code.file");
    } else {
        const std::string family = get("code.family", "rate-halving");
        const auto n = static_cast<std::size_t>(std::stoul(get("code.n", "4")));
        const auto k = static_cast<std::size_t>(std::stoul(get("code.k", "4")));
        spec.cfg.code = construct_by_family(family, n, k);
        spec.code_desc = family + ":n=" + std::to_string(n) + ":k=" + std::to_string(k);
    }
    spec.cfg.constellation = get("constellation", "qpsk");
    spec.cfg.snr_db_points = parse_double_list(get("snr_db", "0,5,10,15,20"));
    if (spec.cfg.snr_db_points.empty()) throw std::runtime_error("snr_db must be non-empty");
    spec.cfg.min_trials = std::stoull(get("min_trials", "10000"));
    spec.cfg.min_bit_errors = std::stoull(get("min_bit_errors", "100"));
    spec.cfg.max_trials = std::stoull(get("max_trials", "5000000"));
    spec.cfg.seed = std::stoull(get("seed", "1"));
    spec.label = spec.cfg.scheme;
    return spec;
}

// Bundled comparison presets. Rate-1/2 codes ride 16-QAM for 2 bit/s/Hz; the
// repetition baseline needs 256-QAM to reach the same spectral efficiency at
// K=4 (its own rate is only 1/4). The no-CSI entry of the n8k6 pair uses
// 64-QAM since its rate is 1/3.
std::vector<RunSpec> preset_runs(const std::string& name, std::uint64_t seed) {
    auto mk = [&](const std::string& scheme, dstbc::DistributedCode code,
                  const std::string& desc, const std::string& cst) {
        RunSpec s;
        s.label = scheme;
        s.cfg.scheme = scheme;
        s.cfg.code = std::move(code);
        s.code_desc = desc;
        s.cfg.constellation = cst;
        s.cfg.snr_db_points = {0, 5, 10, 15, 20, 25};
        s.cfg.min_trials = 10000;
        s.cfg.min_bit_errors = 100;
        s.cfg.max_trials = 2000000;
        s.cfg.seed = seed;
        return s;
    };
    if (name == "n4k4-compare") {
        return {
            mk("dostbc_cpi", dstbc::construct_rate_halving(4, 4), "rate-halving:n=4:k=4", "qam16"),
            mk("dostbc", dstbc::construct_paired(4, 4), "paired:n=4:k=4", "qam16"),
            mk("repetition", dstbc::construct_repetition(4), "repetition:k=4", "qam256"),
        };
    }
    if (name == "n8k6-compare") {
        return {
            mk("dostbc_cpi", dstbc::construct_rate_halving(8, 6), "rate-halving:n=8:k=6", "qam16"),
            mk("dostbc", dstbc::construct_paired(8, 6), "paired:n=8:k=6", "qam64"),
        };
    }
    throw std::runtime_error("unknown preset: " + name +
                             " (available: n4k4-compare, n8k6-compare)");
}

std::vector<std::string> echo_lines(const RunSpec& spec) {
    const auto& c = spec.cfg;
    std::vector<std::string> lines;
    lines.push_back(spec.label + ".scheme=" + c.scheme);
    lines.push_back(spec.label + ".code=" + spec.code_desc);
    lines.push_back(spec.label + ".dims=n" + std::to_string(c.code.n_symbols) + ":k" +
                    std::to_string(c.code.n_relays) + ":t" + std::to_string(c.code.n_slots));
    lines.push_back(spec.label + ".constellation=" + c.constellation);
    std::string snr;
    for (double v : c.snr_db_points) {
        if (!snr.empty()) snr += ",";
        snr += dstbc::double_str(v);
    }
    lines.push_back(spec.label + ".snr_db=" + snr);
    lines.push_back(spec.label + ".min_trials=" + std::to_string(c.min_trials));
    lines.push_back(spec.label + ".min_bit_errors=" + std::to_string(c.min_bit_errors));
    lines.push_back(spec.label + ".max_trials=" + std::to_string(c.max_trials));
    lines.push_back(spec.label + ".seed=" + std::to_string(c.seed));
    return lines;
}

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Log-y BER vs SNR plot for a results CSV produced by `dstbc simulate`."""
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "results.csv"
series = defaultdict(list)
with open(path) as fh:
    for row in csv.DictReader(r for r in fh if not r.startswith("#")):
        series[row["scheme"]].append((float(row["snr_db"]), float(row["ber"])))

for scheme, pts in sorted(series.items()):
    pts.sort()
    plt.semilogy([p[0] for p in pts], [p[1] for p in pts], marker="o", label=scheme)
plt.xlabel("SNR per bit (dB)")
plt.ylabel("BER")
plt.grid(True, which="both", alpha=0.4)
plt.legend()
plt.savefig(path + ".png", dpi=150, bbox_inches="tight")
print(path + ".png")
)PY";

// ---------------------------------------------------------------------------
// verify rendering
// ---------------------------------------------------------------------------

std::string profile_text(const dstbc::IntProfile& p) {
    std::string out = std::string(1, p.kind) + " profile (rows: symbols, cols: relays):\n";
    for (const auto& row : p.values) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? " " : "  ") + std::to_string(row[i]);
        out += "\n";
    }
    return out;
}

std::string report_text(const std::string& what, const dstbc::VerificationReport& r) {
    std::string out = what + ": " + (r.pass ? "pass" : "fail");
    if (!r.pass) out += "  [" + r.failed_condition + "]  witness: " + r.witness;
    return out + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed space-time block code toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_path;
    std::string format = "text";
    std::uint64_t seed = 1;
    bool quiet = false;
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", seed, "random seed");
    app.add_flag("--quiet", quiet, "suppress progress output");

    // construct ------------------------------------------------------------
    auto* c_cmd = app.add_subcommand("construct", "emit a known code construction");
    std::string family;
    std::size_t opt_n = 0, opt_k = 0;
    c_cmd->add_option("--family", family, "alamouti | rate-halving | repetition | paired")
        ->required();
    c_cmd->add_option("--n", opt_n, "symbol count");
    c_cmd->add_option("--k", opt_k, "relay count");

    // verify ---------------------------------------------------------------
    auto* v_cmd = app.add_subcommand("verify", "check a code file against the defining conditions");
    std::string v_file, v_as = "auto";
    std::size_t v_draws = 20;
    double v_tol = 1e-9;
    v_cmd->add_option("file", v_file, "code file")->required();
    v_cmd->add_option("--as", v_as, "auto | cpi | dostbc")
        ->check(CLI::IsMember({"auto", "cpi", "dostbc"}));
    v_cmd->add_option("--draws", v_draws, "random channel draws for the numeric checks");
    v_cmd->add_option("--tol", v_tol, "relative numeric tolerance");

    // bounds ---------------------------------------------------------------
    auto* b_cmd = app.add_subcommand("bounds", "rate upper bounds for given N, K");
    std::size_t b_n = 0, b_k = 0;
    b_cmd->add_option("--n", b_n, "symbol count")->required();
    b_cmd->add_option("--k", b_k, "relay count")->required();

    // partition ------------------------------------------------------------
    auto* p_cmd = app.add_subcommand("partition", "column partition and per-block rate analysis");
    std::string p_file;
    std::size_t p_draws = 20;
    double p_tol = 1e-9;
    p_cmd->add_option("file", p_file, "code file")->required();
    p_cmd->add_option("--draws", p_draws, "draws for per-block verification");
    p_cmd->add_option("--tol", p_tol, "relative numeric tolerance");

    // search ---------------------------------------------------------------
    auto* s_cmd = app.add_subcommand("search", "exhaustive existence search over small spaces");
    std::string s_structure = "cpi", s_preset;
    std::size_t s_n = 1, s_k = 1, s_t = 1, s_tmax = 0;
    std::uint64_t s_budget = 1000000000ull;
    bool s_canonical = false, s_list = false;
    s_cmd->add_option("--structure", s_structure, "cpi | dostbc")
        ->check(CLI::IsMember({"cpi", "dostbc"}));
    s_cmd->add_option("--n", s_n, "symbol count");
    s_cmd->add_option("--k", s_k, "relay count");
    s_cmd->add_option("--t", s_t, "slot count");
    s_cmd->add_option("--t-max", s_tmax, "sweep T=1..t-max for the minimal feasible slot count");
    s_cmd->add_option("--budget", s_budget, "raw candidate budget");
    s_cmd->add_option("--preset", s_preset, "named preset space");
    s_cmd->add_flag("--canonical", s_canonical, "enumerate one representative per equivalence class");
    s_cmd->add_flag("--list-presets", s_list, "list preset spaces and exit");

    // simulate ---------------------------------------------------------------
    auto* m_cmd = app.add_subcommand("simulate", "Monte Carlo BER sweeps");
    std::string m_config, m_preset;
    bool m_dry = false, m_plot = false;
    m_cmd->add_option("--config", m_config, "key=value or JSON config file");
    m_cmd->add_option("--preset", m_preset, "n4k4-compare | n8k6-compare");
    m_cmd->add_flag("--dry-run", m_dry, "validate the configuration and exit");
    m_cmd->add_flag("--emit-plot", m_plot, "write a companion plot script next to the CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_cmd->parsed()) {
            const auto code = construct_by_family(family, opt_n, opt_k);
            write_output(out_path, dstbc::serialize_code(code));
            return kExitOk;
        }

        if (v_cmd->parsed()) {
            dstbc::DistributedCode code;
            try {
                code = dstbc::parse_code(read_file(v_file));
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
            nlohmann::json j;
            std::string text;
            bool cpi_pass = false, dostbc_pass = false;
            if (v_as == "auto" || v_as == "cpi") {
                const auto d2 = dstbc::check_definition2(code, v_draws, v_tol, seed);
                cpi_pass = d2.report.pass;
                j["cpi"] = dstbc::to_json(d2);
                text += report_text("cpi", d2.report);
                if (d2.report.pass) text += profile_text(d2.g);
            }
            if (v_as == "auto" || v_as == "dostbc") {
                const auto t1 = dstbc::check_theorem1(code);
                const auto d1 = dstbc::check_definition1(code, v_draws, v_tol, seed);
                dostbc_pass = t1.report.pass && d1.report.pass;
                j["dostbc_exact"] = dstbc::to_json(t1);
                j["dostbc_numeric"] = dstbc::to_json(d1);
                text += report_text("dostbc exact", t1.report);
                if (t1.report.pass) text += profile_text(t1.e);
                text += report_text("dostbc numeric", d1.report);
            }
            const bool pass = v_as == "cpi"      ? cpi_pass
                              : v_as == "dostbc" ? dostbc_pass
                                                 : (cpi_pass || dostbc_pass);
            j["verdict"] = pass ? "pass" : "fail";
            j["rate"] = code.data_rate().str();
            text += std::string("overall: ") + (pass ? "pass" : "fail") + "\n";
            write_output(out_path, format == "json" ? j.dump(2) + "\n" : text);
            return pass ? kExitOk : kExitDomainFail;
        }

        if (b_cmd->parsed()) {
            const auto rd = dstbc::dostbc_rate_bound(b_n, b_k);
            const auto rc = dstbc::cpi_rate_bound(b_k);
            if (format == "json") {
                nlohmann::json j = {{"n", b_n},
                                    {"k", b_k},
                                    {"dostbc_bound", rd.str()},
                                    {"cpi_bound", rc.str()}};
                write_output(out_path, j.dump(2) + "\n");
            } else {
                write_output(out_path, "dostbc bound: " + rd.str() + "\ncpi bound: " + rc.str() +
                                           "\n");
            }
            return kExitOk;
        }

        if (p_cmd->parsed()) {
            dstbc::DistributedCode code;
            try {
                code = dstbc::parse_code(read_file(p_file));
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
            dstbc::PartitionResult pr;
            try {
                pr = dstbc::partition(code);
            } catch (const std::invalid_argument& e) {
                std::cerr << "partition rejected: " << e.what() << "\n";
                return kExitDomainFail;
            }
            const auto verdicts = dstbc::block_rate_check(pr, p_draws, p_tol);
            write_output(out_path, dstbc::partition_to_json(code, pr, verdicts).dump(2) + "\n");
            return kExitOk;
        }

        if (s_cmd->parsed()) {
            if (s_list) {
                std::string text;
                for (const auto& p : dstbc::shipped_search_presets())
                    text += p.name + "  raw=" + std::to_string(dstbc::raw_count(p.space)) + "\n";
                write_output(out_path, text);
                return kExitOk;
            }
            const auto progress = [&](std::uint64_t raw) {
                if (!quiet) std::cerr << "  ...visited " << raw << " candidates\n";
            };
            const auto structure = s_structure == "cpi" ? dstbc::SpaceStructure::RowMonomialCpi
                                                        : dstbc::SpaceStructure::ColumnMonomialDostbc;
            if (s_tmax > 0) {
                const auto out = dstbc::max_rate(s_n, s_k, s_tmax, structure, s_budget, progress);
                nlohmann::json j;
                j["found"] = out.found;
                if (out.found) {
                    j["best_rate"] = out.best_rate.str();
                    j["minimal_t"] = out.minimal_t;
                    j["witness"] = dstbc::serialize_code(*out.witness);
                }
                j["per_t"] = nlohmann::json::array();
                for (std::size_t i = 0; i < out.per_t.size(); ++i) {
                    dstbc::SearchSpace sp{s_n, s_k, i + 1, structure, false, s_budget};
                    j["per_t"].push_back(dstbc::search_to_json(sp, out.per_t[i]));
                }
                write_output(out_path, j.dump(2) + "\n");
                return out.found ? kExitOk : kExitDomainFail;
            }
            dstbc::SearchSpace space{s_n, s_k, s_t, structure, s_canonical, s_budget};
            if (!s_preset.empty()) {
                bool found = false;
                for (const auto& p : dstbc::shipped_search_presets())
                    if (p.name == s_preset) {
                        space = p.space;
                        found = true;
                    }
                if (!found) {
                    std::cerr << "unknown preset: " << s_preset << "\n";
                    return kExitUsage;
                }
            }
            const auto out = dstbc::exists_code(space, progress);
            write_output(out_path, dstbc::search_to_json(space, out).dump(2) + "\n");
            if (out.verdict == dstbc::SearchVerdict::BudgetExceeded) {
                std::cerr << "raw space of " << out.raw_count << " exceeds budget " << space.budget
                          << "\n";
                return kExitUsage;
            }
            if (out.witness && !out_path.empty()) {
                std::ofstream w(out_path + ".witness-1.code", std::ios::binary);
                w << dstbc::serialize_code(*out.witness);
            }
            return out.verdict == dstbc::SearchVerdict::Found ? kExitOk : kExitDomainFail;
        }

        if (m_cmd->parsed()) {
            std::vector<RunSpec> runs;
            if (!m_preset.empty()) {
                runs = preset_runs(m_preset, seed);
            } else if (!m_config.empty()) {
                const std::string text = read_file(m_config);
                auto kv = text.find_first_not_of(" \t\r\n") != std::string::npos &&
                                  text[text.find_first_not_of(" \t\r\n")] == '{'
                              ? parse_json_config(text)
                              : parse_kv_config(text);
                apply_env_overrides(kv);
                runs = {run_spec_from_kv(kv)};
            } else {
                std::cerr << "simulate needs --config or --preset\n";
                return kExitUsage;
            }
            std::vector<std::string> echo;
            for (const auto& r : runs)
                for (auto& line : echo_lines(r)) echo.push_back(line);
            if (m_dry) {
                if (!quiet) std::cerr << "configuration ok (" << runs.size() << " run(s))\n";
                return kExitOk;
            }
            std::vector<dstbc::BerPoint> points;
            for (const auto& r : runs) {
                if (!quiet)
                    std::cerr << "running " << r.label << " (" << r.code_desc << ", "
                              << r.cfg.constellation << ")\n";
                for (auto& p : dstbc::run_ber(r.cfg)) points.push_back(p);
            }
            write_output(out_path, dstbc::ber_csv(points, echo));
            if (m_plot && !out_path.empty()) {
                std::ofstream plot(out_path + ".plot.py", std::ios::binary);
                plot << kPlotScript;
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
