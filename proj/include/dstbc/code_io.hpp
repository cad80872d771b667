#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dstbc/code.hpp"

namespace dstbc {

// Raised on any malformed code file.
class ParseError : public std::runtime_error {
   public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

// Strips a trailing '#'-comment and surrounding whitespace.
inline std::string strip_comment(const std::string& line) {
    std::string s = line;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && (s[start] == ' ' || s[start] == '\t')) ++start;
    return s.substr(start);
}

}  // namespace detail

// Code-file format (line oriented, UTF-8, LF):
//   dostbc N K T
//   relay 1
//   <N lines of T tokens>     A_1
//   --
//   <N lines of T tokens>     B_1
//   relay 2
//   ...
// Tokens: 0, 1, -1, j, -j. Lines starting with '#' are comments.
inline DistributedCode parse_code(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream is(text);
        std::string raw;
        while (std::getline(is, raw)) {
            const std::string s = detail::strip_comment(raw);
            if (!s.empty()) lines.push_back(s);
        }
    }
    std::size_t pos = 0;
    auto next_line = [&]() -> const std::string& {
        if (pos >= lines.size()) throw ParseError("unexpected end of code file");
        return lines[pos++];
    };

    const auto header = detail::split_ws(next_line());
    if (header.size() != 4 || header[0] != "dostbc")
        throw ParseError("expected header 'dostbc N K T'");
    long n = 0, k = 0, t = 0;
    try {
        n = std::stol(header[1]);
        k = std::stol(header[2]);
        t = std::stol(header[3]);
    } catch (const std::exception&) {
        throw ParseError("non-numeric dimension in header");
    }
    if (n <= 0 || k <= 0 || t <= 0) throw ParseError("dimensions must be positive");

    DistributedCode code(static_cast<std::size_t>(n), static_cast<std::size_t>(k),
                         static_cast<std::size_t>(t));

    auto read_grid = [&](MonoGrid& g, std::size_t relay_idx, const char* which) {
        for (std::size_t r = 0; r < code.n_symbols; ++r) {
            const auto toks = detail::split_ws(next_line());
            if (toks.size() != code.n_slots)
                throw ParseError("relay " + std::to_string(relay_idx + 1) + " " + which + " row " +
                                 std::to_string(r + 1) + ": expected " +
                                 std::to_string(code.n_slots) + " tokens, got " +
                                 std::to_string(toks.size()));
            for (std::size_t c = 0; c < code.n_slots; ++c) {
                try {
                    g(r, c) = mono_parse_token(toks[c]);
                } catch (const std::invalid_argument& e) {
                    throw ParseError(e.what());
                }
            }
        }
    };

    for (std::size_t ki = 0; ki < code.n_relays; ++ki) {
        const auto marker = detail::split_ws(next_line());
        if (marker.size() != 2 || marker[0] != "relay" ||
            marker[1] != std::to_string(ki + 1))
            throw ParseError("expected 'relay " + std::to_string(ki + 1) + "'");
        read_grid(code.relays[ki].a, ki, "A");
        const std::string& sep = next_line();
        if (sep != "--") throw ParseError("expected '--' between A and B of relay " +
                                          std::to_string(ki + 1));
        read_grid(code.relays[ki].b, ki, "B");
    }
    if (pos != lines.size()) throw ParseError("trailing content after last relay block");

    code.validate();
    return code;
}

// Canonical serialization; parse_code(serialize_code(c)) == c and the output
// is byte-stable across runs.
inline std::string serialize_code(const DistributedCode& code) {
    code.validate();
    std::string out = "dostbc " + std::to_string(code.n_symbols) + " " +
                      std::to_string(code.n_relays) + " " + std::to_string(code.n_slots) + "\n";
    auto emit_grid = [&](const MonoGrid& g) {
        for (std::size_t r = 0; r < g.rows(); ++r) {
            for (std::size_t c = 0; c < g.cols(); ++c) {
                if (c) out += ' ';
                out += mono_token(g(r, c));
            }
            out += '\n';
        }
    };
    for (std::size_t k = 0; k < code.n_relays; ++k) {
        out += "relay " + std::to_string(k + 1) + "\n";
        emit_grid(code.relays[k].a);
        out += "--\n";
        emit_grid(code.relays[k].b);
    }
    return out;
}

}  // namespace dstbc
