#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "spf/binary_io.hpp"
#include "spf/permutation.hpp"

namespace spf {

/// Text forms: perm is "n" then n values; func is "n m" then n values in
/// [m]; tree is one line of '(' and ')'.
struct FuncText {
    index_t m = 0;
    std::vector<index_t> image;
};

namespace detail {

inline std::uint64_t read_count(std::istream& in, const char* what) {
    std::string tok;
    if (!(in >> tok)) throw FormatError(std::string("missing ") + what);
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != tok.size() || tok[0] == '-')
        throw FormatError(std::string("expected a non-negative integer for ") + what + ", got '" + tok + "'");
    return v;
}

inline std::vector<index_t> read_values(std::istream& in, index_t n) {
    std::vector<index_t> v;
    v.reserve(n);
    for (index_t i = 0; i < n; ++i) {
        std::string what = "value " + std::to_string(i);
        v.push_back(read_count(in, what.c_str()));
    }
    std::string extra;
    if (in >> extra) throw FormatError("trailing data after " + std::to_string(n) + " values: '" + extra + "'");
    return v;
}

inline void write_values(std::ostream& out, const std::vector<index_t>& v) {
    for (index_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
    out << '\n';
}

}  // namespace detail

inline void write_perm_text(std::ostream& out, const Permutation& pi) {
    out << pi.size() << '\n';
    detail::write_values(out, pi.image());
}

inline Permutation read_perm_text(std::istream& in) {
    index_t n = detail::read_count(in, "n");
    auto v = detail::read_values(in, n);
    try {
        return Permutation::from_image(std::move(v));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

inline void write_func_text(std::ostream& out, const std::vector<index_t>& f, index_t m) {
    out << f.size() << ' ' << m << '\n';
    detail::write_values(out, f);
}

inline FuncText read_func_text(std::istream& in) {
    FuncText t;
    index_t n = detail::read_count(in, "n");
    t.m = detail::read_count(in, "m");
    t.image = detail::read_values(in, n);
    for (index_t i = 0; i < n; ++i)
        if (t.image[i] >= t.m)
            throw FormatError("value " + std::to_string(t.image[i]) + " at index " + std::to_string(i) + " is outside [0, " +
                              std::to_string(t.m) + ")");
    return t;
}

inline void write_tree_text(std::ostream& out, const std::string& parens) { out << parens << '\n'; }

/// Whitespace is ignored; any other character besides parens is an error.
inline std::string read_tree_text(std::istream& in) {
    std::string s, tok;
    while (in >> tok) s += tok;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] != '(' && s[i] != ')')
            throw FormatError("unexpected character '" + std::string(1, s[i]) + "' at offset " + std::to_string(i));
    return s;
}

}  // namespace spf
