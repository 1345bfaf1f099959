#pragma once

#include <string>
#include <vector>

#include "spf/bits.hpp"
#include "spf/permutation.hpp"

namespace spf {

/// Uniform random ordered tree on n nodes as a paren string. A uniform
/// sequence of n-1 opens and n-1 closes is rotated to its unique Dyck
/// rotation (cycle lemma on the sequence with one extra close), then
/// wrapped in the root's pair.
inline std::string random_bp(index_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("random_bp: n must be >= 1");
    Rng rng(seed);
    index_t m = n - 1;
    std::vector<char> seq(2 * m + 1);
    for (index_t i = 0; i < 2 * m + 1; ++i) seq[i] = i < m ? '(' : ')';
    for (index_t i = seq.size(); i > 1; --i) std::swap(seq[i - 1], seq[rng.below(i)]);
    // rotate to start just after the first minimum of the prefix sums
    std::int64_t e = 0, best = 1;
    index_t cut = 0;
    for (index_t i = 0; i < seq.size(); ++i) {
        e += seq[i] == '(' ? 1 : -1;
        if (e < best) best = e, cut = i + 1;
    }
    std::string out = "(";
    for (index_t i = 0; i + 1 < seq.size(); ++i) out.push_back(seq[(cut + i) % seq.size()]);
    out.push_back(')');
    return out;
}

/// Random recursive tree: parent[v] uniform in [0, v), root 0.
inline std::vector<index_t> random_parents(index_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<index_t> p(n, ~index_t{0});
    for (index_t v = 1; v < n; ++v) p[v] = rng.below(v);
    return p;
}

inline std::string chain_bp(index_t n) { return std::string(n, '(') + std::string(n, ')'); }

/// Uniform random function [n] -> [m].
inline std::vector<index_t> random_func(index_t n, index_t m, std::uint64_t seed) {
    if (m == 0) throw std::invalid_argument("random_func: m must be >= 1");
    Rng rng(seed);
    std::vector<index_t> f(n);
    for (auto& y : f) y = rng.below(m);
    return f;
}

/// x -> (x^2 + 2x - 1) mod 19 on [19].
inline std::vector<index_t> quad19() {
    std::vector<index_t> f(19);
    for (index_t x = 0; x < 19; ++x) f[x] = (x * x + 2 * x + 18) % 19;
    return f;
}

}  // namespace spf
