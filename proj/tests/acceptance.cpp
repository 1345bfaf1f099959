// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spf/bp_tree.hpp"
#include "spf/func.hpp"
#include "spf/func_range.hpp"
#include "spf/generate.hpp"
#include "spf/powers.hpp"

using namespace spf;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Collects the first failure; later checks still run so counts stay meaningful.
struct Tally {
    std::uint64_t checks = 0, failures = 0;
    std::string first;

    bool expect(bool ok, const std::function<std::string()>& what) {
        ++checks;
        if (!ok && failures++ == 0) first = what();
        return ok;
    }

    Outcome done(std::string detail) const {
        if (failures) return {false, std::to_string(failures) + " of " + std::to_string(checks) + " checks failed; first: " + first};
        return {true, std::to_string(checks) + " checks; " + detail};
    }
};

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::vector<index_t> inverse_of(const std::vector<index_t>& img) {
    std::vector<index_t> inv(img.size());
    for (index_t i = 0; i < img.size(); ++i) inv[img[i]] = i;
    return inv;
}

/// Cycle and position of every element, for O(1) reference powers.
struct CycleTable {
    std::vector<index_t> cyc, pos;
    std::vector<std::vector<index_t>> cycles;

    explicit CycleTable(const std::vector<index_t>& img) : cyc(img.size()), pos(img.size()) {
        std::vector<bool> seen(img.size(), false);
        for (index_t s = 0; s < img.size(); ++s) {
            if (seen[s]) continue;
            cycles.emplace_back();
            for (index_t x = s; !seen[x]; x = img[x]) {
                seen[x] = true;
                cyc[x] = cycles.size() - 1;
                pos[x] = cycles.back().size();
                cycles.back().push_back(x);
            }
        }
    }

    index_t length(index_t x) const { return cycles[cyc[x]].size(); }

    index_t power(index_t x, std::int64_t k) const {
        const auto& c = cycles[cyc[x]];
        std::int64_t l = c.size();
        return c[static_cast<index_t>(((static_cast<std::int64_t>(pos[x]) + k % l) % l + l) % l)];
    }
};

// ---------------------------------------------------------------------------

Outcome benes_bit_count() {
    Tally t;
    for (unsigned r = 1; r <= 12; ++r) {
        index_t n = index_t{1} << r;
        BenesRep b(random_perm(n, r), 1);
        std::uint64_t want = n * r - n / 2;
        t.expect(b.payload_bits() == want && sum(b.space()).payload == want, [&] {
            return "n=" + std::to_string(n) + " payload " + std::to_string(b.payload_bits()) + " != " + std::to_string(want);
        });
    }
    return t.done("payload = n lg n - n/2 exactly for n = 2..4096");
}

Outcome benes_correctness() {
    Tally t;
    const std::vector<index_t> sizes{2, 4, 8, 64, 104, 1024};
    Rng rng(2);
    std::uint64_t mismatches = 0;
    for (int j = 0; j < 500; ++j) {
        index_t np = sizes[j % sizes.size()];
        // every (q, r) with q * 2^r = n'
        std::vector<std::pair<index_t, unsigned>> shapes;
        for (unsigned r = 0; (np >> r) >= 1 && ((np >> r) << r) == np; ++r)
            if (np >> r >= 2 || r == 0) shapes.push_back({np >> r, r});
        auto [q, r] = shapes[rng.below(shapes.size())];
        auto pi = random_perm(np, 1000 + j);
        auto inv = inverse_of(pi.image());
        auto b = BenesRep::with_qr(pi, q, r);
        for (index_t i = 0; i < np; ++i) {
            bool ok = b.forward(i) == pi[i] && b.inverse(i) == inv[i];
            mismatches += !ok;
            t.expect(ok, [&] { return "n'=" + std::to_string(np) + " q=" + std::to_string(q) + " i=" + std::to_string(i); });
        }
    }
    return t.done("500 perms, " + std::to_string(mismatches) + " mismatches");
}

Outcome shortcut_bound() {
    Tally t;
    Rng rng(3);
    std::map<index_t, double> worst_ratio;
    std::map<index_t, std::uint64_t> worst_evals;
    for (int j = 0; j < 200; ++j) {
        index_t n = 1 + rng.below(4096);
        auto pi = random_perm(n, 2000 + j);
        auto inv = inverse_of(pi.image());
        for (index_t tt : {2, 3, 8, 64}) {
            ShortcutPerm sp(pi, tt);
            index_t s = sp.index().shortcut_count();
            worst_ratio[tt] = std::max(worst_ratio[tt], static_cast<double>(s) * tt / n);
            t.expect(s * tt <= 2 * n, [&] { return "s=" + std::to_string(s) + " > 2n/t at n=" + std::to_string(n) + " t=" + std::to_string(tt); });
            for (index_t x = 0; x < n; ++x) {
                EvalCount c;
                index_t got = sp.inverse(x, &c);
                worst_evals[tt] = std::max(worst_evals[tt], c.forward_evals);
                t.expect(got == inv[x] && c.forward_evals <= tt + 1, [&] {
                    return "n=" + std::to_string(n) + " t=" + std::to_string(tt) + " x=" + std::to_string(x) + " evals=" +
                           std::to_string(c.forward_evals);
                });
            }
        }
    }
    std::string d;
    for (auto [tt, r] : worst_ratio)
        d += "t=" + std::to_string(tt) + ": max evals " + std::to_string(worst_evals[tt]) + ", max s*t/n " + fmt(r) + "; ";
    return t.done(d);
}

Outcome shortcut_space_t2() {
    Tally t;
    const index_t n = 4096, tt = 2, lg = 12;
    const double c_allowed = 4;
    ShortcutPerm sp(random_perm(n, 4), tt);
    std::uint64_t total = sp.total_space().total();
    double c = (static_cast<double>(total) - double(n * lg)) / (2.0 * n / tt) - lg;
    double bound = double(n * lg) + (2.0 * n / tt) * (lg + c_allowed);
    t.expect(total <= bound, [&] { return "total " + std::to_string(total) + " > " + fmt(bound, 0); });
    return t.done("total " + std::to_string(total) + " bits, s = " + std::to_string(sp.index().shortcut_count()) +
                  ", measured constant " + fmt(c) + " (allowed " + fmt(c_allowed, 0) + ")");
}

Outcome lehmer_codes() {
    Tally t;
    for (index_t q = 1; q <= 8; ++q) {
        LehmerCodec codec(q);
        t.expect(codec.bits() == oracle::factorial_bits(q), [&] { return "code length at q=" + std::to_string(q); });
        std::vector<index_t> p(q);
        for (index_t i = 0; i < q; ++i) p[i] = i;
        std::vector<bool> used;
        std::uint64_t count = 0;
        std::uint64_t qfact = 1;
        for (index_t i = 2; i <= q; ++i) qfact *= i;
        used.assign(qfact, false);
        do {
            auto code = lehmer_encode(std::span<const index_t>(p));
            auto v = static_cast<std::uint64_t>(code.value);
            t.expect(v < qfact && !used[v], [&] { return "code value not a bijection onto [q!] at q=" + std::to_string(q); });
            if (v < qfact) used[v] = true;
            BitSeq bits(codec.bits() + 3);
            codec.write(bits, 3, code.value);
            auto digits = codec.decode_at(bits, 3);
            auto back = perm_from_digits(digits);
            auto inv = inverse_of(p);
            bool ok = back == p;
            for (index_t i = 0; i < q && ok; ++i) ok = small_forward(digits, i) == p[i] && small_inverse(digits, i) == inv[i];
            t.expect(ok, [&] { return "round trip or forward/inverse at q=" + std::to_string(q); });
            ++count;
        } while (std::next_permutation(p.begin(), p.end()));
        t.expect(count == qfact, [&] { return "enumeration count at q=" + std::to_string(q); });
    }
    for (index_t q : {64, 512}) {
        LehmerCodec codec(q);
        t.expect(codec.bits() == oracle::factorial_bits(q), [&] { return "code length at q=" + std::to_string(q); });
        for (int j = 0; j < 1000; ++j) {
            auto pi = random_perm(q, 5000 + j);
            auto code = lehmer_encode(pi);
            BitSeq bits(codec.bits());
            codec.write(bits, 0, code.value);
            auto digits = codec.decode_at(bits, 0);
            auto inv = inverse_of(pi.image());
            bool ok = perm_from_digits(digits) == pi.image();
            for (index_t i = 0; i < q && ok; i += 7) ok = small_forward(digits, i) == pi[i] && small_inverse(digits, i) == inv[i];
            t.expect(ok, [&] { return "random perm " + std::to_string(j) + " at q=" + std::to_string(q); });
        }
    }
    return t.done("all q! perms for q <= 8, 1000 random at q = 64 and 512");
}

Outcome powers() {
    Tally t;
    const std::vector<index_t> sizes{1, 2, 3, 4, 5, 6, 7, 8, 9, 16, 31, 64, 100, 128, 255, 256, 300, 511, 512};
    for (BackendKind kind : {BackendKind::naive, BackendKind::shortcut, BackendKind::benes}) {
        for (index_t n : sizes) {
            auto pi = random_perm(n, n * 3 + static_cast<int>(kind));
            CycleTable ct(pi.image());
            PowerRep rep(pi, kind, 2);
            std::int64_t span = 2 * static_cast<std::int64_t>(n);
            for (index_t x = 0; x < n; ++x)
                for (std::int64_t k = -span; k <= span; ++k) {
                    index_t got = rep.power(x, k);
                    if (got != ct.power(x, k))
                        t.expect(false, [&] {
                            return to_string(kind) + " n=" + std::to_string(n) + " power(" + std::to_string(x) + "," + std::to_string(k) + ")";
                        });
                    else
                        ++t.checks;
                }
        }
    }
    // the reference table agrees with step-by-step iteration
    {
        auto pi = random_perm(40, 9);
        CycleTable ct(pi.image());
        auto inv = inverse_of(pi.image());
        for (index_t x = 0; x < 40; ++x)
            for (std::int64_t k = -80; k <= 80; ++k)
                t.expect(ct.power(x, k) == oracle::perm_power(pi.image(), inv, x, k), [] { return std::string("reference table"); });
    }
    Rng rng(6);
    std::uint64_t fuzz = 0;
    for (int r = 0; r < 100; ++r) {
        index_t n = 1 + rng.below(5000);
        auto kind = static_cast<BackendKind>(r % 3);
        auto pi = random_perm(n, 7000 + r);
        CycleTable ct(pi.image());
        PowerRep rep(pi, kind, 2 + r % 5);
        for (int j = 0; j < 1000; ++j, ++fuzz) {
            index_t x = rng.below(n);
            std::int64_t a = rng.between(-1000000000, 1000000000), b = rng.between(-1000000000, 1000000000);
            std::int64_t lam = ct.length(x);
            index_t pa = rep.power(x, a);
            bool period = rep.power(x, a + lam) == pa;
            bool compose = rep.power(pa, b) == rep.power(x, a + b);
            t.expect(period && compose, [&] { return to_string(kind) + " fuzz n=" + std::to_string(n) + " x=" + std::to_string(x); });
        }
    }
    return t.done(std::to_string(sizes.size()) + " sizes up to 512 x 3 backends exhaustive over k in [-2n, 2n]; " +
                  std::to_string(fuzz) + " periodicity/composition fuzz cases");
}

/// All nextexcess answers from i: the first j > i at each excess value.
std::vector<std::optional<index_t>> scan_next(const std::vector<std::int64_t>& e, index_t i, std::int64_t lo, std::int64_t hi) {
    std::vector<std::optional<index_t>> out(hi - lo + 1);
    index_t missing = out.size();
    for (index_t j = i + 1; j < e.size() && missing; ++j)
        if (e[j] >= lo && e[j] <= hi && !out[e[j] - lo]) out[e[j] - lo] = j, --missing;
    return out;
}

std::vector<std::optional<index_t>> scan_prev(const std::vector<std::int64_t>& e, index_t i, std::int64_t lo, std::int64_t hi) {
    std::vector<std::optional<index_t>> out(hi - lo + 1);
    index_t missing = out.size();
    for (index_t j = i; j-- > 0 && missing;)
        if (e[j] >= lo && e[j] <= hi && !out[e[j] - lo]) out[e[j] - lo] = j, --missing;
    return out;
}

Outcome excess_search() {
    Tally t;
    std::vector<BpParams> grid;
    for (index_t sb : {64, 256, 4096})
        for (index_t b : {8, 32, 64}) grid.push_back({sb, b, 0, 0, 0});

    std::vector<std::string> small;
    for (index_t len = 2; len <= 1024; len *= 2) {
        small.push_back(random_bp(len / 2, len));
        small.push_back(random_bp(len / 2, len + 1));
        small.push_back(chain_bp(len / 2));
    }
    for (index_t len : {6, 10, 22, 100, 770, 1022}) small.push_back(random_bp(len / 2, len));

    std::uint64_t exhaustive = 0;
    for (const auto& p : grid)
        for (const auto& s : small) {
            BpTree tree = BpTree::from_string(s, p);
            auto e = oracle::excess_table(s);
            std::int64_t d = tree.params().delta;
            for (index_t i = 0; i < s.size(); ++i) {
                auto nx = scan_next(e, i, e[i] - d, e[i] + d);
                auto pv = scan_prev(e, i, e[i] - d, e[i] + d);
                for (std::int64_t k = e[i] - d; k <= e[i] + d; ++k, ++exhaustive) {
                    bool ok = tree.nextexcess(i, k) == nx[k - e[i] + d] && tree.prevexcess(i, k) == pv[k - e[i] + d];
                    if (!ok)
                        t.expect(false, [&] {
                            return "len=" + std::to_string(s.size()) + " sb=" + std::to_string(p.superblock) + " b=" + std::to_string(p.block) +
                                   " i=" + std::to_string(i) + " k=" + std::to_string(k);
                        });
                    else
                        ++t.checks;
                }
            }
        }

    // large sequence: positions grouped by excess value, answers by binary search
    const index_t half = index_t{1} << 19;
    std::string big = random_bp(half, 77);
    auto e = oracle::excess_table(big);
    std::int64_t emax = *std::max_element(e.begin(), e.end());
    std::vector<std::vector<index_t>> at(emax + 1);
    for (index_t j = 0; j < e.size(); ++j) at[e[j]].push_back(j);
    auto next_ref = [&](index_t i, std::int64_t k) -> std::optional<index_t> {
        if (k < 0 || k > emax) return std::nullopt;
        auto it = std::upper_bound(at[k].begin(), at[k].end(), i);
        return it == at[k].end() ? std::nullopt : std::optional<index_t>(*it);
    };
    auto prev_ref = [&](index_t i, std::int64_t k) -> std::optional<index_t> {
        if (k < 0 || k > emax) return std::nullopt;
        auto it = std::lower_bound(at[k].begin(), at[k].end(), i);
        return it == at[k].begin() ? std::nullopt : std::optional<index_t>(*(it - 1));
    };
    std::uint64_t random_q = 0;
    for (const auto& p : grid) {
        BpTree tree = BpTree::from_string(big, p);
        std::int64_t d = tree.params().delta;
        Rng rng(p.superblock * 131 + p.block);
        for (int q = 0; q < 100000; ++q, ++random_q) {
            index_t i = rng.below(big.size());
            std::int64_t k = e[i] + rng.between(-d, d);
            t.expect(tree.nextexcess(i, k) == next_ref(i, k) && tree.prevexcess(i, k) == prev_ref(i, k), [&] {
                return "2n=2^20 sb=" + std::to_string(p.superblock) + " b=" + std::to_string(p.block) + " i=" + std::to_string(i) +
                       " k=" + std::to_string(k);
            });
        }
    }
    return t.done(std::to_string(exhaustive) + " exhaustive (i, k) pairs on " + std::to_string(small.size()) +
                  " sequences up to 2^10, " + std::to_string(random_q) + " random queries at 2^20, 3x3 (superblock, block) grid");
}

void check_tree_levels(Tally& t, const std::string& s, const BpTree& tree, const std::vector<index_t>& xs, Rng* rng, const std::string& tag) {
    oracle::TreeOracle o(s);
    std::vector<index_t> level_idx(s.size(), 0);
    for (const auto& lv : o.levels)
        for (index_t j = 0; j < lv.size(); ++j) level_idx[lv[j]] = j;
    for (index_t x : xs) {
        index_t dep = o.depth[x];
        std::vector<index_t> ks;
        if (rng)
            ks = {rng->below(dep + 1), rng->below(std::min<index_t>(dep + 1, 70)), dep - 1};
        else
            for (index_t k = 0; k <= dep; ++k) ks.push_back(k);
        for (index_t k : ks) {
            auto want = o.ancestor(x, k);
            std::optional<index_t> w = want ? std::optional<index_t>(*want) : std::nullopt;
            t.expect(tree.levelancestor(x, k) == w, [&] { return tag + " levelancestor(" + std::to_string(x) + "," + std::to_string(k) + ")"; });
        }
        const auto& lv = o.levels[dep];
        index_t li = level_idx[x];
        std::optional<index_t> succ = li + 1 < lv.size() ? std::optional<index_t>(lv[li + 1]) : std::nullopt;
        std::optional<index_t> pred = li > 0 ? std::optional<index_t>(lv[li - 1]) : std::nullopt;
        t.expect(tree.levelsuccessor(x) == succ && tree.levelpredecessor(x) == pred,
                 [&] { return tag + " level neighbours of " + std::to_string(x); });
    }
}

void all_dyck(index_t pairs, std::string& cur, index_t open, index_t close, const std::function<void(const std::string&)>& fn) {
    if (close == pairs) return fn(cur);
    if (open < pairs) {
        cur.push_back('(');
        all_dyck(pairs, cur, open + 1, close, fn);
        cur.pop_back();
    }
    if (close < open) {
        cur.push_back(')');
        all_dyck(pairs, cur, open, close + 1, fn);
        cur.pop_back();
    }
}

Outcome level_queries() {
    Tally t;
    std::uint64_t small_trees = 0;
    const std::vector<BpParams> params{{}, {8, 8, 3, 2, 1}};
    for (index_t n = 1; n <= 10; ++n) {
        std::string cur;
        all_dyck(n - 1, cur, 0, 0, [&](const std::string& inner) {
            std::string s = "(" + inner + ")";
            ++small_trees;
            std::vector<index_t> xs;
            for (index_t i = 0; i < s.size(); ++i)
                if (s[i] == '(') xs.push_back(i);
            for (const auto& p : params) check_tree_levels(t, s, BpTree::from_string(s, p), xs, nullptr, s);
        });
    }
    Rng rng(8);
    index_t max_depth = 0;
    for (int j = 0; j < 50; ++j) {
        const index_t n = 100000;
        // every tenth tree is a shallow random recursive tree
        std::string s;
        if (j % 10 == 9) {
            auto bits = BpTree::parens_from_parents(random_parents(n, 9000 + j));
            for (index_t i = 0; i < bits.size(); ++i) s.push_back(bits.access(i) ? '(' : ')');
        } else {
            s = random_bp(n, 9000 + j);
        }
        BpTree tree = BpTree::from_string(s);
        std::vector<index_t> opens;
        for (index_t i = 0; i < s.size(); ++i)
            if (s[i] == '(') opens.push_back(i);
        std::vector<index_t> xs;
        for (int q = 0; q < 10000; ++q) xs.push_back(opens[rng.below(opens.size())]);
        oracle::TreeOracle o(s);
        max_depth = std::max<index_t>(max_depth, o.levels.size() - 1);
        check_tree_levels(t, s, tree, xs, &rng, "tree " + std::to_string(j));
    }
    return t.done(std::to_string(small_trees) + " trees of <= 10 nodes exhaustively (2 parameter sets), 50 trees of 10^5 nodes x 10^4 "
                  "sampled nodes (max depth " + std::to_string(max_depth) + ")");
}

Outcome function_powers() {
    Tally t;
    std::vector<std::pair<std::string, std::vector<index_t>>> inputs{{"f19", quad19()}};
    for (index_t n : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 24, 32, 50, 64, 100, 128, 200, 256})
        inputs.push_back({"random n=" + std::to_string(n), random_func(n, n, 300 + n)});
    double worst = 0;
    for (const auto& [name, f] : inputs) {
        index_t n = f.size();
        FuncRep rep(f, FuncOptions{});
        std::vector<std::vector<index_t>> rev(n);
        for (index_t j = 0; j < n; ++j) rev[f[j]].push_back(j);
        for (index_t i = 0; i < n; ++i) {
            index_t y = i;
            std::vector<index_t> level{i};
            for (index_t k = 0; k <= 2 * n; ++k) {
                if (k > 0) {
                    y = f[y];
                    std::vector<index_t> next;
                    for (index_t v : level) next.insert(next.end(), rev[v].begin(), rev[v].end());
                    std::sort(next.begin(), next.end());
                    level = std::move(next);
                }
                t.expect(rep.power(i, k) == y, [&] { return name + " fpow(" + std::to_string(i) + "," + std::to_string(k) + ")"; });
                EvalCount c;
                auto got = rep.inverse_power(i, k, &c);
                std::sort(got.begin(), got.end());
                t.expect(got == level, [&] { return name + " finv(" + std::to_string(i) + "," + std::to_string(k) + ")"; });
                worst = std::max(worst, static_cast<double>(c.tree_ops) / (1.0 + got.size()));
            }
        }
    }
    // the f19 instance itself
    {
        FuncRep rep(quad19(), FuncOptions{});
        auto pre = rep.inverse_power(18, 1);
        std::sort(pre.begin(), pre.end());
        t.expect(pre == std::vector<index_t>{0, 17} && rep.power(0, 1) == 18, [] { return std::string("f19 spot values"); });
    }
    const double c_allowed = 8;
    t.expect(worst <= c_allowed, [&] { return "tree ops per (1 + |answer|) reached " + fmt(worst); });
    return t.done("f19 plus random f on n <= 256, all i and k <= 2n; max tree ops / (1 + |answer|) = " + fmt(worst) + " (allowed " +
                  fmt(c_allowed, 0) + ")");
}

Outcome function_space() {
    Tally t;
    const index_t n = index_t{1} << 14;
    const double eps = 0.5, lg = 14;
    FuncOptions opt;
    opt.backend = BackendKind::shortcut;
    opt.t = static_cast<index_t>(std::ceil(1 / eps));
    FuncRep rep(random_func(n, n, 10), opt);
    std::uint64_t total = sum(rep.space()).total();
    double main_term = (1 + eps) * n * lg;
    double c = (static_cast<double>(total) - main_term) / n;
    t.expect(total <= main_term + 8.0 * n, [&] { return "total " + std::to_string(total) + " bits exceeds (1+eps) n lg n + 8n"; });
    return t.done("total " + std::to_string(total) + " bits = (1+eps) n lg n + " + fmt(c) + " n (allowed 8 n)");
}

Outcome arbitrary_ranges() {
    Tally t;
    auto partial = [](const std::vector<index_t>& f, index_t i, index_t k) -> std::optional<index_t> {
        for (index_t s = 0; s < k; ++s) {
            if (i >= f.size()) return std::nullopt;
            i = f[i];
        }
        return i;
    };
    auto check = [&](const std::vector<index_t>& f, index_t m, auto& rep, const std::string& tag) {
        index_t n = f.size();
        index_t kmax = 2 * std::max(n, m) + 2;
        for (index_t i = 0; i < n; ++i)
            for (index_t k = 0; k <= kmax; ++k) {
                std::optional<index_t> got = rep.power(i, k);
                t.expect(got == partial(f, i, k), [&] { return tag + " power(" + std::to_string(i) + "," + std::to_string(k) + ")"; });
            }
        std::vector<std::vector<index_t>> rev(m);
        for (index_t j = 0; j < n; ++j) rev[f[j]].push_back(j);
        for (index_t i = 0; i < m; ++i) {
            std::vector<index_t> level{i};
            for (index_t k = 1; k <= kmax; ++k) {
                std::vector<index_t> next;
                for (index_t v : level)
                    if (v < m) next.insert(next.end(), rev[v].begin(), rev[v].end());
                std::sort(next.begin(), next.end());
                level = std::move(next);
                auto got = rep.inverse_power(i, k);
                std::sort(got.begin(), got.end());
                t.expect(got == level, [&] { return tag + " inverse_power(" + std::to_string(i) + "," + std::to_string(k) + ")"; });
            }
        }
    };
    int cases = 0;
    for (BackendKind kind : {BackendKind::shortcut, BackendKind::benes}) {
        FuncOptions opt;
        opt.backend = kind;
        for (index_t a : {1, 2, 5, 17, 40}) {
            for (index_t b : {a + 1, 2 * a + 1, 3 * a, 3 * a + 2, 7 * a}) {
                if (b <= a) continue;
                auto fl = random_func(b, a, a * 1000 + b);  // n = b > m = a
                RangeRepLarge large(fl, a, opt);
                check(fl, a, large, "n>m n=" + std::to_string(b) + " m=" + std::to_string(a));
                auto fs = random_func(a, b, a * 2000 + b);  // n = a < m = b
                RangeRepSmall small(fs, b, opt);
                check(fs, b, small, "n<m n=" + std::to_string(a) + " m=" + std::to_string(b));
                cases += 2;
            }
        }
    }
    return t.done(std::to_string(cases) + " (n, m) cases including n = 3m and m = 3n, two backends");
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion all[] = {
        {"Benes bit count", benes_bit_count},
        {"Benes correctness", benes_correctness},
        {"shortcut bound", shortcut_bound},
        {"shortcut space with t = 2", shortcut_space_t2},
        {"Lehmer codes", lehmer_codes},
        {"powers", powers},
        {"excess search", excess_search},
        {"level ancestor / successor", level_queries},
        {"function powers", function_powers},
        {"function space", function_space},
        {"arbitrary ranges", arbitrary_ranges},
    };
    int failed = 0, idx = 0;
    for (const auto& c : all) {
        ++idx;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("criterion %2d %-28s %s  %s [%.1fs]\n", idx, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("acceptance: %d of %d criteria passed\n", idx - failed, idx);
    return failed ? 1 : 0;
}
