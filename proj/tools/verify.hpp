#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "spf/stored.hpp"

namespace spf::cli {

struct VerifyReport {
    std::uint64_t checks = 0;
    std::optional<std::string> witness;  ///< first mismatching query
    bool exhaustive = true;
};

/// Brute-force checks of every query type a representation supports.
/// Small inputs are checked exhaustively, larger ones on a seeded sample.
class Verifier {
  public:
    explicit Verifier(std::uint64_t seed, std::uint64_t samples = 20000) : rng_(seed), samples_(samples) {}

    VerifyReport perm(const StoredRep& rep, const Permutation& pi) {
        VerifyReport rpt;
        index_t n = pi.size();
        if (rep.size() != n) return fail(rpt, "size: representation has n=" + std::to_string(rep.size()) + ", input has " + std::to_string(n));
        std::vector<index_t> inv = pi.inverse().image();
        if (const PermBackend* b = rep.backend()) {
            const auto* sc = dynamic_cast<const ShortcutPerm*>(b);
            for (index_t i : args(n, 1u << 16, rpt)) {
                if (!eq(rpt, "forward(" + std::to_string(i) + ")", b->forward(i), pi[i])) return rpt;
                EvalCount c;
                if (!eq(rpt, "inverse(" + std::to_string(i) + ")", b->inverse(i, &c), inv[i])) return rpt;
                if (sc && c.forward_evals > sc->index().spacing() + 1)
                    return fail(rpt, "inverse(" + std::to_string(i) + ") used " + std::to_string(c.forward_evals) +
                                         " evaluations, more than t+1");
            }
            return rpt;
        }
        const PowerRep& p = *rep.powers();
        CycleOracle oc(pi);
        std::int64_t span = 2 * static_cast<std::int64_t>(n);
        if (n <= 512) {
            for (index_t x = 0; x < n; ++x)
                for (std::int64_t k = -span; k <= span; ++k)
                    if (!eq(rpt, power_name(x, k), p.power(x, k), oc.power(x, k))) return rpt;
            return rpt;
        }
        rpt.exhaustive = false;
        for (std::uint64_t s = 0; s < samples_; ++s) {
            index_t x = rng_.below(n);
            std::int64_t k = rng_.between(-span, span);
            if (!eq(rpt, power_name(x, k), p.power(x, k), oc.power(x, k))) return rpt;
        }
        return rpt;
    }

    VerifyReport tree(const BpTree& t, const std::string& parens) {
        VerifyReport rpt;
        if (t.length() != parens.size()) return fail(rpt, "size: tree has " + std::to_string(t.length()) + " parens, input has " + std::to_string(parens.size()));
        index_t len = parens.size();
        std::vector<index_t> close(len), parent(len, none), depth(len, 0), stack;
        std::vector<std::vector<index_t>> levels;
        for (index_t i = 0; i < len; ++i) {
            if (parens[i] == '(') {
                parent[i] = stack.empty() ? none : stack.back();
                depth[i] = stack.size() + 1;
                if (levels.size() < depth[i]) levels.emplace_back();
                levels[depth[i] - 1].push_back(i);
                stack.push_back(i);
            } else {
                close[stack.back()] = i;
                stack.pop_back();
            }
        }
        std::vector<index_t> level_idx(len, 0);
        for (const auto& lv : levels)
            for (index_t j = 0; j < lv.size(); ++j) level_idx[lv[j]] = j;
        std::vector<index_t> opens;
        for (index_t i = 0; i < len; ++i)
            if (parens[i] == '(') opens.push_back(i);

        for (index_t j : args(opens.size(), 2048, rpt)) {
            index_t x = opens[j];
            std::string at = "(" + std::to_string(x) + ")";
            if (!eq(rpt, "findclose" + at, t.findclose(x), close[x])) return rpt;
            if (!eq(rpt, "findopen" + at, t.findopen(close[x]), x)) return rpt;
            if (!eq(rpt, "depth" + at, t.depth(x), depth[x])) return rpt;
            if (!eq(rpt, "parent" + at, opt_or_none(t.parent(x)), parent[x])) return rpt;
            const auto& lv = levels[depth[x] - 1];
            index_t li = level_idx[x];
            if (!eq(rpt, "levelsuccessor" + at, opt_or_none(t.levelsuccessor(x)), li + 1 < lv.size() ? lv[li + 1] : none)) return rpt;
            if (!eq(rpt, "levelpredecessor" + at, opt_or_none(t.levelpredecessor(x)), li > 0 ? lv[li - 1] : none)) return rpt;
            // every ancestor distance on small trees, a few sampled ones otherwise
            std::vector<index_t> ks;
            if (rpt.exhaustive)
                for (index_t k = 0; k < depth[x]; ++k) ks.push_back(k);
            else
                for (int s = 0; s < 4; ++s) ks.push_back(rng_.below(depth[x]));
            for (index_t k : ks) {
                index_t a = x;
                for (index_t s = 0; s < k; ++s) a = parent[a];
                if (!eq(rpt, "levelancestor(" + std::to_string(x) + "," + std::to_string(k) + ")", opt_or_none(t.levelancestor(x, k)), a)) return rpt;
            }
            index_t y = opens[rng_.below(opens.size())];
            bool anc = x <= y && y < close[x];
            if (!eq(rpt, "isancestor(" + std::to_string(x) + "," + std::to_string(y) + ")", t.isancestor(x, y), anc)) return rpt;
        }
        return rpt;
    }

    /// Any of the three function representations against f : [n] -> [m].
    VerifyReport func(const StoredRep& rep, const FuncText& f) {
        VerifyReport rpt;
        index_t n = f.image.size(), m = f.m;
        if (rep.size() != n || rep.range() != m)
            return fail(rpt, "shape: representation is [" + std::to_string(rep.size()) + "]->[" + std::to_string(rep.range()) +
                                 "], input is [" + std::to_string(n) + "]->[" + std::to_string(m) + "]");
        std::vector<std::vector<index_t>> rev(m);
        for (index_t j = 0; j < n; ++j) rev[f.image[j]].push_back(j);

        auto fpow = [&](index_t i, std::uint64_t k) -> std::optional<index_t> {
            if (const auto* r = rep.func()) return r->power(i, k);
            if (const auto* r = rep.func_large()) return r->power(i, k);
            return rep.func_small()->power(i, k);
        };
        auto finv = [&](index_t i, std::uint64_t k) {
            std::vector<index_t> v;
            if (const auto* r = rep.func()) v = r->inverse_power(i, k);
            else if (const auto* r = rep.func_large()) v = r->inverse_power(i, k);
            else v = rep.func_small()->inverse_power(i, k);
            std::sort(v.begin(), v.end());
            return v;
        };
        // forward queries take i in [n], inverse queries i in [m]
        index_t inv_dom = m;
        bool small = n <= 256 && m <= 256;
        std::uint64_t kmax = small ? 2 * std::max(n, m) : 64;
        rpt.exhaustive = small;

        for (index_t i : args(n, small ? n : 0, rpt)) {
            std::optional<index_t> y = i;
            for (std::uint64_t k = 0; k <= kmax; ++k) {
                if (!eq_opt(rpt, "fpow(" + std::to_string(i) + "," + std::to_string(k) + ")", fpow(i, k), y)) return rpt;
                if (y) y = *y < n ? std::optional<index_t>(f.image[*y]) : std::nullopt;
            }
        }
        for (index_t i : args(inv_dom, small ? inv_dom : 0, rpt)) {
            std::vector<index_t> level{i};
            for (std::uint64_t k = 1; k <= kmax; ++k) {
                std::vector<index_t> next;
                for (index_t y : level)
                    if (y < m) next.insert(next.end(), rev[y].begin(), rev[y].end());
                std::sort(next.begin(), next.end());
                level = std::move(next);
                auto got = finv(i, k);
                ++rpt.checks;
                if (got != level) {
                    rpt.witness = "finv(" + std::to_string(i) + "," + std::to_string(k) + "): got {" + join(got) + "} expected {" +
                                  join(level) + "}";
                    return rpt;
                }
            }
        }
        return rpt;
    }

  private:
    static constexpr index_t none = ~index_t{0};

    struct CycleOracle {
        std::vector<index_t> cyc, pos;
        std::vector<std::vector<index_t>> cycles;
        explicit CycleOracle(const Permutation& pi) : cyc(pi.size()), pos(pi.size()) {
            std::vector<bool> seen(pi.size(), false);
            for (index_t s = 0; s < pi.size(); ++s) {
                if (seen[s]) continue;
                cycles.emplace_back();
                for (index_t x = s; !seen[x]; x = pi[x]) {
                    seen[x] = true;
                    cyc[x] = cycles.size() - 1;
                    pos[x] = cycles.back().size();
                    cycles.back().push_back(x);
                }
            }
        }
        index_t power(index_t x, std::int64_t k) const {
            const auto& c = cycles[cyc[x]];
            std::int64_t l = c.size();
            return c[static_cast<index_t>(((static_cast<std::int64_t>(pos[x]) + k) % l + l) % l)];
        }
    };

    /// All of [0, n) when n <= limit, otherwise a seeded sample.
    std::vector<index_t> args(index_t n, index_t limit, VerifyReport& rpt) {
        std::vector<index_t> v;
        if (n <= limit) {
            for (index_t i = 0; i < n; ++i) v.push_back(i);
        } else {
            rpt.exhaustive = false;
            std::uint64_t cnt = std::min<std::uint64_t>(samples_, n);
            if (limit == 0) cnt = std::min<std::uint64_t>(cnt, 512);
            for (std::uint64_t s = 0; s < cnt; ++s) v.push_back(rng_.below(n));
        }
        return v;
    }

    static index_t opt_or_none(std::optional<index_t> v) { return v ? *v : none; }

    static std::string show(index_t v) { return v == none ? "none" : std::to_string(v); }

    static std::string join(const std::vector<index_t>& v) {
        std::string s;
        for (index_t x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
        return s;
    }

    static std::string power_name(index_t x, std::int64_t k) {
        return "power(" + std::to_string(x) + "," + std::to_string(k) + ")";
    }

    static VerifyReport& fail(VerifyReport& r, std::string w) {
        r.witness = std::move(w);
        return r;
    }

    template <class A, class B>
    static bool eq(VerifyReport& r, const std::string& q, A got, B want) {
        ++r.checks;
        if (static_cast<index_t>(got) == static_cast<index_t>(want)) return true;
        r.witness = q + ": got " + show(static_cast<index_t>(got)) + " expected " + show(static_cast<index_t>(want));
        return false;
    }

    static bool eq_opt(VerifyReport& r, const std::string& q, std::optional<index_t> got, std::optional<index_t> want) {
        return eq(r, q, opt_or_none(got), opt_or_none(want));
    }

    Rng rng_;
    std::uint64_t samples_;
};

}  // namespace spf::cli
