#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spf/bp_tree.hpp"
#include "spf/powers.hpp"

namespace spf {

/// Smallest w >= 1 with w^3 >= lg n.
inline index_t default_width(index_t n) {
    index_t lg = ceil_log2(std::max<index_t>(n, 2));
    index_t w = 1;
    while (w * w * w < lg) ++w;
    return w;
}

struct FuncOptions {
    BackendKind backend = BackendKind::shortcut;
    index_t t = 2;
    index_t width = 0;               ///< a gadget is wide iff its cycle length exceeds this; 0 = default_width(n)
    bool store_preorder_to_label = false;  ///< keep pi^-1 in the backend instead of pi
    BpParams tree{};
};

struct GadgetEntry {
    index_t size = 0;
    index_t cycle = 0;
    bool wide = false;
    bool terminal = false;  ///< an excluded fixed point: a root with no outgoing edge
};

/// T_f for a function on [N]: super-root, then one subtree per gadget.
/// Labels >= real_count are excluded from the label/preorder bijection; an
/// excluded fixed point stands for a root without an outgoing edge.
struct FuncLayout {
    BitSeq parens;                       // super-root included
    std::vector<index_t> label_of_pre;   // preorder without the super-root -> label
    std::vector<GadgetEntry> gadgets;    // in T_f order
};

/// Gadget order: narrow by (size, cycle length, least label), then wide by
/// least label, then terminal by label. In a gadget of cycle length q the
/// cycle is cut above a tallest tree root (least label on ties), named r^q;
/// r^{j-1} = f(r^j), and r^1 .. r^q form a path under the super-root. In
/// T_f the first child of a node is a tallest child subtree (least deepest
/// leaf on ties), so every leftmost path is a longest path; the other
/// children follow by (subtree size, least label).
inline FuncLayout layout_function(const std::vector<index_t>& f, index_t width, index_t real_count) {
    constexpr index_t none = ~index_t{0};
    index_t N = f.size();
    if (N == 0) throw std::invalid_argument("function must have a nonempty domain");
    for (index_t v = 0; v < N; ++v)
        if (f[v] >= N)
            throw std::invalid_argument("f(" + std::to_string(v) + ") = " + std::to_string(f[v]) + " is outside [0, " +
                                        std::to_string(N) + ")");

    std::vector<index_t> comp(N, none);
    std::vector<char> state(N, 0), on_cycle(N, 0);
    std::vector<std::vector<index_t>> cycles;
    std::vector<index_t> path;
    for (index_t s = 0; s < N; ++s) {
        if (state[s]) continue;
        path.clear();
        index_t x = s;
        while (state[x] == 0) {
            state[x] = 1;
            path.push_back(x);
            x = f[x];
        }
        index_t cid;
        if (state[x] == 1) {
            cid = cycles.size();
            std::vector<index_t> cyc;
            index_t y = x;
            do {
                cyc.push_back(y);
                on_cycle[y] = 1;
                y = f[y];
            } while (y != x);
            cycles.push_back(std::move(cyc));
        } else {
            cid = comp[x];
        }
        for (index_t y : path) {
            state[y] = 2;
            comp[y] = cid;
        }
    }

    // tree children (non-cycle preimages), ascending label
    std::vector<index_t> kid_off(N + 1, 0), kids;
    for (index_t v = 0; v < N; ++v)
        if (!on_cycle[v]) ++kid_off[f[v] + 1];
    for (index_t v = 0; v < N; ++v) kid_off[v + 1] += kid_off[v];
    kids.resize(kid_off[N]);
    {
        std::vector<index_t> fill(kid_off.begin(), kid_off.end() - 1);
        for (index_t v = 0; v < N; ++v)
            if (!on_cycle[v]) kids[fill[f[v]]++] = v;
    }

    std::vector<index_t> height(N, 0), size(N, 1), minlab(N), deep(N);
    {
        std::vector<index_t> order;
        order.reserve(N);
        for (index_t v = 0; v < N; ++v)
            if (on_cycle[v]) order.push_back(v);
        for (index_t h = 0; h < order.size(); ++h)
            for (index_t e = kid_off[order[h]]; e < kid_off[order[h] + 1]; ++e) order.push_back(kids[e]);
        for (index_t h = order.size(); h-- > 0;) {
            index_t v = order[h];
            minlab[v] = v;
            deep[v] = v;
            for (index_t e = kid_off[v]; e < kid_off[v + 1]; ++e) {
                index_t c = kids[e];
                size[v] += size[c];
                minlab[v] = std::min(minlab[v], minlab[c]);
                if (height[c] + 1 > height[v] || (e == kid_off[v])) {
                    height[v] = height[c] + 1;
                    deep[v] = deep[c];
                } else if (height[c] + 1 == height[v]) {
                    deep[v] = std::min(deep[v], deep[c]);
                }
            }
        }
    }

    auto rest_less = [&](index_t a, index_t b) {
        return size[a] != size[b] ? size[a] < size[b] : minlab[a] < minlab[b];
    };
    auto taller = [&](index_t a, index_t b) { return height[a] != height[b] ? height[a] > height[b] : deep[a] < deep[b]; };

    struct Gadget {
        std::vector<index_t> spine;  // r^1 .. r^q
        GadgetEntry e;
        index_t key;
    };
    std::vector<Gadget> gadgets(cycles.size());
    std::vector<index_t> spine_next(N, none);
    for (index_t cid = 0; cid < cycles.size(); ++cid) {
        const auto& cyc = cycles[cid];
        index_t q = cyc.size(), s = 0;
        for (index_t i = 1; i < q; ++i)
            if (height[cyc[i]] > height[cyc[s]] || (height[cyc[i]] == height[cyc[s]] && cyc[i] < cyc[s])) s = i;
        Gadget& g = gadgets[cid];
        g.spine.resize(q);
        for (index_t j = 1; j <= q; ++j) g.spine[j - 1] = cyc[(s + q - j) % q];
        for (index_t j = 0; j + 1 < q; ++j) spine_next[g.spine[j]] = g.spine[j + 1];
        g.e.cycle = q;
        g.key = cyc[0];
        for (index_t c : cyc) {
            g.e.size += size[c];
            g.key = std::min(g.key, minlab[c]);
        }
        g.e.terminal = q == 1 && cyc[0] >= real_count;
        g.e.wide = !g.e.terminal && q > width;
    }
    std::vector<index_t> gorder(gadgets.size());
    for (index_t i = 0; i < gorder.size(); ++i) gorder[i] = i;
    auto klass = [&](const Gadget& g) { return g.e.terminal ? 2 : g.e.wide ? 1 : 0; };
    std::sort(gorder.begin(), gorder.end(), [&](index_t a, index_t b) {
        const Gadget &x = gadgets[a], &y = gadgets[b];
        if (klass(x) != klass(y)) return klass(x) < klass(y);
        if (klass(x) == 0) {
            if (x.e.size != y.e.size) return x.e.size < y.e.size;
            if (x.e.cycle != y.e.cycle) return x.e.cycle < y.e.cycle;
        }
        if (klass(x) == 2) return x.spine[0] < y.spine[0];
        return x.key < y.key;
    });

    for (index_t v = 0; v < N; ++v) {
        auto b = kids.begin() + kid_off[v], e = kids.begin() + kid_off[v + 1];
        if (b == e) continue;
        std::sort(b, e, rest_less);
        if (spine_next[v] == none) {
            auto best = b;
            for (auto it = b + 1; it != e; ++it)
                if (taller(*it, *best)) best = it;
            std::rotate(b, best, best + 1);
        }
    }

    FuncLayout out;
    out.parens = BitSeq(2 * (N + 1));
    out.label_of_pre.reserve(N);
    index_t pos = 0;
    out.parens.set(pos++, true);
    std::vector<std::pair<index_t, index_t>> st;
    for (index_t gi : gorder) {
        const Gadget& g = gadgets[gi];
        out.gadgets.push_back(g.e);
        index_t r1 = g.spine[0];
        out.parens.set(pos++, true);
        out.label_of_pre.push_back(r1);
        st.push_back({r1, 0});
        while (!st.empty()) {
            auto [v, i] = st.back();
            index_t child = none;
            bool sp = spine_next[v] != none;
            if (sp && i == 0)
                child = spine_next[v];
            else if (kid_off[v] + i - sp < kid_off[v + 1])
                child = kids[kid_off[v] + i - sp];
            if (child == none) {
                ++pos;
                st.pop_back();
                continue;
            }
            ++st.back().second;
            out.parens.set(pos++, true);
            out.label_of_pre.push_back(child);
            st.push_back({child, 0});
        }
    }
    return out;
}

struct GadgetInfo {
    index_t root = 0;  ///< preorder of r^1 (super-root excluded)
    index_t size = 0;
    index_t cycle = 0;
    bool wide = false;
    bool terminal = false;
};

/// Label resolved from a T_f node: a real label, or the rank of an excluded node
/// among excluded nodes in preorder.
struct NodeLabel {
    bool excluded = false;
    index_t value = 0;
};

/// f : [N] -> [N] as T_f in balanced parentheses plus a permutation between
/// labels and preorders, and the gadget dictionaries:
///   sizes (A)         distinct narrow gadget sizes, increasing;
///   group_starts (B)  first preorder of each narrow size group;
///   cycle_sums (C)    multiset of p_i + s_i * #{size-s_i gadgets with cycle <= j}, j = 1..w';
///   wide (A')         (size, cycle) per wide or terminal gadget;
///   wide_roots (B')   root preorders of wide and terminal gadgets.
/// Preorders here exclude the super-root, so they run over [N).
class FuncRep {
  public:
    explicit FuncRep(const std::vector<index_t>& f, const FuncOptions& opt = {}) : FuncRep(f, opt, f.size()) {}

    /// Labels >= real_count are excluded from pi (see FuncLayout).
    FuncRep(const std::vector<index_t>& f, const FuncOptions& opt, index_t real_count) {
        N_ = f.size();
        if (real_count == 0 || real_count > N_) throw std::invalid_argument("FuncRep: real_count outside [1, N]");
        real_ = real_count;
        width_ = opt.width ? opt.width : default_width(real_count);
        auto lay = layout_function(f, width_, real_);
        tree_ = BpTree(std::move(lay.parens), opt.tree);
        inv_orient_ = opt.store_preorder_to_label;

        std::vector<index_t> excl, rank_of_label(real_);
        index_t r = 0;
        for (index_t p = 0; p < N_; ++p) {
            index_t v = lay.label_of_pre[p];
            if (v >= real_)
                excl.push_back(p);
            else
                rank_of_label[v] = r++;
        }
        excluded_ = excl.empty() ? Fid() : Fid(N_, excl);
        Permutation pi = Permutation::from_image(std::move(rank_of_label));
        pi_ = make_backend(opt.backend, inv_orient_ ? pi.inverse() : pi, opt.t);

        build_dicts(lay.gadgets);
    }

    FuncRep(FuncRep&&) noexcept = default;
    FuncRep& operator=(FuncRep&&) noexcept = default;

    index_t size() const noexcept { return N_; }
    index_t real_count() const noexcept { return real_; }
    index_t width() const noexcept { return width_; }
    const BpTree& tree() const noexcept { return tree_; }
    const PermBackend& pi() const noexcept { return *pi_; }
    bool stores_preorder_to_label() const noexcept { return inv_orient_; }
    index_t narrow_total() const noexcept { return narrow_total_; }
    index_t wide_count() const noexcept { return wide_roots_.count(); }

    index_t gadget_count() const {
        index_t c = wide_roots_.count();
        for (index_t i = 0; i < sizes_.size(); ++i) {
            index_t hi = i + 1 < sizes_.size() ? group_starts_.select(i + 1) : narrow_total_;
            c += (hi - group_starts_.select(i)) / sizes_[i];
        }
        return c;
    }

    // ---- label-level queries (functions on [n]) ----

    /// f^k(i) for k >= 0.
    index_t power(index_t i, std::uint64_t k, EvalCount* c = nullptr) const {
        require_plain("power");
        auto x = forward_pos(node_of(i, c), k, c);
        return label_at(*x, c).value;
    }

    /// { j : f^k(j) = i } for k >= 0, in T_f level order.
    std::vector<index_t> inverse_power(index_t i, std::uint64_t k, EvalCount* c = nullptr) const {
        require_plain("inverse_power");
        std::vector<index_t> out;
        for_each_pred_pos(node_of(i, c), k, [&](index_t y) { out.push_back(label_at(y, c).value); }, c);
        return out;
    }

    GadgetInfo gadget_of(index_t i, EvalCount* c = nullptr) const {
        return gadget_at(preorder_of_pos(node_of(i, c)), c);
    }

    // ---- node-level queries, used by the range representations ----

    /// BP position of real label i.
    index_t node_of(index_t i, EvalCount* c = nullptr) const {
        if (i >= real_)
            throw std::out_of_range("label " + std::to_string(i) + " outside [0, " + std::to_string(real_) + ")");
        index_t r = inv_orient_ ? pi_->inverse(i, c) : pi_->forward(i, c);
        if (excluded_.count()) {
            if (c) ++c->dict_ops;
            r = excluded_.select0(r);
        }
        return pos_of_preorder(r);
    }

    /// BP position of the excluded node of rank r (excluded nodes in preorder).
    index_t excluded_node(index_t r, EvalCount* c = nullptr) const {
        if (c) ++c->dict_ops;
        return pos_of_preorder(excluded_.select(r));
    }

    NodeLabel label_at(index_t pos, EvalCount* c = nullptr) const {
        index_t p = preorder_of_pos(pos);
        if (excluded_.count()) {
            if (c) ++c->dict_ops;
            if (excluded_.contains(p)) return {true, excluded_.fullrank(p)};
            p = excluded_.fullrank0(p);
        }
        return {false, inv_orient_ ? pi_->forward(p, c) : pi_->inverse(p, c)};
    }

    index_t pos_of_preorder(index_t p) const { return tree_.node_at(p + 1); }
    index_t preorder_of_pos(index_t pos) const { return tree_.preorder(pos) - 1; }

    /// Node reached after k steps, or nothing when the walk leaves a terminal root.
    std::optional<index_t> forward_pos(index_t x, std::uint64_t k, EvalCount* c = nullptr) const {
        if (k == 0) return x;
        index_t up = tree_.depth(x) - 2;  // steps to the gadget root r^1
        tick(c, 2);
        if (k <= up) return *tree_.levelancestor(x, k);
        index_t g = up == 0 ? x : *tree_.levelancestor(x, up);
        GadgetInfo G = gadget_at(preorder_of_pos(g), c);
        tick(c, 1);
        if (G.terminal) return std::nullopt;
        std::uint64_t rest = (k - up) % G.cycle;
        return g + (G.cycle - rest) % G.cycle;  // r^{1 - rest mod q}, spine is g .. g+q-1
    }

    /// Calls fn(y) for every node y with f^k(y) = x.
    template <class Fn>
    void for_each_pred_pos(index_t x, std::uint64_t k, Fn&& fn, EvalCount* c = nullptr) const {
        if (k == 0) {
            fn(x);
            return;
        }
        index_t D = tree_.depth(x);
        index_t g = D == 2 ? x : *tree_.levelancestor(x, D - 2);
        tick(c, 2);
        GadgetInfo G = gadget_at(preorder_of_pos(g), c);
        tick(c, 1);
        bool spine = !G.terminal && x - g < G.cycle;
        if (!spine) {
            emit_level(x, k, fn, c);
            return;
        }
        index_t q = G.cycle, j = x - g + 1;
        if (j >= 2) emit_level(x, k, fn, c);
        // nodes y reaching r^1 within k steps and then wrapping onto r^j:
        // depth(y) <= k + 2 and depth(y) = j + k + 1 (mod q)
        std::uint64_t max_depth = tree_.open_run(g) + 1;
        tick(c, 1);
        std::uint64_t limit = std::min<std::uint64_t>(k + 2, max_depth);
        std::uint64_t r0 = (j + 1 + k % q) % q;
        std::uint64_t start = 2 + (r0 + q - 2 % q) % q;
        for (std::uint64_t d = start; d <= limit; d += q) emit_level(g, d - 2, fn, c);
    }

    GadgetInfo gadget_at(index_t p, EvalCount* c = nullptr) const {
        if (p >= N_) throw std::out_of_range("gadget_at: preorder out of range");
        GadgetInfo G;
        if (p < narrow_total_) {
            if (c) c->dict_ops += 3;
            index_t i = group_starts_.fullrank(p + 1) - 1;
            index_t s = sizes_[i], pi0 = group_starts_.select(i);
            G.size = s;
            G.cycle = cycle_sums_.multiset_count_le(p) - i * weff_ + 1;
            G.root = pi0 + (p - pi0) / s * s;
        } else {
            if (c) c->dict_ops += 2;
            index_t i = wide_roots_.fullrank(p + 1) - 1;
            G.root = wide_roots_.select(i);
            G.size = wide_[2 * i];
            G.cycle = wide_[2 * i + 1];
            G.terminal = excluded_.count() && excluded_.contains(G.root);
            G.wide = !G.terminal;
        }
        return G;
    }

    SpaceBreakdown space() const {
        SpaceBreakdown s;
        append_prefixed(s, "pi.", pi_->space());
        append_prefixed(s, "tree.", tree_.space());
        s.push_back({"sizes", sizes_.space()});
        s.push_back({"group_starts", group_starts_.space()});
        s.push_back({"cycle_sums", cycle_sums_.space()});
        s.push_back({"wide", wide_.space()});
        s.push_back({"wide_roots", wide_roots_.space()});
        if (excluded_.universe()) s.push_back({"excluded", excluded_.space()});
        return s;
    }

    void save(ByteWriter& w) const {
        save_head(w);
        tree_.save(w);
        save_tail(w);
    }

    /// FNC1 without the embedded tree; the tree goes to its own BPT1 section.
    void save_split(ByteWriter& tree_w, ByteWriter& body_w) const {
        tree_.save(tree_w);
        save_head(body_w);
        save_tail(body_w);
    }

    static FuncRep load(ByteReader& r) {
        FuncRep f;
        f.load_head(r);
        f.tree_ = BpTree::load(r);
        f.load_tail(r);
        return f;
    }

    static FuncRep load_split(ByteReader& tree_r, ByteReader& body_r) {
        FuncRep f;
        f.tree_ = BpTree::load(tree_r);
        f.load_head(body_r);
        f.load_tail(body_r);
        return f;
    }

  private:
    FuncRep() = default;

    void save_head(ByteWriter& w) const {
        w.put_tag("FNC1");
        w.put_u64(N_);
        w.put_u64(real_);
        w.put_u64(width_);
        w.put_u64(weff_);
        w.put_u64(narrow_total_);
        w.put_u8(inv_orient_ ? 1 : 0);
    }

    void save_tail(ByteWriter& w) const {
        save_backend(w, *pi_);
        w.put_ints(sizes_);
        group_starts_.save(w);
        cycle_sums_.save(w);
        w.put_ints(wide_);
        wide_roots_.save(w);
        excluded_.save(w);
    }

    void load_head(ByteReader& r) {
        r.expect_tag("FNC1");
        N_ = r.get_u64();
        real_ = r.get_u64();
        width_ = r.get_u64();
        weff_ = r.get_u64();
        narrow_total_ = r.get_u64();
        inv_orient_ = r.get_u8() != 0;
    }

    void load_tail(ByteReader& r) {
        pi_ = load_backend(r);
        sizes_ = r.get_ints();
        group_starts_ = Fid::load(r);
        cycle_sums_ = Fid::load(r);
        wide_ = r.get_ints();
        wide_roots_ = Fid::load(r);
        excluded_ = Fid::load(r);
        validate();
    }

    static void tick(EvalCount* c, std::uint64_t n) {
        if (c) c->tree_ops += n;
    }

    void require_plain(const char* op) const {
        if (real_ != N_) throw std::logic_error(std::string(op) + ": representation has excluded nodes");
    }

    /// Descendants of x exactly `below` levels down, left to right.
    template <class Fn>
    void emit_level(index_t x, std::uint64_t below, Fn& fn, EvalCount* c) const {
        tick(c, 1);
        if (below >= tree_.open_run(x)) return;
        index_t y = x + below;  // leftmost path is a longest path
        for (;;) {
            fn(y);
            auto nx = tree_.levelsuccessor(y);
            tick(c, 2);
            if (!nx || !tree_.isancestor(x, *nx)) break;
            y = *nx;
        }
    }

    void build_dicts(const std::vector<GadgetEntry>& gs) {
        std::vector<index_t> sizes, starts, wide, wroots;
        std::vector<std::vector<index_t>> group_cycles;
        index_t pre = 0;
        weff_ = 1;
        for (const auto& g : gs) {
            if (!g.wide && !g.terminal) {
                if (sizes.empty() || sizes.back() != g.size) {
                    sizes.push_back(g.size);
                    starts.push_back(pre);
                    group_cycles.emplace_back();
                }
                group_cycles.back().push_back(g.cycle);
                weff_ = std::max(weff_, g.cycle);
            } else {
                wide.push_back(g.size);
                wide.push_back(g.cycle);
                wroots.push_back(pre);
            }
            pre += g.size;
            if (!g.wide && !g.terminal) narrow_total_ = pre;
        }
        std::vector<index_t> sums;
        for (index_t i = 0; i < sizes.size(); ++i) {
            const auto& cyc = group_cycles[i];  // nondecreasing
            index_t at = 0;
            for (index_t j = 1; j <= weff_; ++j) {
                while (at < cyc.size() && cyc[at] <= j) ++at;
                sums.push_back(starts[i] + sizes[i] * at);
            }
        }
        sizes_ = IntVector::from_values(sizes, field_width(N_ + 1));
        group_starts_ = Fid(narrow_total_, starts);
        cycle_sums_ = Fid::from_multiset(narrow_total_, sums);
        wide_ = IntVector::from_values(wide, field_width(N_ + 1));
        wide_roots_ = Fid(N_, wroots);
    }

    void validate() const {
        auto bad = [](const std::string& m) { throw FormatError("FNC1: " + m); };
        if (N_ == 0 || real_ == 0 || real_ > N_) bad("bad node counts");
        if (tree_.size() != N_ + 1) bad("tree size does not match N");
        if (pi_->size() != real_) bad("permutation size does not match real count");
        if (narrow_total_ > N_ || group_starts_.universe() != narrow_total_) bad("narrow section inconsistent");
        if (group_starts_.count() != sizes_.size()) bad("size table does not match group starts");
        if (cycle_sums_.count() != sizes_.size() * weff_) bad("cycle sums table has the wrong length");
        if (wide_roots_.universe() != N_ || wide_.size() != 2 * wide_roots_.count()) bad("wide tables inconsistent");
        if (real_ < N_ ? (excluded_.universe() != N_ || excluded_.count() != N_ - real_) : excluded_.universe() != 0)
            bad("excluded set inconsistent");
        index_t covered = narrow_total_;
        for (index_t i = 0; i < wide_roots_.count(); ++i) {
            if (wide_roots_.select(i) != covered || wide_[2 * i] == 0 || wide_[2 * i + 1] == 0) bad("wide gadget table broken");
            covered += wide_[2 * i];
        }
        if (covered != N_) bad("gadgets do not cover the tree");
        for (index_t i = 0; i < sizes_.size(); ++i) {
            index_t lo = group_starts_.select(i), hi = i + 1 < sizes_.size() ? group_starts_.select(i + 1) : narrow_total_;
            if (sizes_[i] == 0 || (hi - lo) % sizes_[i]) bad("narrow group not a multiple of its size");
        }
    }

    index_t N_ = 0, real_ = 0, width_ = 1, weff_ = 1, narrow_total_ = 0;
    bool inv_orient_ = false;
    BpTree tree_;
    std::unique_ptr<PermBackend> pi_;
    IntVector sizes_;
    Fid group_starts_, cycle_sums_;
    IntVector wide_;
    Fid wide_roots_;
    Fid excluded_;
};

}  // namespace spf
