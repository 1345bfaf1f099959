#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spf/binary_io.hpp"
#include "spf/bits.hpp"
#include "spf/fid.hpp"
#include "spf/level_ancestor.hpp"

namespace spf {

/// Build parameters; 0 selects the default derived from the node count.
struct BpParams {
    index_t superblock = 0;  ///< positions per superblock, rounded up to a multiple of block
    index_t block = 0;       ///< positions per block
    index_t delta = 0;       ///< largest supported |k - excess(i)| in excess search
    index_t branching = 0;   ///< fan-out of the in-superblock range trees
    index_t stride = 0;      ///< marking stride L, with 2L + 1 <= delta
};

/// Ordinal tree as a balanced parenthesis sequence (1 = open). A node is
/// the position of its open parenthesis; the root is 0 and has depth 1.
///
/// Excess search: blocks and superblocks carry the min/max excess of their
/// positions (always a contiguous integer range, since excess moves by one),
/// each superblock keeps an implicit f-ary tree over its block ranges, and
/// per direction every superblock stores
///   - links: for each excess in its own range, the nearest superblock in
///     that direction containing it, grouped into ranges of equal target;
///   - A_B: for each excess within delta outside its range, the nearest
///     position in that direction with that excess.
/// Level ancestor: distances up to delta - 1 use one prevexcess; longer ones
/// climb to a marked node (depth a multiple of L, height >= L), jump in the
/// marked forest, and finish with one more short query.
class BpTree {
  public:
    BpTree() = default;

    explicit BpTree(BitSeq parens, BpParams params = {}) : bits_(std::move(parens)) {
        validate();
        rs_ = RankSelect(&bits_, true, true);
        resolve(params);
        build_ranges();
        build_links<true>(fwd_);
        build_links<false>(bwd_);
        build_marked();
    }

    static BpTree from_string(const std::string& s, BpParams params = {}) {
        for (char c : s)
            if (c != '(' && c != ')') throw std::invalid_argument("BpTree: unexpected character in parenthesis string");
        return BpTree(BitSeq::from_string(s, '('), params);
    }

    /// parent[v] for v in [n], exactly one root marked by `no_parent`;
    /// children are visited in increasing label order.
    static BpTree from_parents(const std::vector<index_t>& parent, BpParams params = {}, index_t no_parent = ~index_t{0}) {
        return BpTree(parens_from_parents(parent, no_parent), params);
    }

    static BitSeq parens_from_parents(const std::vector<index_t>& parent, index_t no_parent = ~index_t{0}) {
        index_t n = parent.size();
        std::vector<index_t> first(n + 1, 0), kids;
        index_t root = no_parent;
        for (index_t v = 0; v < n; ++v) {
            if (parent[v] == no_parent) {
                if (root != no_parent) throw std::invalid_argument("parent array has more than one root");
                root = v;
            } else if (parent[v] >= n) {
                throw std::invalid_argument("parent of node " + std::to_string(v) + " is out of range");
            } else {
                ++first[parent[v] + 1];
            }
        }
        if (root == no_parent) throw std::invalid_argument("parent array has no root");
        for (index_t v = 0; v < n; ++v) first[v + 1] += first[v];
        kids.resize(n ? n - 1 : 0);
        std::vector<index_t> fill(first.begin(), first.end() - 1);
        for (index_t v = 0; v < n; ++v)
            if (parent[v] != no_parent) kids[fill[parent[v]]++] = v;
        BitSeq out(2 * n);
        index_t pos = 0, visited = 0;
        std::vector<std::pair<index_t, index_t>> st{{root, first[root]}};
        out.set(pos++, true);
        ++visited;
        while (!st.empty()) {
            auto& [v, next] = st.back();
            if (next < first[v + 1]) {
                index_t c = kids[next++];
                out.set(pos++, true);
                ++visited;
                st.push_back({c, first[c]});
            } else {
                ++pos;
                st.pop_back();
            }
        }
        if (visited != n) throw std::invalid_argument("parent array contains a cycle");
        return out;
    }

    BpTree(const BpTree& o) { *this = o; }
    BpTree(BpTree&& o) noexcept { *this = std::move(o); }
    BpTree& operator=(const BpTree& o) {
        if (this != &o) {
            copy_fields(o);
            rebind();
        }
        return *this;
    }
    BpTree& operator=(BpTree&& o) noexcept {
        move_fields(std::move(o));
        rebind();
        return *this;
    }

    index_t size() const noexcept { return bits_.size() / 2; }
    index_t length() const noexcept { return bits_.size(); }
    const BitSeq& parens() const noexcept { return bits_; }
    const BpParams& params() const noexcept { return p_; }

    bool is_open(index_t i) const { return bits_.access(i); }

    /// Opens minus closes in [0, i].
    std::int64_t excess(index_t i) const {
        check_pos(i);
        return excess_at(i);
    }

    index_t findclose(index_t i) const {
        require_open(i, "findclose");
        return *search<true>(i, excess_at(i) - 1);
    }

    index_t findopen(index_t i) const {
        check_pos(i);
        if (bits_[i]) throw std::invalid_argument("findopen: position " + std::to_string(i) + " is an open parenthesis");
        auto j = search<false>(i, excess_at(i));
        return j ? *j + 1 : 0;
    }

    /// Least j > i with excess(j) = k.
    std::optional<index_t> nextexcess(index_t i, std::int64_t k) const {
        check_pos(i);
        check_delta(i, k);
        return search<true>(i, k);
    }

    /// Greatest j < i with excess(j) = k.
    std::optional<index_t> prevexcess(index_t i, std::int64_t k) const {
        check_pos(i);
        check_delta(i, k);
        return search<false>(i, k);
    }

    index_t depth(index_t x) const {
        require_open(x, "depth");
        return static_cast<index_t>(excess_at(x));
    }

    std::optional<index_t> parent(index_t x) const { return levelancestor(x, 1); }

    std::optional<index_t> firstchild(index_t x) const {
        require_open(x, "firstchild");
        if (x + 1 < length() && bits_[x + 1]) return x + 1;
        return std::nullopt;
    }

    /// Ancestor k levels above x; nothing when k >= depth(x).
    std::optional<index_t> levelancestor(index_t x, index_t k) const {
        require_open(x, "levelancestor");
        index_t d = static_cast<index_t>(excess_at(x));
        if (k >= d) return std::nullopt;
        if (k == 0) return x;
        if (k + 1 <= p_.delta) return ancestor_short(x, k);
        index_t L = p_.stride;
        index_t D = L * ((d - L) / L);  // marked ancestor depth, L <= d - D < 2L
        index_t y = ancestor_short(x, d - D);
        index_t target = d - k;
        index_t dz = L * ((target + L - 1) / L);
        index_t z = marked_pos_[marked_la_.ancestor(marked_id(y), (D - dz) / L)];
        return dz == target ? z : ancestor_short(z, dz - target);
    }

    std::optional<index_t> levelsuccessor(index_t x) const {
        require_open(x, "levelsuccessor");
        std::int64_t d = excess_at(x);
        return search<true>(*search<true>(x, d - 1), d);
    }

    std::optional<index_t> levelpredecessor(index_t x) const {
        require_open(x, "levelpredecessor");
        auto j = search<false>(x, excess_at(x));
        if (!j) return std::nullopt;
        return findopen(*j + 1);
    }

    /// Reflexive: every node is its own ancestor.
    bool isancestor(index_t x, index_t y) const {
        require_open(x, "isancestor");
        require_open(y, "isancestor");
        return x <= y && y < findclose(x);
    }

    index_t preorder(index_t x) const {
        require_open(x, "preorder");
        return rs_.rank1(x);
    }
    index_t node_at(index_t preorder_rank) const {
        if (preorder_rank >= size()) throw std::out_of_range("node_at: preorder rank out of range");
        return rs_.select1(preorder_rank);
    }
    index_t subtree_size(index_t x) const { return (findclose(x) - x + 1) / 2; }

    /// Number of consecutive opens starting at x (the leftmost downward path).
    index_t open_run(index_t x) const {
        require_open(x, "open_run");
        return rs_.select0(rs_.rank0(x)) - x;
    }

    index_t superblock_count() const noexcept { return nsb_; }
    index_t link_ranges(bool forward) const noexcept { return (forward ? fwd_ : bwd_).tgt.size(); }
    index_t marked_count() const noexcept { return marked_pos_.size(); }

    SpaceBreakdown space() const {
        SpaceBits links{0, 0}, ab{0, 0};
        for (const LinkDir* l : {&fwd_, &bwd_}) {
            links.index += l->ptr.space().payload + l->offs.space().payload + l->tgt.space().payload +
                           l->bm.size() + l->bm_rs.space().index + l->bm_ptr.space().payload;
            ab.index += l->ab.space().payload;
        }
        return {
            {"parens", bits_.space()},
            {"rank_select", rs_.space()},
            {"block_ranges", {0, blk_min_.space().payload + blk_max_.space().payload}},
            {"superblock_trees", {0, node_min_.space().payload + node_max_.space().payload}},
            {"superblock_ranges", {0, sb_e1_.space().payload + sb_e2_.space().payload}},
            {"links", links},
            {"overflow_arrays", ab},
            {"marked", {0, marked_pos_.space().payload + marked_la_.space().index}},
        };
    }

    void save(ByteWriter& w) const {
        w.put_tag("BPT1");
        w.put_u64(length());
        w.put_bits(bits_);
        w.put_u64(p_.superblock);
        w.put_u64(p_.block);
        w.put_u64(p_.delta);
        w.put_u64(p_.branching);
        w.put_u64(p_.stride);
    }

    static BpTree load(ByteReader& r) {
        r.expect_tag("BPT1");
        std::uint64_t len = r.get_u64();
        BitSeq bits = r.get_bits();
        if (bits.size() != len) throw FormatError("BPT1: length field does not match bitmap");
        BpParams p;
        p.superblock = r.get_u64();
        p.block = r.get_u64();
        p.delta = r.get_u64();
        p.branching = r.get_u64();
        p.stride = r.get_u64();
        try {
            return BpTree(std::move(bits), p);
        } catch (const std::invalid_argument& e) {
            throw FormatError(std::string("BPT1: ") + e.what());
        }
    }

  private:
    struct LinkDir {
        IntVector ptr;     // first range of each superblock
        IntVector offs;    // range start, relative to the superblock's e1
        IntVector tgt;     // target superblock, nsb = none
        BitSeq bm;         // range starts for superblocks with many ranges
        RankSelect bm_rs;
        IntVector bm_ptr;  // offset of each superblock's slice in bm, or its size if absent
        IntVector ab;      // 2 delta entries per superblock, length() = none
    };

    static constexpr std::int64_t kEmptyLo = 1, kEmptyHi = 0;

    // ---- positions and excess ----

    std::int64_t excess_at(index_t i) const noexcept {
        return 2 * static_cast<std::int64_t>(rs_.rank1(i + 1)) - static_cast<std::int64_t>(i + 1);
    }
    std::int64_t excess_before(index_t p) const noexcept {
        return 2 * static_cast<std::int64_t>(rs_.rank1(p)) - static_cast<std::int64_t>(p);
    }
    std::int64_t step(index_t p) const noexcept { return bits_[p] ? 1 : -1; }

    void check_pos(index_t i) const {
        if (i >= length())
            throw std::out_of_range("position " + std::to_string(i) + " outside [0, " + std::to_string(length()) + ")");
    }
    void require_open(index_t x, const char* op) const {
        check_pos(x);
        if (!bits_[x])
            throw std::invalid_argument(std::string(op) + ": position " + std::to_string(x) + " is not a node (open parenthesis)");
    }
    void check_delta(index_t i, std::int64_t k) const {
        std::int64_t e = excess_at(i);
        std::int64_t diff = k > e ? k - e : e - k;
        if (static_cast<index_t>(diff) > p_.delta)
            throw std::out_of_range("excess search: |k - excess(i)| = " + std::to_string(diff) + " exceeds delta = " +
                                    std::to_string(p_.delta));
    }

    void validate() const {
        index_t len = bits_.size();
        if (len < 2 || len % 2) throw std::invalid_argument("BpTree: sequence length must be even and at least 2");
        std::int64_t e = 0;
        for (index_t i = 0; i < len; ++i) {
            e += bits_[i] ? 1 : -1;
            if (e < 0) throw std::invalid_argument("BpTree: unbalanced at position " + std::to_string(i));
            if (e == 0 && i + 1 < len)
                throw std::invalid_argument("BpTree: sequence is a forest (root closes at " + std::to_string(i) + ")");
        }
        if (e != 0) throw std::invalid_argument("BpTree: unbalanced, final excess " + std::to_string(e));
    }

    void resolve(BpParams in) {
        index_t n = size();
        index_t lg = std::max<index_t>(1, ceil_log2(n));
        p_.block = in.block ? in.block : 64;
        if (p_.block > 4096) throw std::invalid_argument("BpTree: block size above 4096");
        index_t s = in.superblock ? in.superblock : std::min(lg * lg * lg * lg, std::max<index_t>(64, length() / 4));
        s = std::max(s, p_.block);
        p_.superblock = (s + p_.block - 1) / p_.block * p_.block;
        p_.branching = in.branching ? in.branching : std::max<index_t>(2, static_cast<index_t>(std::sqrt(double(lg))));
        if (p_.branching < 2) throw std::invalid_argument("BpTree: branching must be >= 2");
        p_.delta = in.delta ? in.delta : std::max<index_t>(3, std::min<index_t>(lg * lg, 64));
        if (p_.delta < 3) throw std::invalid_argument("BpTree: delta must be >= 3");
        p_.stride = in.stride ? in.stride : (p_.delta - 1) / 2;
        if (p_.stride < 1 || 2 * p_.stride + 1 > p_.delta)
            throw std::invalid_argument("BpTree: stride L must satisfy 1 <= L and 2L + 1 <= delta");
    }

    // ---- range index ----

    void build_ranges() {
        index_t N = length(), b = p_.block, s = p_.superblock, f = p_.branching;
        nb_ = (N + b - 1) / b;
        bps_ = s / b;
        nsb_ = (nb_ + bps_ - 1) / bps_;

        std::vector<std::int64_t> bmin(nb_), bmax(nb_);
        blk_min_ = IntVector(nb_, field_width(2 * b + 1));
        blk_max_ = IntVector(nb_, field_width(2 * b + 1));
        std::int64_t e = 0;
        for (index_t blk = 0; blk < nb_; ++blk) {
            std::int64_t base = e, lo = INT64_MAX, hi = INT64_MIN;
            for (index_t p = blk * b; p < std::min(N, (blk + 1) * b); ++p) {
                e += step(p);
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
            bmin[blk] = lo;
            bmax[blk] = hi;
            blk_min_.set(blk, static_cast<index_t>(lo - base + std::int64_t(b)));
            blk_max_.set(blk, static_cast<index_t>(hi - base + std::int64_t(b)));
        }

        level_count_.assign(1, bps_);
        level_off_.assign(1, 0);
        index_t total = 0;
        while (level_count_.back() > 1) {
            level_off_.push_back(total);
            level_count_.push_back((level_count_.back() + f - 1) / f);
            total += level_count_.back();
        }
        nodes_per_sb_ = total;
        unsigned nw = field_width(2 * s + 2);
        node_min_ = IntVector(nsb_ * nodes_per_sb_, nw);
        node_max_ = IntVector(nsb_ * nodes_per_sb_, nw);
        unsigned ew = field_width(size() + 2);
        sb_e1_ = IntVector(nsb_, ew);
        sb_e2_ = IntVector(nsb_, ew);

        std::vector<std::int64_t> lo, hi, plo, phi;
        for (index_t sb = 0; sb < nsb_; ++sb) {
            std::int64_t base = excess_before(sb * s);
            lo.assign(bps_, kEmptyLo);
            hi.assign(bps_, kEmptyHi);
            for (index_t x = 0; x < bps_; ++x) {
                index_t blk = sb * bps_ + x;
                if (blk < nb_) {
                    lo[x] = bmin[blk];
                    hi[x] = bmax[blk];
                }
            }
            for (std::size_t l = 1; l < level_count_.size(); ++l) {
                plo.assign(level_count_[l], kEmptyLo);
                phi.assign(level_count_[l], kEmptyHi);
                for (index_t x = 0; x < level_count_[l - 1]; ++x) {
                    if (lo[x] > hi[x]) continue;
                    index_t px = x / f;
                    if (plo[px] > phi[px]) {
                        plo[px] = lo[x];
                        phi[px] = hi[x];
                    } else {
                        plo[px] = std::min(plo[px], lo[x]);
                        phi[px] = std::max(phi[px], hi[x]);
                    }
                }
                for (index_t px = 0; px < level_count_[l]; ++px) {
                    index_t at = sb * nodes_per_sb_ + level_off_[l] + px;
                    if (plo[px] > phi[px]) {
                        node_min_.set(at, 2 * s + 1);
                        node_max_.set(at, 0);
                    } else {
                        node_min_.set(at, static_cast<index_t>(plo[px] - base + std::int64_t(s)));
                        node_max_.set(at, static_cast<index_t>(phi[px] - base + std::int64_t(s)));
                    }
                }
                lo.swap(plo);
                hi.swap(phi);
            }
            // lo[0], hi[0] now cover the whole superblock
            sb_e1_.set(sb, static_cast<index_t>(lo[0]));
            sb_e2_.set(sb, static_cast<index_t>(hi[0]));
        }
    }

    /// Absolute excess range of node x on level l of superblock sb.
    std::pair<std::int64_t, std::int64_t> node_range(index_t sb, std::int64_t sb_base, std::size_t l, index_t x) const {
        if (l == 0) {
            index_t blk = sb * bps_ + x;
            if (blk >= nb_) return {kEmptyLo, kEmptyHi};
            std::int64_t base = excess_before(blk * p_.block) - std::int64_t(p_.block);
            return {base + std::int64_t(blk_min_[blk]), base + std::int64_t(blk_max_[blk])};
        }
        index_t at = sb * nodes_per_sb_ + level_off_[l] + x;
        std::int64_t lo = std::int64_t(node_min_[at]), hi = std::int64_t(node_max_[at]);
        if (lo > hi) return {kEmptyLo, kEmptyHi};
        std::int64_t off = sb_base - std::int64_t(p_.superblock);
        return {off + lo, off + hi};
    }

    static bool holds(std::pair<std::int64_t, std::int64_t> r, std::int64_t k) { return r.first <= k && k <= r.second; }

    template <bool Fwd>
    std::optional<index_t> scan_block(index_t blk, std::int64_t k) const {
        index_t lo = blk * p_.block, hi = std::min(length(), lo + p_.block);
        if (Fwd) {
            std::int64_t e = excess_before(lo);
            for (index_t p = lo; p < hi; ++p)
                if ((e += step(p)) == k) return p;
        } else {
            std::int64_t e = excess_at(hi - 1);
            for (index_t p = hi; p-- > lo;) {
                if (e == k) return p;
                e -= step(p);
            }
        }
        return std::nullopt;
    }

    /// From node (l, x), walks down to the first (Fwd) or last leaf holding k.
    template <bool Fwd>
    index_t descend(index_t sb, std::int64_t sb_base, std::size_t l, index_t x, std::int64_t k) const {
        index_t f = p_.branching;
        while (l > 0) {
            index_t first = x * f, last = std::min(first + f, level_count_[l - 1]);
            --l;
            bool found = false;
            if (Fwd) {
                for (index_t c = first; c < last && !found; ++c)
                    if (holds(node_range(sb, sb_base, l, c), k)) x = c, found = true;
            } else {
                for (index_t c = last; c-- > first && !found;)
                    if (holds(node_range(sb, sb_base, l, c), k)) x = c, found = true;
            }
            if (!found) throw std::logic_error("BpTree: excess range tree is inconsistent");
        }
        return x;
    }

    /// Nearest block strictly after (Fwd) or before leaf x0 in superblock sb holding k.
    template <bool Fwd>
    std::optional<index_t> tree_search(index_t sb, index_t x0, std::int64_t k) const {
        std::int64_t sb_base = excess_before(sb * p_.superblock);
        index_t f = p_.branching, x = x0;
        for (std::size_t l = 0; l + 1 < level_count_.size(); ++l, x /= f) {
            index_t first = x / f * f, last = std::min(first + f, level_count_[l]);
            if (Fwd) {
                for (index_t y = x + 1; y < last; ++y)
                    if (holds(node_range(sb, sb_base, l, y), k)) return sb * bps_ + descend<Fwd>(sb, sb_base, l, y, k);
            } else {
                for (index_t y = x; y-- > first;)
                    if (holds(node_range(sb, sb_base, l, y), k)) return sb * bps_ + descend<Fwd>(sb, sb_base, l, y, k);
            }
        }
        return std::nullopt;
    }

    template <bool Fwd>
    index_t whole_superblock_search(index_t sb, std::int64_t k) const {
        std::int64_t sb_base = excess_before(sb * p_.superblock);
        std::size_t top = level_count_.size() - 1;
        return sb * bps_ + descend<Fwd>(sb, sb_base, top, 0, k);
    }

    template <bool Fwd>
    std::optional<index_t> search(index_t i, std::int64_t k) const {
        index_t b = p_.block;
        index_t blk = i / b;
        // rest of i's own block
        if (Fwd) {
            std::int64_t e = excess_at(i);
            for (index_t p = i + 1; p < std::min(length(), (blk + 1) * b); ++p)
                if ((e += step(p)) == k) return p;
        } else {
            std::int64_t e = excess_at(i) - step(i);
            for (index_t p = i; p-- > blk * b;) {
                if (e == k) return p;
                e -= step(p);
            }
        }
        index_t sb = blk / bps_;
        if (auto hit = tree_search<Fwd>(sb, blk % bps_, k)) return scan_block<Fwd>(*hit, k);
        const LinkDir& L = Fwd ? fwd_ : bwd_;
        std::int64_t e1 = std::int64_t(sb_e1_[sb]), e2 = std::int64_t(sb_e2_[sb]);
        if (e1 <= k && k <= e2) {
            index_t t = link_target(L, sb, static_cast<index_t>(k - e1));
            if (t == nsb_) return std::nullopt;
            return scan_block<Fwd>(whole_superblock_search<Fwd>(t, k), k);
        }
        std::int64_t d = std::int64_t(p_.delta);
        std::int64_t slot = k < e1 ? k - (e1 - d) : d + (k - e2 - 1);
        if (slot < 0 || slot >= 2 * d) throw std::logic_error("BpTree: excess query outside the overflow window");
        index_t v = L.ab[sb * 2 * p_.delta + static_cast<index_t>(slot)];
        if (v == length()) return std::nullopt;
        return v;
    }

    // ---- links and overflow arrays ----

    index_t link_target(const LinkDir& L, index_t sb, index_t off) const {
        index_t lo = L.ptr[sb], hi = L.ptr[sb + 1];
        index_t bp = L.bm_ptr[sb];
        if (bp != L.bm.size()) {
            index_t r = L.bm_rs.rank1(bp + off + 1) - L.bm_rs.rank1(bp) - 1;
            return L.tgt[lo + r];
        }
        // greatest range start <= off
        while (hi - lo > 1) {
            index_t mid = lo + (hi - lo) / 2;
            if (L.offs[mid] <= off)
                lo = mid;
            else
                hi = mid;
        }
        return L.tgt[lo];
    }

    template <bool Fwd>
    void build_links(LinkDir& L) {
        index_t N = length(), s = p_.superblock, d = p_.delta, n = size();
        index_t none_pos = N;
        std::vector<index_t> near(n + 2, nsb_), nearpos(n + 2, none_pos);
        std::vector<std::vector<std::pair<index_t, index_t>>> ranges(nsb_);
        std::vector<index_t> ab(nsb_ * 2 * d, none_pos);
        for (index_t step_i = 0; step_i < nsb_; ++step_i) {
            index_t sb = Fwd ? nsb_ - 1 - step_i : step_i;
            index_t e1 = sb_e1_[sb], e2 = sb_e2_[sb];
            auto& rg = ranges[sb];
            for (index_t k = e1; k <= e2; ++k)
                if (rg.empty() || rg.back().second != near[k]) rg.push_back({k - e1, near[k]});
            for (index_t slot = 0; slot < 2 * d; ++slot) {
                std::int64_t k = slot < d ? std::int64_t(e1) - std::int64_t(d) + std::int64_t(slot)
                                          : std::int64_t(e2) + 1 + std::int64_t(slot - d);
                if (k >= 0 && k <= std::int64_t(n)) ab[sb * 2 * d + slot] = nearpos[k];
            }
            for (index_t k = e1; k <= e2; ++k) near[k] = sb;
            index_t lo = sb * s, hi = std::min(N, lo + s);
            if (Fwd) {
                for (index_t p = hi; p-- > lo;) nearpos[excess_at(p)] = p;
            } else {
                for (index_t p = lo; p < hi; ++p) nearpos[excess_at(p)] = p;
            }
        }
        index_t total = 0;
        for (const auto& rg : ranges) total += rg.size();
        // visibility (planarity) bound on the number of link ranges
        if (total > 6 * nsb_) throw std::logic_error("BpTree: link ranges exceed the planarity bound");
        index_t threshold = std::max<index_t>(1, ceil_log2(N));
        L.ptr = IntVector(nsb_ + 1, field_width(total + 1));
        L.offs = IntVector(total, field_width(s + 2));
        L.tgt = IntVector(total, field_width(nsb_ + 1));
        std::vector<index_t> bm_ptr(nsb_);
        index_t bm_len = 0;
        for (index_t sb = 0; sb < nsb_; ++sb)
            if (ranges[sb].size() > threshold) bm_len += sb_e2_[sb] - sb_e1_[sb] + 1;
        L.bm = BitSeq(bm_len);
        index_t at = 0, bat = 0;
        for (index_t sb = 0; sb < nsb_; ++sb) {
            L.ptr.set(sb, at);
            bool big = ranges[sb].size() > threshold;
            bm_ptr[sb] = big ? bat : bm_len;
            for (auto [off, t] : ranges[sb]) {
                L.offs.set(at, off);
                L.tgt.set(at, t);
                if (big) L.bm.set(bat + off, true);
                ++at;
            }
            if (big) bat += sb_e2_[sb] - sb_e1_[sb] + 1;
        }
        L.ptr.set(nsb_, at);
        L.bm_ptr = IntVector::from_values(bm_ptr, field_width(bm_len + 1));
        L.bm_rs = RankSelect(&L.bm, false, false);
        L.ab = IntVector::from_values(ab, field_width(N + 1));
    }

    // ---- marked nodes ----

    index_t ancestor_short(index_t x, index_t k) const {
        std::int64_t target = excess_at(x) - std::int64_t(k);
        auto j = search<false>(x, target - 1);
        return j ? *j + 1 : 0;
    }

    index_t marked_id(index_t pos) const {
        index_t lo = 0, hi = marked_pos_.size();
        while (lo < hi) {
            index_t mid = lo + (hi - lo) / 2;
            if (marked_pos_[mid] < pos)
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo == marked_pos_.size() || marked_pos_[lo] != pos) throw std::logic_error("BpTree: expected a marked node");
        return lo;
    }

    void build_marked() {
        index_t N = length(), L = p_.stride;
        std::vector<std::uint32_t> height(size(), 0);
        {
            std::vector<index_t> st;  // preorder ranks of open ancestors
            std::vector<std::uint32_t> deepest;
            index_t pre = 0;
            for (index_t i = 0; i < N; ++i) {
                if (bits_[i]) {
                    st.push_back(pre++);
                    deepest.push_back(static_cast<std::uint32_t>(st.size()));
                } else {
                    index_t v = st.back();
                    std::uint32_t dv = static_cast<std::uint32_t>(st.size());
                    std::uint32_t dd = deepest.back();
                    height[v] = dd - dv;
                    st.pop_back();
                    deepest.pop_back();
                    if (!deepest.empty()) deepest.back() = std::max(deepest.back(), dd);
                }
            }
        }
        std::vector<index_t> pos, par;
        std::vector<index_t> mst;  // marked ids on the current root path
        std::vector<bool> open_marked;
        index_t pre = 0, depth = 0;
        for (index_t i = 0; i < N; ++i) {
            if (bits_[i]) {
                ++depth;
                bool m = depth % L == 0 && height[pre] >= L;
                open_marked.push_back(m);
                if (m) {
                    par.push_back(mst.empty() ? LadderLevelAncestor::none : mst.back());
                    mst.push_back(pos.size());
                    pos.push_back(i);
                }
                ++pre;
            } else {
                if (open_marked.back()) mst.pop_back();
                open_marked.pop_back();
                --depth;
            }
        }
        marked_pos_ = IntVector::from_values(pos, field_width(N + 1));
        marked_la_ = LadderLevelAncestor(par);
    }

    // ---- copy support ----

    void rebind() {
        rs_.rebind(&bits_);
        fwd_.bm_rs.rebind(&fwd_.bm);
        bwd_.bm_rs.rebind(&bwd_.bm);
    }

    template <class T>
    void assign_from(T&& o) {
        bits_ = std::forward<T>(o).bits_;
        rs_ = std::forward<T>(o).rs_;
        p_ = o.p_;
        nb_ = o.nb_;
        bps_ = o.bps_;
        nsb_ = o.nsb_;
        nodes_per_sb_ = o.nodes_per_sb_;
        level_count_ = std::forward<T>(o).level_count_;
        level_off_ = std::forward<T>(o).level_off_;
        blk_min_ = std::forward<T>(o).blk_min_;
        blk_max_ = std::forward<T>(o).blk_max_;
        node_min_ = std::forward<T>(o).node_min_;
        node_max_ = std::forward<T>(o).node_max_;
        sb_e1_ = std::forward<T>(o).sb_e1_;
        sb_e2_ = std::forward<T>(o).sb_e2_;
        fwd_ = std::forward<T>(o).fwd_;
        bwd_ = std::forward<T>(o).bwd_;
        marked_pos_ = std::forward<T>(o).marked_pos_;
        marked_la_ = std::forward<T>(o).marked_la_;
    }
    void copy_fields(const BpTree& o) { assign_from(o); }
    void move_fields(BpTree&& o) { assign_from(std::move(o)); }

    BitSeq bits_;
    RankSelect rs_;
    BpParams p_;
    index_t nb_ = 0, bps_ = 1, nsb_ = 0, nodes_per_sb_ = 0;
    std::vector<index_t> level_count_, level_off_;
    IntVector blk_min_, blk_max_;    // relative to the excess before the block, offset by b
    IntVector node_min_, node_max_;  // relative to the excess before the superblock, offset by s
    IntVector sb_e1_, sb_e2_;        // absolute
    LinkDir fwd_, bwd_;
    IntVector marked_pos_;
    LadderLevelAncestor marked_la_;
};

}  // namespace spf
