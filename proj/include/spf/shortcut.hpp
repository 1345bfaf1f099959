#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spf/backend.hpp"
#include "spf/fid.hpp"

namespace spf {

/// Back-link index that lets pi^-1 be answered with at most t+1 forward
/// evaluations of a black-box pi.
///
/// For every cycle c_0 .. c_{k-1} (c_0 its minimum) with k > t, the
/// preimages of c_0, c_t, c_2t, ... are holders; the holder of c_{it}
/// stores the holder of c_{(i-1)t}, cyclically over the holders of that
/// cycle. Holders are kept in an indexable dictionary and their links in a
/// packed array ordered by holder rank.
class ShortcutIndex {
  public:
    ShortcutIndex() = default;

    /// Builds from a forward oracle. Only `forward` is used to reach pi; its
    /// evaluations are tallied in `build_count` when given.
    template <class Forward>
    static ShortcutIndex build(index_t n, Forward&& forward, index_t t, EvalCount* build_count = nullptr) {
        if (t < 2) throw std::invalid_argument("shortcut spacing t must be >= 2, got " + std::to_string(t));
        ShortcutIndex idx;
        idx.n_ = n;
        idx.t_ = t;
        std::vector<std::pair<index_t, index_t>> holder_links;
        std::vector<bool> seen(n, false);
        std::vector<index_t> holders;  // holders[i] = preimage of c_{it}
        for (index_t start = 0; start < n; ++start) {
            if (seen[start]) continue;
            holders.clear();
            index_t x = start, j = 0;
            // walk c_0 = start, c_1, ...; c_j is the preimage of c_{j+1}
            while (true) {
                seen[x] = true;
                index_t nx = forward(x);
                if (build_count) ++build_count->forward_evals;
                if (nx == start) break;
                if ((j + 1) % t == 0) holders.push_back(x);
                x = nx;
                ++j;
            }
            index_t k = j + 1;
            if (k <= t) continue;
            // the preimage of c_0 closes the cycle; it is holder 0
            holders.insert(holders.begin(), x);
            std::size_t h = holders.size();
            for (std::size_t i = 0; i < h; ++i) holder_links.emplace_back(holders[i], holders[(i + h - 1) % h]);
        }
        std::sort(holder_links.begin(), holder_links.end());
        std::vector<index_t> keys(holder_links.size());
        idx.links_ = IntVector(holder_links.size(), field_width(n));
        for (std::size_t r = 0; r < holder_links.size(); ++r) {
            keys[r] = holder_links[r].first;
            idx.links_.set(r, holder_links[r].second);
        }
        idx.holders_ = IndexableDict(n, keys);
        return idx;
    }

    static ShortcutIndex build(const Permutation& pi, index_t t, EvalCount* build_count = nullptr) {
        return build(pi.size(), [&](index_t i) { return pi[i]; }, t, build_count);
    }

    /// pi^-1(x). Follows at most one shortcut per query, then walks forward.
    template <class Forward>
    index_t inverse(index_t x, Forward&& forward, EvalCount* count = nullptr) const {
        if (x >= n_) throw std::out_of_range("shortcut inverse: argument out of range");
        index_t i = x;
        bool jumped = false;
        for (index_t steps = 0;; ++steps) {
            if (steps > n_) throw std::runtime_error("shortcut inverse: walk did not return to its start (corrupted index)");
            index_t next = forward(i);
            if (count) ++count->forward_evals;
            if (next == x) return i;
            if (!jumped) {
                if (count) ++count->dict_ops;
                std::int64_t r = holders_.partial_rank(i);
                if (r >= 0) {
                    i = links_[static_cast<index_t>(r)];
                    jumped = true;
                    continue;
                }
            }
            i = next;
        }
    }

    /// Literal form of the published loop: a shortcut is taken every time
    /// the current index is a holder. Gives up after `max_steps` evaluations
    /// and returns nothing (it can cycle among holders forever).
    template <class Forward>
    std::optional<index_t> inverse_unbounded_jumps(index_t x, Forward&& forward, std::uint64_t max_steps) const {
        index_t i = x;
        for (std::uint64_t step = 0; step < max_steps; ++step) {
            index_t next = forward(i);
            if (next == x) return i;
            std::int64_t r = holders_.partial_rank(i);
            i = r >= 0 ? links_[static_cast<index_t>(r)] : next;
        }
        return std::nullopt;
    }

    index_t size() const noexcept { return n_; }
    index_t spacing() const noexcept { return t_; }
    index_t shortcut_count() const noexcept { return holders_.count(); }
    const IndexableDict& holders() const noexcept { return holders_; }
    index_t link_of_rank(index_t r) const { return links_.at(r); }

    SpaceBreakdown space() const { return {{"holders", holders_.space()}, {"links", links_.space()}}; }

    void save(ByteWriter& w) const {
        w.put_tag("SHC1");
        w.put_u64(n_);
        w.put_u64(t_);
        w.put_u64(shortcut_count());
        holders_.save(w);
        w.put_ints(links_);
    }

    static ShortcutIndex load(ByteReader& r) {
        r.expect_tag("SHC1");
        ShortcutIndex idx;
        idx.n_ = r.get_u64();
        idx.t_ = r.get_u64();
        index_t s = r.get_u64();
        idx.holders_ = IndexableDict::load(r);
        idx.links_ = r.get_ints();
        if (idx.t_ < 2 || idx.holders_.universe() != idx.n_ || idx.holders_.count() != s || idx.links_.size() != s)
            throw FormatError("SHC1: inconsistent header");
        for (index_t i = 0; i < s; ++i)
            if (idx.links_[i] >= idx.n_) throw FormatError("SHC1: link outside [0, n)");
        return idx;
    }

  private:
    index_t n_ = 0;
    index_t t_ = 2;
    IndexableDict holders_;
    IntVector links_;
};

/// Explicit image array plus a shortcut index: O(1) forward, at most t+1
/// array reads for inverse.
class ShortcutPerm final : public PermBackend {
  public:
    ShortcutPerm(const Permutation& pi, index_t t)
        : image_(IntVector::from_values(pi.image(), field_width(pi.size()))),
          index_(ShortcutIndex::build(pi, t)) {}

    ShortcutPerm(IntVector image, ShortcutIndex index) : image_(std::move(image)), index_(std::move(index)) {
        if (index_.size() != image_.size()) throw FormatError("shortcut index size does not match image");
    }

    BackendKind kind() const noexcept override { return BackendKind::shortcut; }
    index_t size() const noexcept override { return image_.size(); }
    const ShortcutIndex& index() const noexcept { return index_; }

    SpaceBreakdown space() const override {
        SpaceBreakdown s{{"image", image_.space()}};
        append_prefixed(s, "shortcut.", index_.space());
        return s;
    }

    void save(ByteWriter& w) const override {
        save_perm_section(w, image_);
        index_.save(w);
    }

    static std::unique_ptr<ShortcutPerm> load(ByteReader& r) {
        IntVector image = load_perm_section(r);
        ShortcutIndex idx = ShortcutIndex::load(r);
        return std::make_unique<ShortcutPerm>(std::move(image), std::move(idx));
    }

  protected:
    index_t do_forward(index_t i, EvalCount* c) const override {
        if (c) ++c->forward_evals;
        return image_[i];
    }
    index_t do_inverse(index_t x, EvalCount* c) const override {
        return index_.inverse(x, [this](index_t i) { return image_[i]; }, c);
    }

  private:
    IntVector image_;
    ShortcutIndex index_;
};

}  // namespace spf
