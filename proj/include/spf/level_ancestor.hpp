#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spf/bits.hpp"

namespace spf {

/// Constant-time level ancestor on a static forest by jump pointers plus
/// ladders (long-path decomposition, each path extended upward by its own
/// length). Nodes are 0..m-1 listed so that every parent precedes its
/// children; `none` marks a root.
class LadderLevelAncestor {
  public:
    static constexpr index_t none = ~index_t{0};

    LadderLevelAncestor() = default;

    explicit LadderLevelAncestor(const std::vector<index_t>& parent) : m_(parent.size()) {
        std::vector<index_t> depth(m_, 0), height(m_, 0);
        for (index_t v = 0; v < m_; ++v) {
            if (parent[v] != none) {
                if (parent[v] >= v) throw std::invalid_argument("LadderLevelAncestor: parent must precede child");
                depth[v] = depth[parent[v]] + 1;
            }
        }
        for (index_t v = m_; v-- > 0;)
            if (parent[v] != none) height[parent[v]] = std::max(height[parent[v]], height[v] + 1);

        std::vector<index_t> long_child(m_, none);
        for (index_t v = 0; v < m_; ++v) {
            index_t p = parent[v];
            if (p != none && height[v] + 1 == height[p] && long_child[p] == none) long_child[p] = v;
        }

        index_t max_depth = 0;
        for (auto d : depth) max_depth = std::max(max_depth, d);
        levels_ = static_cast<unsigned>(std::bit_width(max_depth));
        unsigned w = field_width(m_ + 1);

        std::vector<index_t> ladder, lpos(m_, 0);
        for (index_t h = 0; h < m_; ++h) {
            if (parent[h] != none && long_child[parent[h]] == h) continue;
            std::vector<index_t> path;
            for (index_t v = h; v != none; v = long_child[v]) path.push_back(v);
            index_t base = ladder.size();
            for (index_t j = path.size(); j-- > 0;) {
                lpos[path[j]] = base + (path.size() - 1 - j);
                ladder.push_back(path[j]);
            }
            index_t up = parent[h];
            for (index_t e = 0; e < path.size() && up != none; ++e, up = parent[up]) ladder.push_back(up);
        }
        ladder_ = IntVector::from_values(ladder, w);
        lpos_ = IntVector::from_values(lpos, field_width(ladder.size() + 1));

        jump_ = IntVector(m_ * levels_, w);
        for (index_t v = 0; v < m_; ++v) {
            for (unsigned j = 0; j < levels_; ++j) {
                index_t a;
                if (j == 0)
                    a = parent[v];
                else {
                    index_t mid = jump(v, j - 1);
                    a = mid == none ? none : jump(mid, j - 1);
                }
                jump_.set(v * levels_ + j, a == none ? m_ : a);
            }
        }
        depth_ = IntVector::from_values(depth, field_width(max_depth + 1));
    }

    index_t size() const noexcept { return m_; }
    index_t depth(index_t v) const { return depth_.at(v); }

    /// Ancestor d levels above v; none when d > depth(v).
    index_t ancestor(index_t v, index_t d) const {
        if (v >= m_) throw std::out_of_range("LadderLevelAncestor: node out of range");
        if (d == 0) return v;
        if (d > depth_[v]) return none;
        unsigned j = static_cast<unsigned>(std::bit_width(d)) - 1;
        index_t u = jump(v, j);
        return ladder_[lpos_[u] + (d - (index_t{1} << j))];
    }

    SpaceBits space() const noexcept {
        return {0, jump_.space().payload + ladder_.space().payload + lpos_.space().payload + depth_.space().payload};
    }

  private:
    index_t jump(index_t v, unsigned j) const {
        index_t a = jump_[v * levels_ + j];
        return a == m_ ? none : a;
    }

    index_t m_ = 0;
    unsigned levels_ = 0;
    IntVector jump_, ladder_, lpos_, depth_;
};

}  // namespace spf
