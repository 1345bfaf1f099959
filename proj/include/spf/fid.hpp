#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spf/binary_io.hpp"
#include "spf/bits.hpp"

namespace spf {

/// Rank/select directory over a BitSeq.
///
/// Rank uses a two-level layout: every 512-bit superblock stores its
/// cumulative popcount in one word and the seven in-superblock word counts
/// (9 bits each) in a second word. Select keeps the position of every
/// 512-th one (and, optionally, zero) and finishes with a binary search
/// over superblocks followed by a word scan.
class RankSelect {
  public:
    static constexpr std::uint64_t kSuperblock = 512;
    static constexpr std::uint64_t kSampleRate = 512;

    RankSelect() = default;
    explicit RankSelect(const BitSeq* bits, bool select1 = true, bool select0 = true) : bits_(bits) { build(select1, select0); }

    std::uint64_t size() const noexcept { return bits_ ? bits_->size() : 0; }
    std::uint64_t ones() const noexcept { return ones_; }
    std::uint64_t zeros() const noexcept { return size() - ones_; }

    /// Ones in [0, x), x <= size.
    std::uint64_t rank1(std::uint64_t x) const noexcept {
        std::uint64_t sb = x / kSuperblock;
        std::uint64_t w = x / 64;
        unsigned j = static_cast<unsigned>(w & 7);
        std::uint64_t r = dir_[2 * sb];
        if (j) r += (dir_[2 * sb + 1] >> (9 * (j - 1))) & 511;
        if (x & 63) r += std::popcount(bits_->words()[w] & low_mask(x & 63));
        return r;
    }
    std::uint64_t rank0(std::uint64_t x) const noexcept { return x - rank1(x); }

    /// Position of the i-th (0-based) one; i < ones().
    std::uint64_t select1(std::uint64_t i) const noexcept { return select_impl<true>(i); }
    /// Position of the i-th (0-based) zero; i < zeros().
    std::uint64_t select0(std::uint64_t i) const noexcept { return select_impl<false>(i); }

    SpaceBits space() const noexcept {
        return {0, dir_.size() * 64 + samples1_.space().payload + samples0_.space().payload};
    }

    void rebind(const BitSeq* bits) noexcept { bits_ = bits; }

  private:
    void build(bool want1, bool want0) {
        const auto& words = bits_->words();
        std::uint64_t nsb = size() / kSuperblock + 1;
        dir_.assign(2 * nsb, 0);
        std::uint64_t cum = 0;
        for (std::uint64_t sb = 0; sb < nsb; ++sb) {
            dir_[2 * sb] = cum;
            std::uint64_t sub = 0, packed = 0;
            for (unsigned j = 0; j < 8; ++j) {
                std::uint64_t w = sb * 8 + j;
                if (j) packed |= sub << (9 * (j - 1));
                if (w < words.size()) sub += std::popcount(words[w]);
            }
            dir_[2 * sb + 1] = packed;
            cum += sub;
        }
        ones_ = cum;

        std::vector<std::uint64_t> s1, s0;
        std::uint64_t c1 = 0, c0 = 0;
        for (std::uint64_t i = 0; i < size(); ++i) {
            if ((*bits_)[i]) {
                if (want1 && c1 % kSampleRate == 0) s1.push_back(i);
                ++c1;
            } else {
                if (want0 && c0 % kSampleRate == 0) s0.push_back(i);
                ++c0;
            }
        }
        unsigned width = field_width(size() + 1);
        samples1_ = IntVector::from_values(s1, width);
        samples0_ = IntVector::from_values(s0, width);
        has1_ = want1;
        has0_ = want0;
    }

    template <bool One>
    std::uint64_t sb_count(std::uint64_t sb) const noexcept {
        return One ? dir_[2 * sb] : sb * kSuperblock - dir_[2 * sb];
    }

    template <bool One>
    std::uint64_t select_impl(std::uint64_t i) const noexcept {
        const IntVector& samples = One ? samples1_ : samples0_;
        std::uint64_t nsb = dir_.size() / 2;
        std::uint64_t lo = 0, hi = nsb - 1;
        if ((One && has1_) || (!One && has0_)) {
            std::uint64_t k = i / kSampleRate;
            lo = samples[k] / kSuperblock;
            if (k + 1 < samples.size()) hi = samples[k + 1] / kSuperblock;
        }
        // largest superblock whose cumulative count is <= i
        while (lo < hi) {
            std::uint64_t mid = lo + (hi - lo + 1) / 2;
            if (sb_count<One>(mid) <= i)
                lo = mid;
            else
                hi = mid - 1;
        }
        std::uint64_t rem = i - sb_count<One>(lo);
        std::uint64_t packed = dir_[2 * lo + 1];
        unsigned j = 0;
        for (unsigned t = 1; t < 8; ++t) {
            std::uint64_t sub1 = (packed >> (9 * (t - 1))) & 511;
            std::uint64_t sub = One ? sub1 : 64 * t - sub1;
            if (sub <= rem)
                j = t;
            else
                break;
        }
        if (j) {
            std::uint64_t sub1 = (packed >> (9 * (j - 1))) & 511;
            rem -= One ? sub1 : 64 * j - sub1;
        }
        std::uint64_t w = lo * 8 + j;
        std::uint64_t word = bits_->words()[w];
        if (!One) word = ~word;
        return w * 64 + select_in_word(word, static_cast<unsigned>(rem));
    }

    const BitSeq* bits_ = nullptr;
    std::vector<std::uint64_t> dir_;
    IntVector samples1_, samples0_;
    std::uint64_t ones_ = 0;
    bool has1_ = false, has0_ = false;
};

/// Fully indexable dictionary: a set S over the universe [m] with rank and
/// select on both S and its complement. Plain-bitmap payload of m bits.
class Fid {
  public:
    Fid() : Fid(0, std::span<const std::uint64_t>{}) {}

    Fid(std::uint64_t universe, std::span<const std::uint64_t> elems) : bits_(universe) {
        for (std::size_t i = 0; i < elems.size(); ++i) {
            if (elems[i] >= universe)
                throw std::invalid_argument("Fid: element " + std::to_string(elems[i]) + " outside universe " +
                                            std::to_string(universe));
            if (i && elems[i] <= elems[i - 1])
                throw std::invalid_argument("Fid: elements not strictly increasing at index " + std::to_string(i));
            bits_.set(elems[i], true);
        }
        rs_ = RankSelect(&bits_);
    }

    Fid(std::uint64_t universe, const std::vector<std::uint64_t>& elems)
        : Fid(universe, std::span<const std::uint64_t>(elems)) {}

    explicit Fid(BitSeq bits) : bits_(std::move(bits)) { rs_ = RankSelect(&bits_); }

    /// Multiset over [0, max_value] flattened so that element t maps to e_t + t.
    static Fid from_multiset(std::uint64_t max_value, std::span<const std::uint64_t> sorted) {
        std::vector<std::uint64_t> flat(sorted.size());
        for (std::size_t t = 0; t < sorted.size(); ++t) {
            if (t && sorted[t] < sorted[t - 1]) throw std::invalid_argument("Fid::from_multiset: input not sorted");
            if (sorted[t] > max_value) throw std::invalid_argument("Fid::from_multiset: value above max_value");
            flat[t] = sorted[t] + t;
        }
        return Fid(max_value + 1 + sorted.size(), flat);
    }

    Fid(const Fid& o) : bits_(o.bits_), rs_(o.rs_) { rs_.rebind(&bits_); }
    Fid(Fid&& o) noexcept : bits_(std::move(o.bits_)), rs_(std::move(o.rs_)) { rs_.rebind(&bits_); }
    Fid& operator=(const Fid& o) {
        if (this != &o) {
            bits_ = o.bits_;
            rs_ = o.rs_;
            rs_.rebind(&bits_);
        }
        return *this;
    }
    Fid& operator=(Fid&& o) noexcept {
        bits_ = std::move(o.bits_);
        rs_ = std::move(o.rs_);
        rs_.rebind(&bits_);
        return *this;
    }

    std::uint64_t universe() const noexcept { return bits_.size(); }
    std::uint64_t count() const noexcept { return rs_.ones(); }

    bool contains(std::uint64_t x) const noexcept { return x < universe() && bits_[x]; }

    /// |{y in S : y < x}| for 0 <= x <= m.
    std::uint64_t fullrank(std::uint64_t x) const {
        check_rank_arg(x);
        return rs_.rank1(x);
    }
    std::uint64_t fullrank0(std::uint64_t x) const {
        check_rank_arg(x);
        return rs_.rank0(x);
    }

    /// The (i+1)-st smallest element of S.
    std::uint64_t select(std::uint64_t i) const {
        if (i >= count())
            throw std::out_of_range("Fid::select: index " + std::to_string(i) + " >= |S| = " + std::to_string(count()));
        return rs_.select1(i);
    }
    std::uint64_t select0(std::uint64_t i) const {
        if (i >= universe() - count())
            throw std::out_of_range("Fid::select0: index " + std::to_string(i) + " >= |complement|");
        return rs_.select0(i);
    }

    /// Count of multiset elements <= x, for a Fid built by from_multiset.
    std::uint64_t multiset_count_le(std::uint64_t x) const { return select0(x) - x; }

    const BitSeq& bits() const noexcept { return bits_; }

    SpaceBits space() const noexcept { return {bits_.size(), rs_.space().index}; }

    void save(ByteWriter& w) const {
        w.put_tag("FID1");
        w.put_u64(universe());
        w.put_u64(count());
        for (auto word : bits_.words()) w.put_u64(word);
    }

    static Fid load(ByteReader& r) {
        r.expect_tag("FID1");
        std::uint64_t m = r.get_u64();
        std::uint64_t c = r.get_u64();
        std::uint64_t nw = words_for(m);
        if (nw > r.remaining() / 8) throw FormatError("FID1: bitmap truncated");
        std::vector<std::uint64_t> words(nw);
        for (auto& x : words) x = r.get_u64();
        Fid f(BitSeq::from_words(m, std::move(words)));
        if (f.count() != c) throw FormatError("FID1: stored count does not match bitmap");
        return f;
    }

  private:
    void check_rank_arg(std::uint64_t x) const {
        if (x > universe())
            throw std::out_of_range("Fid::fullrank: argument " + std::to_string(x) + " > universe " +
                                    std::to_string(universe()));
    }

    BitSeq bits_;
    RankSelect rs_;
};

/// Indexable dictionary: membership-aware rank and select over a set.
class IndexableDict {
  public:
    IndexableDict() = default;
    IndexableDict(std::uint64_t universe, std::span<const std::uint64_t> elems) : fid_(universe, elems) {}
    IndexableDict(std::uint64_t universe, const std::vector<std::uint64_t>& elems) : fid_(universe, elems) {}
    explicit IndexableDict(Fid fid) : fid_(std::move(fid)) {}

    std::uint64_t universe() const noexcept { return fid_.universe(); }
    std::uint64_t count() const noexcept { return fid_.count(); }

    /// -1 when x is not in S, otherwise the rank of x in S.
    std::int64_t partial_rank(std::uint64_t x) const {
        if (x >= universe())
            throw std::out_of_range("IndexableDict::partial_rank: argument " + std::to_string(x) + " >= universe");
        return fid_.contains(x) ? static_cast<std::int64_t>(fid_.fullrank(x)) : -1;
    }

    std::uint64_t select(std::uint64_t i) const { return fid_.select(i); }
    bool contains(std::uint64_t x) const noexcept { return fid_.contains(x); }

    const Fid& fid() const noexcept { return fid_; }
    SpaceBits space() const noexcept { return fid_.space(); }

    void save(ByteWriter& w) const { fid_.save(w); }
    static IndexableDict load(ByteReader& r) { return IndexableDict(Fid::load(r)); }

  private:
    Fid fid_;
};

}  // namespace spf
