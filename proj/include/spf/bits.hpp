#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spf {

using index_t = std::uint64_t;

/// Number of bits needed to write any value in [0, n), i.e. ceil(lg n); 0 for n <= 1.
constexpr unsigned ceil_log2(std::uint64_t n) noexcept {
    return n <= 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1));
}

/// Width of a packed field able to hold every value in [0, n); never below 1.
constexpr unsigned field_width(std::uint64_t n) noexcept {
    unsigned w = ceil_log2(n);
    return w == 0 ? 1u : w;
}

constexpr std::uint64_t low_mask(unsigned width) noexcept {
    return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

constexpr std::uint64_t words_for(std::uint64_t bits) noexcept { return (bits + 63) / 64; }

/// Payload / index split used by every structure's space report.
struct SpaceBits {
    std::uint64_t payload = 0;
    std::uint64_t index = 0;

    constexpr std::uint64_t total() const noexcept { return payload + index; }
    constexpr SpaceBits& operator+=(const SpaceBits& o) noexcept {
        payload += o.payload;
        index += o.index;
        return *this;
    }
    friend constexpr SpaceBits operator+(SpaceBits a, const SpaceBits& b) noexcept { return a += b; }
    friend constexpr bool operator==(const SpaceBits&, const SpaceBits&) = default;
};

struct SpaceItem {
    std::string name;
    SpaceBits bits;
};

using SpaceBreakdown = std::vector<SpaceItem>;

inline SpaceBits sum(const SpaceBreakdown& items) {
    SpaceBits s;
    for (const auto& it : items) s += it.bits;
    return s;
}

/// Prefixes every item name with `prefix` and appends the result to `out`.
inline void append_prefixed(SpaceBreakdown& out, const std::string& prefix, const SpaceBreakdown& items) {
    for (const auto& it : items) out.push_back({prefix + it.name, it.bits});
}

/// Fixed-length sequence of bits packed into 64-bit words, LSB first.
class BitSeq {
  public:
    BitSeq() = default;
    explicit BitSeq(std::uint64_t length) : length_(length), words_(words_for(length), 0) {}

    static BitSeq from_string(const std::string& s, char one = '1') {
        BitSeq b(s.size());
        for (std::uint64_t i = 0; i < s.size(); ++i)
            if (s[i] == one) b.set(i, true);
        return b;
    }

    std::uint64_t size() const noexcept { return length_; }
    bool empty() const noexcept { return length_ == 0; }

    bool access(std::uint64_t i) const {
        if (i >= length_) throw std::out_of_range("BitSeq::access: index " + std::to_string(i) + " >= length");
        return (*this)[i];
    }
    bool operator[](std::uint64_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set(std::uint64_t i, bool v) noexcept {
        std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }

    void flip(std::uint64_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    void push_back(bool v) {
        if ((length_ & 63) == 0) words_.push_back(0);
        ++length_;
        set(length_ - 1, v);
    }

    /// Reads `len` <= 64 bits starting at `pos` as an integer (bit pos is the LSB).
    std::uint64_t get_bits(std::uint64_t pos, unsigned len) const noexcept {
        if (len == 0) return 0;
        std::uint64_t w = pos >> 6;
        unsigned off = pos & 63;
        std::uint64_t v = words_[w] >> off;
        if (off + len > 64) v |= words_[w + 1] << (64 - off);
        return v & low_mask(len);
    }

    void set_bits(std::uint64_t pos, unsigned len, std::uint64_t value) noexcept {
        if (len == 0) return;
        value &= low_mask(len);
        std::uint64_t w = pos >> 6;
        unsigned off = pos & 63;
        words_[w] = (words_[w] & ~(low_mask(len) << off)) | (value << off);
        if (off + len > 64) {
            unsigned spill = off + len - 64;
            words_[w + 1] = (words_[w + 1] & ~low_mask(spill)) | (value >> (64 - off));
        }
    }

    void append_bits(std::uint64_t value, unsigned len) {
        std::uint64_t pos = length_;
        resize(length_ + len);
        set_bits(pos, len, value);
    }

    void resize(std::uint64_t length) {
        length_ = length;
        words_.resize(words_for(length), 0);
        if (length_ & 63) words_.back() &= low_mask(length_ & 63);
    }

    std::uint64_t popcount() const noexcept {
        std::uint64_t c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }
    std::vector<std::uint64_t>& mutable_words() noexcept { return words_; }

    static BitSeq from_words(std::uint64_t length, std::vector<std::uint64_t> words) {
        if (words.size() != words_for(length)) throw std::invalid_argument("BitSeq: word count does not match length");
        BitSeq b;
        b.length_ = length;
        b.words_ = std::move(words);
        if (length & 63) b.words_.back() &= low_mask(length & 63);
        return b;
    }

    std::string to_string(char one = '1', char zero = '0') const {
        std::string s(length_, zero);
        for (std::uint64_t i = 0; i < length_; ++i)
            if ((*this)[i]) s[i] = one;
        return s;
    }

    SpaceBits space() const noexcept { return {length_, 0}; }

    friend bool operator==(const BitSeq&, const BitSeq&) = default;

  private:
    std::uint64_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Packed array of fixed-width unsigned integers.
class IntVector {
  public:
    IntVector() = default;
    IntVector(std::uint64_t size, unsigned width) : size_(size), width_(width), bits_(size * width) {
        if (width > 64) throw std::invalid_argument("IntVector: width > 64");
    }

    template <class Range>
    static IntVector from_values(const Range& values, unsigned width) {
        IntVector v(std::size(values), width);
        std::uint64_t i = 0;
        for (auto x : values) v.set(i++, static_cast<std::uint64_t>(x));
        return v;
    }

    /// Packs with the smallest width that holds the maximum value.
    template <class Range>
    static IntVector fit(const Range& values) {
        std::uint64_t mx = 0;
        for (auto x : values) mx = std::max<std::uint64_t>(mx, static_cast<std::uint64_t>(x));
        return from_values(values, mx == ~std::uint64_t{0} ? 64u : field_width(mx + 1));
    }

    std::uint64_t size() const noexcept { return size_; }
    unsigned width() const noexcept { return width_; }

    std::uint64_t operator[](std::uint64_t i) const noexcept { return bits_.get_bits(i * width_, width_); }
    std::uint64_t at(std::uint64_t i) const {
        if (i >= size_) throw std::out_of_range("IntVector::at: index out of range");
        return (*this)[i];
    }
    void set(std::uint64_t i, std::uint64_t v) noexcept { bits_.set_bits(i * width_, width_, v); }

    const BitSeq& raw() const noexcept { return bits_; }
    static IntVector from_raw(std::uint64_t size, unsigned width, BitSeq raw) {
        if (raw.size() != size * width) throw std::invalid_argument("IntVector: raw length mismatch");
        IntVector v;
        v.size_ = size;
        v.width_ = width;
        v.bits_ = std::move(raw);
        return v;
    }

    SpaceBits space() const noexcept { return {size_ * width_, 0}; }

    friend bool operator==(const IntVector&, const IntVector&) = default;

  private:
    std::uint64_t size_ = 0;
    unsigned width_ = 0;
    BitSeq bits_;
};

/// Position of the k-th (0-based) set bit of `w`; k < popcount(w).
inline unsigned select_in_word(std::uint64_t w, unsigned k) noexcept {
    for (unsigned i = 0; i < k; ++i) w &= w - 1;
    return static_cast<unsigned>(std::countr_zero(w));
}

}  // namespace spf
