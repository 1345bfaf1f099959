#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iterator>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spf/bits.hpp"
#include "spf/permutation.hpp"

namespace spf {

using BigUint = boost::multiprecision::cpp_int;

using LehmerDigits = std::vector<std::uint32_t>;

inline BigUint factorial(index_t q) {
    BigUint f = 1;
    for (index_t i = 2; i <= q; ++i) f *= i;
    return f;
}

/// Exact ceil(lg q!), the length of every code over [q].
inline unsigned code_bits(index_t q) {
    BigUint f = factorial(q);
    if (f <= 1) return 0;
    f -= 1;
    return static_cast<unsigned>(boost::multiprecision::msb(f)) + 1;
}

/// Lehmer-style digits: r(i) = |{ j < i : pi(j) < pi(i) }|, so r(i) is in [0, i].
inline LehmerDigits lehmer_digits(std::span<const index_t> image) {
    // Fenwick tree over values counts how many earlier positions hold a smaller value.
    std::size_t q = image.size();
    std::vector<std::uint32_t> fen(q + 1, 0);
    LehmerDigits r(q);
    for (std::size_t i = 0; i < q; ++i) {
        std::uint32_t c = 0;
        for (std::size_t v = image[i]; v > 0; v -= v & (~v + 1)) c += fen[v];
        r[i] = c;
        for (std::size_t v = image[i] + 1; v <= q; v += v & (~v + 1)) ++fen[v];
    }
    return r;
}

/// Rebuilds the permutation from its digits: scanning positions from q-1 down,
/// pi(i) is the (r(i)+1)-st smallest value not yet assigned.
inline std::vector<index_t> perm_from_digits(const LehmerDigits& r) {
    std::size_t q = r.size();
    std::vector<index_t> free_vals(q);
    for (std::size_t v = 0; v < q; ++v) free_vals[v] = v;
    std::vector<index_t> out(q);
    for (std::size_t i = q; i-- > 0;) {
        if (r[i] > i) throw std::invalid_argument("Lehmer digit " + std::to_string(i) + " exceeds its radix");
        out[i] = free_vals[r[i]];
        free_vals.erase(free_vals.begin() + r[i]);
    }
    return out;
}

/// A permutation on [q] stored as R = sum_i i! * r(i) in exactly ceil(lg q!) bits.
struct MixedRadixCode {
    index_t q = 0;
    BigUint value = 0;

    unsigned bits() const { return code_bits(q); }
    friend bool operator==(const MixedRadixCode&, const MixedRadixCode&) = default;
};

inline BigUint digits_to_value(const LehmerDigits& r) {
    BigUint v = 0;
    if (r.empty()) return v;
    v = r.back();
    for (std::size_t i = r.size() - 1; i-- > 0;) {
        v *= static_cast<std::uint64_t>(i + 1);
        v += r[i];
    }
    return v;
}

inline MixedRadixCode lehmer_encode(std::span<const index_t> image) {
    return {image.size(), digits_to_value(lehmer_digits(image))};
}

inline MixedRadixCode lehmer_encode(const Permutation& pi) { return lehmer_encode(std::span<const index_t>(pi.image())); }

/// Mixed-radix decoder for a fixed q. Splits the digit range in halves and
/// divides by the precomputed ratio lo!/mid! products at each level until the
/// remaining value fits in one machine word.
class LehmerCodec {
  public:
    LehmerCodec() = default;
    explicit LehmerCodec(index_t q) : q_(q), bits_(code_bits(q)), limit_(factorial(q)) {
        if (q > 0) root_ = build_node(0, q);
    }

    index_t q() const noexcept { return q_; }
    unsigned bits() const noexcept { return bits_; }

    LehmerDigits decode(const BigUint& value) const {
        if (value >= limit_)
            throw std::out_of_range("Lehmer code value is not below q! for q = " + std::to_string(q_));
        LehmerDigits r(q_, 0);
        if (q_ == 0) return r;
        decode_node(*root_, value, r);
        return r;
    }

    /// Single-word fast path for codes of at most 64 bits.
    LehmerDigits decode(std::uint64_t value) const {
        if (bits_ > 64) return decode(BigUint(value));
        if (BigUint(value) >= limit_)
            throw std::out_of_range("Lehmer code value is not below q! for q = " + std::to_string(q_));
        LehmerDigits r(q_, 0);
        decode_word(value, 0, q_, r);
        return r;
    }

    BigUint read(const BitSeq& bits, std::uint64_t pos) const {
        BigUint v = 0;
        unsigned remaining = bits_;
        unsigned shift = 0;
        while (remaining) {
            unsigned len = remaining > 64 ? 64 : remaining;
            v |= BigUint(bits.get_bits(pos + shift, len)) << shift;
            shift += len;
            remaining -= len;
        }
        return v;
    }

    void write(BitSeq& bits, std::uint64_t pos, const BigUint& value) const {
        unsigned remaining = bits_;
        unsigned shift = 0;
        while (remaining) {
            unsigned len = remaining > 64 ? 64 : remaining;
            BigUint chunk = (value >> shift) & ((BigUint(1) << len) - 1);
            bits.set_bits(pos + shift, len, static_cast<std::uint64_t>(chunk));
            shift += len;
            remaining -= len;
        }
    }

    /// Decodes the code stored at `pos` of `bits`.
    LehmerDigits decode_at(const BitSeq& bits, std::uint64_t pos) const {
        if (bits_ <= 64) return decode(bits.get_bits(pos, bits_));
        return decode(read(bits, pos));
    }

  private:
    struct Node {
        index_t lo = 0, hi = 0, mid = 0;
        bool leaf = true;
        BigUint divisor;  // (lo+1) * ... * mid
        std::unique_ptr<Node> low, high;
    };

    static bool product_fits_word(index_t lo, index_t hi) {
        // hi!/lo! < 2^64 ?
        unsigned __int128 p = 1;
        for (index_t j = lo + 1; j <= hi; ++j) {
            p *= j;
            if (p >> 64) return false;
        }
        return true;
    }

    std::unique_ptr<Node> build_node(index_t lo, index_t hi) const {
        auto n = std::make_unique<Node>();
        n->lo = lo;
        n->hi = hi;
        if (hi - lo <= 1 || product_fits_word(lo, hi)) return n;
        n->leaf = false;
        n->mid = lo + (hi - lo) / 2;
        n->divisor = 1;
        for (index_t j = lo + 1; j <= n->mid; ++j) n->divisor *= j;
        n->low = build_node(lo, n->mid);
        n->high = build_node(n->mid, hi);
        return n;
    }

    static void decode_word(std::uint64_t v, index_t lo, index_t hi, LehmerDigits& r) {
        // digit i has radix i+1 and place value i!/lo!
        for (index_t i = lo; i < hi; ++i) {
            r[i] = static_cast<std::uint32_t>(v % (i + 1));
            v /= (i + 1);
        }
    }

    static void decode_node(const Node& n, const BigUint& v, LehmerDigits& r) {
        if (n.leaf) {
            decode_word(static_cast<std::uint64_t>(v), n.lo, n.hi, r);
            return;
        }
        BigUint high, low;
        boost::multiprecision::divide_qr(v, n.divisor, high, low);
        decode_node(*n.low, low, r);
        decode_node(*n.high, high, r);
    }

    index_t q_ = 0;
    unsigned bits_ = 0;
    BigUint limit_ = 1;
    std::shared_ptr<const Node> root_;
};

inline LehmerDigits lehmer_decode(const MixedRadixCode& code) { return LehmerCodec(code.q).decode(code.value); }

/// pi(i) from the digits, by binary search on x using the comparison of r(i)
/// against the count of still-unassigned values below x.
inline index_t small_forward(const LehmerDigits& r, index_t i) {
    index_t q = r.size();
    if (i >= q) throw std::out_of_range("small_forward: position out of range");
    // below(x) = #{ j > i : pi(j) < x }, and whether x itself is used by some j > i
    auto probe = [&](index_t x) -> int {
        index_t below = 0;
        bool used = false;
        for (index_t j = q - 1; j > i; --j) {
            index_t c = x - below;
            if (r[j] == c && !used) {
                used = true;  // pi(j) == x
            } else if (r[j] < c) {
                ++below;
            }
        }
        index_t c = x - below;
        if (r[i] < c) return -1;           // pi(i) < x
        if (r[i] == c && !used) return 0;  // pi(i) == x
        return 1;                          // pi(i) > x
    };
    index_t lo = 0, hi = q - 1;
    while (true) {
        index_t mid = lo + (hi - lo) / 2;
        int cmp = probe(mid);
        if (cmp == 0) return mid;
        if (cmp < 0)
            hi = mid - 1;
        else
            lo = mid + 1;
    }
}

/// pi^-1(x) from the digits in one downward scan.
inline index_t small_inverse(const LehmerDigits& r, index_t x) {
    index_t q = r.size();
    if (x >= q) throw std::out_of_range("small_inverse: value out of range");
    index_t below = 0;
    for (index_t i = q; i-- > 0;) {
        index_t c = x - below;
        if (r[i] == c) return i;
        if (r[i] < c) ++below;
    }
    throw std::logic_error("small_inverse: digits do not describe a permutation");
}

}  // namespace spf
