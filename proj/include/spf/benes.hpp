#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spf/backend.hpp"
#include "spf/lehmer.hpp"

namespace spf {

struct BenesShape {
    index_t q = 1;
    unsigned r = 0;
    index_t padded = 1;  ///< n' = q * 2^r
};

/// Largest l with n / 2^l > t (l = 0 when n <= t); q = ceil(n / 2^l).
/// Then t < q <= 2t whenever n > t, and n' = q 2^l < n (1 + 1/t).
inline BenesShape choose_qr(index_t n, index_t t) {
    if (n == 0 || t == 0) throw std::invalid_argument("choose_qr: need n >= 1 and t >= 1");
    unsigned l = 0;
    while (l + 1 < 64 && static_cast<unsigned __int128>(n) > (static_cast<unsigned __int128>(t) << (l + 1))) ++l;
    index_t q = (n + (index_t{1} << l) - 1) >> l;
    return {q, l, q << l};
}

/// (q,r)-Benes network: r levels of input and output switch columns around
/// 2^r central q-permuters, each stored as a mixed-radix code.
///
/// Column 2d is the input column of level d and column 2d+1 its output
/// column; each holds n'/2 bits, subnetwork b of level d owning the slice
/// starting at b * n'/2^(d+1). Bit 0 sends even terminals to the upper half.
class BenesRep final : public PermBackend {
  public:
    BenesRep() = default;

    /// Builds with the central size chosen from t (pads with the identity).
    BenesRep(const Permutation& pi, index_t t) : BenesRep(pi, choose_qr(pi.size(), t)) {}

    BenesRep(const Permutation& pi, BenesShape shape) : n_(pi.size()), q_(shape.q), r_(shape.r) {
        if (shape.padded != (q_ << r_) || shape.padded < n_)
            throw std::invalid_argument("BenesRep: padded size must be q*2^r and at least n");
        codec_ = std::make_shared<LehmerCodec>(q_);
        route(pi.padded(shape.padded).image());
    }

    static BenesRep with_qr(const Permutation& pi, index_t q, unsigned r) { return BenesRep(pi, BenesShape{q, r, q << r}); }

    BackendKind kind() const noexcept override { return BackendKind::benes; }
    index_t size() const noexcept override { return n_; }
    index_t q() const noexcept { return q_; }
    unsigned r() const noexcept { return r_; }
    index_t padded_size() const noexcept { return q_ << r_; }
    index_t central_count() const noexcept { return index_t{1} << r_; }
    unsigned central_bits() const noexcept { return codec_->bits(); }

    /// 2r * n'/2 outer switch bits plus 2^r * ceil(lg q!) central bits.
    std::uint64_t payload_bits() const noexcept { return columns_.size() + centrals_.size(); }

    SpaceBreakdown space() const override {
        return {{"switch_columns", {columns_.size(), 0}}, {"central_codes", {centrals_.size(), 0}}};
    }

    bool switch_bit(unsigned column, index_t j) const { return columns_.access(column * half() + j); }
    /// Test hook: corrupts one switch.
    void flip_switch(unsigned column, index_t j) { columns_.flip(column * half() + j); }

    LehmerDigits central_digits(index_t b) const { return codec_->decode_at(centrals_, b * codec_->bits()); }

    void save(ByteWriter& w) const override {
        w.put_tag("BNS1");
        w.put_u64(n_);
        w.put_u64(q_);
        w.put_u64(r_);
        w.put_bits(columns_);
        w.put_bits(centrals_);
    }

    static std::unique_ptr<BenesRep> load(ByteReader& rd) {
        rd.expect_tag("BNS1");
        auto rep = std::make_unique<BenesRep>();
        rep->n_ = rd.get_u64();
        rep->q_ = rd.get_u64();
        std::uint64_t r = rd.get_u64();
        if (r >= 63 || rep->q_ == 0 || rep->q_ > (index_t{1} << 32) || (rep->q_ << r) >> r != rep->q_ ||
            rep->n_ > (rep->q_ << r))
            throw FormatError("BNS1: bad network shape");
        rep->r_ = static_cast<unsigned>(r);
        rep->codec_ = std::make_shared<LehmerCodec>(rep->q_);
        rep->columns_ = rd.get_bits();
        rep->centrals_ = rd.get_bits();
        if (rep->columns_.size() != 2 * r * rep->half() ||
            rep->centrals_.size() != rep->central_count() * rep->codec_->bits())
            throw FormatError("BNS1: section lengths do not match q and r");
        BigUint limit = factorial(rep->q_);
        for (index_t b = 0; b < rep->central_count(); ++b) {
            BigUint v = rep->codec_->read(rep->centrals_, b * rep->codec_->bits());
            if (v >= limit) throw FormatError("BNS1: central code " + std::to_string(b) + " is not below q!");
        }
        return rep;
    }

  protected:
    index_t do_forward(index_t i, EvalCount* c) const override {
        index_t pos = i, b = 0;
        for (unsigned d = 0; d < r_; ++d) {
            bool bit = read_bit(2 * d, b * (half() >> d) + pos / 2, c);
            index_t sub = (pos & 1) ^ bit;
            pos /= 2;
            b = 2 * b + sub;
        }
        if (c) ++c->central_evals;
        pos = small_forward(central_digits(b), pos);
        for (unsigned d = r_; d-- > 0;) {
            index_t sub = b & 1;
            b /= 2;
            bool bit = read_bit(2 * d + 1, b * (half() >> d) + pos, c);
            pos = 2 * pos + (sub ^ bit);
        }
        return pos;
    }

    index_t do_inverse(index_t x, EvalCount* c) const override {
        index_t pos = x, b = 0;
        for (unsigned d = 0; d < r_; ++d) {
            bool bit = read_bit(2 * d + 1, b * (half() >> d) + pos / 2, c);
            index_t sub = (pos & 1) ^ bit;
            pos /= 2;
            b = 2 * b + sub;
        }
        if (c) ++c->central_evals;
        pos = small_inverse(central_digits(b), pos);
        for (unsigned d = r_; d-- > 0;) {
            index_t sub = b & 1;
            b /= 2;
            bool bit = read_bit(2 * d, b * (half() >> d) + pos, c);
            pos = 2 * pos + (sub ^ bit);
        }
        return pos;
    }

  private:
    index_t half() const noexcept { return (q_ << r_) / 2; }

    bool read_bit(unsigned column, index_t j, EvalCount* c) const {
        if (c) ++c->bit_reads;
        return columns_[column * half() + j];
    }

    /// Looping algorithm, one level at a time over all subnetworks.
    void route(const std::vector<index_t>& image) {
        index_t np = q_ << r_;
        columns_ = BitSeq(2 * static_cast<std::uint64_t>(r_) * (np / 2));
        std::vector<std::vector<index_t>> level{image};
        for (unsigned d = 0; d < r_; ++d) {
            index_t p = np >> d;
            std::vector<std::vector<index_t>> next;
            next.reserve(level.size() * 2);
            for (index_t b = 0; b < level.size(); ++b) {
                const auto& pi = level[b];
                std::vector<index_t> inv(p);
                for (index_t i = 0; i < p; ++i) inv[pi[i]] = i;
                std::vector<std::int8_t> side(p, -1);
                for (index_t s = 0; s < p; s += 2) {
                    if (side[s] >= 0) continue;
                    // chase the constraint cycle through s: partners differ, output pairs differ
                    index_t i = s;
                    while (side[i] < 0) {
                        side[i] = 0;
                        side[i ^ 1] = 1;
                        i = inv[pi[i ^ 1] ^ 1];
                    }
                }
                std::vector<index_t> upper(p / 2), lower(p / 2);
                index_t base = b * (p / 2);
                for (index_t j = 0; j < p / 2; ++j) {
                    bool in_bit = side[2 * j] != 0;
                    columns_.set(2 * d * half() + base + j, in_bit);
                    index_t u = 2 * j + (in_bit ? 1 : 0);
                    upper[j] = pi[u] / 2;
                    lower[j] = pi[u ^ 1] / 2;
                    columns_.set((2 * d + 1) * half() + base + j, side[inv[2 * j]] != 0);
                }
                next.push_back(std::move(upper));
                next.push_back(std::move(lower));
            }
            level = std::move(next);
        }
        unsigned cb = codec_->bits();
        centrals_ = BitSeq(level.size() * cb);
        for (index_t b = 0; b < level.size(); ++b) {
            MixedRadixCode code = lehmer_encode(std::span<const index_t>(level[b]));
            codec_->write(centrals_, b * cb, code.value);
        }
    }

    index_t n_ = 0;
    index_t q_ = 1;
    unsigned r_ = 0;
    std::shared_ptr<LehmerCodec> codec_ = std::make_shared<LehmerCodec>(1);
    BitSeq columns_;
    BitSeq centrals_;
};

}  // namespace spf
