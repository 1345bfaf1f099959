#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spf/bits.hpp"

namespace spf {

/// Malformed or truncated serialized data.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Little-endian byte sink used by every section writer.
class ByteWriter {
  public:
    void put_u8(std::uint8_t v) { buf_.push_back(v); }

    void put_u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void put_i64(std::int64_t v) { put_u64(static_cast<std::uint64_t>(v)); }

    void put_tag(const char (&tag)[5]) { buf_.insert(buf_.end(), tag, tag + 4); }

    void put_bytes(std::span<const std::uint8_t> bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }

    /// Length-prefixed nested blob.
    void put_blob(std::span<const std::uint8_t> bytes) {
        put_u64(bytes.size());
        put_bytes(bytes);
    }

    void put_bits(const BitSeq& b) {
        put_u64(b.size());
        for (auto w : b.words()) put_u64(w);
    }

    void put_ints(const IntVector& v) {
        put_u64(v.size());
        put_u8(static_cast<std::uint8_t>(v.width()));
        put_bits(v.raw());
    }

    const std::vector<std::uint8_t>& bytes() const noexcept { return buf_; }
    std::vector<std::uint8_t> release() noexcept { return std::move(buf_); }

  private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
  public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t get_u8() {
        need(1);
        return data_[pos_++];
    }

    std::uint64_t get_u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{data_[pos_ + i]} << (8 * i);
        pos_ += 8;
        return v;
    }

    std::int64_t get_i64() { return static_cast<std::int64_t>(get_u64()); }

    std::string get_tag() {
        need(4);
        std::string t(reinterpret_cast<const char*>(data_.data() + pos_), 4);
        pos_ += 4;
        return t;
    }

    void expect_tag(const char (&tag)[5]) {
        auto t = get_tag();
        if (t != std::string(tag, 4)) throw FormatError("expected section '" + std::string(tag, 4) + "', found '" + t + "'");
    }

    std::span<const std::uint8_t> get_blob() {
        std::uint64_t len = get_u64();
        need(len);
        auto s = data_.subspan(pos_, len);
        pos_ += len;
        return s;
    }

    BitSeq get_bits() {
        std::uint64_t len = get_u64();
        std::uint64_t nw = words_for(len);
        if (nw > remaining() / 8) throw FormatError("bit sequence longer than the remaining data");
        std::vector<std::uint64_t> w(nw);
        for (auto& x : w) x = get_u64();
        return BitSeq::from_words(len, std::move(w));
    }

    IntVector get_ints() {
        std::uint64_t size = get_u64();
        unsigned width = get_u8();
        if (width > 64) throw FormatError("packed integer width > 64");
        BitSeq raw = get_bits();
        if (raw.size() != size * width) throw FormatError("packed integer payload length mismatch");
        return IntVector::from_raw(size, width, std::move(raw));
    }

    std::uint64_t remaining() const noexcept { return data_.size() - pos_; }
    bool done() const noexcept { return pos_ == data_.size(); }

  private:
    void need(std::uint64_t n) const {
        if (n > remaining()) throw FormatError("unexpected end of data");
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

}  // namespace spf
