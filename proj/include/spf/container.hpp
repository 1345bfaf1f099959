#pragma once

#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "spf/binary_io.hpp"

namespace spf {

/// File layout: "SPFR", version byte, section count (u64), then one
/// (tag, offset, length) entry per section, then the section bodies.
/// Offsets are absolute; bodies are in table order, do not overlap, and
/// the last one ends the file.
class Container {
  public:
    static constexpr std::uint8_t version = 1;

    struct Section {
        std::string tag;
        std::vector<std::uint8_t> bytes;
    };

    void add(const std::string& tag, std::vector<std::uint8_t> bytes) {
        if (tag.size() != 4) throw std::invalid_argument("section tag must be 4 bytes");
        if (has(tag)) throw std::invalid_argument("duplicate section '" + tag + "'");
        sections_.push_back({tag, std::move(bytes)});
    }

    bool has(const std::string& tag) const {
        for (const auto& s : sections_)
            if (s.tag == tag) return true;
        return false;
    }

    const std::vector<std::uint8_t>& section(const std::string& tag) const {
        for (const auto& s : sections_)
            if (s.tag == tag) return s.bytes;
        throw FormatError("container has no '" + tag + "' section");
    }

    const std::vector<Section>& sections() const noexcept { return sections_; }

    std::vector<std::string> tags() const {
        std::vector<std::string> t;
        for (const auto& s : sections_) t.push_back(s.tag);
        return t;
    }

    std::vector<std::uint8_t> serialize() const {
        ByteWriter w;
        w.put_tag("SPFR");
        w.put_u8(version);
        w.put_u64(sections_.size());
        std::uint64_t off = 4 + 1 + 8 + 20 * sections_.size();
        for (const auto& s : sections_) {
            w.put_bytes({reinterpret_cast<const std::uint8_t*>(s.tag.data()), 4});
            w.put_u64(off);
            w.put_u64(s.bytes.size());
            off += s.bytes.size();
        }
        for (const auto& s : sections_) w.put_bytes(s.bytes);
        return w.release();
    }

    static Container parse(std::span<const std::uint8_t> data) {
        ByteReader r(data);
        if (r.get_tag() != "SPFR") throw FormatError("not an SPFR container (bad magic)");
        std::uint8_t v = r.get_u8();
        if (v != version) throw FormatError("unsupported container version " + std::to_string(v));
        std::uint64_t count = r.get_u64();
        if (count > r.remaining() / 20) throw FormatError("section table truncated");
        struct Entry {
            std::string tag;
            std::uint64_t off, len;
        };
        std::vector<Entry> table;
        for (std::uint64_t i = 0; i < count; ++i) {
            Entry e;
            e.tag = r.get_tag();
            e.off = r.get_u64();
            e.len = r.get_u64();
            table.push_back(e);
        }
        std::uint64_t body = 4 + 1 + 8 + 20 * count;
        Container c;
        std::uint64_t prev_end = body;
        for (const auto& e : table) {
            if (e.off != prev_end || e.off > data.size() || e.len > data.size() - e.off)
                throw FormatError("section '" + e.tag + "' is not contiguous with the previous one or lies outside the file");
            prev_end = e.off + e.len;
            try {
                c.add(e.tag, std::vector<std::uint8_t>(data.begin() + e.off, data.begin() + e.off + e.len));
            } catch (const std::invalid_argument& ex) {
                throw FormatError(ex.what());
            }
        }
        if (prev_end != data.size()) throw FormatError("trailing bytes after the last section");
        return c;
    }

    void write_file(const std::string& path) const {
        auto bytes = serialize();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write to '" + path + "' failed");
    }

    static Container read_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open '" + path + "'");
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return parse(bytes);
    }

  private:
    std::vector<Section> sections_;
};

}  // namespace spf
