#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "spf/binary_io.hpp"
#include "spf/bits.hpp"
#include "spf/permutation.hpp"

namespace spf {

/// Per-query tallies. Owned by the caller; structures only increment it.
struct EvalCount {
    std::uint64_t forward_evals = 0;  ///< base pi() evaluations
    std::uint64_t inverse_evals = 0;  ///< base pi^-1() evaluations
    std::uint64_t bit_reads = 0;      ///< Benes switch bits inspected
    std::uint64_t central_evals = 0;  ///< central q-permuter queries
    std::uint64_t dict_ops = 0;       ///< rank/select calls on auxiliary dictionaries
    std::uint64_t tree_ops = 0;       ///< navigation calls on a succinct tree

    void reset() noexcept { *this = EvalCount{}; }
};

enum class BackendKind : std::uint8_t { naive = 0, shortcut = 1, benes = 2 };

inline std::string to_string(BackendKind k) {
    switch (k) {
        case BackendKind::naive: return "naive";
        case BackendKind::shortcut: return "shortcut";
        case BackendKind::benes: return "benes";
    }
    return "unknown";
}

inline BackendKind parse_backend_kind(const std::string& s) {
    if (s == "naive") return BackendKind::naive;
    if (s == "shortcut") return BackendKind::shortcut;
    if (s == "benes") return BackendKind::benes;
    throw std::invalid_argument("unknown backend kind '" + s + "'");
}

/// Uniform query interface over every permutation representation.
class PermBackend {
  public:
    virtual ~PermBackend() = default;

    virtual BackendKind kind() const noexcept = 0;
    virtual index_t size() const noexcept = 0;
    virtual SpaceBreakdown space() const = 0;
    virtual void save(ByteWriter& w) const = 0;

    index_t forward(index_t i, EvalCount* count = nullptr) const {
        check(i, "forward");
        return do_forward(i, count);
    }
    index_t inverse(index_t x, EvalCount* count = nullptr) const {
        check(x, "inverse");
        return do_inverse(x, count);
    }

    SpaceBits total_space() const { return sum(space()); }

  protected:
    virtual index_t do_forward(index_t i, EvalCount* count) const = 0;
    virtual index_t do_inverse(index_t x, EvalCount* count) const = 0;

  private:
    void check(index_t i, const char* op) const {
        if (i >= size())
            throw std::out_of_range(std::string(op) + ": argument " + std::to_string(i) + " outside [0, " +
                                    std::to_string(size()) + ")");
    }
};

inline void save_perm_section(ByteWriter& w, const IntVector& image) {
    w.put_tag("PERM");
    w.put_ints(image);
}

inline IntVector load_perm_section(ByteReader& r) {
    r.expect_tag("PERM");
    IntVector v = r.get_ints();
    std::vector<bool> seen(v.size(), false);
    for (index_t i = 0; i < v.size(); ++i) {
        index_t x = v[i];
        if (x >= v.size() || seen[x]) throw FormatError("PERM: stored image is not a bijection (index " + std::to_string(i) + ")");
        seen[x] = true;
    }
    return v;
}

/// Explicit image and inverse arrays, n*ceil(lg n) bits each.
class NaivePerm final : public PermBackend {
  public:
    explicit NaivePerm(const Permutation& pi)
        : image_(IntVector::from_values(pi.image(), field_width(pi.size()))),
          inverse_(IntVector::from_values(pi.inverse().image(), field_width(pi.size()))) {}

    explicit NaivePerm(IntVector image) : image_(std::move(image)), inverse_(image_.size(), image_.width()) {
        for (index_t i = 0; i < image_.size(); ++i) inverse_.set(image_[i], i);
    }

    BackendKind kind() const noexcept override { return BackendKind::naive; }
    index_t size() const noexcept override { return image_.size(); }

    SpaceBreakdown space() const override { return {{"image", image_.space()}, {"inverse", inverse_.space()}}; }

    void save(ByteWriter& w) const override { save_perm_section(w, image_); }
    static std::unique_ptr<NaivePerm> load(ByteReader& r) { return std::make_unique<NaivePerm>(load_perm_section(r)); }

  protected:
    index_t do_forward(index_t i, EvalCount* c) const override {
        if (c) ++c->forward_evals;
        return image_[i];
    }
    index_t do_inverse(index_t x, EvalCount* c) const override {
        if (c) ++c->inverse_evals;
        return inverse_[x];
    }

  private:
    IntVector image_;
    IntVector inverse_;
};

}  // namespace spf
