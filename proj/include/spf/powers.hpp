#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "spf/backend.hpp"
#include "spf/benes.hpp"
#include "spf/fid.hpp"
#include "spf/shortcut.hpp"

namespace spf {

/// t is the shortcut spacing or the Benes central-size knob; ignored for naive.
inline std::unique_ptr<PermBackend> make_backend(BackendKind kind, const Permutation& pi, index_t t = 2) {
    switch (kind) {
        case BackendKind::naive: return std::make_unique<NaivePerm>(pi);
        case BackendKind::shortcut: return std::make_unique<ShortcutPerm>(pi, t);
        case BackendKind::benes: return std::make_unique<BenesRep>(pi, t);
    }
    throw std::invalid_argument("make_backend: unknown kind");
}

/// Kind byte followed by the backend's own sections.
inline void save_backend(ByteWriter& w, const PermBackend& b) {
    w.put_u8(static_cast<std::uint8_t>(b.kind()));
    b.save(w);
}

inline std::unique_ptr<PermBackend> load_backend(ByteReader& r) {
    switch (r.get_u8()) {
        case 0: return NaivePerm::load(r);
        case 1: return ShortcutPerm::load(r);
        case 2: return BenesRep::load(r);
        default: throw FormatError("unknown backend kind byte");
    }
}

struct CycleInfo {
    index_t l = 0;       ///< left end of x's cycle segment in psi
    index_t lambda = 1;  ///< cycle length
    index_t j = 0;       ///< psi^-1(x)
};

/// Any power of pi from psi (the canonical cycles laid end to end, shortest
/// first), the distinct cycle lengths, and the block starts.
///
/// Block b = [s_b, s_{b+1}) of psi holds only cycles of length Lambda[b].
class PowerRep {
  public:
    PowerRep(const Permutation& pi, BackendKind kind, index_t t = 2) {
        auto cycles = cycle_decompose(pi).cycles;
        // stable: equal lengths stay ordered by minimum
        std::stable_sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
        std::vector<index_t> psi;
        psi.reserve(pi.size());
        std::vector<index_t> lambdas, starts;
        for (const auto& c : cycles) {
            if (lambdas.empty() || lambdas.back() != c.size()) {
                lambdas.push_back(c.size());
                starts.push_back(psi.size());
            }
            psi.insert(psi.end(), c.begin(), c.end());
        }
        psi_ = make_backend(kind, Permutation::from_image(std::move(psi)), t);
        lambda_ = IntVector::from_values(lambdas, field_width(pi.size() + 1));
        starts_ = Fid(pi.size(), starts);
    }

    PowerRep(std::unique_ptr<PermBackend> psi, IntVector lambda, Fid starts)
        : psi_(std::move(psi)), lambda_(std::move(lambda)), starts_(std::move(starts)) {
        validate();
    }

    index_t size() const noexcept { return psi_->size(); }
    index_t distinct_lengths() const noexcept { return lambda_.size(); }
    index_t lambda(index_t b) const { return lambda_.at(b); }
    const Fid& starts() const noexcept { return starts_; }
    const PermBackend& psi() const noexcept { return *psi_; }

    CycleInfo cycle_info(index_t x, EvalCount* c = nullptr) const {
        CycleInfo info;
        info.j = psi_->inverse(x, c);
        locate(info, c);
        return info;
    }

    /// pi^k(x): one psi inverse, one psi forward, two dictionary reads.
    index_t power(index_t x, std::int64_t k, EvalCount* c = nullptr) const {
        CycleInfo info = cycle_info(x, c);
        std::int64_t lam = static_cast<std::int64_t>(info.lambda);
        std::int64_t km = k % lam;
        if (km < 0) km += lam;
        index_t s = info.l + (info.j - info.l + static_cast<index_t>(km)) % info.lambda;
        return psi_->forward(s, c);
    }

    SpaceBreakdown space() const {
        SpaceBreakdown s;
        append_prefixed(s, "psi.", psi_->space());
        s.push_back({"lambda", lambda_.space()});
        s.push_back({"starts", starts_.space()});
        return s;
    }

    void save(ByteWriter& w) const {
        w.put_tag("PWR1");
        save_backend(w, *psi_);
        w.put_ints(lambda_);
        starts_.save(w);
    }

    static PowerRep load(ByteReader& r) {
        r.expect_tag("PWR1");
        auto psi = load_backend(r);
        IntVector lambda = r.get_ints();
        Fid starts = Fid::load(r);
        return PowerRep(std::move(psi), std::move(lambda), std::move(starts));
    }

  private:
    void locate(CycleInfo& info, EvalCount* c) const {
        if (c) c->dict_ops += 2;
        index_t b = starts_.fullrank(info.j + 1) - 1;
        index_t sb = starts_.select(b);
        info.lambda = lambda_[b];
        info.l = sb + info.lambda * ((info.j - sb) / info.lambda);
    }

    void validate() const {
        index_t n = psi_->size();
        if (starts_.universe() != n || starts_.count() != lambda_.size())
            throw FormatError("PWR1: block table does not match psi");
        if (n > 0 && (lambda_.size() == 0 || !starts_.contains(0))) throw FormatError("PWR1: first block must start at 0");
        for (index_t b = 0; b < lambda_.size(); ++b) {
            index_t lo = starts_.select(b);
            index_t hi = b + 1 < lambda_.size() ? starts_.select(b + 1) : n;
            if (lambda_[b] == 0 || (hi - lo) % lambda_[b] != 0 || (b && lambda_[b] <= lambda_[b - 1]))
                throw FormatError("PWR1: block " + std::to_string(b) + " is not a whole number of cycles");
        }
    }

    std::unique_ptr<PermBackend> psi_;
    IntVector lambda_;
    Fid starts_;
};

}  // namespace spf
