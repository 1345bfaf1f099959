#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spf/func.hpp"

namespace spf {

/// Sequence over [sigma] cut into chunks of sigma symbols; each chunk is a
/// permutation from (symbol, position)-sorted order to positions plus a
/// unary count map. Global counts per (symbol, chunk) sit in one more unary
/// map, symbol-major:
///   X: per chunk, per symbol a: 1^{count in chunk} 0
///   G: per symbol, per chunk c: 1^{count in chunk} 0
class ChunkedSeq {
  public:
    ChunkedSeq() = default;

    ChunkedSeq(const std::vector<index_t>& s, index_t sigma, BackendKind kind = BackendKind::shortcut, index_t t = 2)
        : len_(s.size()), sigma_(sigma) {
        if (sigma == 0) throw std::invalid_argument("ChunkedSeq: alphabet must be nonempty");
        for (index_t i = 0; i < len_; ++i)
            if (s[i] >= sigma)
                throw std::invalid_argument("ChunkedSeq: symbol " + std::to_string(s[i]) + " at " + std::to_string(i) +
                                            " outside alphabet");
        chunks_ = (len_ + sigma - 1) / sigma;
        std::vector<index_t> cnt(sigma), xones, gcount(sigma * chunks_, 0);
        index_t xat = 0;
        for (index_t c = 0; c < chunks_; ++c) {
            index_t lo = c * sigma, hi = std::min(len_, lo + sigma);
            std::fill(cnt.begin(), cnt.end(), 0);
            for (index_t p = lo; p < hi; ++p) ++cnt[s[p]];
            std::vector<index_t> start(sigma + 1, 0);
            for (index_t a = 0; a < sigma; ++a) start[a + 1] = start[a] + cnt[a];
            std::vector<index_t> img(hi - lo);
            for (index_t p = lo; p < hi; ++p) img[start[s[p]]++] = p - lo;
            perms_.push_back(make_backend(kind, Permutation::from_image(std::move(img)), t));
            for (index_t a = 0; a < sigma; ++a) {
                for (index_t u = 0; u < cnt[a]; ++u) xones.push_back(xat++);
                ++xat;
                gcount[a * chunks_ + c] = cnt[a];
            }
        }
        std::vector<index_t> gones;
        index_t gat = 0;
        for (index_t v : gcount) {
            for (index_t u = 0; u < v; ++u) gones.push_back(gat++);
            ++gat;
        }
        x_ = Fid(xat, xones);
        g_ = Fid(gat, gones);
    }

    ChunkedSeq(ChunkedSeq&&) noexcept = default;
    ChunkedSeq& operator=(ChunkedSeq&&) noexcept = default;

    index_t size() const noexcept { return len_; }
    index_t alphabet() const noexcept { return sigma_; }
    index_t chunk_count() const noexcept { return chunks_; }

    /// One inverse on the chunk permutation.
    index_t access(index_t i, EvalCount* c = nullptr) const {
        if (i >= len_) throw std::out_of_range("ChunkedSeq::access: position " + std::to_string(i) + " out of range");
        index_t ch = i / sigma_;
        index_t idx = perms_[ch]->inverse(i % sigma_, c);
        if (c) c->dict_ops += 2;
        index_t one = x_.select(ch * sigma_ + idx);
        return x_.fullrank0(one) - ch * sigma_;
    }

    /// Occurrences of a.
    index_t count(index_t a, EvalCount* c = nullptr) const {
        check_symbol(a);
        if (chunks_ == 0) return 0;
        if (c) c->dict_ops += 2;
        return g_.fullrank(segment_end(a)) - g_.fullrank(segment_begin(a));
    }

    /// Position of the r-th (0-based) occurrence of a; one forward on a chunk permutation.
    std::optional<index_t> select(index_t a, index_t r, EvalCount* c = nullptr) const {
        check_symbol(a);
        if (chunks_ == 0) return std::nullopt;
        if (c) c->dict_ops += 6;
        index_t b = segment_begin(a);
        index_t before = g_.fullrank(b);
        if (before + r >= g_.fullrank(segment_end(a))) return std::nullopt;
        index_t pos = g_.select(before + r);
        index_t ch = g_.fullrank0(pos) - a * chunks_;
        index_t cb = ch == 0 ? b : g_.select0(a * chunks_ + ch - 1) + 1;
        index_t within = before + r - g_.fullrank(cb);
        index_t z = (ch * sigma_ + a == 0) ? 0 : x_.select0(ch * sigma_ + a - 1) + 1;
        index_t idx = x_.fullrank(z) - ch * sigma_ + within;
        return ch * sigma_ + perms_[ch]->forward(idx, c);
    }

    SpaceBreakdown space() const {
        SpaceBreakdown s;
        SpaceBits chunks;
        for (const auto& p : perms_) chunks += sum(p->space());
        s.push_back({"chunk_perms", chunks});
        s.push_back({"chunk_counts", x_.space()});
        s.push_back({"symbol_counts", g_.space()});
        return s;
    }

    void save(ByteWriter& w) const {
        w.put_tag("SEQ1");
        w.put_u64(len_);
        w.put_u64(sigma_);
        for (const auto& p : perms_) save_backend(w, *p);
        x_.save(w);
        g_.save(w);
    }

    static ChunkedSeq load(ByteReader& r) {
        r.expect_tag("SEQ1");
        ChunkedSeq s;
        s.len_ = r.get_u64();
        s.sigma_ = r.get_u64();
        if (s.sigma_ == 0) throw FormatError("SEQ1: empty alphabet");
        s.chunks_ = (s.len_ + s.sigma_ - 1) / s.sigma_;
        for (index_t c = 0; c < s.chunks_; ++c) {
            s.perms_.push_back(load_backend(r));
            index_t want = std::min(s.sigma_, s.len_ - c * s.sigma_);
            if (s.perms_.back()->size() != want) throw FormatError("SEQ1: chunk permutation has the wrong size");
        }
        s.x_ = Fid::load(r);
        s.g_ = Fid::load(r);
        if (s.x_.universe() != s.len_ + s.sigma_ * s.chunks_ || s.x_.count() != s.len_ ||
            s.g_.universe() != s.len_ + s.sigma_ * s.chunks_ || s.g_.count() != s.len_)
            throw FormatError("SEQ1: count maps do not match the sequence");
        return s;
    }

  private:
    void check_symbol(index_t a) const {
        if (a >= sigma_) throw std::out_of_range("ChunkedSeq: symbol " + std::to_string(a) + " outside alphabet");
    }
    index_t segment_begin(index_t a) const { return a == 0 ? 0 : g_.select0(a * chunks_ - 1) + 1; }
    index_t segment_end(index_t a) const { return g_.select0((a + 1) * chunks_ - 1); }

    index_t len_ = 0, sigma_ = 1, chunks_ = 0;
    std::vector<std::unique_ptr<PermBackend>> perms_;
    Fid x_, g_;
};

/// f : [n] -> [m] with n > m. The restriction to [m] is kept as a FuncRep
/// with one dummy leaf under each j in f([m, n)); dummies are excluded from
/// pi. S = f(m), ..., f(n-1) is a ChunkedSeq over [m].
class RangeRepLarge {
  public:
    RangeRepLarge(const std::vector<index_t>& f, index_t m, const FuncOptions& opt = {}) : n_(f.size()), m_(m) {
        if (m == 0 || n_ <= m) throw std::invalid_argument("RangeRepLarge: need n > m >= 1");
        for (index_t i = 0; i < n_; ++i)
            if (f[i] >= m)
                throw std::invalid_argument("f(" + std::to_string(i) + ") = " + std::to_string(f[i]) + " is outside [0, " +
                                            std::to_string(m) + ")");
        std::vector<index_t> g(f.begin(), f.begin() + m), tail(f.begin() + m, f.end());
        std::vector<char> seen(m, 0);
        for (index_t y : tail) seen[y] = 1;
        for (index_t y = 0; y < m; ++y)
            if (seen[y]) g.push_back(y);
        FuncOptions o = opt;
        if (!o.width) o.width = default_width(m);
        core_ = FuncRep(g, o, m);
        seq_ = ChunkedSeq(tail, m, opt.backend, opt.t);
    }

    index_t domain() const noexcept { return n_; }
    index_t range() const noexcept { return m_; }
    const FuncRep& core() const noexcept { return core_; }
    const ChunkedSeq& seq() const noexcept { return seq_; }

    /// f^k(i) for k >= 0; k >= 2 needs f(i) in [m], which always holds here.
    index_t power(index_t i, std::uint64_t k, EvalCount* c = nullptr) const {
        if (i >= n_) throw std::out_of_range("RangeRepLarge::power: i outside domain");
        if (k == 0) return i;
        if (i >= m_) {
            index_t j = seq_.access(i - m_, c);
            if (k == 1) return j;
            i = j;
            --k;
        }
        return core_.label_at(*core_.forward_pos(core_.node_of(i, c), k, c), c).value;
    }

    /// { j in [n] : f^k(j) = i } for i in [m], k >= 1.
    std::vector<index_t> inverse_power(index_t i, std::uint64_t k, EvalCount* c = nullptr) const {
        if (i >= m_) throw std::out_of_range("RangeRepLarge::inverse_power: i outside [m]");
        std::vector<index_t> out;
        if (k == 0) return {i};
        core_.for_each_pred_pos(
            core_.node_of(i, c), k,
            [&](index_t y) {
                NodeLabel L = core_.label_at(y, c);
                if (!L.excluded) {
                    out.push_back(L.value);
                    return;
                }
                // a dummy stands for every tail position holding its parent's label
                index_t j = core_.label_at(*core_.tree().parent(y), c).value;
                index_t cnt = seq_.count(j, c);
                for (index_t r = 0; r < cnt; ++r) out.push_back(m_ + *seq_.select(j, r, c));
            },
            c);
        return out;
    }

    SpaceBreakdown space() const {
        SpaceBreakdown s;
        append_prefixed(s, "core.", core_.space());
        append_prefixed(s, "seq.", seq_.space());
        return s;
    }

    void save(ByteWriter& w) const {
        w.put_tag("FRL1");
        w.put_u64(n_);
        w.put_u64(m_);
        core_.save(w);
        seq_.save(w);
    }

    static RangeRepLarge load(ByteReader& r) {
        r.expect_tag("FRL1");
        index_t n = r.get_u64(), m = r.get_u64();
        FuncRep core = FuncRep::load(r);
        ChunkedSeq seq = ChunkedSeq::load(r);
        if (core.real_count() != m || seq.size() != n - m || seq.alphabet() != m || n <= m)
            throw FormatError("FRL1: parts do not match n and m");
        return RangeRepLarge(n, m, std::move(core), std::move(seq));
    }

  private:
    RangeRepLarge(index_t n, index_t m, FuncRep core, ChunkedSeq seq)
        : n_(n), m_(m), core_(std::move(core)), seq_(std::move(seq)) {}

    index_t n_, m_;
    FuncRep core_{std::vector<index_t>{0}};
    ChunkedSeq seq_;
};

/// f : [n] -> [m] with n < m. R = { y >= n : y has a preimage } each become a
/// root without an outgoing edge; those roots are excluded from pi and are
/// placed in increasing order of y, so the r-th excluded node is R's r-th
/// element. R itself is an IndexableDict over [m].
class RangeRepSmall {
  public:
    RangeRepSmall(const std::vector<index_t>& f, index_t m, const FuncOptions& opt = {}) : n_(f.size()), m_(m) {
        if (n_ == 0 || n_ >= m) throw std::invalid_argument("RangeRepSmall: need 1 <= n < m");
        std::vector<index_t> rset;
        for (index_t i = 0; i < n_; ++i) {
            if (f[i] >= m)
                throw std::invalid_argument("f(" + std::to_string(i) + ") = " + std::to_string(f[i]) + " is outside [0, " +
                                            std::to_string(m) + ")");
            if (f[i] >= n_) rset.push_back(f[i]);
        }
        std::sort(rset.begin(), rset.end());
        rset.erase(std::unique(rset.begin(), rset.end()), rset.end());
        rdict_ = IndexableDict(m, rset);
        std::vector<index_t> g(n_ + rset.size());
        for (index_t i = 0; i < n_; ++i)
            g[i] = f[i] < n_ ? f[i] : n_ + static_cast<index_t>(rdict_.partial_rank(f[i]));
        for (index_t r = 0; r < rset.size(); ++r) g[n_ + r] = n_ + r;
        FuncOptions o = opt;
        if (!o.width) o.width = default_width(n_);
        core_ = FuncRep(g, o, n_);
    }

    index_t domain() const noexcept { return n_; }
    index_t range() const noexcept { return m_; }
    const FuncRep& core() const noexcept { return core_; }
    const IndexableDict& rset() const noexcept { return rdict_; }

    /// f^k(i), or nothing when an intermediate value leaves [n].
    std::optional<index_t> power(index_t i, std::uint64_t k, EvalCount* c = nullptr) const {
        if (i >= n_) throw std::out_of_range("RangeRepSmall::power: i outside domain");
        auto y = core_.forward_pos(core_.node_of(i, c), k, c);
        if (!y) return std::nullopt;
        return value_at(*y, c);
    }

    /// { j in [n] : f^k(j) = i } for i in [m], k >= 1.
    std::vector<index_t> inverse_power(index_t i, std::uint64_t k, EvalCount* c = nullptr) const {
        if (i >= m_) throw std::out_of_range("RangeRepSmall::inverse_power: i outside [m]");
        std::vector<index_t> out;
        index_t x;
        if (i < n_) {
            x = core_.node_of(i, c);
        } else {
            if (c) ++c->dict_ops;
            std::int64_t r = rdict_.partial_rank(i);
            if (r < 0) return out;
            x = core_.excluded_node(static_cast<index_t>(r), c);
        }
        core_.for_each_pred_pos(x, k, [&](index_t y) { out.push_back(value_at(y, c)); }, c);
        return out;
    }

    SpaceBreakdown space() const {
        SpaceBreakdown s;
        append_prefixed(s, "core.", core_.space());
        s.push_back({"rset", rdict_.space()});
        return s;
    }

    void save(ByteWriter& w) const {
        w.put_tag("FRS1");
        w.put_u64(n_);
        w.put_u64(m_);
        core_.save(w);
        rdict_.save(w);
    }

    static RangeRepSmall load(ByteReader& r) {
        r.expect_tag("FRS1");
        index_t n = r.get_u64(), m = r.get_u64();
        FuncRep core = FuncRep::load(r);
        IndexableDict rd = IndexableDict::load(r);
        if (n == 0 || n >= m || core.real_count() != n || rd.universe() != m || core.size() != n + rd.count())
            throw FormatError("FRS1: parts do not match n and m");
        return RangeRepSmall(n, m, std::move(core), std::move(rd));
    }

  private:
    RangeRepSmall(index_t n, index_t m, FuncRep core, IndexableDict rd)
        : n_(n), m_(m), core_(std::move(core)), rdict_(std::move(rd)) {}

    index_t value_at(index_t pos, EvalCount* c) const {
        NodeLabel L = core_.label_at(pos, c);
        if (!L.excluded) return L.value;
        if (c) ++c->dict_ops;
        return rdict_.select(L.value);
    }

    index_t n_, m_;
    FuncRep core_{std::vector<index_t>{0}};
    IndexableDict rdict_;
};

}  // namespace spf
