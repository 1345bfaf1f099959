#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spf/bp_tree.hpp"
#include "spf/container.hpp"
#include "spf/func.hpp"
#include "spf/func_range.hpp"
#include "spf/lehmer.hpp"
#include "spf/powers.hpp"
#include "spf/text_io.hpp"

namespace spf {

enum class RepKind { naive, shortcut, benes, powers, tree, func, func_large, func_small };

inline std::string to_string(RepKind k) {
    switch (k) {
        case RepKind::naive: return "naive";
        case RepKind::shortcut: return "shortcut";
        case RepKind::benes: return "benes";
        case RepKind::powers: return "powers";
        case RepKind::tree: return "tree";
        case RepKind::func: return "func";
        case RepKind::func_large: return "func-large-domain";
        case RepKind::func_small: return "func-small-domain";
    }
    return "unknown";
}

struct BuildOptions {
    index_t t = 2;
    BackendKind backend = BackendKind::shortcut;  ///< inner backend of powers and func
    index_t width = 0;
    bool store_preorder_to_label = false;
    BpParams tree{};

    FuncOptions func() const { return {backend, t, width, store_preorder_to_label, tree}; }
};

namespace detail {

template <class T>
std::vector<std::uint8_t> bytes_of(const T& x) {
    ByteWriter w;
    x.save(w);
    return w.release();
}

template <class T>
T load_exact(const Container& c, const std::string& tag) {
    const auto& b = c.section(tag);
    ByteReader r(b);
    T x = T::load(r);
    if (!r.done()) throw FormatError("trailing bytes in section '" + tag + "'");
    return x;
}

}  // namespace detail

/// naive: PERM. shortcut: PERM + SHC1. benes: BNS1. powers: PWR1.
inline Container pack_perm(RepKind kind, const Permutation& pi, const BuildOptions& opt) {
    Container c;
    switch (kind) {
        case RepKind::naive: {
            ByteWriter w;
            save_perm_section(w, IntVector::from_values(pi.image(), field_width(pi.size())));
            c.add("PERM", w.release());
            break;
        }
        case RepKind::shortcut: {
            ByteWriter img, idx;
            save_perm_section(img, IntVector::from_values(pi.image(), field_width(pi.size())));
            ShortcutIndex::build(pi, opt.t).save(idx);
            c.add("PERM", img.release());
            c.add("SHC1", idx.release());
            break;
        }
        case RepKind::benes: c.add("BNS1", detail::bytes_of(BenesRep(pi, opt.t))); break;
        case RepKind::powers: c.add("PWR1", detail::bytes_of(PowerRep(pi, opt.backend, opt.t))); break;
        default: throw std::invalid_argument(to_string(kind) + " is not a permutation representation");
    }
    return c;
}

inline Container pack_benes(const BenesRep& b) {
    Container c;
    c.add("BNS1", detail::bytes_of(b));
    return c;
}

inline Container pack_tree(const std::string& parens, const BuildOptions& opt) {
    Container c;
    c.add("BPT1", detail::bytes_of(BpTree::from_string(parens, opt.tree)));
    return c;
}

/// n = m: BPT1 + FNC1. n > m: FRL1. n < m: FRS1.
inline Container pack_func(const FuncText& f, const BuildOptions& opt) {
    Container c;
    index_t n = f.image.size();
    if (n == 0) throw std::invalid_argument("empty function");
    if (n == f.m) {
        FuncRep rep(f.image, opt.func());
        ByteWriter tw, bw;
        rep.save_split(tw, bw);
        c.add("BPT1", tw.release());
        c.add("FNC1", bw.release());
    } else if (n > f.m) {
        c.add("FRL1", detail::bytes_of(RangeRepLarge(f.image, f.m, opt.func())));
    } else {
        c.add("FRS1", detail::bytes_of(RangeRepSmall(f.image, f.m, opt.func())));
    }
    return c;
}

/// A loaded container. Exactly one representation is populated; the kind
/// is inferred from the section tags.
class StoredRep {
  public:
    static StoredRep from_container(const Container& c) {
        StoredRep s;
        auto tags = c.tags();
        auto only = [&](std::initializer_list<const char*> want) {
            if (tags.size() != want.size()) return false;
            for (const char* t : want)
                if (!c.has(t)) return false;
            return true;
        };
        if (only({"PERM"})) {
            s.kind_ = RepKind::naive;
            s.perm_ = detail::load_exact<NaiveLoader>(c, "PERM").p;
        } else if (only({"PERM", "SHC1"})) {
            s.kind_ = RepKind::shortcut;
            IntVector img = detail::load_exact<ImageLoader>(c, "PERM").v;
            auto idx = detail::load_exact<ShortcutIndex>(c, "SHC1");
            s.perm_ = std::make_unique<ShortcutPerm>(std::move(img), std::move(idx));
        } else if (only({"BNS1"})) {
            s.kind_ = RepKind::benes;
            s.perm_ = detail::load_exact<BenesLoader>(c, "BNS1").p;
        } else if (only({"PWR1"})) {
            s.kind_ = RepKind::powers;
            s.powers_ = std::make_unique<PowerRep>(detail::load_exact<PowerRep>(c, "PWR1"));
        } else if (only({"BPT1"})) {
            s.kind_ = RepKind::tree;
            s.tree_ = std::make_unique<BpTree>(detail::load_exact<BpTree>(c, "BPT1"));
        } else if (only({"BPT1", "FNC1"})) {
            s.kind_ = RepKind::func;
            ByteReader tr(c.section("BPT1")), br(c.section("FNC1"));
            s.func_ = std::make_unique<FuncRep>(FuncRep::load_split(tr, br));
            if (!tr.done() || !br.done()) throw FormatError("trailing bytes in BPT1 or FNC1");
        } else if (only({"FRL1"})) {
            s.kind_ = RepKind::func_large;
            s.large_ = std::make_unique<RangeRepLarge>(detail::load_exact<RangeRepLarge>(c, "FRL1"));
        } else if (only({"FRS1"})) {
            s.kind_ = RepKind::func_small;
            s.small_ = std::make_unique<RangeRepSmall>(detail::load_exact<RangeRepSmall>(c, "FRS1"));
        } else {
            std::string list;
            for (const auto& t : tags) list += (list.empty() ? "" : ",") + t;
            throw FormatError("unrecognised section combination {" + list + "}");
        }
        return s;
    }

    RepKind kind() const noexcept { return kind_; }
    bool is_perm() const noexcept { return perm_ || powers_; }
    bool is_func() const noexcept { return func_ || large_ || small_; }

    const PermBackend* backend() const noexcept { return perm_.get(); }
    const PowerRep* powers() const noexcept { return powers_.get(); }
    const FuncRep* func() const noexcept { return func_.get(); }
    const RangeRepLarge* func_large() const noexcept { return large_.get(); }
    const RangeRepSmall* func_small() const noexcept { return small_.get(); }

    /// The stand-alone tree, or the tree inside an n = m function.
    const BpTree* tree() const noexcept { return tree_ ? tree_.get() : func_ ? &func_->tree() : nullptr; }

    /// Domain size: perm n, function n, tree node count.
    index_t size() const {
        if (perm_) return perm_->size();
        if (powers_) return powers_->size();
        if (tree_) return tree_->size();
        if (func_) return func_->size();
        if (large_) return large_->domain();
        return small_->domain();
    }

    index_t range() const {
        if (large_) return large_->range();
        if (small_) return small_->range();
        return size();
    }

    SpaceBreakdown space() const {
        if (perm_) return perm_->space();
        if (powers_) return powers_->space();
        if (tree_) return tree_->space();
        if (func_) return func_->space();
        if (large_) return large_->space();
        return small_->space();
    }

    /// Information-theoretic bound: ceil(lg n!) for perms, ceil(n lg m) for
    /// functions, ceil(lg C(n-1)) (ordered trees on n nodes) for trees.
    std::uint64_t bound_bits() const {
        index_t n = size();
        if (is_perm()) return n <= 4096 ? code_bits(n) : static_cast<std::uint64_t>(std::ceil(lg_factorial(n)));
        if (is_func()) return static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) * std::log2(static_cast<double>(range()))));
        double k = static_cast<double>(n) - 1;
        double lg = (std::lgamma(2 * k + 1) - std::lgamma(k + 1) - std::lgamma(k + 2)) / std::log(2.0);
        return static_cast<std::uint64_t>(std::ceil(lg - 1e-9));
    }

    std::string bound_label() const {
        if (is_perm()) return "ceil(lg n!)";
        if (is_func()) return "ceil(n lg m)";
        return "ceil(lg Catalan(n-1))";
    }

  private:
    struct NaiveLoader {
        std::unique_ptr<PermBackend> p;
        static NaiveLoader load(ByteReader& r) { return {NaivePerm::load(r)}; }
    };
    struct ImageLoader {
        IntVector v;
        static ImageLoader load(ByteReader& r) { return {load_perm_section(r)}; }
    };
    struct BenesLoader {
        std::unique_ptr<PermBackend> p;
        static BenesLoader load(ByteReader& r) { return {BenesRep::load(r)}; }
    };

    RepKind kind_ = RepKind::naive;
    std::unique_ptr<PermBackend> perm_;
    std::unique_ptr<PowerRep> powers_;
    std::unique_ptr<BpTree> tree_;
    std::unique_ptr<FuncRep> func_;
    std::unique_ptr<RangeRepLarge> large_;
    std::unique_ptr<RangeRepSmall> small_;
};

}  // namespace spf
