#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spf/bits.hpp"

namespace spf {

/// Seeded generator with a portable bounded draw (the standard distributions
/// are implementation-defined, which would break reproducible instances).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do x = eng_();
        while (x >= limit);
        return x % bound;
    }

    /// Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

  private:
    std::mt19937_64 eng_;
};

/// A validated bijection on [n]; image()[i] = pi(i).
class Permutation {
  public:
    Permutation() = default;

    static Permutation from_image(std::vector<index_t> image) {
        std::vector<bool> seen(image.size(), false);
        for (std::size_t i = 0; i < image.size(); ++i) {
            index_t v = image[i];
            if (v >= image.size())
                throw std::invalid_argument("not a bijection: value " + std::to_string(v) + " at index " +
                                            std::to_string(i) + " is outside [0, " + std::to_string(image.size()) + ")");
            if (seen[v])
                throw std::invalid_argument("not a bijection: value " + std::to_string(v) + " at index " +
                                            std::to_string(i) + " repeats an earlier value");
            seen[v] = true;
        }
        Permutation p;
        p.image_ = std::move(image);
        return p;
    }

    static Permutation identity(index_t n) {
        Permutation p;
        p.image_.resize(n);
        for (index_t i = 0; i < n; ++i) p.image_[i] = i;
        return p;
    }

    index_t size() const noexcept { return image_.size(); }
    index_t operator()(index_t i) const { return image_.at(i); }
    index_t operator[](index_t i) const noexcept { return image_[i]; }
    const std::vector<index_t>& image() const noexcept { return image_; }

    Permutation inverse() const {
        std::vector<index_t> inv(size());
        for (index_t i = 0; i < size(); ++i) inv[image_[i]] = i;
        Permutation p;
        p.image_ = std::move(inv);
        return p;
    }

    /// Extends by the identity on [size(), n).
    Permutation padded(index_t n) const {
        if (n < size()) throw std::invalid_argument("Permutation::padded: target smaller than size");
        Permutation p = *this;
        for (index_t i = size(); i < n; ++i) p.image_.push_back(i);
        return p;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

  private:
    std::vector<index_t> image_;
};

/// Cycles in canonical form: each starts at its minimum, cycles ordered by minimum.
struct CycleDecomposition {
    std::vector<std::vector<index_t>> cycles;
};

inline CycleDecomposition cycle_decompose(const Permutation& pi) {
    CycleDecomposition d;
    std::vector<bool> seen(pi.size(), false);
    for (index_t i = 0; i < pi.size(); ++i) {
        if (seen[i]) continue;
        auto& c = d.cycles.emplace_back();
        for (index_t x = i; !seen[x]; x = pi[x]) {
            seen[x] = true;
            c.push_back(x);
        }
    }
    return d;
}

/// pi^k(i) by |k|-fold iteration of pi or of its inverse. Reference oracle only.
inline index_t power_oracle(const Permutation& pi, index_t i, std::int64_t k) {
    if (i >= pi.size()) throw std::out_of_range("power_oracle: index out of range");
    if (k >= 0) {
        for (std::int64_t s = 0; s < k; ++s) i = pi[i];
        return i;
    }
    for (std::int64_t s = 0; s < -k; ++s) {
        index_t pre = 0;
        while (pi[pre] != i) ++pre;
        i = pre;
    }
    return i;
}

/// Uniform random permutation by seeded Fisher-Yates.
inline Permutation random_perm(index_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("random_perm: n must be >= 1");
    Rng rng(seed);
    std::vector<index_t> a(n);
    for (index_t i = 0; i < n; ++i) a[i] = i;
    for (index_t i = n - 1; i > 0; --i) std::swap(a[i], a[rng.below(i + 1)]);
    return Permutation::from_image(std::move(a));
}

/// ceil(lg n!) computed in floating point; used only for reporting.
inline double lg_factorial(index_t n) { return std::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0); }

}  // namespace spf
