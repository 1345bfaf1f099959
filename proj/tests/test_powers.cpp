#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spf/powers.hpp"

using namespace spf;

namespace {

const BackendKind kAllKinds[] = {BackendKind::naive, BackendKind::shortcut, BackendKind::benes};

}  // namespace

TEST(Powers, IdentityHasOneBlock) {
    PowerRep rep(Permutation::identity(10), BackendKind::naive);
    EXPECT_EQ(rep.distinct_lengths(), 1u);
    EXPECT_EQ(rep.lambda(0), 1u);
    EXPECT_EQ(rep.starts().count(), 1u);
    EXPECT_TRUE(rep.starts().contains(0));
    for (index_t x = 0; x < 10; ++x) {
        auto ci = rep.cycle_info(x);
        EXPECT_EQ(ci.l, ci.j);
        EXPECT_EQ(ci.lambda, 1u);
    }
}

TEST(Powers, HandExample) {
    auto p = Permutation::from_image({1, 2, 0, 4, 3});
    PowerRep rep(p, BackendKind::naive);
    std::vector<index_t> psi;
    for (index_t j = 0; j < 5; ++j) psi.push_back(rep.psi().forward(j));
    EXPECT_EQ(psi, (std::vector<index_t>{3, 4, 0, 1, 2}));
    EXPECT_EQ(rep.lambda(0), 2u);
    EXPECT_EQ(rep.lambda(1), 3u);
    EXPECT_EQ(rep.starts().select(0), 0u);
    EXPECT_EQ(rep.starts().select(1), 2u);
    auto ci = rep.cycle_info(1);
    EXPECT_EQ(ci.j, 3u);
    EXPECT_EQ(ci.lambda, 3u);
    EXPECT_EQ(ci.l, 2u);
    EXPECT_EQ(rep.power(0, 5), 2u);
    EXPECT_EQ(rep.power(3, -1), 4u);
    EXPECT_EQ(rep.power(4, 0), 4u);
}

TEST(Powers, BlockInvariantOnRandomPerms) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        index_t n = 1 + seed * 200;
        auto p = random_perm(n, seed);
        PowerRep rep(p, BackendKind::naive);
        for (index_t b = 0; b < rep.distinct_lengths(); ++b) {
            index_t lo = rep.starts().select(b);
            index_t hi = b + 1 < rep.distinct_lengths() ? rep.starts().select(b + 1) : n;
            index_t lam = rep.lambda(b);
            ASSERT_EQ((hi - lo) % lam, 0u);
            for (index_t c = lo; c < hi; c += lam)
                for (index_t j = 0; j < lam; ++j)
                    ASSERT_EQ(p[rep.psi().forward(c + j)], rep.psi().forward(c + (j + 1) % lam));
        }
        ASSERT_LE(rep.distinct_lengths() * (rep.distinct_lengths() + 1) / 2, n);
        for (index_t x = 0; x < n; ++x) {
            auto ci = rep.cycle_info(x);
            ASSERT_LE(ci.l, ci.j);
            ASSERT_LT(ci.j, ci.l + ci.lambda);
        }
    }
}

TEST(Powers, ExhaustiveAgainstOracleAllBackends) {
    for (BackendKind kind : kAllKinds) {
        for (index_t n : {1u, 2u, 9u, 64u, 200u}) {
            auto p = random_perm(n, n + 3);
            auto inv = p.inverse().image();
            PowerRep rep(p, kind, 3);
            std::int64_t sn = static_cast<std::int64_t>(n);
            for (index_t x = 0; x < n; ++x) {
                index_t y = x;
                for (std::int64_t k = 0; k <= 2 * sn; ++k, y = p[y]) ASSERT_EQ(rep.power(x, k), y) << to_string(kind);
                y = x;
                for (std::int64_t k = 0; k >= -2 * sn; --k, y = inv[y]) ASSERT_EQ(rep.power(x, k), y);
            }
        }
    }
}

TEST(Powers, CostIsOneInverseOneForward) {
    auto p = random_perm(500, 4);
    PowerRep rep(p, BackendKind::naive);
    EvalCount c;
    rep.power(17, 123456789, &c);
    EXPECT_EQ(c.forward_evals, 1u);
    EXPECT_EQ(c.inverse_evals, 1u);
    EXPECT_EQ(c.dict_ops, 2u);
}

TEST(Powers, PeriodicityAndComposition) {
    auto p = random_perm(3000, 6);
    PowerRep rep(p, BackendKind::shortcut, 4);
    Rng rng(8);
    for (int it = 0; it < 2000; ++it) {
        index_t x = rng.below(3000);
        std::int64_t a = rng.between(-1000000, 1000000), b = rng.between(-1000000, 1000000);
        auto lam = static_cast<std::int64_t>(rep.cycle_info(x).lambda);
        ASSERT_EQ(rep.power(x, a + lam), rep.power(x, a));
        ASSERT_EQ(rep.power(rep.power(x, a), b), rep.power(x, a + b));
    }
    for (index_t x = 0; x < 3000; ++x) {
        ASSERT_EQ(rep.power(x, 1), p[x]);
        ASSERT_EQ(p[rep.power(x, -1)], x);
    }
}

TEST(Powers, ExtremeExponents) {
    auto p = random_perm(100, 2);
    PowerRep rep(p, BackendKind::benes, 3);
    for (index_t x = 0; x < 100; ++x) {
        auto lam = static_cast<std::int64_t>(rep.cycle_info(x).lambda);
        std::int64_t kmax = std::numeric_limits<std::int64_t>::max();
        std::int64_t kmin = std::numeric_limits<std::int64_t>::min();
        ASSERT_EQ(rep.power(x, kmax), power_oracle(p, x, kmax % lam));
        std::int64_t r = kmin % lam;
        if (r < 0) r += lam;
        ASSERT_EQ(rep.power(x, kmin), power_oracle(p, x, r));
    }
}

TEST(Powers, SaveLoadEveryBackend) {
    auto p = random_perm(400, 13);
    for (BackendKind kind : kAllKinds) {
        PowerRep rep(p, kind, 5);
        ByteWriter w;
        rep.save(w);
        auto bytes = w.release();
        ByteReader r(bytes);
        PowerRep back = PowerRep::load(r);
        EXPECT_TRUE(r.done());
        EXPECT_EQ(back.psi().kind(), kind);
        for (index_t x = 0; x < 400; ++x) ASSERT_EQ(back.power(x, 7), rep.power(x, 7));
    }
}
