#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spf/backend.hpp"
#include "spf/permutation.hpp"

using namespace spf;

TEST(Permutation, FromImageValid) {
    auto p = Permutation::from_image({1, 0});
    EXPECT_EQ(p.size(), 2u);
    EXPECT_EQ(p(0), 1u);
    EXPECT_EQ(p(1), 0u);
}

TEST(Permutation, FromImageRejectsDuplicateNamingIndex) {
    try {
        Permutation::from_image({0, 0});
        FAIL() << "expected a bijection error";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos) << e.what();
    }
}

TEST(Permutation, FromImageRejectsOutOfRange) {
    EXPECT_THROW(Permutation::from_image({0, 2}), std::invalid_argument);
}

TEST(CycleDecompose, Identity) {
    auto d = cycle_decompose(Permutation::identity(3));
    ASSERT_EQ(d.cycles.size(), 3u);
    for (index_t i = 0; i < 3; ++i) EXPECT_EQ(d.cycles[i], std::vector<index_t>{i});
}

TEST(CycleDecompose, TwoCycles) {
    auto d = cycle_decompose(Permutation::from_image({1, 2, 0, 4, 3}));
    ASSERT_EQ(d.cycles.size(), 2u);
    EXPECT_EQ(d.cycles[0], (std::vector<index_t>{0, 1, 2}));
    EXPECT_EQ(d.cycles[1], (std::vector<index_t>{3, 4}));
}

TEST(CycleDecompose, Swap) {
    auto d = cycle_decompose(Permutation::from_image({1, 0}));
    ASSERT_EQ(d.cycles.size(), 1u);
    EXPECT_EQ(d.cycles[0], (std::vector<index_t>{0, 1}));
}

TEST(CycleDecompose, CanonicalFormOnRandomPerms) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto p = random_perm(1 + seed * 37, seed);
        auto d = cycle_decompose(p);
        std::vector<index_t> concat;
        for (const auto& c : d.cycles) {
            EXPECT_EQ(c.front(), *std::min_element(c.begin(), c.end()));
            for (std::size_t j = 0; j < c.size(); ++j) EXPECT_EQ(p[c[j]], c[(j + 1) % c.size()]);
            concat.insert(concat.end(), c.begin(), c.end());
        }
        EXPECT_NO_THROW(Permutation::from_image(concat));
    }
}

TEST(PowerOracle, Examples) {
    auto p = Permutation::from_image({1, 2, 0, 4, 3});
    EXPECT_EQ(power_oracle(p, 0, 5), 2u);
    EXPECT_EQ(power_oracle(p, 3, -1), 4u);
    for (index_t i = 0; i < 5; ++i) EXPECT_EQ(power_oracle(p, i, 0), i);
}

TEST(PowerOracle, SuccessorStep) {
    auto p = random_perm(40, 3);
    for (index_t i = 0; i < 40; ++i)
        for (std::int64_t k = 0; k < 50; ++k) ASSERT_EQ(power_oracle(p, i, k + 1), p[power_oracle(p, i, k)]);
}

TEST(RandomPerm, DeterministicAndValid) {
    EXPECT_EQ(random_perm(1, 42).image(), std::vector<index_t>{0});
    EXPECT_EQ(random_perm(100, 7), random_perm(100, 7));
    EXPECT_NE(random_perm(100, 7), random_perm(100, 8));
    EXPECT_NO_THROW(Permutation::from_image(random_perm(5, 123).image()));
    EXPECT_THROW(random_perm(0, 1), std::invalid_argument);
}

TEST(NaivePerm, ForwardInverseAreMutualInverses) {
    auto p = random_perm(777, 5);
    NaivePerm b(p);
    for (index_t i = 0; i < p.size(); ++i) {
        ASSERT_EQ(b.forward(i), p[i]);
        ASSERT_EQ(b.inverse(b.forward(i)), i);
        ASSERT_EQ(b.forward(b.inverse(i)), i);
    }
    EXPECT_THROW(b.forward(777), std::out_of_range);
    EXPECT_EQ(b.total_space().payload, 2u * 777 * 10);
}

TEST(NaivePerm, CountsOneEvaluationPerCall) {
    NaivePerm b(random_perm(10, 1));
    EvalCount c;
    b.forward(3, &c);
    b.inverse(3, &c);
    EXPECT_EQ(c.forward_evals, 1u);
    EXPECT_EQ(c.inverse_evals, 1u);
}

TEST(NaivePerm, SaveLoad) {
    auto p = random_perm(300, 9);
    NaivePerm b(p);
    ByteWriter w;
    b.save(w);
    auto bytes = w.release();
    ByteReader r(bytes);
    auto c = NaivePerm::load(r);
    for (index_t i = 0; i < 300; ++i) ASSERT_EQ(c->inverse(i), b.inverse(i));
}
