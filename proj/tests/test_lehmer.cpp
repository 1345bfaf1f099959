#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "spf/lehmer.hpp"

using namespace spf;

namespace {

std::vector<index_t> iota_vec(index_t q) {
    std::vector<index_t> v(q);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

LehmerDigits to_digits(const std::vector<oracle::u64>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Lehmer, IdentityCodeIsFactorialMinusOne) {
    for (index_t q : {1u, 2u, 5u, 10u, 30u}) {
        auto code = lehmer_encode(std::span<const index_t>(iota_vec(q)));
        EXPECT_EQ(code.value, factorial(q) - 1) << q;
    }
}

TEST(Lehmer, ThreeElementExample) {
    std::vector<index_t> p{2, 0, 1};
    auto code = lehmer_encode(std::span<const index_t>(p));
    EXPECT_EQ(code.value, 2);
    EXPECT_EQ(lehmer_decode(code), (LehmerDigits{0, 0, 1}));
    EXPECT_EQ(small_inverse(lehmer_decode(code), 0), 1u);
}

TEST(Lehmer, ReverseIsZero) {
    std::vector<index_t> p{4, 3, 2, 1, 0};
    EXPECT_EQ(lehmer_encode(std::span<const index_t>(p)).value, 0);
}

TEST(Lehmer, DecodeZeroIsAllZero) {
    LehmerCodec codec(40);
    auto r = codec.decode(BigUint(0));
    EXPECT_TRUE(std::all_of(r.begin(), r.end(), [](auto d) { return d == 0; }));
}

TEST(Lehmer, DecodeRejectsTooLarge) {
    LehmerCodec codec(5);
    EXPECT_THROW(codec.decode(BigUint(120)), std::out_of_range);
    EXPECT_NO_THROW(codec.decode(BigUint(119)));
    LehmerCodec big(30);
    EXPECT_THROW(big.decode(factorial(30)), std::out_of_range);
}

TEST(Lehmer, CodeBitsMatchIndependentFactorial) {
    for (index_t q = 0; q <= 300; ++q) ASSERT_EQ(code_bits(q), oracle::factorial_bits(q)) << q;
}

TEST(Lehmer, ExhaustiveSmallQ) {
    for (index_t q = 1; q <= 8; ++q) {
        LehmerCodec codec(q);
        auto p = iota_vec(q);
        std::uint64_t count = 0;
        do {
            auto code = lehmer_encode(std::span<const index_t>(p));
            auto want = to_digits(oracle::lehmer_digits_quadratic(p));
            auto got = codec.decode(code.value);
            ASSERT_EQ(got, want);
            ASSERT_EQ(digits_to_value(got), code.value);
            ASSERT_EQ(perm_from_digits(got), p);
            for (index_t i = 0; i < q; ++i) {
                ASSERT_EQ(small_forward(got, i), p[i]);
                ASSERT_EQ(small_inverse(got, p[i]), i);
            }
            ++count;
        } while (std::next_permutation(p.begin(), p.end()));
        std::uint64_t fact = 1;
        for (index_t i = 2; i <= q; ++i) fact *= i;
        EXPECT_EQ(count, fact);
    }
}

TEST(Lehmer, DecodeIsBijectiveOnAllValuesQ6) {
    LehmerCodec codec(6);
    std::vector<bool> seen(720, false);
    for (std::uint64_t v = 0; v < 720; ++v) {
        auto digits = codec.decode(v);
        auto p = perm_from_digits(digits);
        auto code = lehmer_encode(std::span<const index_t>(p));
        ASSERT_EQ(code.value, v);
    }
}

TEST(Lehmer, RandomLargeQRoundTripThroughBits) {
    for (index_t q : {21u, 64u, 100u, 512u}) {
        LehmerCodec codec(q);
        EXPECT_EQ(codec.bits(), oracle::factorial_bits(q));
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto p = random_perm(q, seed * 31 + q);
            auto code = lehmer_encode(p);
            BitSeq bits(codec.bits() + 7);
            codec.write(bits, 7, code.value);
            ASSERT_EQ(codec.read(bits, 7), code.value);
            auto digits = codec.decode_at(bits, 7);
            ASSERT_EQ(digits, to_digits(oracle::lehmer_digits_quadratic(p.image())));
            for (index_t i = 0; i < q; i += 7) {
                ASSERT_EQ(small_forward(digits, i), p[i]);
                ASSERT_EQ(small_inverse(digits, p[i]), i);
            }
        }
    }
}
