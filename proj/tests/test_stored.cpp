#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "spf/spf.hpp"

using namespace spf;

namespace {

StoredRep round_trip(const Container& c) {
    auto bytes = c.serialize();
    return StoredRep::from_container(Container::parse(bytes));
}

}  // namespace

TEST(TextIo, PermRoundTripAndErrors) {
    auto pi = random_perm(50, 4);
    std::stringstream s;
    write_perm_text(s, pi);
    EXPECT_EQ(read_perm_text(s), pi);

    std::istringstream dup("3\n0 0 1\n"), shortv("3\n0 1\n"), neg("2\n-1 0\n"), extra("2\n1 0 7\n"), word("2\n1 x\n");
    EXPECT_THROW(read_perm_text(dup), FormatError);
    EXPECT_THROW(read_perm_text(shortv), FormatError);
    EXPECT_THROW(read_perm_text(neg), FormatError);
    EXPECT_THROW(read_perm_text(extra), FormatError);
    EXPECT_THROW(read_perm_text(word), FormatError);
}

TEST(TextIo, FuncAndTree) {
    std::stringstream s;
    write_func_text(s, {3, 0, 0}, 4);
    auto f = read_func_text(s);
    EXPECT_EQ(f.m, 4u);
    EXPECT_EQ(f.image, (std::vector<index_t>{3, 0, 0}));
    std::istringstream out_of_range("2 2\n0 2\n");
    EXPECT_THROW(read_func_text(out_of_range), FormatError);

    std::istringstream t("(()\n())\n"), bad("(x)");
    EXPECT_EQ(read_tree_text(t), "(()())");
    EXPECT_THROW(read_tree_text(bad), FormatError);
}

TEST(Container, LayoutIsLittleEndianWithAbsoluteOffsets) {
    Container c;
    c.add("AAAA", {1, 2, 3});
    c.add("BBBB", {});
    c.add("CCCC", {9});
    auto b = c.serialize();
    ASSERT_EQ(b.size(), 4u + 1 + 8 + 3 * 20 + 4);
    EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "SPFR");
    EXPECT_EQ(b[4], Container::version);
    EXPECT_EQ(b[5], 3u);  // count, low byte first
    // first entry: tag, offset 73, length 3
    EXPECT_EQ(std::string(b.begin() + 13, b.begin() + 17), "AAAA");
    EXPECT_EQ(b[17], 73u);
    EXPECT_EQ(b[25], 3u);
    EXPECT_EQ(b[73], 1u);
    auto back = Container::parse(b);
    EXPECT_EQ(back.tags(), (std::vector<std::string>{"AAAA", "BBBB", "CCCC"}));
    EXPECT_EQ(back.section("CCCC"), std::vector<std::uint8_t>{9});
}

TEST(Container, RejectsCorruption) {
    Container c;
    c.add("AAAA", {1, 2, 3});
    auto b = c.serialize();
    auto bad_magic = b;
    bad_magic[0] = 'X';
    EXPECT_THROW(Container::parse(bad_magic), FormatError);
    auto bad_version = b;
    bad_version[4] = 99;
    EXPECT_THROW(Container::parse(bad_version), FormatError);
    auto truncated = b;
    truncated.pop_back();
    EXPECT_THROW(Container::parse(truncated), FormatError);
    auto bad_offset = b;
    bad_offset[17] = 0;  // points into the header
    EXPECT_THROW(Container::parse(bad_offset), FormatError);
    EXPECT_THROW(c.add("AAAA", {}), std::invalid_argument);
}

TEST(StoredRep, PermKindsRoundTrip) {
    auto pi = random_perm(300, 11);
    auto inv = pi.inverse();
    BuildOptions opt;
    opt.t = 3;
    for (RepKind k : {RepKind::naive, RepKind::shortcut, RepKind::benes, RepKind::powers}) {
        auto rep = round_trip(pack_perm(k, pi, opt));
        EXPECT_EQ(rep.kind(), k);
        EXPECT_EQ(rep.size(), 300u);
        EXPECT_EQ(rep.bound_bits(), oracle::factorial_bits(300));
        for (index_t i = 0; i < 300; ++i) {
            if (rep.backend()) {
                ASSERT_EQ(rep.backend()->forward(i), pi[i]);
                ASSERT_EQ(rep.backend()->inverse(i), inv[i]);
            } else {
                ASSERT_EQ(rep.powers()->power(i, 7), oracle::iterate(pi.image(), i, 7));
            }
        }
    }
}

TEST(StoredRep, TreeAndFunctions) {
    auto parens = random_bp(500, 2);
    auto t = round_trip(pack_tree(parens, {}));
    ASSERT_NE(t.tree(), nullptr);
    EXPECT_EQ(t.tree()->length(), 1000u);
    EXPECT_EQ(t.kind(), RepKind::tree);

    FuncText sq{19, quad19()};
    auto c = pack_func(sq, {});
    EXPECT_EQ(c.tags(), (std::vector<std::string>{"BPT1", "FNC1"}));
    auto f = round_trip(c);
    EXPECT_EQ(f.kind(), RepKind::func);
    auto pre = f.func()->inverse_power(18, 1);
    std::sort(pre.begin(), pre.end());
    EXPECT_EQ(pre, (std::vector<index_t>{0, 17}));

    auto large = round_trip(pack_func({2, {1, 0, 0, 1}}, {}));
    EXPECT_EQ(large.kind(), RepKind::func_large);
    EXPECT_EQ(large.func_large()->power(2, 2), 1u);
    auto small = round_trip(pack_func({4, {3, 0}}, {}));
    EXPECT_EQ(small.kind(), RepKind::func_small);
    EXPECT_EQ(small.range(), 4u);
}

TEST(StoredRep, RejectsUnknownSectionMix) {
    Container c;
    c.add("SHC1", {});
    EXPECT_THROW(round_trip(c), FormatError);
    auto good = pack_perm(RepKind::naive, random_perm(5, 1), {});
    auto bytes = good.serialize();
    bytes.push_back(0);
    EXPECT_THROW(Container::parse(bytes), FormatError);
    Container extra;
    auto sec = good.section("PERM");
    sec.push_back(0);
    extra.add("PERM", sec);
    EXPECT_THROW(round_trip(extra), FormatError);
}
