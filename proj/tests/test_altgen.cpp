#include <gtest/gtest.h>

#include <random>

#include "tfg/altgen.hpp"

using namespace tfg;
using namespace tfg::altgen;

namespace {

Perm random_three_cycle(std::mt19937_64& rng, int n) {
    std::vector<int> pts(static_cast<std::size_t>(n));
    std::iota(pts.begin(), pts.end(), 0);
    std::shuffle(pts.begin(), pts.end(), rng);
    return Perm::cycle(n, {pts[0], pts[1], pts[2]});
}

}  // namespace

TEST(Words, Indexing) {
    EXPECT_EQ(word_index("aa"), 0);
    EXPECT_EQ(word_index("ab"), 1);
    EXPECT_EQ(word_index("cc"), 8);
    EXPECT_EQ(word_name(3, 5), "abc");
    EXPECT_EQ(cycle_name(2, parse_cycle(2, "(ab ac ba)")), "(ab ac ba)");
    EXPECT_THROW(parse_cycle(2, "(abc aa ab)"), BadInput);
}

TEST(GeneratorSet, SizeAndParity) {
    GeneratorSetB b2(2), b3(3);
    EXPECT_EQ(b2.family().size(), 6u);
    EXPECT_EQ(b3.family().size(), 27u);
    for (const auto& g : b2.perms()) {
        EXPECT_TRUE(g.is_even());
        EXPECT_TRUE(g.as_three_cycle());
    }
    EXPECT_GE(b2.family().find("(aa ab ac)"), 0);
}

TEST(BaseCase, SevenIdentities) {
    EXPECT_TRUE(verify_base_identities());
    GeneratorSetB b2(2);
    auto words = base_words(b2);
    ASSERT_EQ(words.size(), 7u);
    // (ab ac ba) = (aa ba ca)(aa ab ac)(aa ca ba).
    const auto& w = words[1];
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(b2.family().labels[static_cast<std::size_t>(w[0].generator)], "(aa ba ca)");
    EXPECT_EQ(w[0].exp, 1);
    EXPECT_EQ(b2.family().labels[static_cast<std::size_t>(w[1].generator)], "(aa ab ac)");
    EXPECT_EQ(w[2].exp, -1);
}

TEST(Factorize, GeneratorIsSingleLetter) {
    auto w = altgen_factorize(2, parse_cycle(2, "(aa ab ac)"));
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0].exp, 1);
}

TEST(Factorize, RandomCyclesVerify) {
    std::mt19937_64 rng(2024);
    for (int d : {2, 3, 4}) {
        GeneratorSetB b(d);
        for (int i = 0; i < (d == 4 ? 20 : 100); ++i) {
            auto t = random_three_cycle(rng, pow3(d));
            auto w = altgen_factorize(d, t);
            EXPECT_EQ(evaluate_perm_word(w, b.perms(), b.degree()), t) << cycle_name(d, t);
        }
    }
}

TEST(Factorize, SharedPrefixes) {
    // All three words share a prefix, so two padding prefixes are needed.
    auto t = parse_cycle(3, "(aba abb abc)");
    GeneratorSetB b(3);
    EXPECT_EQ(evaluate_perm_word(altgen_factorize(3, t), b.perms(), 27), t);
    t = parse_cycle(3, "(ccc cca acc)");
    EXPECT_EQ(evaluate_perm_word(altgen_factorize(3, t), b.perms(), 27), t);
}

TEST(Factorize, Errors) {
    EXPECT_THROW(altgen_factorize(1, Perm::cycle(3, {0, 1, 2})), BadInput);
    EXPECT_THROW(altgen_factorize(2, Perm::cycle(9, {0, 1})), NotAThreeCycle);
    EXPECT_THROW(altgen_factorize(2, Perm::cycle(27, {0, 1, 2})), DimensionMismatch);
}

TEST(Closure, OrderIsA9) {
    EXPECT_EQ(altgen_closure(2), 181440u);
    EXPECT_THROW(altgen_closure(3), BadInput);
}
