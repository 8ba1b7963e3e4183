#include <gtest/gtest.h>

#include <random>

#include "tfg/lattice.hpp"

using namespace tfg;

namespace {

LatticeVector v2(int x, int y) { return LatticeVector::from(std::vector<int>{x, y}); }
LatticeVector v1(int x) { return LatticeVector::from(std::vector<int>{x}); }

Patch random_patch(std::mt19937_64& rng, int d) {
    std::uniform_int_distribution<int> coord(-4, 4), sym(0, 2), count(1, 6);
    std::vector<Cell> cells;
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
        std::vector<int> c(static_cast<std::size_t>(d));
        for (auto& x : c) x = coord(rng);
        auto pos = LatticeVector::from(c);
        bool dup = false;
        for (const auto& e : cells) dup = dup || e.pos == pos;
        if (!dup) cells.push_back({pos, static_cast<Symbol>(sym(rng))});
    }
    return Patch(d, std::move(cells));
}

LatticeVector random_vec(std::mt19937_64& rng, int d) {
    std::uniform_int_distribution<int> coord(-5, 5);
    std::vector<int> c(static_cast<std::size_t>(d));
    for (auto& x : c) x = coord(rng);
    return LatticeVector::from(c);
}

}  // namespace

TEST(Ball, SmallExamples) {
    auto b = ball_points(1, 2);
    ASSERT_EQ(b.size(), 5u);
    EXPECT_EQ(b.front(), v1(-2));
    EXPECT_EQ(b.back(), v1(2));
    EXPECT_EQ(ball_points(2, 1).size(), 5u);
    EXPECT_EQ(ball_points(2, 2).size(), 13u);
}

TEST(Ball, ClosedFormCounts) {
    // Count of l1 ball points: sum_k 2^k C(d,k) C(R,k).
    auto binom = [](int n, int k) {
        if (k < 0 || k > n) return 0L;
        long r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    for (int d = 1; d <= 3; ++d)
        for (int R = 0; R <= 6; ++R) {
            long expected = 0;
            for (int k = 0; k <= d; ++k) expected += (1L << k) * binom(d, k) * binom(R, k);
            EXPECT_EQ(static_cast<long>(ball_points(d, R).size()), expected) << "d=" << d << " R=" << R;
        }
}

TEST(Ball, LexicographicOrder) {
    auto b = ball_points(2, 3);
    EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
    for (const auto& p : b) EXPECT_LE(p.l1(), 3);
}

TEST(Patch, ShiftDefinition) {
    Patch p(1, {{v1(0), 0}});
    auto q = patch_shift(p, v1(1));
    ASSERT_EQ(q.size(), 1u);
    EXPECT_EQ(q.at(v1(1)), Symbol{0});
    EXPECT_FALSE(q.covers(v1(0)));
    EXPECT_EQ(patch_shift(p, v1(0)), p);
}

TEST(Patch, ShiftRoundTripAndAction) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        int d = 1 + i % 3;
        auto p = random_patch(rng, d);
        auto g = random_vec(rng, d), h = random_vec(rng, d);
        EXPECT_EQ(patch_shift(patch_shift(p, g), -g), p);
        EXPECT_EQ(patch_shift(patch_shift(p, g), h), patch_shift(p, g + h));
    }
}

TEST(Patch, Conflict) {
    Patch a(1, {{v1(0), 0}, {v1(1), 1}});
    Patch b(1, {{v1(1), 0}, {v1(2), 0}});
    Patch c(1, {{v1(5), 0}});
    EXPECT_TRUE(patches_conflict(a, b));
    EXPECT_FALSE(patches_conflict(a, a));
    EXPECT_FALSE(patches_conflict(a, c));
}

TEST(Patch, Union) {
    Patch a(2, {{v2(0, 0), 0}});
    Patch b(2, {{v2(1, 0), 1}});
    EXPECT_EQ(patch_union(a, a), a);
    auto u = patch_union(a, b);
    EXPECT_EQ(u.size(), 2u);
    EXPECT_EQ(u.at(v2(1, 0)), Symbol{1});
    EXPECT_THROW(patch_union(a, Patch(2, {{v2(0, 0), 1}})), ConflictError);
}

TEST(Patch, UnionCommutativeAssociative) {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int i = 0; i < 400 && checked < 50; ++i) {
        auto a = random_patch(rng, 2), b = random_patch(rng, 2), c = random_patch(rng, 2);
        if (patches_conflict(a, b) || patches_conflict(b, c) || patches_conflict(a, c)) continue;
        EXPECT_EQ(patch_union(a, b), patch_union(b, a));
        EXPECT_EQ(patch_union(patch_union(a, b), c), patch_union(a, patch_union(b, c)));
        ++checked;
    }
    EXPECT_GT(checked, 10);
}

TEST(Patch, DuplicatePositionRejected) {
    EXPECT_THROW(Patch(1, {{v1(0), 0}, {v1(0), 1}}), ConflictError);
}

TEST(Patch, DimensionMismatch) {
    EXPECT_THROW(Patch(2, {{v1(0), 0}}), DimensionMismatch);
    EXPECT_THROW(v1(0) + v2(0, 0), DimensionMismatch);
}

TEST(Patch, RestrictionAndContainment) {
    Patch a(1, {{v1(0), 0}, {v1(1), 1}, {v1(2), 2}});
    std::vector<LatticeVector> s{v1(1), v1(2)};
    auto r = a.restricted(s);
    EXPECT_EQ(r.size(), 2u);
    EXPECT_TRUE(a.contains(r));
    EXPECT_FALSE(r.contains(a));
    EXPECT_EQ(a.radius(), 2);
}
