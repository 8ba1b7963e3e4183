#include <gtest/gtest.h>

#include <random>

#include "tfg/axis.hpp"

using namespace tfg;

namespace {

LatticeVector v2(int x, int y) { return LatticeVector{x, y}; }

// Every letter must shift along a single axis.
void expect_axis_aligned(const AxisReduction& r) {
    for (const auto& t : r.family.elements) {
        int axes = 0;
        std::vector<LatticeVector> shifts;
        for (const auto& p : t.pieces()) shifts.push_back(p.shift);
        for (int i = 0; i < t.dim(); ++i) {
            bool moves = false;
            for (const auto& s : shifts) moves |= s[i] != 0;
            axes += moves;
        }
        EXPECT_LE(axes, 1);
        EXPECT_EQ(std::get<int>(order(t, 3)), 3);
    }
}

}  // namespace

TEST(AxisReduce, AlignedInputIsOneLetter) {
    auto o = make_oracle("chair");
    auto pi = o->sample_window(4, ball_points(2, 2));
    auto r = axis_reduce(o, pi, v2(0, 0), v2(0, 1), v2(0, 3));
    ASSERT_EQ(r.word.size(), 1u);
    EXPECT_EQ(r.family.size(), 1u);
    EXPECT_TRUE(r.verified);
}

TEST(AxisReduce, UnitTriangleOnChair) {
    auto o = make_oracle("chair");
    auto pi = o->sample_window(11, ball_points(2, 3));
    auto r = axis_reduce(o, pi, v2(0, 0), v2(1, 0), v2(0, 1));
    EXPECT_TRUE(r.verified);
    EXPECT_GT(r.word.size(), 1u);
    expect_axis_aligned(r);
    auto value = detail::evaluate_flat_tables(r.word, r.family.elements, identity_element(o));
    EXPECT_TRUE(equals(value, make_three_cycle(o, pi, v2(0, 0), v2(1, 0), v2(0, 1))));
}

TEST(AxisReduce, RandomInstancesVerify) {
    auto o = make_oracle("chair");
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> sh(-2, 2);
    int done = 0;
    while (done < 25) {
        auto pi = o->sample_window(rng(), ball_points(2, 3));
        auto g1 = v2(sh(rng), sh(rng)), g2 = v2(sh(rng), sh(rng)), g3 = v2(sh(rng), sh(rng));
        try {
            auto r = axis_reduce(o, pi, g1, g2, g3);
            EXPECT_TRUE(r.verified) << g1.str() << g2.str() << g3.str();
            expect_axis_aligned(r);
            ++done;
        } catch (const OverlapError&) {
        } catch (const GridObstruction&) {
        }
    }
}

TEST(AxisReduce, ThreeDimensionalFullShift) {
    auto o = make_oracle("full:3:ab");
    std::mt19937_64 rng(8);
    int done = 0;
    for (int t = 0; t < 200 && done < 3; ++t) {
        auto pi = o->sample_window(rng(), ball_points(3, 4));
        try {
            auto r = axis_reduce(o, pi, LatticeVector{0, 0, 0}, LatticeVector{1, 0, 0}, LatticeVector{0, 1, 1});
            EXPECT_TRUE(r.verified);
            expect_axis_aligned(r);
            ++done;
        } catch (const OverlapError&) {
        } catch (const GridObstruction&) {
        }
    }
    EXPECT_GT(done, 0);
}

TEST(AxisReduce, GridObstruction) {
    // Diagonal stripes pi(x,y) = f(x-y) on a 3x3 square are invariant under
    // (1,1), which lies in the grid box of (0,0),(2,0),(0,2).
    auto o = make_oracle("full:2:ab");
    bool seen = false;
    for (int code = 0; code < 32 && !seen; ++code) {
        std::vector<Cell> cells;
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y) cells.push_back({v2(x, y), static_cast<Symbol>((code >> (x - y + 2)) & 1)});
        Patch pi(2, cells);
        try {
            make_three_cycle(o, pi, v2(0, 0), v2(2, 0), v2(0, 2));
        } catch (const OverlapError&) {
            continue;
        }
        EXPECT_THROW(axis_reduce(o, pi, v2(0, 0), v2(2, 0), v2(0, 2)), GridObstruction);
        seen = true;
    }
    EXPECT_TRUE(seen);
}
