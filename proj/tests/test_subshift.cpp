#include <gtest/gtest.h>

#include <random>
#include <set>

#include "tfg/subshift.hpp"

using namespace tfg;

namespace {

LatticeVector v2(int x, int y) { return LatticeVector::from(std::vector<int>{x, y}); }

// Every window of the given shape occurring in any depth-n substitution
// image, found by a direct scan independent of the oracle's memo.
std::set<Patch> scan_images(int depth, const std::vector<LatticeVector>& shape) {
    std::set<Patch> out;
    int maxx = 0, maxy = 0;
    for (const auto& p : shape) {
        maxx = std::max(maxx, p[0]);
        maxy = std::max(maxy, p[1]);
    }
    for (Symbol s = 0; s < 4; ++s) {
        auto img = ChairShift::substitute(s, depth);
        for (int y = 0; y + maxy < img.side; ++y)
            for (int x = 0; x + maxx < img.side; ++x) {
                std::vector<Cell> cells;
                for (const auto& p : shape) cells.push_back({p, img.at(x + p[0], y + p[1])});
                out.insert(Patch(2, std::move(cells)));
            }
    }
    return out;
}

}  // namespace

TEST(Alphabet, Validation) {
    EXPECT_THROW(Alphabet(std::vector<std::string>{}), BadInput);
    EXPECT_THROW(Alphabet({"a", "a"}), BadInput);
    Alphabet a({"x", "y"});
    EXPECT_EQ(a.index("y"), 1);
    EXPECT_THROW(a.index("z"), UnknownSymbol);
}

TEST(FullShift, EverythingAdmissible) {
    auto o = make_oracle("full:1:ab");
    auto b = ball_points(1, 1);
    EXPECT_EQ(o->enumerate_admissible(b).size(), 8u);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) EXPECT_TRUE(o->is_admissible(o->sample_window(rng(), b)));
}

TEST(FullShift, UnknownSymbolRejected) {
    auto o = make_oracle("full:1:ab");
    Patch p(1, {{LatticeVector(1), 7}});
    EXPECT_THROW(o->is_admissible(p), UnknownSymbol);
}

TEST(FullShift, CompatibleMeansNoConflict) {
    auto o = make_oracle("full:2:abc");
    Patch a(2, {{v2(0, 0), 0}}), b(2, {{v2(0, 0), 1}}), c(2, {{v2(1, 0), 1}});
    EXPECT_TRUE(o->compatible(a, a));
    EXPECT_FALSE(o->compatible(a, b));
    EXPECT_TRUE(o->compatible(a, c));
}

TEST(FullShift, EnumerationCap) {
    auto o = std::make_shared<FullShift>(2, Alphabet({"a", "b"}));
    o->set_enumeration_cap(100);
    auto b = ball_points(2, 2);  // 2^13 patches
    EXPECT_THROW(o->enumerate_admissible(b), ResourceCap);
}

TEST(Chair, SingleCellsAndDomino) {
    auto o = make_oracle("chair");
    std::vector<LatticeVector> one{v2(0, 0)};
    EXPECT_EQ(o->enumerate_admissible(one).size(), 4u);
    EXPECT_EQ(scan_images(2, one).size(), 4u);
    std::vector<LatticeVector> domino{v2(0, 0), v2(1, 0)};
    auto dom = o->enumerate_admissible(domino);
    EXPECT_LT(dom.size(), 16u);
    EXPECT_EQ(dom.size(), 8u);
    auto scanned = scan_images(5, domino);
    EXPECT_EQ(std::set<Patch>(dom.begin(), dom.end()), scanned);
}

TEST(Chair, SquareCountMatchesScan) {
    auto o = make_oracle("chair");
    std::vector<LatticeVector> sq{v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)};
    auto got = o->enumerate_admissible(sq);
    EXPECT_EQ(got.size(), 19u);
    EXPECT_EQ(std::set<Patch>(got.begin(), got.end()), scan_images(6, sq));
    // A 2x2 block missing from every image is rejected.
    std::set<Patch> all;
    for (int code = 0; code < 256; ++code) {
        std::vector<Cell> cells;
        for (int i = 0; i < 4; ++i) cells.push_back({sq[static_cast<std::size_t>(i)], static_cast<Symbol>((code >> (2 * i)) & 3)});
        Patch p(2, cells);
        EXPECT_EQ(o->is_admissible(p), std::find(got.begin(), got.end(), p) != got.end());
    }
}

TEST(Chair, BallCounts) {
    auto o = make_oracle("chair");
    const std::vector<std::size_t> expected{4, 24, 68, 128, 216};
    for (int R = 0; R < static_cast<int>(expected.size()); ++R)
        EXPECT_EQ(o->enumerate_admissible(ball_points(2, R)).size(), expected[static_cast<std::size_t>(R)]) << R;
}

TEST(Chair, ShiftInvariance) {
    auto o = make_oracle("chair");
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> sym(0, 3), sh(-20, 20);
    auto b = ball_points(2, 2);
    for (int i = 0; i < 100; ++i) {
        Patch p = i % 2 ? o->sample_window(rng(), b) : [&] {
            std::vector<Cell> cells;
            for (const auto& q : b) cells.push_back({q, static_cast<Symbol>(sym(rng))});
            return Patch(2, cells);
        }();
        auto g = v2(sh(rng), sh(rng));
        EXPECT_EQ(o->is_admissible(p), o->is_admissible(p.shifted(g)));
    }
}

TEST(Chair, RestrictionMonotone) {
    auto o = make_oracle("chair");
    auto b = ball_points(2, 2);
    auto sub = ball_points(2, 1);
    for (const auto& p : o->enumerate_admissible(b)) {
        EXPECT_TRUE(o->is_admissible(p.restricted(sub)));
        EXPECT_TRUE(o->is_admissible(p.without(b.front())));
    }
}

TEST(Chair, DepthStabilizes) {
    auto base = std::make_shared<ChairShift>();
    auto deeper = std::make_shared<ChairShift>(ChairShift::kCompleteMargin + 1);
    for (int R = 0; R <= 6; ++R) {
        auto b = ball_points(2, R);
        EXPECT_EQ(base->enumerate_admissible(b), deeper->enumerate_admissible(b)) << "R=" << R;
    }
    // Sparse supports with wide bounding boxes.
    std::vector<LatticeVector> sparse{v2(0, 0), v2(5, 1), v2(2, 6)};
    EXPECT_EQ(base->enumerate_admissible(sparse), deeper->enumerate_admissible(sparse));
}

TEST(Chair, TwoByTwoBlocksSettleAtDepthThree) {
    std::vector<LatticeVector> sq{v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)};
    std::vector<std::size_t> counts;
    for (int depth = 1; depth <= 6; ++depth) counts.push_back(scan_images(depth, sq).size());
    EXPECT_LT(counts[1], counts[2]);
    for (std::size_t i = 2; i < counts.size(); ++i) EXPECT_EQ(counts[i], 19u) << "depth " << i + 1;
    EXPECT_EQ(ChairShift::kCompleteMargin, 3);
}

TEST(Chair, SamplingDeterministic) {
    auto o = make_oracle("chair");
    auto b = ball_points(2, 5);
    auto p = o->sample_window(42, b);
    EXPECT_EQ(p, o->sample_window(42, b));
    EXPECT_TRUE(o->is_admissible(p));
    std::set<Patch> distinct;
    for (std::uint64_t s = 0; s < 20; ++s) distinct.insert(o->sample_window(s, b));
    EXPECT_GT(distinct.size(), 5u);
}

TEST(Oracle, MakeOracleErrors) {
    EXPECT_THROW(make_oracle("bogus"), BadInput);
    EXPECT_THROW(make_oracle("full:2"), BadInput);
    EXPECT_EQ(make_oracle("full:1:a,b")->alphabet().size(), 2u);
}
