#include <gtest/gtest.h>

#include <random>

#include "tfg/theorems.hpp"

using namespace tfg;

namespace {

LatticeVector v1(int x) { return LatticeVector{x}; }
LatticeVector v2(int x, int y) { return LatticeVector{x, y}; }

// Independent check of the radius condition: enumerate every admissible
// window on B(R) u (B(R)-g) and look for one agreeing with its translate.
bool separates_by_enumeration(const SubshiftOracle& o, int R, const LatticeVector& g) {
    auto ball = ball_points(o.dim(), R);
    auto supp = ball;
    for (const auto& h : ball) supp.push_back(h - g);
    std::sort(supp.begin(), supp.end());
    supp.erase(std::unique(supp.begin(), supp.end()), supp.end());
    for (const auto& f : o.enumerate_admissible(supp)) {
        bool agree = true;
        for (const auto& h : ball)
            if (f.at(h) != f.at(h - g)) {
                agree = false;
                break;
            }
        if (agree) return false;
    }
    return true;
}

}  // namespace

TEST(Radius, EmptySetIsZero) {
    auto r = incompatibility_radius(*make_oracle("chair"), {}, 5);
    ASSERT_TRUE(r.radius);
    EXPECT_EQ(*r.radius, 0);
}

TEST(Radius, ZeroShiftRejected) {
    EXPECT_THROW(incompatibility_radius(*make_oracle("chair"), {v2(0, 0)}, 3), PreconditionViolation);
}

TEST(Radius, FullShiftObstruction) {
    for (auto spec : {"full:1:ab", "full:2:ab"}) {
        auto o = make_oracle(spec);
        auto r = incompatibility_radius(*o, nonzero_ball(o->dim(), 2), 3);
        EXPECT_FALSE(r.radius) << spec;
        EXPECT_EQ(r.cap, 3);
        ASSERT_TRUE(r.witness);
        // A constant window is fixed by every shift.
        const auto& [g, f] = *r.witness;
        for (const auto& c : f.cells()) EXPECT_EQ(c.sym, f.cells().front().sym);
        (void)g;
    }
}

TEST(Radius, ChairFiniteAndSharp) {
    auto o = make_oracle("chair");
    auto A = nonzero_ball(2, 3);
    auto r = incompatibility_radius(*o, A, 8);
    ASSERT_TRUE(r.radius);
    EXPECT_EQ(*r.radius, 2);
    for (const auto& g : A) EXPECT_TRUE(separates_by_enumeration(*o, *r.radius, g)) << g.str();
    bool some_fail = false;
    for (const auto& g : A) some_fail |= !separates_by_enumeration(*o, *r.radius - 1, g);
    EXPECT_TRUE(some_fail);
    EXPECT_FALSE(radius_separates(*o, A, *r.radius - 1));
}

TEST(Radius, ChairStableUnderDeeperSubstitution) {
    auto deeper = std::make_shared<ChairShift>(ChairShift::kCompleteMargin + 1);
    auto r = incompatibility_radius(*deeper, nonzero_ball(2, 3), 6);
    ASSERT_TRUE(r.radius);
    EXPECT_EQ(*r.radius, 2);
}

TEST(FiveSet, PermutationModel) {
    auto m = permutation_model_check();
    EXPECT_EQ(m.ba, "(1,5,3)");
    EXPECT_EQ(m.binv_ainv, "(1,4,2)");
    EXPECT_EQ(m.nested, "(1,2,3)");
    EXPECT_TRUE(m.ok);
}

TEST(FiveSet, RandomInstancesHold) {
    struct Case {
        const char* spec;
        int radius, max_shift;
    };
    for (auto c : {Case{"full:1:ab", 2, 3}, Case{"full:2:ab", 2, 1}, Case{"chair", 2, 3}}) {
        auto o = make_oracle(c.spec);
        int nontrivial = 0;
        for (std::uint64_t s = 0; s < 40; ++s) {
            auto in = sample_five_set_instance(o, s, c.radius, c.max_shift);
            ASSERT_TRUE(in) << c.spec;
            auto res = five_set_identity(o, *in);
            EXPECT_TRUE(res.holds) << c.spec << " seed " << s;
            if (!res.rhs.is_identity()) ++nontrivial;
        }
        EXPECT_GT(nontrivial, 30) << c.spec;
    }
}

TEST(FiveSet, HypothesisViolation) {
    auto o = make_oracle("full:1:ab");
    Patch p1(1, {{v1(0), 0}});
    Patch p2(1, {{v1(0), 1}, {v1(1), 0}, {v1(2), 1}});
    try {
        five_set_identity(o, p1, v1(5), v1(9), p2, v1(1), v1(2));
        FAIL() << "expected HypothesisViolation";
    } catch (const HypothesisViolation& e) {
        EXPECT_NE(std::string(e.what()).find("pi1, pi1+g1"), std::string::npos) << e.what();
    }
}

TEST(FiveSet, InadmissibleUnionGivesIdentity) {
    auto o = make_oracle("chair");
    // Cut pi1 and pi2 from two different windows whose union is not
    // admissible; pi1 and pi2 are then incompatible and both sides vanish.
    std::mt19937_64 rng(77);
    auto ball = ball_points(2, 2);
    int found = 0;
    for (int t = 0; t < 400 && found < 3; ++t) {
        auto w1 = o->sample_window(rng(), ball);
        auto w2 = o->sample_window(rng(), ball).shifted(v2(1, 0));
        if (patches_conflict(w1, w2)) continue;
        if (o->is_admissible(patch_union(w1, w2))) continue;
        try {
            auto res = five_set_identity(o, w1, v2(3, 0), v2(0, 3), w2, v2(-3, 0), v2(0, -3));
            EXPECT_TRUE(res.holds);
            EXPECT_TRUE(res.rhs.is_identity());
            EXPECT_TRUE(res.lhs.is_identity());
            ++found;
        } catch (const HypothesisViolation&) {
        }
    }
    EXPECT_GT(found, 0);
}

TEST(Generators, FullShiftSkipsConstantPatches) {
    auto o = make_oracle("full:1:ab");
    auto T = enumerate_T_R(o, 1);
    EXPECT_EQ(T.family.size() + T.skipped.size(), 8u);
    // Skipped exactly when some two of pi, pi+e, pi-e are compatible.
    for (const auto& [pi, axis] : T.skipped) {
        auto e = LatticeVector::axis(1, axis);
        bool overlap = o->compatible(pi, pi.shifted(e)) || o->compatible(pi, pi.shifted(-e)) ||
                       o->compatible(pi.shifted(e), pi.shifted(-e));
        EXPECT_TRUE(overlap);
    }
    EXPECT_TRUE(T.find(Patch(1, {{v1(-1), 0}, {v1(0), 0}, {v1(1), 0}}), 0) == std::nullopt);
    EXPECT_THROW(enumerate_T_R(o, -1), PreconditionViolation);
}

TEST(Generators, ChairMembersHaveOrderThree) {
    auto o = make_oracle("chair");
    auto T = enumerate_T_R(o, 2);
    auto patches = o->enumerate_admissible(ball_points(2, 2));
    EXPECT_GT(T.family.size(), 0u);
    EXPECT_LE(T.family.size(), 2 * patches.size());
    EXPECT_TRUE(T.skipped.empty());
    for (std::size_t i = 0; i < T.family.size(); i += 7) {
        auto n = order(T.family.elements[i], 5);
        ASSERT_TRUE(std::holds_alternative<int>(n));
        EXPECT_EQ(std::get<int>(n), 3) << T.family.labels[i];
    }
}

TEST(Synthesis, Preconditions) {
    EXPECT_THROW(Synthesizer(make_oracle("full:1:ab"), 4), PreconditionViolation);
    EXPECT_THROW(Synthesizer(make_oracle("full:2:ab"), 4), PreconditionViolation);
    EXPECT_THROW(Synthesizer(make_oracle("chair"), 3), PreconditionViolation);
}

class ChairSynthesis : public ::testing::Test {
protected:
    static void SetUpTestSuite() { syn_ = new Synthesizer(make_oracle("chair"), 4); }
    static void TearDownTestSuite() {
        delete syn_;
        syn_ = nullptr;
    }
    static Synthesizer* syn_;
};
Synthesizer* ChairSynthesis::syn_ = nullptr;

TEST_F(ChairSynthesis, BaseMemberIsOneLetter) {
    auto& s = *syn_;
    EXPECT_EQ(s.base().family.size(), 432u);
    const auto& [pi, axis] = s.base().keys.front();
    auto w = s.word_for(pi, axis);
    EXPECT_EQ(w.length(), 1u);
    auto res = s.synthesize(pi, axis);
    EXPECT_TRUE(res.verified);
}

TEST_F(ChairSynthesis, NextRadiusSampleVerifies) {
    auto& s = *syn_;
    s.set_check_hypotheses(true);
    auto targets = s.oracle()->enumerate_admissible(ball_points(2, 5));
    for (std::size_t k = 0; k < 20; ++k) {
        const auto& pi = targets[(k * 37) % targets.size()];
        auto res = s.synthesize(pi, static_cast<int>(k % 2));
        EXPECT_TRUE(res.verified) << k;
        EXPECT_EQ(res.length, 8776u);
        EXPECT_EQ(res.value.pieces().size() > 0, true);
    }
    s.set_check_hypotheses(false);
}

TEST_F(ChairSynthesis, TwoRadiiAheadVerifiesAndGrows) {
    auto& s = *syn_;
    auto pi = s.oracle()->sample_window(3, ball_points(2, 6));
    auto far = s.synthesize(pi, 0);
    auto near = s.synthesize(pi.restricted(ball_points(2, 5)), 0);
    EXPECT_TRUE(far.verified);
    EXPECT_TRUE(near.verified);
    EXPECT_GT(far.length, near.length);
}

TEST_F(ChairSynthesis, RejectsBadTargets) {
    auto& s = *syn_;
    auto w = s.oracle()->sample_window(1, ball_points(2, 5));
    EXPECT_THROW(s.word_for(w.without(v2(0, 0)), 0), PreconditionViolation);
    Patch bad = w.without(v2(0, 0)).with(v2(0, 0), static_cast<Symbol>((*w.at(v2(0, 0)) + 1) % 4));
    if (!s.oracle()->is_admissible(bad)) {
        EXPECT_THROW(s.word_for(bad, 0), PreconditionViolation);
    }
    EXPECT_THROW(s.word_for(w.restricted(ball_points(2, 3)), 0), PreconditionViolation);
}

TEST(Decompose, ElementaryIsSingleton) {
    auto o = make_oracle("full:1:ab");
    Patch p(1, {{v1(0), 0}, {v1(1), 1}, {v1(2), 1}});
    auto t = make_three_cycle(o, p, v1(0), v1(1), v1(2));
    auto cs = decompose_three_cycle(t);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_TRUE(equals(product_of(o, cs), t));
}

TEST(Decompose, TwoDisjointCycles) {
    auto o = make_oracle("full:1:abc");
    Patch p(1, {{v1(0), 0}, {v1(1), 1}, {v1(2), 1}});
    Patch q(1, {{v1(0), 2}, {v1(1), 1}, {v1(2), 1}});
    auto t = compose(make_three_cycle(o, p, v1(0), v1(1), v1(2)), make_three_cycle(o, q, v1(0), v1(1), v1(2)));
    auto cs = decompose_three_cycle(t);
    EXPECT_EQ(cs.size(), 2u);
    EXPECT_TRUE(equals(product_of(o, cs), t));
}

TEST(Decompose, RefinedPartition) {
    auto o = make_oracle("chair");
    std::mt19937_64 rng(5);
    int done = 0;
    while (done < 5) {
        auto pi = o->sample_window(rng(), ball_points(2, 1));
        try {
            auto t = normal_form(make_three_cycle(o, pi, v2(0, 0), v2(3, 0), v2(0, 3)));
            auto cs = decompose_three_cycle(t);
            EXPECT_GE(cs.size(), 1u);
            EXPECT_TRUE(equals(product_of(o, cs), t));
            ++done;
        } catch (const OverlapError&) {
        }
    }
}

TEST(Decompose, RejectsOtherOrders) {
    auto o = make_oracle("full:1:ab");
    Patch p(1, {{v1(0), 0}, {v1(1), 1}, {v1(2), 1}});
    auto a = make_three_cycle(o, p, v1(0), v1(1), v1(2));
    auto b = make_three_cycle(o, p, v1(1), v1(2), v1(3));
    auto ab = compose(a, b);
    auto n = order(ab, 50);
    if (!std::holds_alternative<int>(n) || std::get<int>(n) != 3) {
        EXPECT_THROW(decompose_three_cycle(ab), NotAThreeCycle);
    }
    EXPECT_THROW(decompose_three_cycle(identity_element(o)), NotAThreeCycle);
}
