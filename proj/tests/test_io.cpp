#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "tfg/experiments.hpp"
#include "tfg/io.hpp"
#include "tfg/svg.hpp"

using namespace tfg;
using io::json;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

// Start and end tags must nest; enough to catch truncated or unbalanced output.
bool balanced_xml(const std::string& s) {
    std::vector<std::string> stack;
    std::regex tag(R"(<(/?)([a-zA-Z]+)[^>]*?(/?)>)");
    for (auto it = std::sregex_iterator(s.begin(), s.end(), tag); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        if (m[3] == "/") continue;
        if (m[1] == "/") {
            if (stack.empty() || stack.back() != m[2]) return false;
            stack.pop_back();
        } else {
            stack.push_back(m[2]);
        }
    }
    return stack.empty();
}

}  // namespace

TEST(Json, PatchAndTableRoundTrip) {
    for (const char* spec : {"chair", "full:2:ab", "full:1:xyz"}) {
        auto o = make_oracle(spec);
        auto e = LatticeVector::axis(o->dim(), 0);
        std::optional<PieceTable> made;
        Patch pi;
        for (std::uint64_t seed = 0; !made; ++seed) {
            pi = o->sample_window(seed, ball_points(o->dim(), 2));
            try {
                made = make_three_cycle(o, pi, LatticeVector(o->dim()), e, e * 2);
            } catch (const OverlapError&) {
            }
        }
        EXPECT_EQ(io::patch_from_json(*o, io::patch_to_json(*o, pi)), pi);
        const auto& t = *made;
        auto j = io::table_to_json(t);
        EXPECT_EQ(j["backend"], o->id());
        auto back = io::table_from_json(j, io::oracle_of_table(j));
        EXPECT_TRUE(equals(back, t));
        EXPECT_EQ(io::table_to_json(back).dump(), j.dump());
    }
}

TEST(Json, RejectsMalformedInput) {
    auto o = make_oracle("chair");
    EXPECT_THROW(io::patch_from_json(*o, json::parse(R"({"d":2,"cells":[[[0,0],"XX"]]})")), UnknownSymbol);
    EXPECT_THROW(io::patch_from_json(*o, json::parse(R"({"d":1,"cells":[]})")), BadInput);
    EXPECT_THROW(io::patch_from_json(*o, json::parse(R"({"cells":[]})")), BadInput);
    EXPECT_THROW(io::table_from_json(json::parse(R"({"backend":"full:2:ab","pieces":[]})"), o), BadInput);
    // Uncovered points stay put, so shifting one cylinder alone is not a bijection.
    auto half = json::parse(R"({"backend":"chair","pieces":[{"domain":{"d":2,"cells":[[[0,0],"NE"]]},"shift":[1,0]}]})");
    EXPECT_THROW(io::table_from_json(half, o), BadInput);
    EXPECT_THROW(io::json_arg("/nonexistent/file.json"), BadInput);
    EXPECT_THROW(io::cyclo_from_json(json::parse(R"(["1","2"])")), BadInput);
    EXPECT_THROW(io::cyclo_from_json(json::parse(R"(["x","0","0","0","0"])")), BadInput);
}

TEST(Json, IetRoundTrip) {
    auto b = iet::AngleBasis::parse("sqrt:2,3");
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) {
        auto f = iet::random_element(b, rng, 3);
        auto j = io::iet_to_json(f);
        auto g = io::iet_from_json(j);
        EXPECT_EQ(g, f);
        EXPECT_EQ(io::iet_to_json(g).dump(), j.dump());
    }
    EXPECT_THROW(io::iet_from_json(json::parse(R"({"basis":"sqrt:4","breakpoints":[],"shifts":[]})")), BadInput);
}

TEST(Json, PenroseValuesRoundTrip) {
    using namespace penrose;
    Cyclo c = Cyclo::zeta(2) * Cyclo::rational(mpq_class(3, 7)) - Cyclo::zeta(4);
    EXPECT_EQ(io::cyclo_from_json(io::cyclo_to_json(c)), c);
    // Plain integers are accepted too, in any representation of the value.
    EXPECT_EQ(io::cyclo_from_json(json::parse("[1,1,1,1,1]")), Cyclo());
    auto t = io::tagged_from_json(json::parse(R"({"xi":["0","0","0","0","0"],"sector":2})"));
    EXPECT_EQ(t.dir, sector_direction(2));

    std::mt19937_64 rng(5);
    auto p = sample_transversal(rng);
    auto A = patch_around(p, 2);
    auto A2 = io::pointed_patch_from_json(io::patch_to_json(A));
    EXPECT_EQ(A2.vertices, A.vertices);
    EXPECT_EQ(A2.radius, A.radius);
    EXPECT_THROW(io::pointed_patch_from_json(json::parse(R"({"vertices":[["1/2","0","0","0","0"]]})")), BadInput);

    for (const auto& v : A.vertices) {
        if (!(norm2(v.pt()) == q(1))) continue;
        try {
            auto e = f_move(A, Cyclo(), v);
            auto e2 = io::element_from_json(io::element_to_json(e));
            EXPECT_TRUE(equals(e, e2));
            EXPECT_TRUE(validate(e2));
            return;
        } catch (const OverlapError&) {
        }
    }
    FAIL() << "no unit move on the sampled patch";
}

TEST(Svg, EmptyWindowHasNoShapes) {
    penrose::TilingWindow w;
    auto s = svg::render_window(w);
    EXPECT_TRUE(balanced_xml(s));
    EXPECT_NE(s.find("version=\"1.1\""), std::string::npos);
    EXPECT_EQ(count_of(s, "<polygon"), 0u);
    EXPECT_EQ(count_of(s, "<circle"), 0u);
    auto o = make_oracle("chair");
    auto empty = svg::render_patch(*o, Patch(2, {}));
    EXPECT_TRUE(balanced_xml(empty));
    EXPECT_EQ(count_of(empty, "<rect"), 0u);
}

TEST(Svg, PenroseWindowHasBothRhombi) {
    penrose::TaggedPoint xi{penrose::Cyclo::from_pt(penrose::Pt{penrose::q(1, 7), penrose::q(2, 11)}), penrose::Cyclo()};
    auto w = penrose::vertices(xi, 6);
    auto faces = penrose::faces(w);
    std::size_t thick = 0;
    for (const auto& f : faces) thick += f.thick;
    auto s = svg::render_window(w);
    EXPECT_TRUE(balanced_xml(s));
    EXPECT_EQ(count_of(s, "<polygon"), faces.size());
    EXPECT_EQ(count_of(s, "class=\"thick\""), thick);
    EXPECT_EQ(count_of(s, "class=\"thin\""), faces.size() - thick);
    EXPECT_GT(thick, 0u);
    EXPECT_LT(thick, faces.size());
    EXPECT_EQ(svg::render_window(penrose::vertices(xi, 6)), s);
}

TEST(Svg, ChairPatchOneSquarePerCell) {
    auto o = make_oracle("chair");
    auto pi = o->sample_window(9, ball_points(2, 3));
    auto s = svg::render_patch(*o, pi);
    EXPECT_TRUE(balanced_xml(s));
    EXPECT_EQ(count_of(s, "class=\"cell\""), pi.size());
    EXPECT_EQ(count_of(s, "class=\"glyph\""), pi.size());
    EXPECT_EQ(svg::render_patch(*o, pi), s);
}

TEST(Svg, LabelsAreEscaped) {
    auto o = make_oracle("full:2:<,&");
    Patch pi(2, {{LatticeVector{0, 0}, 0}, {LatticeVector{1, 0}, 1}});
    auto s = svg::render_patch(*o, pi);
    EXPECT_NE(s.find(">&lt;</text>"), std::string::npos);
    EXPECT_NE(s.find(">&amp;</text>"), std::string::npos);
    EXPECT_THROW(svg::render_patch(*make_oracle("full:1:ab"), Patch(1, {})), BadInput);
}

TEST(Experiments, SubstreamsAreDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 4; ++s)
        for (std::uint64_t salt = 0; salt < 8; ++salt)
            for (std::uint64_t i = 0; i < 32; ++i) seen.insert(experiments::substream(s, salt, i));
    EXPECT_EQ(seen.size(), 4u * 8u * 32u);
}

TEST(Experiments, ReportsAreDeterministic) {
    experiments::Config cfg;
    cfg.seed = 9;
    auto a = experiments::corollary_suite(cfg, 6).dump();
    EXPECT_EQ(experiments::corollary_suite(cfg, 6).dump(), a);
    cfg.seed = 10;
    auto b = experiments::corollary_suite(cfg, 6);
    EXPECT_TRUE(b["pass"].get<bool>());
    EXPECT_EQ(b["instances"], 6);
    EXPECT_THROW(experiments::corollary_suite(cfg, 1, {"nope"}), BadInput);
}

TEST(Experiments, SnfReport) {
    auto r = experiments::penrose_snf();
    EXPECT_TRUE(r["pass"].get<bool>());
    EXPECT_EQ(r["quotient"], "Z^2 (+) Z/5");
    EXPECT_EQ(r["invariant_factors"], json::parse(R"(["1","5"])"));
}

TEST(Experiments, AltgenReports) {
    auto r = experiments::altgen_factorize_one(2, "(aa ab ba)");
    EXPECT_TRUE(r["pass"].get<bool>());
    EXPECT_EQ(r["length"].get<std::size_t>(), r["word"].size());
    EXPECT_THROW(experiments::altgen_factorize_one(2, "(aa ab)"), Error);
}
