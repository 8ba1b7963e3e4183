#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfg/altgen.hpp"
#include "tfg/axis.hpp"
#include "tfg/fullgroup.hpp"
#include "tfg/iet.hpp"
#include "tfg/io.hpp"
#include "tfg/penrose.hpp"
#include "tfg/penrose/pentagrid.hpp"
#include "tfg/theorems.hpp"

namespace tfg::experiments {

using json = nlohmann::ordered_json;

/// Everything a check depends on besides its own parameters.
struct Config {
    std::uint64_t seed = 1;
    std::string cache_dir;
    std::size_t cap_enum = 2'000'000;
    int cap_bits = 4096;
    int cap_order = 64;
    int cap_radius = 12;
    std::size_t cap_word = 1'000'000;
};

inline OraclePtr oracle(const std::string& spec, const Config& c) { return make_oracle(spec, c.cache_dir, c.cap_enum); }

/// Independent stream per (seed, check, index).
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t salt, std::uint64_t i) {
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + salt * 0xBF58476D1CE4E5B9ULL + i * 0x94D049BB133111EBULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline json check(const std::string& name, bool pass) { return json{{"check", name}, {"pass", pass}}; }

// ---------------------------------------------------------------------------

struct CorollaryBackend {
    std::string spec;
    int radius;
    int max_shift;
};

inline const std::vector<CorollaryBackend>& corollary_backends() {
    static const std::vector<CorollaryBackend> b = {{"full:1:ab", 2, 3}, {"full:2:ab", 2, 1}, {"chair", 2, 3}};
    return b;
}

/// Five-set commutator identity on `count` random valid instances spread
/// over the backends.
inline json corollary_suite(const Config& cfg, int count, const std::vector<std::string>& only = {}) {
    json out = check("corollary", true);
    std::vector<CorollaryBackend> backends;
    for (const auto& b : corollary_backends())
        if (only.empty() || std::find(only.begin(), only.end(), b.spec) != only.end()) backends.push_back(b);
    if (backends.empty()) throw BadInput("no corollary backend selected");
    json per = json::object(), failures = json::array();
    int done = 0, nontrivial = 0;
    for (int i = 0; i < count; ++i) {
        const auto& b = backends[static_cast<std::size_t>(i) % backends.size()];
        auto o = oracle(b.spec, cfg);
        auto in = sample_five_set_instance(o, substream(cfg.seed, 1, static_cast<std::uint64_t>(i)), b.radius, b.max_shift);
        if (!in) {
            failures.push_back(json{{"backend", b.spec}, {"index", i}, {"reason", "no valid instance found"}});
            continue;
        }
        auto res = five_set_identity(o, *in);
        ++done;
        per[b.spec] = per.value(b.spec, 0) + 1;
        if (!res.rhs.is_identity()) ++nontrivial;
        if (!res.holds)
            failures.push_back(json{{"backend", b.spec},
                                    {"index", i},
                                    {"pi1", io::patch_to_json(*o, in->pi1)},
                                    {"g1", in->g1.coords()},
                                    {"g2", in->g2.coords()},
                                    {"pi2", io::patch_to_json(*o, in->pi2)},
                                    {"h1", in->h1.coords()},
                                    {"h2", in->h2.coords()}});
    }
    out["instances"] = done;
    out["nontrivial"] = nontrivial;
    out["per_backend"] = per;
    out["failures"] = failures;
    out["pass"] = failures.empty() && done == count;
    return out;
}

inline json permutation_model() {
    auto m = permutation_model_check();
    json out = check("permutation_model", m.ok);
    out["[b,a]"] = m.ba;
    out["[b^-1,a^-1]"] = m.binv_ainv;
    out["[[b^-1,a^-1],[b,a]]"] = m.nested;
    return out;
}

inline json altgen_base(bool closure) {
    bool ids = altgen::verify_base_identities();
    json out = check("altgen_base", ids);
    out["identities"] = static_cast<int>(altgen::base_identities().size());
    out["identities_verified"] = ids;
    if (closure) {
        auto order = altgen::altgen_closure(2);
        out["closure_order"] = order;
        out["pass"] = ids && order == 181440;
    }
    return out;
}

inline json altgen_induction(const Config& cfg, int count, const std::vector<int>& dims) {
    json out = check("altgen_induction", true);
    json per = json::object(), failures = json::array();
    for (int d : dims) {
        std::mt19937_64 rng(substream(cfg.seed, 4, static_cast<std::uint64_t>(d)));
        const int n = altgen::pow3(d);
        altgen::GeneratorSetB B(d);
        std::size_t longest = 0, total = 0;
        for (int i = 0; i < count; ++i) {
            std::vector<int> pts(static_cast<std::size_t>(n));
            std::iota(pts.begin(), pts.end(), 0);
            std::shuffle(pts.begin(), pts.end(), rng);
            auto target = Perm::cycle(n, {pts[0], pts[1], pts[2]});
            auto w = altgen::altgen_factorize(d, target);
            longest = std::max(longest, w.size());
            total += w.size();
            if (!(evaluate_perm_word(w, B.perms(), n) == target))
                failures.push_back(json{{"d", d}, {"cycle", altgen::cycle_name(d, target)}});
        }
        per[std::to_string(d)] = json{{"cycles", count}, {"max_length", longest}, {"total_length", total}};
    }
    out["per_dimension"] = per;
    out["failures"] = failures;
    out["pass"] = failures.empty();
    return out;
}

inline json altgen_factorize_one(int d, const std::string& cycle) {
    auto target = altgen::parse_cycle(d, cycle);
    auto w = altgen::altgen_factorize(d, target);
    altgen::GeneratorSetB B(d);
    bool ok = evaluate_perm_word(w, B.perms(), altgen::pow3(d)) == target;
    std::vector<std::string> labels;
    for (const auto& p : B.perms()) labels.push_back(altgen::cycle_name(d, p));
    json out = check("altgen_factorize", ok);
    out["d"] = d;
    out["cycle"] = altgen::cycle_name(d, target);
    out["length"] = w.size();
    out["word"] = word_to_json(w, labels);
    return out;
}

/// Incompatibility radius for {0 < |g| <= maxlen}, re-verified exhaustively
/// at the returned radius and shown failing one below it.
inline json r1(const Config& cfg, const std::string& shift, int maxlen, int cap) {
    auto o = oracle(shift, cfg);
    auto A = nonzero_ball(o->dim(), maxlen);
    auto res = incompatibility_radius(*o, A, cap);
    json out = check("r1", false);
    out["shift"] = o->id();
    out["maxlen"] = maxlen;
    out["cap"] = cap;
    if (res.radius) {
        int R = *res.radius;
        bool at = radius_separates(*o, A, R);
        bool below = R == 0 || !radius_separates(*o, A, R - 1);
        out["result"] = "radius";
        out["R1"] = R;
        out["verified_at_R1"] = at;
        out["fails_at_R1_minus_1"] = below;
        out["pass"] = at && below;
    } else {
        out["result"] = "obstruction";
        if (res.witness) {
            out["witness_shift"] = res.witness->first.coords();
            out["witness_window"] = io::patch_to_json(*o, res.witness->second);
        }
        out["pass"] = res.witness.has_value();
    }
    return out;
}

/// Words over T_from for `count` sampled members of T_to. With `words` the
/// flattened words are included, subject to the flatten cap.
inline json synthesize(const Config& cfg, const std::string& shift, int from, int to, int count, bool words) {
    if (to < from) throw BadInput("target radius must be at least the base radius");
    if (count < 1) throw BadInput("count must be positive");
    auto o = oracle(shift, cfg);
    Synthesizer syn(o, from);
    auto targets = o->enumerate_admissible(ball_points(o->dim(), to));
    std::mt19937_64 rng(substream(cfg.seed, 6, static_cast<std::uint64_t>(to)));
    json lengths = json::array(), failures = json::array(), flat = json::array();
    int verified = 0;
    for (int k = 0; k < count; ++k) {
        const auto& pi = targets[rng() % targets.size()];
        int axis = k % o->dim();
        auto res = syn.synthesize(pi, axis);
        lengths.push_back(res.length);
        if (res.verified) ++verified;
        else failures.push_back(json{{"target", io::patch_to_json(*o, pi)}, {"axis", axis}});
        if (words)
            flat.push_back(json{{"target", io::patch_to_json(*o, pi)}, {"axis", axis}, {"word", word_to_json(res.word.flatten(cfg.cap_word), syn.base().family.labels)}});
    }
    json out = check("synthesis", verified == count);
    out["shift"] = o->id();
    out["R"] = from;
    out["target_radius"] = to;
    out["base_size"] = syn.base().family.size();
    out["targets"] = count;
    out["verified"] = verified;
    out["word_lengths"] = lengths;
    out["failures"] = failures;
    if (words) out["words"] = flat;
    return out;
}

/// Words over T_R for sampled members of T_{R+1}, R = R1 + 2 on the chair.
inline json synthesis(const Config& cfg, int count, int extra = 1) {
    auto o = oracle("chair", cfg);
    auto rr = incompatibility_radius(*o, nonzero_ball(2, 3), cfg.cap_radius);
    if (!rr.radius) {
        json out = check("synthesis", false);
        out["error"] = "no incompatibility radius";
        return out;
    }
    const int R = *rr.radius + 2;
    json body = synthesize(cfg, "chair", R, R + extra, count, false);
    json out = check("synthesis", body["pass"].get<bool>());
    out["R1"] = *rr.radius;
    for (auto it = body.begin(); it != body.end(); ++it)
        if (it.key() != "check" && it.key() != "pass") out[it.key()] = it.value();
    return out;
}

/// Group axioms on random three-cycles, one case per (f, g, h) triple.
inline json fullgroup_axioms(const Config& cfg, int count) {
    struct B {
        const char* spec;
        int max_shift;
    };
    const B backends[] = {{"full:1:ab", 3}, {"full:2:ab", 1}, {"chair", 3}};
    json out = check("fullgroup_axioms", true), failures = json::array();
    int cases = 0, cycles = 0, order3 = 0;
    for (int i = 0; i < count; ++i) {
        const auto& b = backends[i % 3];
        auto o = oracle(b.spec, cfg);
        const int d = o->dim();
        std::mt19937_64 rng(substream(cfg.seed, 7, static_cast<std::uint64_t>(i)));
        std::uniform_int_distribution<int> sh(-b.max_shift, b.max_shift);
        auto rv = [&] {
            LatticeVector v(d);
            for (int k = 0; k < d; ++k) v[k] = sh(rng);
            return v;
        };
        std::vector<PieceTable> ts;
        while (ts.size() < 3) {
            try {
                ts.push_back(make_three_cycle(o, o->sample_window(rng(), ball_points(d, 1)), rv(), rv(), rv()));
            } catch (const OverlapError&) {
            }
        }
        const auto &f = ts[0], &g = ts[1], &h = ts[2];
        auto id = identity_element(o);
        bool ok = equals(compose(compose(f, g), h), compose(f, compose(g, h)));
        ok = ok && compose(f, inverse(f)).is_identity() && compose(inverse(f), f).is_identity();
        ok = ok && equals(compose(id, g), g) && equals(compose(g, id), g);
        ok = ok && equals(inverse(compose(f, g)), compose(inverse(g), inverse(f)));
        ok = ok && !validate(compose(f, compose(g, h))).has_value();
        for (const auto& t : ts) {
            ++cycles;
            auto n = order(t, cfg.cap_order);
            bool three = t.is_identity() || (std::holds_alternative<int>(n) && std::get<int>(n) == 3);
            order3 += three;
            ok = ok && three;
        }
        ++cases;
        if (!ok) failures.push_back(json{{"backend", b.spec}, {"case", i}, {"f", io::table_to_json(f)}, {"g", io::table_to_json(g)}, {"h", io::table_to_json(h)}});
    }
    out["cases"] = cases;
    out["three_cycles"] = cycles;
    out["order_three"] = order3;
    out["failures"] = failures;
    out["pass"] = failures.empty();
    return out;
}

inline json iet_axioms(const Config& cfg, int count, const std::string& basis_spec = "sqrt:2,3") {
    auto b = iet::AngleBasis::parse(basis_spec, cfg.cap_bits);
    json out = check("iet_axioms", true), failures = json::array();
    int cycles = 0, order3 = 0;
    auto id = iet::IetMap::identity(b);
    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(substream(cfg.seed, 8, static_cast<std::uint64_t>(i)));
        auto f = iet::random_element(b, rng, 3), g = iet::random_element(b, rng, 3), h = iet::random_element(b, rng, 3);
        bool ok = iet::iet_equals(iet::iet_compose(iet::iet_compose(f, g), h), iet::iet_compose(f, iet::iet_compose(g, h)));
        ok = ok && iet::iet_compose(f, iet::iet_inverse(f)).is_identity() && iet::iet_compose(iet::iet_inverse(f), f).is_identity();
        ok = ok && iet::iet_equals(iet::iet_compose(id, g), g) && iet::iet_equals(iet::iet_inverse(iet::iet_inverse(h)), h);
        ok = ok && iet::images_tile(iet::iet_compose(f, g));
        auto t = iet::random_three_cycle(b, rng);
        ++cycles;
        auto n = iet::iet_order(t, cfg.cap_order);
        bool three = std::holds_alternative<int>(n) && std::get<int>(n) == 3;
        order3 += three;
        ok = ok && three;
        if (!ok) failures.push_back(json{{"case", i}, {"f", io::iet_to_json(f)}, {"g", io::iet_to_json(g)}, {"h", io::iet_to_json(h)}});
    }
    out["basis"] = b->id();
    out["cases"] = count;
    out["three_cycles"] = cycles;
    out["order_three"] = order3;
    out["failures"] = failures;
    out["pass"] = failures.empty();
    return out;
}

/// Random exact comparisons in H; none may hit the precision cap.
inline json iet_compare(const Config& cfg, int count, const std::string& basis_spec = "sqrt:2,3") {
    auto b = iet::AngleBasis::parse(basis_spec, cfg.cap_bits);
    std::mt19937_64 rng(substream(cfg.seed, 9, 0));
    std::uniform_int_distribution<std::int64_t> c(-1000, 1000);
    int capped = 0, less = 0, equal = 0, greater = 0;
    for (int i = 0; i < count; ++i) {
        std::vector<std::int64_t> n, m;
        for (int k = 0; k < b->dim(); ++k) {
            n.push_back(c(rng));
            m.push_back(c(rng));
        }
        try {
            switch (b->compare(iet::HPoint(n), iet::HPoint(m))) {
                case iet::Order::Less: ++less; break;
                case iet::Order::Equal: ++equal; break;
                case iet::Order::Greater: ++greater; break;
            }
        } catch (const PrecisionCap&) {
            ++capped;
        }
    }
    // Round trips: f^-1 f and f f^-1 are the identity, exactly.
    int trips = 0, trip_ok = 0;
    for (int i = 0; i < 50; ++i) {
        std::mt19937_64 r2(substream(cfg.seed, 10, static_cast<std::uint64_t>(i)));
        auto f = iet::random_element(b, r2, 4);
        ++trips;
        trip_ok += iet::iet_compose(f, iet::iet_inverse(f)).is_identity() && iet::iet_compose(iet::iet_inverse(f), f).is_identity();
    }
    json out = check("iet_compare", capped == 0 && trip_ok == trips);
    out["basis"] = b->id();
    out["comparisons"] = count;
    out["precision_cap_hits"] = capped;
    out["less"] = less;
    out["equal"] = equal;
    out["greater"] = greater;
    out["round_trips"] = trips;
    out["round_trips_exact"] = trip_ok;
    return out;
}

inline json iet_corollary(const Config& cfg, int count, const std::string& basis_spec = "sqrt:2,3") {
    auto b = iet::AngleBasis::parse(basis_spec, cfg.cap_bits);
    json failures = json::array();
    int nontrivial = 0;
    for (int i = 0; i < count; ++i) {
        auto in = iet::sample_interval_instance(b, substream(cfg.seed, 11, static_cast<std::uint64_t>(i)));
        auto res = iet::interval_five_set(b, in);
        if (!res.rhs.is_identity()) ++nontrivial;
        if (!res.holds) failures.push_back(json{{"case", i}});
    }
    json out = check("iet_corollary", failures.empty());
    out["basis"] = b->id();
    out["instances"] = count;
    out["nontrivial"] = nontrivial;
    out["failures"] = failures;
    return out;
}

// ---------------------------------------------------------------------------
// Penrose

inline json penrose_snf() {
    auto q = penrose::snf_quotient();
    json f = json::array();
    for (const auto& d : q.invariant_factors) f.push_back(d.get_str());
    json rel = json::array();
    for (const auto& r : q.relations) rel.push_back(json::array({r[0].get_str(), r[1].get_str()}));
    bool stable = true;
    std::vector<int> order{0, 1, 2, 3};
    do {
        auto p = penrose::snf_quotient(order);
        stable = stable && p.invariant_factors == q.invariant_factors && p.free_rank == q.free_rank;
    } while (std::next_permutation(order.begin(), order.end()));
    json out = check("penrose_snf", q.free_rank == 2 && q.str() == "Z^2 (+) Z/5" && stable && penrose::w1().in_P() && penrose::w2().in_P());
    out["relations"] = rel;
    out["invariant_factors"] = f;
    out["free_rank"] = q.free_rank;
    out["quotient"] = q.str();
    out["stable_under_basis_permutation"] = stable;
    return out;
}

inline std::set<penrose::pentagrid::K> window_ks(const penrose::TilingWindow& w) {
    std::set<penrose::pentagrid::K> s;
    for (const auto& v : w.vertices) s.insert(v.k);
    return s;
}

inline json penrose_checks(const Config& cfg, int samples = 100, int elements = 2) {
    using namespace penrose;
    json out = check("penrose", false);
    // (a) 5 = 4 - zeta - ... - zeta^4 lies in P.
    Cyclo five = Cyclo::rational(4) - Cyclo::zeta(1) - Cyclo::zeta(2) - Cyclo::zeta(3) - Cyclo::zeta(4);
    bool a = five == Cyclo::rational(5) && five.in_P();
    out["five_in_P"] = a;
    // (b)
    auto snf = penrose_snf();
    bool b = snf["pass"].get<bool>();
    out["quotient"] = snf["quotient"];
    // (c) radius-6 window against the pentagrid dual.
    TaggedPoint xi{Cyclo::from_pt(Pt{q(1, 7), q(2, 11)}), Cyclo()};
    auto win = vertices(xi, 6);
    auto oracle_set = pentagrid::vertices(xi.xi.pt().ax(), xi.xi.pt().ay(), 6);
    bool c = lines_through(xi.xi) == 0 && window_ks(win) == oracle_set;
    out["radius6_vertices"] = win.vertices.size();
    out["pentagrid_vertices"] = oracle_set.size();
    out["pentagrid_match"] = c;
    // (d) equivariance for 20 random v in P.
    std::mt19937_64 rng(substream(cfg.seed, 12, 0));
    std::uniform_int_distribution<long> coord(-30, 30), n(-2, 2);
    int eq_ok = 0, eq_done = 0;
    while (eq_done < 20) {
        TaggedPoint x{Cyclo::from_pt(Pt{q(coord(rng), 31), q(coord(rng), 29)}), Cyclo()};
        if (lines_through(x.xi)) continue;
        KVec k{};
        long sum = 0;
        for (std::size_t j = 0; j < 4; ++j) sum += (k[j] = n(rng));
        k[4] = -sum;
        Cyclo v = star_k(k), vp = from_k(k);
        const long R = 3;
        long extra = static_cast<long>(std::ceil(std::sqrt(vp.abs2().approx())));
        auto moved = vertices(x.translated(v), R);
        auto big = vertices(x, R + extra);
        std::set<Cyclo> expect, got;
        for (const auto& y : big.vertices) {
            Cyclo z = y.x - vp;
            if (norm2(z.pt()) <= q(R * R)) expect.insert(z);
        }
        for (const auto& y : moved.vertices) got.insert(y.x);
        eq_ok += got == expect;
        ++eq_done;
    }
    bool d = eq_ok == eq_done;
    out["equivariance_cases"] = eq_done;
    out["equivariance_ok"] = eq_ok;
    // (e) polygon model against window model.
    json elems = json::array();
    bool e = true;
    for (int el = 0; el < elements; ++el) {
        std::mt19937_64 r2(substream(cfg.seed, 13, static_cast<std::uint64_t>(el)));
        std::optional<GroupElementP> g;
        PointedPatch A;
        Cyclo v2;
        while (!g) {
            auto p = sample_transversal(r2);
            A = patch_around(p, 2);
            for (const auto& v : A.vertices) {
                if (!(norm2(v.pt()) == q(1))) continue;
                try {
                    g = f_move(A, Cyclo(), v);
                    v2 = v;
                    break;
                } catch (const OverlapError&) {
                }
            }
        }
        int agree = 0, moved = 0;
        for (int i = 0; i < samples; ++i) {
            auto p = sample_transversal(r2);
            auto img = g->apply(p);
            agree += img == window_move(A, Cyclo(), v2, p);
            moved += !(img == p);
        }
        bool valid = validate(*g);
        e = e && agree == samples && valid;
        elems.push_back(json{{"pieces", g->size()}, {"valid", valid}, {"samples", samples}, {"agree", agree}, {"moved", moved}});
    }
    out["elements"] = elems;
    out["polygon_window_agreement"] = e;
    out["pass"] = a && b && c && d && e;
    return out;
}

// ---------------------------------------------------------------------------

/// Counts used by the `ci` verb; the acceptance run uses larger ones.
struct CiSizes {
    int corollary = 30;
    int induction = 20;
    int synthesis = 2;
    int axioms = 60;
    int iet_axioms = 60;
    int compare = 20000;
    int iet_corollary = 30;
    int penrose_samples = 100;
};

inline json ci(const Config& cfg, const CiSizes& n = {}) {
    json checks = json::array();
    checks.push_back(corollary_suite(cfg, n.corollary));
    checks.push_back(permutation_model());
    checks.push_back(altgen_base(true));
    checks.push_back(altgen_induction(cfg, n.induction, {2, 3}));
    checks.push_back(r1(cfg, "chair", 3, cfg.cap_radius));
    checks.push_back(r1(cfg, "full:2:ab", 3, 4));
    checks.push_back(synthesis(cfg, n.synthesis));
    checks.push_back(fullgroup_axioms(cfg, n.axioms));
    checks.push_back(iet_axioms(cfg, n.iet_axioms));
    checks.push_back(iet_compare(cfg, n.compare));
    checks.push_back(iet_corollary(cfg, n.iet_corollary));
    checks.push_back(penrose_checks(cfg, n.penrose_samples, 1));
    bool all = true;
    for (const auto& c : checks) all = all && c["pass"].get<bool>();
    return json{{"experiment", "ci"}, {"seed", cfg.seed}, {"pass", all}, {"checks", checks}};
}

}  // namespace tfg::experiments
