// tfg: command-line front end. Every verb builds a JSON report; the report
// is printed, or written to --report, and the exit code says how it went:
// 0 all checks pass, 1 a check failed, 2 a resource cap was hit, 3 bad input.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tfg/experiments.hpp"
#include "tfg/svg.hpp"

using namespace tfg;
using experiments::json;

namespace {

enum Exit { kPass = 0, kFailed = 1, kCap = 2, kBadInput = 3 };

struct Globals {
    experiments::Config cfg;
    std::string report;
    bool timing = false;
};

LatticeVector parse_vector(const std::string& text, int d) {
    std::vector<int> v;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        try {
            std::size_t used = 0;
            auto item = text.substr(pos, next - pos);
            v.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw BadInput("not an integer vector: '" + text + "'");
        }
        pos = next + 1;
    }
    if (static_cast<int>(v.size()) != d) throw BadInput("vector '" + text + "' must have " + std::to_string(d) + " entries");
    LatticeVector out(d);
    for (int i = 0; i < d; ++i) out[i] = v[static_cast<std::size_t>(i)];
    return out;
}

json config_json(const experiments::Config& c) {
    return json{{"seed", c.seed}, {"cap_enum", c.cap_enum}, {"cap_bits", c.cap_bits}, {"cap_order", c.cap_order},
                {"cap_radius", c.cap_radius}, {"cap_word", c.cap_word}};
}

json order_json(const std::variant<int, ExceedsCap>& n) {
    if (std::holds_alternative<int>(n)) return std::get<int>(n);
    throw ResourceCap("order exceeds cap " + std::to_string(std::get<ExceedsCap>(n).cap));
}

// ---------------------------------------------------------------------------
// Subshift verbs

json run_sample(const Globals& g, const std::string& shift, int radius, const std::string& svg_path) {
    auto o = experiments::oracle(shift, g.cfg);
    auto pi = o->sample_window(g.cfg.seed, ball_points(o->dim(), radius));
    if (!svg_path.empty()) io::write_text(svg_path, svg::render_patch(*o, pi));
    json out = experiments::check("sample", true);
    out["shift"] = o->id();
    out["radius"] = radius;
    out["patch"] = io::patch_to_json(*o, pi);
    return out;
}

json run_cycle(const Globals& g, const std::string& shift, const std::string& patch, const std::vector<std::string>& gs,
               const std::string& out_path) {
    auto o = experiments::oracle(shift, g.cfg);
    auto pi = io::patch_from_json(*o, io::json_arg(patch));
    if (gs.size() != 3) throw BadInput("a three-cycle needs exactly three --g shifts");
    auto t = make_three_cycle(o, pi, parse_vector(gs[0], o->dim()), parse_vector(gs[1], o->dim()), parse_vector(gs[2], o->dim()));
    auto table = io::table_to_json(t);
    if (!out_path.empty()) io::write_text(out_path, table.dump(2) + "\n");
    json out = experiments::check("cycle", true);
    out["pieces"] = t.pieces().size();
    out["order"] = order_json(order(t, g.cfg.cap_order));
    out["table"] = table;
    return out;
}

PieceTable load_table(const Globals& g, const std::string& arg) {
    auto j = io::json_arg(arg);
    std::string backend;
    try {
        backend = j.at("backend").get<std::string>();
    } catch (const json::exception& e) {
        throw BadInput(std::string("malformed table: ") + e.what());
    }
    return io::table_from_json(j, experiments::oracle(backend, g.cfg));
}

json run_compose(const Globals& g, const std::string& a, const std::string& b, const std::string& out_path) {
    auto ta = load_table(g, a), tb = load_table(g, b);
    if (ta.oracle().id() != tb.oracle().id()) throw BadInput("tables belong to different backends");
    auto c = compose(ta, tb);
    auto table = io::table_to_json(c);
    if (!out_path.empty()) io::write_text(out_path, table.dump(2) + "\n");
    json out = experiments::check("compose", !validate(c).has_value());
    out["pieces"] = c.pieces().size();
    out["identity"] = c.is_identity();
    out["table"] = table;
    return out;
}

json run_order(const Globals& g, const std::string& a) {
    auto t = load_table(g, a);
    json out = experiments::check("order", true);
    out["order"] = order_json(order(t, g.cfg.cap_order));
    return out;
}

json run_equal(const Globals& g, const std::string& a, const std::string& b) {
    auto ta = load_table(g, a), tb = load_table(g, b);
    if (ta.oracle().id() != tb.oracle().id()) throw BadInput("tables belong to different backends");
    bool eq = equals(ta, tb);
    json out = experiments::check("equal", eq);
    out["equal"] = eq;
    if (!eq) {
        out["a"] = io::table_to_json(ta);
        out["b"] = io::table_to_json(tb);
    }
    return out;
}

json run_generators(const Globals& g, const std::string& shift, int radius, const std::string& out_path) {
    auto o = experiments::oracle(shift, g.cfg);
    auto T = enumerate_T_R(o, radius);
    json out = experiments::check("generators", true);
    out["shift"] = o->id();
    out["radius"] = radius;
    out["admissible_patches"] = o->enumerate_admissible(ball_points(o->dim(), radius)).size();
    out["generators"] = T.family.size();
    out["skipped_overlapping"] = T.skipped.size();
    out["labels"] = T.family.labels;
    if (!out_path.empty()) {
        json tables = json::array();
        for (std::size_t i = 0; i < T.family.size(); ++i)
            tables.push_back(json{{"label", T.family.labels[i]}, {"table", io::table_to_json(T.family.elements[i])}});
        io::write_text(out_path, tables.dump(2) + "\n");
    }
    return out;
}

// ---------------------------------------------------------------------------
// IET verbs

iet::IetMap load_iet(const std::string& arg) { return io::iet_from_json(io::json_arg(arg)); }

json run_iet_compose(const std::string& a, const std::string& b, const std::string& out_path) {
    auto f = load_iet(a), h = load_iet(b);
    auto c = iet::iet_compose(f, h);
    auto j = io::iet_to_json(c);
    if (!out_path.empty()) io::write_text(out_path, j.dump(2) + "\n");
    json out = experiments::check("iet_compose", iet::images_tile(c));
    out["pieces"] = c.size();
    out["identity"] = c.is_identity();
    out["map"] = j;
    return out;
}

json run_iet_order(const Globals& g, const std::string& a) {
    auto f = load_iet(a);
    json out = experiments::check("iet_order", true);
    out["order"] = order_json(iet::iet_order(f, g.cfg.cap_order));
    return out;
}

json run_iet_random(const Globals& g, const std::string& basis, int factors, bool three_cycle, const std::string& out_path) {
    auto b = iet::AngleBasis::parse(basis, g.cfg.cap_bits);
    std::mt19937_64 rng(experiments::substream(g.cfg.seed, 20, 0));
    auto f = three_cycle ? iet::random_three_cycle(b, rng) : iet::random_element(b, rng, factors);
    auto j = io::iet_to_json(f);
    if (!out_path.empty()) io::write_text(out_path, j.dump(2) + "\n");
    json out = experiments::check("iet_random", true);
    out["map"] = j;
    return out;
}

// ---------------------------------------------------------------------------
// Penrose verbs

json run_penrose_vertices(const std::string& xi_arg, long radius, const std::string& svg_path) {
    auto xi = io::tagged_from_json(io::json_arg(xi_arg));
    auto w = penrose::vertices(xi, radius);
    if (!svg_path.empty()) io::write_text(svg_path, svg::render_window(w));
    int thick = 0, thin = 0;
    for (const auto& f : penrose::faces(w)) (f.thick ? thick : thin) += 1;
    json vs = json::array();
    for (const auto& v : w.vertices) vs.push_back(json{{"k", v.k}, {"s", v.s}, {"x", io::cyclo_to_json(v.x)}});
    json out = experiments::check("penrose_vertices", true);
    out["xi"] = io::tagged_to_json(xi);
    out["radius"] = radius;
    out["vertex_count"] = w.vertices.size();
    out["edges"] = w.edges.size();
    out["thick"] = thick;
    out["thin"] = thin;
    if (penrose::lines_through(xi.xi) == 0) {
        bool match = experiments::window_ks(w) == penrose::pentagrid::vertices(xi.xi.pt().ax(), xi.xi.pt().ay(), radius);
        out["pentagrid_match"] = match;
        out["pass"] = match;
    }
    out["vertices"] = vs;
    return out;
}

json run_penrose_patch(const Globals& g, long radius, const std::string& out_path) {
    std::mt19937_64 rng(experiments::substream(g.cfg.seed, 21, 0));
    auto p = penrose::sample_transversal(rng);
    auto A = penrose::patch_around(p, radius);
    auto j = io::patch_to_json(A);
    if (!out_path.empty()) io::write_text(out_path, j.dump(2) + "\n");
    json out = experiments::check("penrose_patch", true);
    out["sheet"] = p.sheet;
    out["xi"] = io::tagged_to_json(p.xi);
    out["patch"] = j;
    return out;
}

json run_penrose_fmove(const std::string& patch_arg, const std::string& from, const std::string& to, const std::string& out_path) {
    auto A = io::pointed_patch_from_json(io::json_arg(patch_arg));
    auto v1 = io::cyclo_from_json(io::json_arg(from)), v2 = io::cyclo_from_json(io::json_arg(to));
    json out = experiments::check("penrose_fmove", false);
    try {
        auto e = penrose::f_move(A, v1, v2);
        auto j = io::element_to_json(e);
        if (!out_path.empty()) io::write_text(out_path, j.dump(2) + "\n");
        bool valid = penrose::validate(e);
        out["pass"] = valid;
        out["pieces"] = e.size();
        out["valid"] = valid;
        out["element"] = j;
    } catch (const penrose::EmptyPatch& e) {
        // The patch occurs nowhere, so no element realizes it.
        out["error"] = e.what();
        out["patch"] = io::patch_to_json(A);
    } catch (const OverlapError& e) {
        out["error"] = e.what();
        out["patch"] = io::patch_to_json(A);
    }
    return out;
}

json run_penrose_check(const Globals& g, const std::string& element_arg, int samples, long radius, const std::string& patch_arg,
                       const std::string& from, const std::string& to) {
    auto e = io::element_from_json(io::json_arg(element_arg));
    std::mt19937_64 rng(experiments::substream(g.cfg.seed, 22, 0));
    bool valid = penrose::validate(e);
    bool local = valid && penrose::local_rule_check(e, radius, rng, samples);
    json out = experiments::check("penrose_check", valid && local);
    out["pieces"] = e.size();
    out["valid"] = valid;
    out["local_rule"] = local;
    out["radius"] = radius;
    out["samples"] = samples;
    if (!patch_arg.empty()) {
        auto A = io::pointed_patch_from_json(io::json_arg(patch_arg));
        auto v1 = io::cyclo_from_json(io::json_arg(from)), v2 = io::cyclo_from_json(io::json_arg(to));
        int agree = 0;
        json mismatches = json::array();
        for (int i = 0; i < samples; ++i) {
            auto p = penrose::sample_transversal(rng);
            auto a = e.apply(p), b = penrose::window_move(A, v1, v2, p);
            if (a == b) ++agree;
            else if (mismatches.size() < 5)
                mismatches.push_back(json{{"sheet", p.sheet}, {"xi", io::tagged_to_json(p.xi)}});
        }
        out["window_model_agree"] = agree;
        out["mismatches"] = mismatches;
        out["pass"] = valid && local && agree == samples;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological full groups workbench"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--cap-enum", g.cfg.cap_enum, "Maximum patches per enumeration")->capture_default_str();
    app.add_option("--cap-bits", g.cfg.cap_bits, "Precision cap for exact comparisons, in bits")->capture_default_str();
    app.add_option("--cap-order", g.cfg.cap_order, "Largest element order searched")->capture_default_str();
    app.add_option("--cap-radius", g.cfg.cap_radius, "Largest window radius searched")->capture_default_str();
    app.add_option("--cap-word", g.cfg.cap_word, "Longest word that may be written out")->capture_default_str();
    app.add_option("--cache-dir", g.cfg.cache_dir, "Enumeration cache directory")->envname("TFG_CACHE_DIR");
    app.add_option("--report", g.report, "Write the JSON report here instead of stdout");
    app.add_flag("--timing", g.timing, "Print elapsed time on stderr");

    std::function<json()> action;
    std::string verb;
    auto on = [&](CLI::App* sub, std::function<json()> f) {
        sub->callback([&, sub, f] {
            verb = sub->get_name();
            for (auto* p = sub->get_parent(); p && p != &app; p = p->get_parent()) verb = p->get_name() + " " + verb;
            action = f;
        });
    };

    // Subshift backends and full-group elements.
    std::string shift = "chair";
    int maxlen = 3, cap = 12, count = 200, radius = 2, d = 2, from = -1, to = -1;
    std::string a, b, out, svg, patch, cycle;
    std::vector<std::string> gs, shifts;
    bool closure = false, words = false;

    auto* r1 = app.add_subcommand("r1", "Incompatibility radius for 0 < |g| <= maxlen");
    r1->add_option("--shift", shift, "full:<d>:<alphabet> or chair")->capture_default_str();
    r1->add_option("--maxlen", maxlen)->capture_default_str();
    r1->add_option("--cap", cap, "Largest radius tried")->capture_default_str();
    on(r1, [&] { return experiments::r1(g.cfg, shift, maxlen, cap); });

    auto* cor = app.add_subcommand("verify-corollary", "Five-set commutator identity on random instances");
    cor->add_option("--count", count)->capture_default_str();
    cor->add_option("--shift", shifts, "Restrict to these backends (full:1:ab, full:2:ab, chair)");
    on(cor, [&] { return experiments::corollary_suite(g.cfg, count, shifts); });

    auto* gen = app.add_subcommand("generators", "Enumerate the generating set T_R");
    gen->add_option("--shift", shift)->capture_default_str();
    gen->add_option("--radius", radius)->required();
    gen->add_option("--out", out, "Write the tables here");
    on(gen, [&] { return run_generators(g, shift, radius, out); });

    auto* syn = app.add_subcommand("synthesize", "Words over T_from for sampled members of T_to");
    syn->add_option("--shift", shift)->capture_default_str();
    syn->add_option("--from", from, "Base radius (default R1 + 2)");
    syn->add_option("--to", to, "Target radius (default from + 1)");
    syn->add_option("--count", count, "Number of targets")->capture_default_str();
    syn->add_flag("--words", words, "Include the flattened words");
    on(syn, [&] {
        if (from < 0) {
            auto o = experiments::oracle(shift, g.cfg);
            auto rr = incompatibility_radius(*o, nonzero_ball(o->dim(), 3), g.cfg.cap_radius);
            if (!rr.radius) throw PreconditionViolation("no incompatibility radius for " + o->id());
            from = *rr.radius + 2;
        }
        return experiments::synthesize(g.cfg, shift, from, to < 0 ? from + 1 : to, count, words);
    });

    auto* alt = app.add_subcommand("altgen", "Generators of the alternating group on words");
    alt->add_option("--d", d)->capture_default_str();
    alt->add_flag("--closure", closure, "Order of the group generated by B_2");
    alt->add_option("--factorize", cycle, "Three-cycle such as (00,01,12)");
    on(alt, [&] {
        if (!cycle.empty()) return experiments::altgen_factorize_one(d, cycle);
        if (closure && d != 2) throw BadInput("closure is only supported for d = 2");
        auto r = experiments::altgen_base(closure);
        r["d"] = d;
        return r;
    });

    auto* smp = app.add_subcommand("sample", "Sample an admissible window");
    smp->add_option("--shift", shift)->capture_default_str();
    smp->add_option("--radius", radius)->capture_default_str();
    smp->add_option("--svg", svg, "Draw the patch (d = 2)");
    on(smp, [&] { return run_sample(g, shift, radius, svg); });

    auto* cyc = app.add_subcommand("cycle", "Build T_{pi,(g1,g2,g3)} as a table");
    cyc->add_option("--shift", shift)->capture_default_str();
    cyc->add_option("--patch", patch, "Patch JSON or file")->required();
    cyc->add_option("--g", gs, "Shift such as 1,0; given three times")->required();
    cyc->add_option("--out", out);
    on(cyc, [&] { return run_cycle(g, shift, patch, gs, out); });

    auto* cmp = app.add_subcommand("compose", "Compose two tables, a after b");
    cmp->add_option("a", a)->required();
    cmp->add_option("b", b)->required();
    cmp->add_option("--out", out);
    on(cmp, [&] { return run_compose(g, a, b, out); });

    auto* ord = app.add_subcommand("order", "Order of a table");
    ord->add_option("table", a)->required();
    on(ord, [&] { return run_order(g, a); });

    auto* eq = app.add_subcommand("equal", "Decide equality of two tables");
    eq->add_option("a", a)->required();
    eq->add_option("b", b)->required();
    on(eq, [&] { return run_equal(g, a, b); });

    // Interval exchanges.
    std::string basis = "sqrt:2,3";
    int factors = 3;
    bool three = false;
    auto* ietc = app.add_subcommand("iet", "Interval exchanges on the doubled circle");
    ietc->require_subcommand(1);
    auto* ic = ietc->add_subcommand("compose", "Compose two maps, a after b");
    ic->add_option("a", a)->required();
    ic->add_option("b", b)->required();
    ic->add_option("--out", out);
    on(ic, [&] { return run_iet_compose(a, b, out); });
    auto* io_ = ietc->add_subcommand("order", "Order of a map");
    io_->add_option("map", a)->required();
    on(io_, [&] { return run_iet_order(g, a); });
    auto* iv = ietc->add_subcommand("verify-corollary", "Interval five-set identity");
    iv->add_option("--basis", basis)->capture_default_str();
    iv->add_option("--count", count)->capture_default_str();
    on(iv, [&] { return experiments::iet_corollary(g.cfg, count, basis); });
    auto* ir = ietc->add_subcommand("random", "Sample a map");
    ir->add_option("--basis", basis)->capture_default_str();
    ir->add_option("--factors", factors)->capture_default_str();
    ir->add_flag("--three-cycle", three, "Sample an interval three-cycle");
    ir->add_option("--out", out);
    on(ir, [&] { return run_iet_random(g, basis, factors, three, out); });

    // Penrose.
    std::string xi = R"(["1/7","0","0","2/11","0"])", element, vfrom, vto;
    long pradius = 6;
    int samples = 100;
    auto* pen = app.add_subcommand("penrose", "Penrose tilings in de Bruijn coordinates");
    pen->require_subcommand(1);
    auto* pv = pen->add_subcommand("vertices", "Vertices of T_xi within a radius");
    pv->add_option("--xi", xi, "Cyclo JSON, {xi, dir} or {xi, sector}, or a file")->capture_default_str();
    pv->add_option("--radius", pradius)->capture_default_str();
    pv->add_option("--svg", svg);
    on(pv, [&] { return run_penrose_vertices(xi, pradius, svg); });
    auto* ps = pen->add_subcommand("snf", "Quotient of Z[zeta] by the pentagon lattice");
    on(ps, [&] { return experiments::penrose_snf(); });
    auto* pp = pen->add_subcommand("patch", "Patch around a sampled transversal point");
    pp->add_option("--radius", pradius)->capture_default_str();
    pp->add_option("--out", out);
    on(pp, [&] { return run_penrose_patch(g, pradius, out); });
    auto* pf = pen->add_subcommand("fmove", "Element moving the marking from v1 to v2 on the patch");
    pf->add_option("--patch", patch)->required();
    pf->add_option("--from", vfrom)->required();
    pf->add_option("--to", vto)->required();
    pf->add_option("--out", out);
    on(pf, [&] { return run_penrose_fmove(patch, vfrom, vto, out); });
    auto* pc = pen->add_subcommand("check", "Validate an element and test that it is a local rule");
    pc->add_option("--element", element)->required();
    pc->add_option("--samples", samples)->capture_default_str();
    pc->add_option("--radius", pradius, "Window radius for the local rule")->capture_default_str();
    pc->add_option("--patch", patch, "Also compare with the window model of this move");
    pc->add_option("--from", vfrom);
    pc->add_option("--to", vto);
    on(pc, [&] { return run_penrose_check(g, element, samples, pradius, patch, vfrom, vto); });

    auto* ci = app.add_subcommand("ci", "Every experiment at moderate sizes");
    on(ci, [&] { return experiments::ci(g.cfg); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kBadInput;
    }

    auto emit = [&](const json& report) {
        auto text = report.dump(2) + "\n";
        if (g.report.empty()) {
            std::cout << text;
        } else {
            io::write_text(g.report, text);
            std::cout << verb << ": " << (report.value("pass", false) ? "pass" : "FAIL") << "\n";
        }
    };
    auto fail = [&](int code, const char* kind, const std::string& msg) {
        std::cerr << "tfg " << verb << ": " << kind << ": " << msg << "\n";
        if (!g.report.empty()) {
            try {
                io::write_text(g.report, json{{"verb", verb}, {"pass", false}, {"error", {{"kind", kind}, {"message", msg}}}}.dump(2) + "\n");
            } catch (const std::exception&) {
            }
        }
        return code;
    };

    auto t0 = std::chrono::steady_clock::now();
    try {
        if (g.cfg.cap_bits < 8 || g.cfg.cap_order < 1 || g.cfg.cap_radius < 0 || g.cfg.cap_enum < 1 || g.cfg.cap_word < 1)
            throw BadInput("caps must be positive");
        json result = action();
        json report{{"verb", verb}, {"config", config_json(g.cfg)}, {"pass", result.value("pass", false)}, {"result", result}};
        emit(report);
        if (g.timing)
            std::cerr << "elapsed " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
        return report["pass"].get<bool>() ? kPass : kFailed;
    } catch (const ResourceCap& e) {
        return fail(kCap, "resource cap", e.what());
    } catch (const Error& e) {
        return fail(kBadInput, "bad input", e.what());
    } catch (const json::exception& e) {
        return fail(kBadInput, "bad input", e.what());
    } catch (const std::exception& e) {
        return fail(kBadInput, "error", e.what());
    }
}
