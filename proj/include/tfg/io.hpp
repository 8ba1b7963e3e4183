#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfg/errors.hpp"
#include "tfg/fullgroup.hpp"
#include "tfg/iet.hpp"
#include "tfg/penrose.hpp"
#include "tfg/word.hpp"

namespace tfg::io {

using json = nlohmann::ordered_json;

inline json vector_to_json(const LatticeVector& v) { return v.coords(); }

inline LatticeVector vector_from_json(const json& j, int d) {
    if (!j.is_array() || static_cast<int>(j.size()) != d) throw BadInput("expected an integer vector of length " + std::to_string(d));
    LatticeVector v(d);
    for (int i = 0; i < d; ++i) v[i] = j[static_cast<std::size_t>(i)].get<int>();
    return v;
}

/// {"d":2,"cells":[[[0,0],"a"],...]}, cells in lexicographic order.
inline json patch_to_json(const SubshiftOracle& o, const Patch& p) {
    json cells = json::array();
    for (const auto& c : p.cells()) cells.push_back(json::array({vector_to_json(c.pos), o.alphabet().name(c.sym)}));
    return json{{"d", p.dim()}, {"cells", cells}};
}

inline Patch patch_from_json(const SubshiftOracle& o, const json& j) {
    try {
        int d = j.at("d").get<int>();
        if (d != o.dim()) throw BadInput("patch dimension " + std::to_string(d) + " does not match the backend");
        std::vector<Cell> cells;
        for (const auto& c : j.at("cells")) cells.push_back({vector_from_json(c.at(0), d), o.alphabet().index(c.at(1).get<std::string>())});
        return Patch(d, std::move(cells));
    } catch (const json::exception& e) {
        throw BadInput(std::string("malformed patch: ") + e.what());
    }
}

/// {"backend":"chair","pieces":[{"domain":<patch>,"shift":[1,0]}]}
inline json table_to_json(const PieceTable& t) {
    json pieces = json::array();
    for (const auto& p : t.pieces())
        pieces.push_back(json{{"domain", patch_to_json(t.oracle(), p.domain)}, {"shift", vector_to_json(p.shift)}});
    return json{{"backend", t.oracle().id()}, {"pieces", pieces}};
}

inline PieceTable table_from_json(const json& j, const OraclePtr& o) {
    try {
        if (j.at("backend").get<std::string>() != o->id()) throw BadInput("table backend does not match " + o->id());
        std::vector<Piece> pieces;
        for (const auto& p : j.at("pieces"))
            pieces.push_back({patch_from_json(*o, p.at("domain")), vector_from_json(p.at("shift"), o->dim())});
        auto t = PieceTable::from_pieces(o, std::move(pieces));
        if (auto why = validate(t)) throw BadInput("table is not a valid element: " + *why);
        return t;
    } catch (const json::exception& e) {
        throw BadInput(std::string("malformed table: ") + e.what());
    }
}

inline OraclePtr oracle_of_table(const json& j) {
    try {
        return make_oracle(j.at("backend").get<std::string>());
    } catch (const json::exception& e) {
        throw BadInput(std::string("malformed table: ") + e.what());
    }
}

inline json hpoint_to_json(const iet::HPoint& p) { return p.coords(); }

inline iet::HPoint hpoint_from_json(const json& j, int d) {
    if (!j.is_array() || static_cast<int>(j.size()) != d) throw BadInput("expected an H vector of length " + std::to_string(d));
    return iet::HPoint(j.get<std::vector<std::int64_t>>());
}

/// {"basis":"sqrt:2,3","breakpoints":[[0,0],...],"shifts":[[..],...]}
inline json iet_to_json(const iet::IetMap& t) {
    json bp = json::array(), sh = json::array();
    for (const auto& p : t.breakpoints()) bp.push_back(hpoint_to_json(p));
    for (const auto& p : t.shifts()) sh.push_back(hpoint_to_json(p));
    return json{{"basis", t.basis()->id()}, {"breakpoints", bp}, {"shifts", sh}};
}

inline iet::IetMap iet_from_json(const json& j) {
    try {
        auto b = iet::AngleBasis::parse(j.at("basis").get<std::string>());
        std::vector<iet::HPoint> bp, sh;
        for (const auto& p : j.at("breakpoints")) bp.push_back(hpoint_from_json(p, b->dim()));
        for (const auto& p : j.at("shifts")) sh.push_back(hpoint_from_json(p, b->dim()));
        return iet::IetMap(b, bp, sh);
    } catch (const json::exception& e) {
        throw BadInput(std::string("malformed interval exchange: ") + e.what());
    }
}

// Penrose values. Rationals are strings "p/q" (or "p").

inline json cyclo_to_json(const penrose::Cyclo& c) {
    json a = json::array();
    for (const auto& x : c.coeffs()) a.push_back(x.get_str());
    return a;
}

inline penrose::Cyclo cyclo_from_json(const json& j) {
    if (!j.is_array() || j.size() != 5) throw BadInput("a cyclotomic value is a list of 5 rationals");
    std::array<mpq_class, 5> c;
    for (std::size_t i = 0; i < 5; ++i) {
        try {
            c[i] = j[i].is_string() ? mpq_class(j[i].get<std::string>()) : mpq_class(j[i].get<long>());
            c[i].canonicalize();
        } catch (const std::invalid_argument&) {
            throw BadInput("not a rational: " + j[i].dump());
        } catch (const json::exception&) {
            throw BadInput("not a rational: " + j[i].dump());
        }
        if (c[i].get_den() == 0) throw BadInput("zero denominator");
    }
    return penrose::Cyclo(c);
}

/// {"xi": cyclo, "dir": cyclo} or {"xi": cyclo, "sector": m}; no tag means
/// an untagged point.
inline penrose::TaggedPoint tagged_from_json(const json& j) {
    if (j.is_array()) return {cyclo_from_json(j), penrose::Cyclo()};
    penrose::TaggedPoint p{cyclo_from_json(j.at("xi")), penrose::Cyclo()};
    if (j.contains("dir")) p.dir = cyclo_from_json(j.at("dir"));
    if (j.contains("sector")) p.dir = penrose::sector_direction(j.at("sector").get<int>());
    return p;
}

inline json tagged_to_json(const penrose::TaggedPoint& p) { return json{{"xi", cyclo_to_json(p.xi)}, {"dir", cyclo_to_json(p.dir)}}; }

inline json patch_to_json(const penrose::PointedPatch& p) {
    json v = json::array();
    for (const auto& x : p.vertices) v.push_back(cyclo_to_json(x));
    return json{{"vertices", v}, {"center", cyclo_to_json(p.center)}, {"radius", p.radius}};
}

inline penrose::PointedPatch pointed_patch_from_json(const json& j) {
    try {
        penrose::PointedPatch p;
        for (const auto& x : j.at("vertices")) p.vertices.push_back(cyclo_from_json(x));
        if (j.contains("center")) p.center = cyclo_from_json(j.at("center"));
        p.radius = j.value("radius", -1L);
        for (const auto& x : p.vertices)
            for (int k = 0; k < 5; ++k)
                if (mpq_class(x[k] - x[0]).get_den() != 1) throw BadInput("patch vertices must lie in Z[zeta]");
        return p;
    } catch (const json::exception& e) {
        throw BadInput(std::string("malformed pointed patch: ") + e.what());
    }
}

inline json element_to_json(const penrose::GroupElementP& e) {
    json pieces = json::array();
    for (const auto& p : e.pieces()) {
        json poly = json::array();
        for (const auto& v : p.region.vertices()) poly.push_back(cyclo_to_json(penrose::Cyclo::from_pt(v)));
        pieces.push_back(json{{"src", p.src}, {"dst", p.dst}, {"v", cyclo_to_json(p.v)}, {"region", poly}});
    }
    return json{{"pieces", pieces}};
}

inline penrose::GroupElementP element_from_json(const json& j) {
    try {
        std::vector<penrose::PieceP> ps;
        for (const auto& p : j.at("pieces")) {
            std::vector<penrose::Pt> poly;
            for (const auto& v : p.at("region")) poly.push_back(cyclo_from_json(v).pt());
            ps.push_back({p.at("src").get<int>(), penrose::ConvexPolygon(std::move(poly)), p.at("dst").get<int>(), cyclo_from_json(p.at("v"))});
        }
        return penrose::GroupElementP(std::move(ps));
    } catch (const json::exception& e) {
        throw BadInput(std::string("malformed Penrose element: ") + e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw BadInput(path + ": " + e.what());
    }
}

/// Parses a JSON literal given inline, or reads it from a file when the
/// argument is not JSON.
inline json json_arg(const std::string& text) {
    auto j = json::parse(text, nullptr, false);
    if (!j.is_discarded()) return j;
    return read_json_file(text);
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

}  // namespace tfg::io
