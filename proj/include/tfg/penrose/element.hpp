#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "tfg/errors.hpp"
#include "tfg/penrose/tiling.hpp"

namespace tfg::penrose {

class NoPiece : public Error {
public:
    using Error::Error;
};

/// (s, xi) in region on sheet src goes to (dst, xi + v).
struct PieceP {
    int src = 1;
    ConvexPolygon region;
    int dst = 1;
    Cyclo v;
};

/// Element of the Penrose full group acting on V' by piecewise P-translations.
class GroupElementP {
public:
    GroupElementP() = default;
    explicit GroupElementP(std::vector<PieceP> pieces) {
        for (auto& p : pieces)
            if (!p.region.empty()) pieces_.push_back(std::move(p));
    }

    static GroupElementP identity() {
        std::vector<PieceP> ps;
        for (int s = 1; s <= 4; ++s) ps.push_back({s, pentagon_shifted(s), s, Cyclo()});
        return GroupElementP(std::move(ps));
    }

    const std::vector<PieceP>& pieces() const { return pieces_; }
    std::size_t size() const { return pieces_.size(); }

    TransversalPoint apply(const TransversalPoint& p) const {
        const PieceP* hit = nullptr;
        for (const auto& pc : pieces_) {
            if (pc.src != p.sheet || !pc.region.contains(p.xi)) continue;
            if (hit) throw NoPiece("point lies in two pieces");
            hit = &pc;
        }
        if (!hit) throw NoPiece("point lies in no piece");
        return {hit->dst, p.xi.translated(hit->v)};
    }

    /// Marked-vertex displacement s' + sigma^-1(v) - s of the piece hit by p;
    /// sigma^-1 sends zeta to zeta^3.
    Cyclo displacement(const TransversalPoint& p) const {
        for (const auto& pc : pieces_)
            if (pc.src == p.sheet && pc.region.contains(p.xi))
                return Cyclo::rational(pc.dst) + pc.v.galois(3) - Cyclo::rational(pc.src);
        throw NoPiece("point lies in no piece");
    }

private:
    std::vector<PieceP> pieces_;
};

inline GroupElementP inverse(const GroupElementP& e) {
    std::vector<PieceP> ps;
    for (const auto& p : e.pieces()) ps.push_back({p.dst, p.region.translated(p.v.pt()), p.src, -p.v});
    return GroupElementP(std::move(ps));
}

/// outer after inner.
inline GroupElementP compose(const GroupElementP& outer, const GroupElementP& inner) {
    std::vector<PieceP> ps;
    for (const auto& p : inner.pieces())
        for (const auto& q2 : outer.pieces()) {
            if (q2.src != p.dst) continue;
            auto r = p.region.intersect(q2.region.translated((-p.v).pt()));
            if (!r.empty()) ps.push_back({p.src, std::move(r), q2.dst, p.v + q2.v});
        }
    return GroupElementP(std::move(ps));
}

namespace detail {

// Every piece of a is covered by the pieces of b with the same action.
inline bool covered_by(const GroupElementP& a, const GroupElementP& b) {
    for (const auto& p : a.pieces()) {
        Region rest{p.region};
        for (const auto& q2 : b.pieces())
            if (q2.src == p.src && q2.dst == p.dst && q2.v == p.v) rest = region_minus(rest, q2.region);
        if (!region_empty(rest)) return false;
    }
    return true;
}

}  // namespace detail

inline bool equals(const GroupElementP& a, const GroupElementP& b) { return detail::covered_by(a, b) && detail::covered_by(b, a); }
inline bool is_identity(const GroupElementP& e) { return equals(e, GroupElementP::identity()); }

/// Source and image regions each tile every sheet of V' without overlap.
inline bool validate(const GroupElementP& e) {
    for (int pass = 0; pass < 2; ++pass) {
        std::map<int, std::vector<ConvexPolygon>> by_sheet;
        for (const auto& p : e.pieces()) {
            if (p.dst < 1 || p.dst > 4 || p.src < 1 || p.src > 4 || !p.v.in_P()) return false;
            if (pass == 0) by_sheet[p.src].push_back(p.region);
            else by_sheet[p.dst].push_back(p.region.translated(p.v.pt()));
        }
        for (int s = 1; s <= 4; ++s) {
            const auto& rs = by_sheet[s];
            QF total = q(0);
            for (std::size_t i = 0; i < rs.size(); ++i) {
                total += rs[i].area2();
                if (!rs[i].minus(pentagon_shifted(s)).empty()) return false;
                for (std::size_t j = i + 1; j < rs.size(); ++j)
                    if (!rs[i].intersect(rs[j]).empty()) return false;
            }
            if (!(total == pentagon_shifted(s).area2())) return false;
        }
    }
    return true;
}

/// A finite vertex set, optionally with the claim that it is the complete
/// vertex set of the tiling inside the disc |x - center| <= radius.
/// radius < 0 means presence constraints only.
struct PointedPatch {
    std::vector<Cyclo> vertices;
    Cyclo center;
    long radius = -1;

    bool has(const Cyclo& v) const { return std::find(vertices.begin(), vertices.end(), v) != vertices.end(); }
};

namespace detail {

// Constraint region for "k is (or is not) a vertex" on the tiling of
// (s, xi): xi in V_{s'}' - w, w = sum k_j zeta^{2j} - s'.
inline ConvexPolygon vertex_region(const KVec& k) {
    long s2 = k_sum(k);
    Cyclo w = star_k(k) - Cyclo::rational(s2);
    return pentagon_shifted(static_cast<int>(s2)).translated((-w).pt());
}

// Lift of a - v + s: the vertex a when v sits on the marking s.
inline std::optional<KVec> placed(const Cyclo& a, const KVec& kv, int s) {
    KVec k = k_of_point(a);
    for (std::size_t j = 0; j < 5; ++j) k[j] -= kv[j];
    k[0] += s;
    return normalize_k(k);
}

}  // namespace detail

/// Points (s, xi) of sheet s whose tiling T_xi, marked at s, contains the
/// patch placed so that v sits on the marking.
inline Region cylinder(const PointedPatch& A, const Cyclo& v, int s) {
    ConvexPolygon r = pentagon_shifted(s);
    const KVec kv = k_of_point(v);
    for (const auto& a : A.vertices) {
        auto k = detail::placed(a, kv, s);
        if (!k) return {};
        r = r.intersect(detail::vertex_region(*k));
        if (r.empty()) return {};
    }
    Region out{r};
    if (A.radius < 0) return out;
    const Cyclo c = A.center - v + Cyclo::rational(s);
    std::vector<Cyclo> placed_pts;
    for (const auto& a : A.vertices) placed_pts.push_back(a - v + Cyclo::rational(s));
    // V_s' lies in the disc of radius s + circumradius about the origin.
    const double xi_bound = s + pentagon_radius(s);
    for_each_candidate(c, A.radius, xi_bound, [&](const KVec& k) {
        if (region_empty(out)) return;
        Cyclo x = from_k(k);
        if (std::find(placed_pts.begin(), placed_pts.end(), x) != placed_pts.end()) return;
        out = region_minus(out, detail::vertex_region(k));
    });
    Region nonempty;
    for (auto& p : out)
        if (!p.empty()) nonempty.push_back(std::move(p));
    return nonempty;
}

namespace detail {

// Piece moving the marking of sheet s by the vector d.
inline PieceP marking_move(int s, ConvexPolygon region, const Cyclo& d) {
    auto t = remark(TaggedPoint{Cyclo(), Cyclo()}, Cyclo::rational(s) + d);
    return {s, std::move(region), t.sheet, t.xi.xi};
}

inline bool regions_meet(const Region& a, const Region& b) {
    for (const auto& x : a)
        for (const auto& y : b)
            if (!x.intersect(y).empty()) return true;
    return false;
}

}  // namespace detail

class EmptyPatch : public Error {
public:
    using Error::Error;
};

/// Moves the marking from v1 to v2 wherever the pointed patch (A, v1)
/// occurs, back from v2 to v1 where (A, v2) occurs, and fixes the rest.
/// Throws EmptyPatch when A occurs in no tiling; the caller may treat the
/// move as the identity.
inline GroupElementP f_move(const PointedPatch& A, const Cyclo& v1, const Cyclo& v2) {
    if (!A.has(v1) || !A.has(v2)) throw BadInput("v1 and v2 must be vertices of the patch");
    if (v1 == v2) return GroupElementP::identity();
    std::vector<PieceP> ps;
    bool occurs = false;
    for (int s = 1; s <= 4; ++s) {
        auto u1 = cylinder(A, v1, s), u2 = cylinder(A, v2, s);
        occurs |= !u1.empty();
        if (detail::regions_meet(u1, u2))
            throw OverlapError("cylinders of the two markings overlap on sheet " + std::to_string(s));
        Region rest{pentagon_shifted(s)};
        rest = region_minus(rest, u1);
        rest = region_minus(rest, u2);
        for (auto& r : u1) ps.push_back(detail::marking_move(s, std::move(r), v2 - v1));
        for (auto& r : u2) ps.push_back(detail::marking_move(s, std::move(r), v1 - v2));
        for (auto& r : rest) ps.push_back({s, std::move(r), s, Cyclo()});
    }
    if (!occurs) throw EmptyPatch("the patch occurs in no Penrose tiling");
    return GroupElementP(std::move(ps));
}

/// The patch seen around the marked vertex of p: the full vertex set within
/// the given radius, relative to the marking.
inline PointedPatch patch_around(const TransversalPoint& p, long radius) {
    return {relative_window(p, radius), Cyclo(), radius};
}

namespace detail {

inline long reach_of(const PointedPatch& A, const Cyclo& v) {
    double r = std::max<double>(0.0, static_cast<double>(A.radius));
    double far = 0;
    for (const auto& a : A.vertices) far = std::max(far, std::sqrt(norm2((a - v).pt()).approx()));
    if (A.radius >= 0) far = std::max(far, std::sqrt(norm2((A.center - v).pt()).approx()) + r);
    return static_cast<long>(std::ceil(far)) + 1;
}

// Does the tiling of p contain A placed with v on the marking?
inline bool patch_present(const PointedPatch& A, const Cyclo& v, const TransversalPoint& p) {
    auto win = relative_window(p, reach_of(A, v));
    std::vector<Cyclo> want;
    for (const auto& a : A.vertices) want.push_back(a - v);
    std::sort(want.begin(), want.end());
    if (A.radius < 0) return std::includes(win.begin(), win.end(), want.begin(), want.end());
    const Cyclo c = A.center - v;
    const QF r2 = q(A.radius * A.radius);
    std::vector<Cyclo> seen;
    for (const auto& x : win)
        if (norm2((x - c).pt()) <= r2) seen.push_back(x);
    return seen == want;
}

}  // namespace detail

/// The window-model prediction for f_move: recompute the tiling around the
/// marked vertex and move the marking if the patch is found there.
inline TransversalPoint window_move(const PointedPatch& A, const Cyclo& v1, const Cyclo& v2, const TransversalPoint& p) {
    if (v1 == v2) return p;
    const Cyclo mark = Cyclo::rational(p.sheet);
    if (detail::patch_present(A, v1, p)) return remark(p.xi, mark + v2 - v1);
    if (detail::patch_present(A, v2, p)) return remark(p.xi, mark + v1 - v2);
    return p;
}

/// Sampled check that E moves the marking by a vector determined by the
/// radius-R window: images stay in V', the new marking is a vertex within
/// distance R, and equal windows get equal displacements. Samples are drawn
/// uniformly from V' and from inside every piece.
template <class Rng>
bool local_rule_check(const GroupElementP& e, long radius, Rng& rng, int samples = 100, int per_piece = 2) {
    std::vector<TransversalPoint> pts;
    for (int i = 0; i < samples; ++i) pts.push_back(sample_transversal(rng));
    for (const auto& pc : e.pieces())
        for (int i = 0; i < per_piece; ++i) pts.push_back({pc.src, sample_in_polygon(pc.region, rng)});
    std::map<std::vector<Cyclo>, Cyclo> seen;
    for (const auto& p : pts) {
        TransversalPoint img;
        Cyclo d;
        try {
            img = e.apply(p);
            d = e.displacement(p);
        } catch (const NoPiece&) {
            return false;
        }
        if (!in_transversal(img)) return false;
        auto win = relative_window(p, radius);
        if (!std::binary_search(win.begin(), win.end(), d)) return false;
        auto [it, fresh] = seen.emplace(win, d);
        if (!fresh && !(it->second == d)) return false;
    }
    return true;
}

}  // namespace tfg::penrose
