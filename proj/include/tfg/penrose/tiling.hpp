#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tfg/penrose/geometry.hpp"

namespace tfg::penrose {

using KVec = std::array<long, 5>;

/// V_s, s = 1..4, centred at the origin.
inline ConvexPolygon pentagon(int s) {
    if (s < 1 || s > 4) throw BadInput("sheet must be in 1..4, got " + std::to_string(s));
    std::vector<Pt> v;
    for (int j = 0; j < 5; ++j) {
        Cyclo c = (s == 1 || s == 4) ? Cyclo::zeta(j) : Cyclo::zeta(j) + Cyclo::zeta(j + 1);
        if (s >= 3) c = -c;
        v.push_back(c.pt());
    }
    return ConvexPolygon(std::move(v));
}

/// V_s' = V_s - s.
inline ConvexPolygon pentagon_shifted(int s) { return pentagon(s).translated(Cyclo::rational(-s).pt()); }

namespace detail {

struct PentagonCache {
    std::array<ConvexPolygon, 4> poly;
    std::array<std::array<std::array<double, 2>, 5>, 4> corner;
};

inline const PentagonCache& pentagons() {
    static const PentagonCache cache = [] {
        PentagonCache c;
        for (int s = 1; s <= 4; ++s) {
            auto i = static_cast<std::size_t>(s - 1);
            c.poly[i] = pentagon(s);
            for (std::size_t j = 0; j < 5; ++j) c.corner[i][j] = {c.poly[i].vertices()[j].ax(), c.poly[i].vertices()[j].ay()};
        }
        return c;
    }();
    return cache;
}

// +1 clearly inside V_s, -1 clearly outside, 0 too close to call in doubles.
inline int pentagon_side_fast(int s, double x, double y) {
    const auto& c = pentagons().corner[static_cast<std::size_t>(s - 1)];
    double worst = 1e300;
    for (std::size_t j = 0; j < 5; ++j) {
        const auto& a = c[j];
        const auto& b = c[(j + 1) % 5];
        worst = std::min(worst, (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]));
    }
    if (worst > 1e-9) return 1;
    if (worst < -1e-9) return -1;
    return 0;
}

}  // namespace detail

inline bool point_in_pentagon(const TaggedPoint& p, int s) {
    if (s < 1 || s > 4) throw BadInput("sheet must be in 1..4, got " + std::to_string(s));
    return detail::pentagons().poly[static_cast<std::size_t>(s - 1)].contains(p);
}

/// Circumradius of V_s as a double, for prefilters only.
inline double pentagon_radius(int s) { return (s == 1 || s == 4) ? 1.0 : (1.0 + std::sqrt(5.0)) / 2.0; }

inline long k_sum(const KVec& k) { return k[0] + k[1] + k[2] + k[3] + k[4]; }

/// Adds a multiple of (1,1,1,1,1) so the sum lands in 1..4; nullopt when it
/// is divisible by 5 (no vertex has such an index).
inline std::optional<KVec> normalize_k(KVec k) {
    long s = k_sum(k);
    long r = ((s % 5) + 5) % 5;
    if (r == 0) return std::nullopt;
    long t = (s - r) / 5;
    for (auto& x : k) x -= t;
    return k;
}

/// Integer lift of a point of Z[zeta], with k_0 = 0.
inline KVec k_of_point(const Cyclo& x) {
    KVec k{};
    for (int j = 0; j < 5; ++j) {
        mpq_class d = x[j] - x[0];
        if (d.get_den() != 1) throw NotInP("not a point of Z[zeta]: " + x.str());
        k[static_cast<std::size_t>(j)] = d.get_num().get_si();
    }
    return k;
}

/// The de Bruijn condition: k is a vertex of T_xi iff sum_j k_j zeta^{2j} + xi
/// lies in V_s, s = sum k_j.
inline bool is_vertex(const KVec& k, const TaggedPoint& xi) {
    long s = k_sum(k);
    if (s < 1 || s > 4) return false;
    return point_in_pentagon(xi.translated(star_k(k)), static_cast<int>(s));
}

/// Same, with a double prefilter; xy is xi in floating point.
inline bool is_vertex_fast(const KVec& k, const TaggedPoint& xi, double x, double y) {
    long s = k_sum(k);
    if (s < 1 || s > 4) return false;
    for (int j = 0; j < 5; ++j) {
        const double kj = static_cast<double>(k[static_cast<std::size_t>(j)]);
        x += kj * std::cos(4 * M_PI * j / 5);
        y += kj * std::sin(4 * M_PI * j / 5);
    }
    int side = detail::pentagon_side_fast(static_cast<int>(s), x, y);
    if (side != 0) return side > 0;
    return is_vertex(k, xi);
}

struct TilingVertex {
    KVec k;
    int s = 0;
    Cyclo x;
};

struct Rhombus {
    int corner = 0;  // vertex index; the others are corner + zeta^i, + zeta^j, + both
    int i = 0, j = 0;
    bool thick = false;
};

struct TilingWindow {
    Cyclo center;
    long radius = 0;
    std::vector<TilingVertex> vertices;
    std::vector<std::pair<int, int>> edges;  // (a, b) with x_b = x_a + zeta^j
    std::optional<int> marked;

    std::optional<int> find(const Cyclo& x) const {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i].x == x) return static_cast<int>(i);
        return std::nullopt;
    }
};

namespace detail {

inline double re_rot(double x, double y, int j) {
    double a = 2 * M_PI * j / 5;
    return x * std::cos(a) + y * std::sin(a);
}

}  // namespace detail

/// Calls f(k) for every k with sum s in 1..4, |sum k_j zeta^j - center| <=
/// radius exactly, and |sum k_j zeta^{2j}| small enough that the vertex
/// condition can hold for some xi with |xi| <= xi_bound.
template <class F>
void for_each_candidate(const Cyclo& center, long radius, double xi_bound, F&& f) {
    const Pt cp = center.pt();
    const double cx = cp.ax(), cy = cp.ay();
    const QF r2 = q(radius * radius);
    std::array<double, 5> cs{}, sn{};
    for (std::size_t j = 0; j < 5; ++j) {
        cs[j] = std::cos(2 * M_PI * static_cast<double>(j) / 5);
        sn[j] = std::sin(2 * M_PI * static_cast<double>(j) / 5);
    }
    for (int s = 1; s <= 4; ++s) {
        // k_j = (s + 2 Re(x zeta^-j) + 2 Re(x* zeta^-2j)) / 5 with |x - c| <= R
        // and |x*| <= |xi| + circumradius bounds every coordinate.
        const double star_bound = xi_bound + pentagon_radius(s) + 1e-6;
        const double slack = 2.0 * (static_cast<double>(radius) + star_bound) / 5.0 + 1e-6;
        std::array<long, 5> lo{}, hi{};
        for (int j = 0; j < 5; ++j) {
            double mid = (s + 2 * detail::re_rot(cx, cy, j)) / 5.0;
            lo[static_cast<std::size_t>(j)] = static_cast<long>(std::ceil(mid - slack));
            hi[static_cast<std::size_t>(j)] = static_cast<long>(std::floor(mid + slack));
        }
        KVec k{};
        for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0])
            for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1])
                for (k[2] = lo[2]; k[2] <= hi[2]; ++k[2])
                    for (k[3] = lo[3]; k[3] <= hi[3]; ++k[3]) {
                        k[4] = s - k[0] - k[1] - k[2] - k[3];
                        if (k[4] < lo[4] || k[4] > hi[4]) continue;
                        double px = 0, py = 0, qx = 0, qy = 0;
                        for (std::size_t j = 0; j < 5; ++j) {
                            const double kj = static_cast<double>(k[j]);
                            px += kj * cs[j];
                            py += kj * sn[j];
                            qx += kj * cs[(2 * j) % 5];
                            qy += kj * sn[(2 * j) % 5];
                        }
                        const double dist = std::hypot(px - cx, py - cy);
                        if (dist > static_cast<double>(radius) + 1e-6) continue;
                        if (std::hypot(qx, qy) > star_bound) continue;
                        if (dist > static_cast<double>(radius) - 1e-6 && norm2((from_k(k) - center).pt()) > r2) continue;
                        f(k);
                    }
    }
}

/// All vertices of T_xi within distance radius of center.
inline TilingWindow vertices(const TaggedPoint& xi, long radius, const Cyclo& center = Cyclo()) {
    if (radius < 1) throw BadInput("radius must be >= 1");
    TilingWindow w;
    w.center = center;
    w.radius = radius;
    const Pt xp = xi.xi.pt();
    const double x = xp.ax(), y = xp.ay();
    for_each_candidate(center, radius, std::hypot(x, y), [&](const KVec& k) {
        if (is_vertex_fast(k, xi, x, y)) w.vertices.push_back({k, static_cast<int>(k_sum(k)), from_k(k)});
    });
    std::sort(w.vertices.begin(), w.vertices.end(), [](const TilingVertex& a, const TilingVertex& b) { return a.x < b.x; });
    std::map<Cyclo, int> index;
    for (std::size_t i = 0; i < w.vertices.size(); ++i) index[w.vertices[i].x] = static_cast<int>(i);
    for (std::size_t a = 0; a < w.vertices.size(); ++a)
        for (int j = 0; j < 5; ++j) {
            auto it = index.find(w.vertices[a].x + Cyclo::zeta(j));
            if (it != index.end()) w.edges.emplace_back(static_cast<int>(a), it->second);
        }
    w.marked = w.find(center);
    return w;
}

/// Rhombi whose four corners all lie in the window.
inline std::vector<Rhombus> faces(const TilingWindow& w) {
    std::map<Cyclo, int> index;
    for (std::size_t i = 0; i < w.vertices.size(); ++i) index[w.vertices[i].x] = static_cast<int>(i);
    std::vector<Rhombus> out;
    for (std::size_t a = 0; a < w.vertices.size(); ++a)
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j) {
                const Cyclo& x = w.vertices[a].x;
                if (!index.count(x + Cyclo::zeta(i)) || !index.count(x + Cyclo::zeta(j)) ||
                    !index.count(x + Cyclo::zeta(i) + Cyclo::zeta(j)))
                    continue;
                // cos of the corner angle: cos72 for the thick tile, cos144 for the thin one.
                QF c = dot(Cyclo::zeta(i).pt(), Cyclo::zeta(j).pt());
                bool thick = (c == cos72());
                if (!thick && !(c == -cos36())) throw Error("rhombus with unexpected corner angle");
                out.push_back({static_cast<int>(a), i, j, thick});
            }
    return out;
}

/// Interior angle of the rhombus at vertex v, in units of 36 degrees.
inline int rhombus_angle_at(const TilingWindow& w, const Rhombus& f, int v) {
    const Cyclo& x0 = w.vertices[static_cast<std::size_t>(f.corner)].x;
    const Cyclo& xv = w.vertices[static_cast<std::size_t>(v)].x;
    int corner = f.thick ? 2 : 4;
    bool diagonal = (xv == x0) || (xv == x0 + Cyclo::zeta(f.i) + Cyclo::zeta(f.j));
    return diagonal ? corner : 5 - corner;
}

/// A point of V' = union of (s, V_s').
struct TransversalPoint {
    int sheet = 1;
    TaggedPoint xi;

    friend bool operator==(const TransversalPoint&, const TransversalPoint&) = default;
};

inline bool in_transversal(const TransversalPoint& p) {
    return p.sheet >= 1 && p.sheet <= 4 && pentagon_shifted(p.sheet).contains(p.xi);
}

/// The tiling of p is T_xi with marked vertex s; its vertices near the
/// marked one, relative to it.
inline std::vector<Cyclo> relative_window(const TransversalPoint& p, long radius) {
    auto c = Cyclo::rational(p.sheet);
    auto w = vertices(p.xi, radius, c);
    std::vector<Cyclo> out;
    for (const auto& v : w.vertices) out.push_back(v.x - c);
    std::sort(out.begin(), out.end());
    return out;
}

/// The transversal point whose tiling is T_xi marked at vertex x (a vertex).
inline TransversalPoint remark(const TaggedPoint& xi, const Cyclo& x) {
    auto k = normalize_k(k_of_point(x));
    if (!k) throw Error("index divisible by 5 cannot be a vertex");
    long s = k_sum(*k);
    return {static_cast<int>(s), xi.translated(star_k(*k) - Cyclo::rational(s))};
}

/// Random interior-or-boundary point of a convex polygon: a rational convex
/// combination of its corners, with a random sector tag.
template <class Rng>
TaggedPoint sample_in_polygon(const ConvexPolygon& poly, Rng& rng, long den = 97) {
    std::uniform_int_distribution<int> sector(0, 9);
    std::uniform_int_distribution<long> wt(1, den);
    const auto& corners = poly.vertices();
    std::vector<long> w;
    mpq_class total = 0;
    for (std::size_t i = 0; i < corners.size(); ++i) {
        w.push_back(wt(rng));
        total += w.back();
    }
    Pt acc{q(0), q(0)};
    for (std::size_t i = 0; i < corners.size(); ++i) acc = acc + corners[i] * QF(mpq_class(w[i]) / total);
    return {Cyclo::from_pt(acc), sector_direction(sector(rng))};
}

/// Random point of V'.
template <class Rng>
TransversalPoint sample_transversal(Rng& rng, long den = 97) {
    std::uniform_int_distribution<int> sheet(1, 4);
    TransversalPoint p;
    p.sheet = sheet(rng);
    p.xi = sample_in_polygon(pentagon_shifted(p.sheet), rng, den);
    return p;
}

}  // namespace tfg::penrose
