#pragma once

#include <string>
#include <vector>

#include "tfg/errors.hpp"
#include "tfg/penrose/cyclo.hpp"

namespace tfg::penrose {

class MissingTag : public Error {
public:
    using Error::Error;
};

/// A point of the doubled plane: the limit of xi + eps * dir as eps -> 0+.
/// dir = 0 means untagged, which is only valid away from every line.
struct TaggedPoint {
    Cyclo xi;
    Cyclo dir;

    TaggedPoint translated(const Cyclo& v) const { return {xi + v, dir}; }
    friend bool operator==(const TaggedPoint&, const TaggedPoint&) = default;
};

/// Direction of the centre of sector m (m = 0..9) around a point of P.
inline Cyclo sector_direction(int m) {
    Cyclo d = Cyclo::rational(1), g = -Cyclo::zeta(3);  // -zeta^3 = exp(i pi / 5)
    for (int i = 0; i <= ((m % 10) + 10) % 10; ++i) d = d * g;
    return d;
}

/// Half-plane side tag for a line of direction i zeta^j: normal +-zeta^j.
inline Cyclo line_tag(int j, bool positive) { return positive ? Cyclo::zeta(j) : -Cyclo::zeta(j); }

/// Convex polygon, vertices counterclockwise. As a subset of the doubled
/// plane it is clopen: a boundary point belongs to it when its tag points
/// inside.
class ConvexPolygon {
public:
    ConvexPolygon() = default;
    explicit ConvexPolygon(std::vector<Pt> v) : v_(std::move(v)) { clean(); }

    const std::vector<Pt>& vertices() const { return v_; }
    bool empty() const { return v_.size() < 3; }

    /// Twice the area divided by sin72deg.
    QF area2() const {
        QF a = q(0);
        for (std::size_t i = 0; i < v_.size(); ++i) a += cross(v_[i], v_[(i + 1) % v_.size()]);
        return a;
    }

    bool contains(const Pt& p, const Pt& dir) const {
        if (empty()) return false;
        for (std::size_t i = 0; i < v_.size(); ++i) {
            const Pt e = v_[(i + 1) % v_.size()] - v_[i];
            int c = cross(e, p - v_[i]).sign();
            if (c < 0) return false;
            if (c == 0) {
                int g = cross(e, dir).sign();
                if (g == 0) throw MissingTag("point on a boundary line needs a side tag");
                if (g < 0) return false;
            }
        }
        return true;
    }
    bool contains(const TaggedPoint& p) const { return contains(p.xi.pt(), p.dir.pt()); }

    /// Part on the closed left of the oriented line through a with direction e.
    ConvexPolygon clip(const Pt& a, const Pt& e) const {
        std::vector<Pt> out;
        const std::size_t n = v_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Pt& p = v_[i];
            const Pt& r = v_[(i + 1) % n];
            QF fp = cross(e, p - a), fr = cross(e, r - a);
            int sp = fp.sign(), sr = fr.sign();
            if (sp >= 0) out.push_back(p);
            if ((sp > 0 && sr < 0) || (sp < 0 && sr > 0)) out.push_back(p + (r - p) * (fp / (fp - fr)));
        }
        return ConvexPolygon(std::move(out));
    }

    ConvexPolygon intersect(const ConvexPolygon& o) const {
        ConvexPolygon r = *this;
        for (std::size_t i = 0; i < o.v_.size() && !r.empty(); ++i)
            r = r.clip(o.v_[i], o.v_[(i + 1) % o.v_.size()] - o.v_[i]);
        return r;
    }

    /// this minus o as disjoint convex pieces.
    std::vector<ConvexPolygon> minus(const ConvexPolygon& o) const {
        if (o.empty()) return {*this};
        std::vector<ConvexPolygon> out;
        ConvexPolygon rest = *this;
        for (std::size_t i = 0; i < o.v_.size() && !rest.empty(); ++i) {
            const Pt a = o.v_[i], e = o.v_[(i + 1) % o.v_.size()] - a;
            auto outside = rest.clip(a, -e);
            if (!outside.empty()) out.push_back(outside);
            rest = rest.clip(a, e);
        }
        return out;
    }

    ConvexPolygon translated(const Pt& t) const {
        std::vector<Pt> w;
        for (const auto& p : v_) w.push_back(p + t);
        return ConvexPolygon(std::move(w));
    }
    ConvexPolygon negated() const {
        std::vector<Pt> w;
        for (const auto& p : v_) w.push_back(-p);
        return ConvexPolygon(std::move(w));
    }

    friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

private:
    /// Drops repeated and collinear vertices; zero area collapses to empty.
    void clean() {
        std::vector<Pt> w;
        for (const auto& p : v_)
            if (w.empty() || !(w.back() == p)) w.push_back(p);
        while (w.size() > 1 && w.front() == w.back()) w.pop_back();
        bool changed = true;
        while (changed && w.size() >= 3) {
            changed = false;
            for (std::size_t i = 0; i < w.size(); ++i) {
                const Pt& a = w[(i + w.size() - 1) % w.size()];
                const Pt& b = w[i];
                const Pt& c = w[(i + 1) % w.size()];
                if (cross(b - a, c - b).sign() == 0) {
                    w.erase(w.begin() + static_cast<long>(i));
                    changed = true;
                    break;
                }
            }
        }
        if (w.size() < 3) w.clear();
        v_ = std::move(w);
    }

    std::vector<Pt> v_;
};

/// Finite union of convex polygons.
using Region = std::vector<ConvexPolygon>;

inline Region region_minus(const Region& r, const ConvexPolygon& c) {
    Region out;
    for (const auto& p : r)
        for (auto& piece : p.minus(c)) out.push_back(std::move(piece));
    return out;
}

inline Region region_minus(Region r, const Region& s) {
    for (const auto& c : s) r = region_minus(r, c);
    return r;
}

inline bool region_empty(const Region& r) {
    for (const auto& p : r)
        if (!p.empty()) return false;
    return true;
}

inline QF region_area2(const Region& r) {
    QF a = q(0);
    for (const auto& p : r) a += p.area2();
    return a;
}

/// zeta^-j * z has real part in Re(P) exactly when z lies on a line of
/// direction i zeta^j through a point of P. Re(P) = Z (5 - sqrt5)/4 + Z sqrt5/2.
inline bool on_line_family(const Cyclo& z, int j) {
    QF t = (z * Cyclo::zeta(-j)).re();
    mpq_class alpha = 4 * t.a() / 5;
    mpq_class beta = 2 * t.b() + 2 * t.a() / 5;
    return alpha.get_den() == 1 && beta.get_den() == 1;
}

/// How many of the five line directions have a line of the family through z.
inline int lines_through(const Cyclo& z) {
    int n = 0;
    for (int j = 0; j < 5; ++j) n += on_line_family(z, j);
    return n;
}

}  // namespace tfg::penrose
