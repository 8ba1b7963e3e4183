#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tfg/lattice.hpp"
#include "tfg/penrose/tiling.hpp"
#include "tfg/subshift.hpp"

namespace tfg::svg {

namespace detail {

// Fixed-point formatting keeps output byte-stable across platforms.
inline std::string num(double x) {
    if (std::fabs(x) < 5e-7) x = 0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string header(double minx, double miny, double w, double h, const std::string& style) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" +
           num(minx) + " " + num(miny) + " " + num(w) + " " + num(h) + "\">\n<style>" + style + "</style>\n";
}

}  // namespace detail

/// Rhombi of the window in unit scale, y flipped so that the picture is
/// upright; classes "thick" and "thin" select the fill.
inline std::string render_window(const penrose::TilingWindow& w) {
    const double R = static_cast<double>(std::max<long>(w.radius, 1)) + 1;
    const double cx = w.center.pt().ax(), cy = w.center.pt().ay();
    std::string out = detail::header(cx - R, -cy - R, 2 * R, 2 * R,
                                     ".thick{fill:#e8b04a;stroke:#333;stroke-width:0.02}"
                                     ".thin{fill:#4a7fb0;stroke:#333;stroke-width:0.02}"
                                     ".mark{fill:#c0392b}");
    for (const auto& f : penrose::faces(w)) {
        const auto& x = w.vertices[static_cast<std::size_t>(f.corner)].x;
        const penrose::Cyclo corners[4] = {x, x + penrose::Cyclo::zeta(f.i), x + penrose::Cyclo::zeta(f.i) + penrose::Cyclo::zeta(f.j),
                                           x + penrose::Cyclo::zeta(f.j)};
        out += "<polygon class=\"" + std::string(f.thick ? "thick" : "thin") + "\" points=\"";
        for (int k = 0; k < 4; ++k) {
            auto p = corners[k].pt();
            out += (k ? " " : "") + detail::num(p.ax()) + "," + detail::num(-p.ay());
        }
        out += "\"/>\n";
    }
    if (w.marked) {
        auto p = w.vertices[static_cast<std::size_t>(*w.marked)].x.pt();
        out += "<circle class=\"mark\" cx=\"" + detail::num(p.ax()) + "\" cy=\"" + detail::num(-p.ay()) + "\" r=\"0.08\"/>\n";
    }
    return out + "</svg>\n";
}

/// One unit square per cell. For the chair backend a small square in the
/// corner named by the symbol marks the orientation; other backends get a
/// text label.
inline std::string render_patch(const SubshiftOracle& o, const Patch& p) {
    if (p.dim() != 2) throw BadInput("only two-dimensional patches can be drawn");
    int minx = 0, miny = 0, maxx = 0, maxy = 0;
    if (!p.empty()) {
        auto lo = p.min_corner(), hi = p.max_corner();
        minx = lo[0], miny = lo[1], maxx = hi[0], maxy = hi[1];
    }
    const double w = maxx - minx + 3, h = maxy - miny + 3;
    std::string out = detail::header(minx - 1, -(maxy + 2), w, h,
                                     ".cell{fill:#f4f1e8;stroke:#333;stroke-width:0.04}"
                                     ".glyph{fill:#2c3e50}"
                                     "text{font-size:0.4px;text-anchor:middle;font-family:monospace}");
    const bool chair = o.id().rfind("chair", 0) == 0;
    for (const auto& c : p.cells()) {
        const double x = c.pos[0], y = -(c.pos[1] + 1);
        out += "<rect class=\"cell\" x=\"" + detail::num(x) + "\" y=\"" + detail::num(y) + "\" width=\"1\" height=\"1\"/>\n";
        if (chair) {
            // NE, NW, SW, SE: the glyph sits in that corner.
            const double gx = (c.sym == ChairShift::NE || c.sym == ChairShift::SE) ? 0.55 : 0.1;
            const double gy = (c.sym == ChairShift::NE || c.sym == ChairShift::NW) ? 0.1 : 0.55;
            out += "<rect class=\"glyph\" x=\"" + detail::num(x + gx) + "\" y=\"" + detail::num(y + gy) +
                   "\" width=\"0.35\" height=\"0.35\"/>\n";
        } else {
            out += "<text x=\"" + detail::num(x + 0.5) + "\" y=\"" + detail::num(y + 0.65) + "\">" + detail::escape(o.alphabet().name(c.sym)) + "</text>\n";
        }
    }
    return out + "</svg>\n";
}

}  // namespace tfg::svg
