#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tfg/altgen.hpp"
#include "tfg/fullgroup.hpp"
#include "tfg/perm.hpp"
#include "tfg/theorems.hpp"
#include "tfg/word.hpp"

namespace tfg {

/// T_{pi,(g1,g2,g3)} written as a word in three-cycles whose shifts all lie
/// on one coordinate axis, each of the form T_{pi+v,(0,e_i,2e_i)}.
struct AxisReduction {
    GeneratorFamily<PieceTable> family;
    GeneratorWord word;
    std::vector<std::vector<int>> grid;  // per axis, the three grid values
    bool verified = false;
};

namespace detail {

inline bool collinear_on_axis(const LatticeVector& a, const LatticeVector& b) {
    int axes = 0;
    for (int i = 0; i < a.dim(); ++i) axes += (a[i] != 0 || b[i] != 0);
    return axes <= 1;
}

/// Three distinct values per axis containing the coordinates of g1, g2, g3.
inline std::vector<int> grid_values(int a, int b, int c) {
    std::set<int> s{a, b, c};
    std::vector<int> v(s.begin(), s.end());
    if (v.size() == 1) return {v[0], v[0] + 1, v[0] + 2};
    if (v.size() == 2) {
        if (v[1] - v[0] >= 2) return {v[0], v[0] + 1, v[1]};
        return {v[0], v[1], v[1] + 1};
    }
    return v;
}

inline PieceTable evaluate_flat_tables(const GeneratorWord& w, const std::vector<PieceTable>& gens, const PieceTable& id) {
    std::function<PieceTable(const PieceTable&, const PieceTable&)> comp = [](const PieceTable& x, const PieceTable& y) {
        return compose(x, y);
    };
    std::function<PieceTable(const PieceTable&)> inv = [](const PieceTable& x) { return inverse(x); };
    return evaluate_flat<PieceTable>(w, gens, id, comp, inv);
}

}  // namespace detail

/// Grid: 3 values per axis containing the coordinates of the g's. Every
/// translate pi+v, v in the bounding box of the grid, must be pairwise
/// incompatible with the others so that the intermediate cycles exist.
inline AxisReduction axis_reduce(const OraclePtr& o, const Patch& pi, const LatticeVector& g1, const LatticeVector& g2,
                                 const LatticeVector& g3) {
    const int d = o->dim();
    auto target = make_three_cycle(o, pi, g1, g2, g3);
    AxisReduction out;
    out.family.name = "axis";
    auto label = [&](const Patch& p, const LatticeVector& a, const LatticeVector& b, const LatticeVector& c) {
        return "T[" + patch_code(*o, p) + "@" + p.min_corner().str() + ":" + a.str() + "," + b.str() + "," + c.str() + "]";
    };
    if (target.is_identity()) {
        out.verified = true;
        return out;
    }
    if (detail::collinear_on_axis(g2 - g1, g3 - g1)) {
        out.family.add(label(pi, g1, g2, g3), target);
        out.word = {{0, 1}};
        out.verified = true;
        return out;
    }

    for (int i = 0; i < d; ++i) out.grid.push_back(detail::grid_values(g1[i], g2[i], g3[i]));

    std::vector<LatticeVector> box{LatticeVector(d)};
    for (int i = 0; i < d; ++i) {
        std::vector<LatticeVector> next;
        for (const auto& v : box)
            for (int x = out.grid[i][0]; x <= out.grid[i][2]; ++x) {
                auto w = v;
                w[i] = x;
                next.push_back(w);
            }
        box = std::move(next);
    }
    for (std::size_t a = 0; a < box.size(); ++a)
        for (std::size_t b = a + 1; b < box.size(); ++b)
            if (o->compatible(pi.shifted(box[a]), pi.shifted(box[b])))
                throw GridObstruction("translates by " + box[a].str() + " and " + box[b].str() + " are compatible");

    // Grid point of a word index in X_d (first letter = axis 0, most significant).
    auto point = [&](int u) {
        LatticeVector v(d);
        for (int i = d - 1; i >= 0; --i) {
            v[i] = out.grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(u % 3)];
            u /= 3;
        }
        return v;
    };
    auto index = [&](const LatticeVector& g) {
        int u = 0;
        for (int i = 0; i < d; ++i) {
            const auto& gv = out.grid[static_cast<std::size_t>(i)];
            u = u * 3 + static_cast<int>(std::find(gv.begin(), gv.end(), g[i]) - gv.begin());
        }
        return u;
    };

    const int n = altgen::pow3(d);
    auto cyc = Perm::cycle(n, {index(g1), index(g2), index(g3)});
    auto bword = altgen::altgen_factorize(d, cyc);
    altgen::GeneratorSetB B(d);

    // Each B_d letter cycles three grid points on one axis line; expand it
    // over the consecutive cycles T_{pi+base+k e,(0,e,2e)} of that line.
    std::map<int, GeneratorWord> expansion;
    for (const auto& l : bword) {
        if (expansion.count(l.generator)) continue;
        auto c = *B.perms()[static_cast<std::size_t>(l.generator)].as_three_cycle();
        std::array<LatticeVector, 3> pts{point(c[0]), point(c[1]), point(c[2])};
        int axis = 0;
        while (pts[0][axis] == pts[1][axis]) ++axis;
        auto e = LatticeVector::axis(d, axis);
        auto base = pts[0];
        base[axis] = out.grid[static_cast<std::size_t>(axis)][0];
        const int len = out.grid[static_cast<std::size_t>(axis)][2] - base[axis] + 1;
        auto line = Perm::cycle(len, {pts[0][axis] - base[axis], pts[1][axis] - base[axis], pts[2][axis] - base[axis]});
        GeneratorWord sub;
        for (const auto& s : consecutive_cycle_factorize(len, line)) {
            auto q = pi.shifted(base + e * s.generator);
            const LatticeVector zero(d);
            auto lab = label(q, zero, e, e * 2);
            int idx = out.family.find(lab);
            if (idx < 0) idx = out.family.add(lab, make_three_cycle(o, q, zero, e, e * 2));
            sub.push_back({idx, s.exp});
        }
        expansion[l.generator] = std::move(sub);
    }
    for (const auto& l : bword) {
        const auto& sub = expansion[l.generator];
        auto part = l.exp > 0 ? sub : inverse_word(sub);
        out.word.insert(out.word.end(), part.begin(), part.end());
    }
    out.verified = equals(detail::evaluate_flat_tables(out.word, out.family.elements, identity_element(o)), target);
    return out;
}

}  // namespace tfg
