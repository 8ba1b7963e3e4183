#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "tfg/errors.hpp"
#include "tfg/lattice.hpp"
#include "tfg/subshift.hpp"

namespace tfg {

struct Piece {
    Patch domain;
    LatticeVector shift;
    friend bool operator==(const Piece&, const Piece&) = default;
    friend auto operator<=>(const Piece& a, const Piece& b) {
        if (auto c = a.domain <=> b.domain; c != 0) return c;
        return a.shift <=> b.shift;
    }
};

/// Splits the cylinder of `start` into admissible cylinders, each contained
/// in the cylinder of exactly one `cover` patch or disjoint from all of them.
/// Cover patches must have pairwise disjoint cylinders. The second member of
/// each result is the index of the containing cover patch, or -1.
namespace detail {

/// Splits `patch` at uncovered cells of compatible cover patches. When every
/// admissible extension at the split cell resolves to a single part with the
/// same index, the split is undone: the extensions partition the cylinder.
inline void refine_node(const SubshiftOracle& oracle, const Patch& patch, const std::vector<int>& candidates,
                        std::span<const Patch> cover, std::vector<std::pair<Patch, int>>& out) {
    std::vector<int> compat;
    for (int i : candidates)
        if (oracle.compatible(patch, cover[static_cast<std::size_t>(i)])) compat.push_back(i);
    if (compat.empty()) {
        out.emplace_back(patch, -1);
        return;
    }
    if (compat.size() == 1 && patch.contains(cover[static_cast<std::size_t>(compat[0])])) {
        out.emplace_back(patch, compat[0]);
        return;
    }
    // Split where the most compatible cover patches look: this separates
    // the candidates fastest.
    std::optional<LatticeVector> cell;
    std::unordered_map<LatticeVector, int, LatticeVectorHash> votes;
    int best = 0;
    for (int i : compat)
        for (const auto& c : cover[static_cast<std::size_t>(i)].cells())
            if (!patch.covers(c.pos)) {
                int v = ++votes[c.pos];
                if (v > best || (v == best && c.pos < *cell)) {
                    best = v;
                    cell = c.pos;
                }
            }
    if (!cell) throw HypothesisViolation("cover patches overlap: refinement cannot separate them");
    const std::size_t mark = out.size();
    for (const auto& e : oracle.extensions(patch, *cell)) refine_node(oracle, e, compat, cover, out);
    bool uniform = out.size() > mark;
    for (std::size_t i = mark; uniform && i < out.size(); ++i)
        uniform = out[i].second == out[mark].second && out[i].first.size() == patch.size() + 1;
    if (uniform) {
        int idx = out[mark].second;
        out.resize(mark);
        out.emplace_back(patch, idx);
    }
}

}  // namespace detail

/// Splits the cylinder of `start` into admissible cylinders, each contained
/// in the cylinder of exactly one `cover` patch or disjoint from all of them.
/// Cover patches must have pairwise disjoint cylinders. The second member of
/// each result is the index of the containing cover patch, or -1.
inline std::vector<std::pair<Patch, int>> refine_against(const SubshiftOracle& oracle, const Patch& start,
                                                         std::span<const Patch> cover) {
    std::vector<std::pair<Patch, int>> out;
    if (!oracle.is_admissible(start)) return out;
    std::vector<int> all(cover.size());
    for (std::size_t i = 0; i < cover.size(); ++i) all[i] = static_cast<int>(i);
    detail::refine_node(oracle, start, all, cover, out);
    return out;
}

/// An element of the topological full group: a finite list of cylinders
/// with lattice translations, identity off their union. compose(outer,
/// inner) acts as outer after inner (left action).
class PieceTable {
public:
    explicit PieceTable(OraclePtr oracle) : oracle_(std::move(oracle)) {}

    /// Drops inadmissible domains and zero shifts, then sorts.
    static PieceTable from_pieces(OraclePtr oracle, std::vector<Piece> pieces) {
        PieceTable t(std::move(oracle));
        for (auto& p : pieces) {
            if (p.shift.is_zero()) continue;
            if (!t.oracle_->is_admissible(p.domain)) continue;
            t.pieces_.push_back(std::move(p));
        }
        std::sort(t.pieces_.begin(), t.pieces_.end());
        return t;
    }

    const SubshiftOracle& oracle() const { return *oracle_; }
    const OraclePtr& oracle_ptr() const { return oracle_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    bool is_identity() const { return pieces_.empty(); }
    int dim() const { return oracle_->dim(); }

    std::vector<Patch> domains() const {
        std::vector<Patch> d;
        for (const auto& p : pieces_) d.push_back(p.domain);
        return d;
    }
    std::vector<Patch> images() const {
        std::vector<Patch> d;
        for (const auto& p : pieces_) d.push_back(p.domain.shifted(p.shift));
        return d;
    }

    /// Partition of the cylinder of `d` by the shift this element applies.
    std::vector<std::pair<Patch, LatticeVector>> determine(const Patch& d) const {
        auto doms = domains();
        std::vector<std::pair<Patch, LatticeVector>> out;
        for (auto& [part, idx] : refine_against(*oracle_, d, doms))
            out.emplace_back(std::move(part), idx < 0 ? LatticeVector(dim()) : pieces_[static_cast<std::size_t>(idx)].shift);
        return out;
    }

    /// Largest l1 radius of a domain plus largest shift length.
    int reach() const {
        int r = 0, s = 0;
        for (const auto& p : pieces_) {
            r = std::max(r, p.domain.radius());
            s = std::max(s, p.shift.l1());
        }
        return r + s;
    }

private:
    OraclePtr oracle_;
    std::vector<Piece> pieces_;
};

inline void require_same_oracle(const PieceTable& a, const PieceTable& b) {
    if (a.oracle_ptr() != b.oracle_ptr() && a.oracle().id() != b.oracle().id())
        throw PreconditionViolation("full-group elements over different subshifts");
}

inline PieceTable identity_element(OraclePtr oracle) { return PieceTable(std::move(oracle)); }

inline PieceTable inverse(const PieceTable& t) {
    std::vector<Piece> ps;
    for (const auto& p : t.pieces()) ps.push_back({p.domain.shifted(p.shift), -p.shift});
    return PieceTable::from_pieces(t.oracle_ptr(), std::move(ps));
}

/// Merges pieces with equal shifts whose domains are all the admissible
/// one-cell extensions of a common patch, until no merge applies.
inline PieceTable coarsen(const PieceTable& t) {
    const auto& o = t.oracle();
    std::unordered_map<Patch, LatticeVector, PatchHash> live;
    for (const auto& p : t.pieces()) live.emplace(p.domain, p.shift);
    std::vector<Patch> work;
    for (const auto& p : t.pieces()) work.push_back(p.domain);
    while (!work.empty()) {
        Patch d = std::move(work.back());
        work.pop_back();
        auto it = live.find(d);
        if (it == live.end()) continue;
        const LatticeVector shift = it->second;
        for (const auto& c : d.cells()) {
            Patch parent = d.without(c.pos);
            auto sibs = o.extensions(parent, c.pos);
            bool all = true;
            for (const auto& e : sibs) {
                auto jt = live.find(e);
                if (jt == live.end() || jt->second != shift) {
                    all = false;
                    break;
                }
            }
            if (!all) continue;
            for (const auto& e : sibs) live.erase(e);
            live.emplace(parent, shift);
            work.push_back(std::move(parent));
            break;
        }
    }
    std::vector<Piece> ps;
    for (auto& [d, s] : live) ps.push_back({d, s});
    return PieceTable::from_pieces(t.oracle_ptr(), std::move(ps));
}

/// outer after inner. Inner's pieces are refined until outer's shift is
/// constant on their image; outer's pieces are refined against inner's
/// domains and kept where inner is the identity.
inline PieceTable compose(const PieceTable& outer, const PieceTable& inner) {
    require_same_oracle(outer, inner);
    if (inner.is_identity()) return outer;
    if (outer.is_identity()) return inner;
    std::vector<Piece> ps;
    for (const auto& p : inner.pieces())
        for (auto& [part, t] : outer.determine(p.domain.shifted(p.shift)))
            ps.push_back({part.shifted(-p.shift), p.shift + t});
    auto inner_domains = inner.domains();
    for (const auto& q : outer.pieces())
        for (auto& [part, idx] : refine_against(outer.oracle(), q.domain, inner_domains))
            if (idx < 0) ps.push_back({std::move(part), q.shift});
    return coarsen(PieceTable::from_pieces(outer.oracle_ptr(), std::move(ps)));
}

/// Semantic equality: every piece of either table is refined against the
/// other and the assigned shifts compared. Points outside both tables'
/// domains are fixed by both.
inline bool equals(const PieceTable& a, const PieceTable& b) {
    require_same_oracle(a, b);
    auto one_way = [](const PieceTable& x, const PieceTable& y) {
        for (const auto& p : x.pieces())
            for (const auto& [part, t] : y.determine(p.domain))
                if (t != p.shift) return false;
        return true;
    };
    return one_way(a, b) && one_way(b, a);
}

inline PieceTable power(const PieceTable& t, int n) {
    PieceTable base = n < 0 ? inverse(t) : t;
    PieceTable r = identity_element(t.oracle_ptr());
    for (int i = 0; i < std::abs(n); ++i) r = compose(base, r);
    return r;
}

/// [g,h] = g^-1 h^-1 g h.
inline PieceTable commutator(const PieceTable& g, const PieceTable& h) {
    return compose(inverse(g), compose(inverse(h), compose(g, h)));
}

/// Least n <= cap with t^n = identity.
inline std::variant<int, ExceedsCap> order(const PieceTable& t, int cap) {
    if (cap < 1) throw PreconditionViolation("order cap must be positive");
    PieceTable acc = t;
    for (int n = 1; n <= cap; ++n) {
        if (acc.is_identity()) return n;
        acc = compose(t, acc);
    }
    return ExceedsCap{cap};
}

struct NeedLargerWindow {
    std::vector<LatticeVector> possible_shifts;
};

/// The shift applied to every configuration extending `window`, when the
/// window determines it.
inline std::variant<LatticeVector, NeedLargerWindow> apply_to_window(const PieceTable& t, const Patch& window) {
    if (!t.oracle().is_admissible(window)) throw InadmissibleWindow("window is not admissible");
    std::vector<LatticeVector> shifts;
    for (const auto& [part, s] : t.determine(window))
        if (std::find(shifts.begin(), shifts.end(), s) == shifts.end()) shifts.push_back(s);
    std::sort(shifts.begin(), shifts.end());
    if (shifts.size() == 1) return shifts.front();
    return NeedLargerWindow{std::move(shifts)};
}

/// T_{pi,(g1,g2,g3)}: cyclically permutes the cylinders of pi+g1, pi+g2,
/// pi+g3. Identity when pi is inadmissible.
inline PieceTable make_three_cycle(OraclePtr oracle, const Patch& pi, const LatticeVector& g1,
                                   const LatticeVector& g2, const LatticeVector& g3) {
    if (!oracle->is_admissible(pi)) return PieceTable(oracle);
    const Patch a = pi.shifted(g1), b = pi.shifted(g2), c = pi.shifted(g3);
    if (oracle->compatible(a, b) || oracle->compatible(b, c) || oracle->compatible(a, c))
        throw OverlapError("three-cycle cylinders are not pairwise disjoint");
    return PieceTable::from_pieces(oracle, {{a, g2 - g1}, {b, g3 - g2}, {c, g1 - g3}});
}

/// Checks domain admissibility, nonzero shifts, pairwise disjoint domains,
/// pairwise disjoint images and equality of the two unions.
inline std::optional<std::string> validate(const PieceTable& t) {
    const auto& o = t.oracle();
    auto doms = t.domains();
    auto imgs = t.images();
    for (const auto& p : t.pieces()) {
        if (p.shift.is_zero()) return "zero shift piece";
        if (!o.is_admissible(p.domain)) return "inadmissible domain";
    }
    for (std::size_t i = 0; i < doms.size(); ++i)
        for (std::size_t j = i + 1; j < doms.size(); ++j) {
            if (o.compatible(doms[i], doms[j])) return "overlapping domains " + std::to_string(i) + "," + std::to_string(j);
            if (o.compatible(imgs[i], imgs[j])) return "overlapping images " + std::to_string(i) + "," + std::to_string(j);
        }
    for (const auto& d : doms)
        for (const auto& [part, idx] : refine_against(o, d, imgs))
            if (idx < 0) return "domain union not covered by images";
    for (const auto& d : imgs)
        for (const auto& [part, idx] : refine_against(o, d, doms))
            if (idx < 0) return "image union not covered by domains";
    return std::nullopt;
}

/// Canonical representative: every domain refined to the smallest l1 ball
/// containing all domain supports, zero shifts dropped, sorted.
inline PieceTable normal_form(const PieceTable& t) {
    int r = 0;
    for (const auto& p : t.pieces()) r = std::max(r, p.domain.radius());
    auto ball = ball_points(t.dim(), r);
    std::vector<Piece> ps;
    for (const auto& p : t.pieces()) {
        std::vector<LatticeVector> missing;
        for (const auto& v : ball)
            if (!p.domain.covers(v)) missing.push_back(v);
        std::vector<Patch> frontier{p.domain};
        for (const auto& v : missing) {
            std::vector<Patch> next;
            for (const auto& q : frontier)
                for (auto& e : t.oracle().extensions(q, v)) next.push_back(std::move(e));
            frontier = std::move(next);
            if (frontier.size() > t.oracle().enumeration_cap()) throw ResourceCap("normal form refinement exceeds cap");
        }
        for (auto& q : frontier) ps.push_back({std::move(q), p.shift});
    }
    return PieceTable::from_pieces(t.oracle_ptr(), std::move(ps));
}

}  // namespace tfg
