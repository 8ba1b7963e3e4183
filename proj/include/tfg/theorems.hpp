#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tfg/errors.hpp"
#include "tfg/fullgroup.hpp"
#include "tfg/perm.hpp"
#include "tfg/word.hpp"

namespace tfg {

// ---------------------------------------------------------------------------
// Incompatibility radius

struct RadiusResult {
    std::optional<int> radius;  // empty: obstruction up to cap
    int cap = 0;
    /// For the last failing radius: the offending shift and window.
    std::optional<std::pair<LatticeVector, Patch>> witness;
};

namespace detail {

/// A window f on B(R) u (B(R)-g) with f(h) = f(h-g) for every h in B(R),
/// if one is admissible. Constant windows are tried before enumeration.
inline std::optional<Patch> agreeing_window(const SubshiftOracle& o, int R, const LatticeVector& g) {
    auto ball = ball_points(o.dim(), R);
    auto support = support_union(ball, shifted_support(ball, -g));
    auto agrees = [&](const Patch& f) {
        for (const auto& h : ball)
            if (f.at(h) != f.at(h - g)) return false;
        return true;
    };
    for (Symbol s = 0; s < o.alphabet().size(); ++s) {
        std::vector<Cell> cells;
        for (const auto& p : support) cells.push_back({p, s});
        Patch f(o.dim(), std::move(cells));
        if (o.is_admissible(f)) return f;
    }
    for (auto& f : o.enumerate_admissible(support))
        if (agrees(f)) return f;
    return std::nullopt;
}

}  // namespace detail

/// Least R <= cap such that no admissible window on B(R) u (B(R)-g) agrees
/// with its g-translate on B(R), for every g in A.
inline RadiusResult incompatibility_radius(const SubshiftOracle& o, const std::vector<LatticeVector>& A, int cap) {
    for (const auto& g : A)
        if (g.is_zero()) throw PreconditionViolation("shift set contains 0");
    RadiusResult res;
    res.cap = cap;
    for (int R = 0; R <= cap; ++R) {
        bool ok = true;
        for (const auto& g : A)
            if (auto f = detail::agreeing_window(o, R, g)) {
                res.witness = {g, *f};
                ok = false;
                break;
            }
        if (ok) {
            res.radius = R;
            return res;
        }
    }
    return res;
}

/// True when the single radius R separates every g in A.
inline bool radius_separates(const SubshiftOracle& o, const std::vector<LatticeVector>& A, int R) {
    for (const auto& g : A)
        if (detail::agreeing_window(o, R, g)) return false;
    return true;
}

/// {g : 0 < |g|_1 <= maxlen}.
inline std::vector<LatticeVector> nonzero_ball(int dim, int maxlen) {
    std::vector<LatticeVector> out;
    for (const auto& g : ball_points(dim, maxlen))
        if (!g.is_zero()) out.push_back(g);
    return out;
}

// ---------------------------------------------------------------------------
// Five-set commutator identity

struct FiveSetResult {
    PieceTable lhs;
    PieceTable rhs;
    bool holds = false;
};

/// Checks that the six cylinders pi1, pi1+g1, pi1+g2, pi2, pi2+h1, pi2+h2
/// are pairwise disjoint except for the pair (pi1, pi2).
inline void check_five_set_hypotheses(const SubshiftOracle& o, const Patch& pi1, const LatticeVector& g1,
                                      const LatticeVector& g2, const Patch& pi2, const LatticeVector& h1,
                                      const LatticeVector& h2) {
    const std::vector<std::pair<std::string, Patch>> ps = {
        {"pi1", pi1}, {"pi1+g1", pi1.shifted(g1)}, {"pi1+g2", pi1.shifted(g2)},
        {"pi2", pi2}, {"pi2+h1", pi2.shifted(h1)}, {"pi2+h2", pi2.shifted(h2)},
    };
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            if (i == 0 && j == 3) continue;
            if (o.compatible(ps[i].second, ps[j].second))
                throw HypothesisViolation("compatible pair: " + ps[i].first + ", " + ps[j].first);
        }
}

/// lhs = [[b^-1, a^-1], [b, a]] with a = T_{pi1,(0,g1,g2)}, b = T_{pi2,(0,h1,h2)};
/// rhs = T_{pi1 u pi2,(0,g1,g2)}.
inline FiveSetResult five_set_identity(const OraclePtr& o, const Patch& pi1, const LatticeVector& g1,
                                       const LatticeVector& g2, const Patch& pi2, const LatticeVector& h1,
                                       const LatticeVector& h2) {
    check_five_set_hypotheses(*o, pi1, g1, g2, pi2, h1, h2);
    const LatticeVector zero(o->dim());
    auto a = make_three_cycle(o, pi1, zero, g1, g2);
    auto b = make_three_cycle(o, pi2, zero, h1, h2);
    auto lhs = commutator(commutator(inverse(b), inverse(a)), commutator(b, a));
    PieceTable rhs = identity_element(o);
    if (!patches_conflict(pi1, pi2)) rhs = make_three_cycle(o, patch_union(pi1, pi2), zero, g1, g2);
    bool holds = equals(lhs, rhs);
    return {std::move(lhs), std::move(rhs), holds};
}

struct FiveSetInstance {
    Patch pi1;
    LatticeVector g1, g2;
    Patch pi2;
    LatticeVector h1, h2;
};

/// Random valid instance: pi1 and pi2 are cut from one sampled window so
/// that they are compatible; shifts are drawn until the hypotheses hold.
inline std::optional<FiveSetInstance> sample_five_set_instance(const OraclePtr& o, std::uint64_t seed, int radius,
                                                               int max_shift, int max_tries = 2000) {
    std::mt19937_64 rng(seed);
    const int d = o->dim();
    std::uniform_int_distribution<int> sh(-max_shift, max_shift);
    auto rv = [&] {
        LatticeVector v(d);
        for (int i = 0; i < d; ++i) v[i] = sh(rng);
        return v;
    };
    auto ball = ball_points(d, radius);
    auto big = ball_points(d, radius + 1);
    for (int t = 0; t < max_tries; ++t) {
        auto w = o->sample_window(rng(), big);
        auto off = rv();
        for (int i = 0; i < d; ++i) off[i] = std::clamp(off[i], -1, 1);
        Patch pi1 = w.restricted(ball);
        Patch pi2 = w.restricted(shifted_support(ball, off));
        FiveSetInstance in{pi1, rv(), rv(), pi2, rv(), rv()};
        try {
            check_five_set_hypotheses(*o, in.pi1, in.g1, in.g2, in.pi2, in.h1, in.h2);
        } catch (const HypothesisViolation&) {
            continue;
        }
        return in;
    }
    return std::nullopt;
}

inline FiveSetResult five_set_identity(const OraclePtr& o, const FiveSetInstance& in) {
    return five_set_identity(o, in.pi1, in.g1, in.g2, in.pi2, in.h1, in.h2);
}

/// The same commutator computed in S_5 with a=(1,2,3), b=(1,4,5).
struct PermutationModel {
    std::string ba, binv_ainv, nested;
    bool ok = false;
};

inline PermutationModel permutation_model_check() {
    auto a = Perm::cycle(5, {0, 1, 2});
    auto b = Perm::cycle(5, {0, 3, 4});
    auto ba = perm_commutator(b, a);
    auto bi_ai = perm_commutator(b.inverse(), a.inverse());
    auto nested = perm_commutator(bi_ai, ba);
    PermutationModel m{ba.str(), bi_ai.str(), nested.str(), false};
    m.ok = m.ba == "(1,5,3)" && m.binv_ainv == "(1,4,2)" && m.nested == "(1,2,3)" && nested == a;
    return m;
}

// ---------------------------------------------------------------------------
// Generating sets T_R = { T_{pi,(0,e_i,-e_i)} : pi admissible on B(R) }

struct GeneratorSetT {
    int radius = 0;
    GeneratorFamily<PieceTable> family;
    std::vector<std::pair<Patch, int>> keys;     // (pi, axis) per family member
    std::vector<std::pair<Patch, int>> skipped;  // overlapping cylinders
    std::map<std::pair<Patch, int>, int> index;

    std::optional<int> find(const Patch& pi, int axis) const {
        auto it = index.find({pi, axis});
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
};

inline std::string patch_code(const SubshiftOracle& o, const Patch& p) {
    std::string s;
    for (const auto& c : p.cells()) s += o.alphabet().name(c.sym);
    return s;
}

inline GeneratorSetT enumerate_T_R(const OraclePtr& o, int R) {
    if (R < 0) throw PreconditionViolation("radius must be nonnegative");
    GeneratorSetT out;
    out.radius = R;
    out.family.name = "T_" + std::to_string(R);
    const LatticeVector zero(o->dim());
    auto patches = o->enumerate_admissible(ball_points(o->dim(), R));
    for (std::size_t k = 0; k < patches.size(); ++k)
        for (int i = 0; i < o->dim(); ++i) {
            auto e = LatticeVector::axis(o->dim(), i);
            try {
                auto t = make_three_cycle(o, patches[k], zero, e, -e);
                out.index[{patches[k], i}] = out.family.add(
                    "T[" + std::to_string(R) + ":" + patch_code(*o, patches[k]) + ":e" + std::to_string(i) + "]", std::move(t));
                out.keys.emplace_back(patches[k], i);
            } catch (const OverlapError&) {
                out.skipped.emplace_back(patches[k], i);
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Word synthesis: every member of T_{R'} as a word over T_R, R' > R.

struct SynthesisResult {
    Word word;
    PieceTable value;
    bool verified = false;
    std::size_t length = 0;
};

/// Builds words for T_{pi',(0,e,-e)}, pi' on B(r), by growing the support
/// one translate B(r-1)+h at a time with the nested commutator identity.
class Synthesizer {
public:
    Synthesizer(OraclePtr oracle, int base_radius)
        : oracle_(std::move(oracle)), base_(checked_base(oracle_, base_radius)) {}

    const GeneratorSetT& base() const { return base_; }
    const OraclePtr& oracle() const { return oracle_; }
    void set_check_hypotheses(bool on) { check_ = on; }

    /// Word for T_{pi,(0,e_axis,-e_axis)} with pi on B(r), r >= base radius.
    Word word_for(const Patch& pi, int axis) {
        int r = pi.radius();
        auto ball = ball_points(oracle_->dim(), r);
        if (pi.size() != ball.size()) throw PreconditionViolation("target patch must be a full l1 ball");
        if (!oracle_->is_admissible(pi)) throw PreconditionViolation("target patch is inadmissible");
        return build(pi, axis, r);
    }

    SynthesisResult synthesize(const Patch& pi, int axis) {
        auto word = word_for(pi, axis);
        SynthesisResult res{word, evaluate(word), false, word.length()};
        const LatticeVector zero(oracle_->dim());
        auto e = LatticeVector::axis(oracle_->dim(), axis);
        res.verified = equals(res.value, make_three_cycle(oracle_, pi, zero, e, -e));
        return res;
    }

    PieceTable evaluate(const Word& w) const {
        std::function<PieceTable(const PieceTable&, const PieceTable&)> comp = [](const PieceTable& x, const PieceTable& y) {
            return compose(x, y);
        };
        std::function<PieceTable(const PieceTable&)> inv = [](const PieceTable& x) { return inverse(x); };
        return w.evaluate<PieceTable>(base_.family.elements, identity_element(oracle_), comp, inv);
    }

private:
    static GeneratorSetT checked_base(const OraclePtr& o, int r) {
        if (o->dim() < 2) throw PreconditionViolation("word synthesis needs dimension at least 2");
        if (r < 2 || !radius_separates(*o, nonzero_ball(o->dim(), 3), r - 2))
            throw PreconditionViolation("base radius must be at least R1 + 2 for shifts of length <= 3");
        return enumerate_T_R(o, r);
    }

    Word generator(const Patch& rho, int axis, int exp) {
        auto idx = base_.find(rho, axis);
        if (!idx) throw PreconditionViolation("generator T[" + patch_code(*oracle_, rho) + "] has overlapping cylinders");
        return Word::letter(*idx, exp);
    }

    /// T_{rho,(0,e,-e)} for rho on B(r), r >= base.
    Word element(const Patch& rho, int axis, int r) {
        if (r == base_.radius) return generator(rho, axis, 1);
        auto key = std::make_pair(rho, axis);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        auto w = build(rho, axis, r);
        memo_.emplace(key, w);
        return w;
    }

    Word build(const Patch& target, int axis, int r) {
        if (r < base_.radius) throw PreconditionViolation("target radius below base radius");
        if (r == base_.radius) return generator(target, axis, 1);
        const int d = oracle_->dim();
        const int prev = r - 1;
        auto ball = ball_points(d, prev);
        auto g = LatticeVector::axis(d, axis);
        const LatticeVector zero(d);

        Patch acc = target.restricted(ball);
        Word a = element(acc, axis, prev);
        std::vector<LatticeVector> steps;
        for (int i = 0; i < d; ++i) {
            steps.push_back(LatticeVector::axis(d, i, -1));
            steps.push_back(LatticeVector::axis(d, i, 1));
        }
        std::sort(steps.begin(), steps.end());
        for (const auto& h : steps) {
            auto piece = target.restricted(shifted_support(ball, h));
            if (h == g || h == -g) {
                // Add B+h along the cycling axis. For h = -g work with the
                // inverse element, which cycles along -g.
                const bool flip = (h == -g);
                const LatticeVector gg = flip ? -g : g;
                Word cur = flip ? a.inverse() : a;
                int k = (axis + 1) % d;
                auto kk = LatticeVector::axis(d, k);
                Patch pi1 = acc.shifted(-gg);
                Patch pi2 = piece.shifted(-gg);
                if (check_) check_five_set_hypotheses(*oracle_, pi1, gg, gg * 2, pi2, kk, -kk);
                Word b = element(pi2, k, prev);
                Word next = commutator_word(commutator_word(b.inverse(), cur.inverse()), commutator_word(b, cur));
                a = flip ? next.inverse() : next;
            } else {
                // h orthogonal to g: b cycles piece, piece-2h, piece-h.
                Patch pi2 = piece;
                if (check_) check_five_set_hypotheses(*oracle_, acc, g, -g, pi2, h * -2, -h);
                int hax = 0;
                while (h[hax] == 0) ++hax;
                Word b = element(pi2.shifted(-h), hax, prev);
                if (h[hax] < 0) b = b.inverse();
                a = commutator_word(commutator_word(b.inverse(), a.inverse()), commutator_word(b, a));
            }
            acc = patch_union(acc, piece);
        }
        return a;
    }

    OraclePtr oracle_;
    GeneratorSetT base_;
    std::map<std::pair<Patch, int>, Word> memo_;
    bool check_ = false;
};

// ---------------------------------------------------------------------------
// Decomposition of an order-three element into elementary three-cycles

struct ElementaryCycle {
    Patch pi;
    LatticeVector g1, g2, g3;
};

inline std::vector<ElementaryCycle> decompose_three_cycle(const PieceTable& t) {
    auto ord = order(t, 3);
    if (!std::holds_alternative<int>(ord) || std::get<int>(ord) != 3)
        throw NotAThreeCycle("element does not have order three");
    const auto& o = t.oracle();
    const LatticeVector zero(t.dim());

    std::vector<Piece> pieces = t.pieces();
    std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) {
        if (x.domain.size() != y.domain.size()) return x.domain.size() < y.domain.size();
        return x < y;
    });

    std::vector<ElementaryCycle> out;
    std::vector<Patch> covered;
    for (const auto& p : pieces) {
        for (auto& [free, idx] : refine_against(o, p.domain, covered)) {
            if (idx >= 0) continue;
            const auto s1 = p.shift;
            for (auto& [f, s2] : t.determine(free.shifted(s1))) {
                if (s2.is_zero()) throw NotAThreeCycle("orbit of length two");
                for (const auto& [back, s3] : t.determine(f.shifted(s2)))
                    if (s3 != -(s1 + s2)) throw NotAThreeCycle("orbit does not close after three steps");
                Patch pi = f.shifted(-s1);
                out.push_back({pi, zero, s1, s1 + s2});
                covered.push_back(pi);
                covered.push_back(f);
                covered.push_back(f.shifted(s2));
            }
        }
    }
    return out;
}

inline PieceTable product_of(const OraclePtr& o, const std::vector<ElementaryCycle>& cs) {
    PieceTable r = identity_element(o);
    for (const auto& c : cs) r = compose(make_three_cycle(o, c.pi, c.g1, c.g2, c.g3), r);
    return r;
}

}  // namespace tfg
