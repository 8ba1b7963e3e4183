#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "tfg/errors.hpp"

namespace tfg::iet {

/// Integer coordinates of a point of H = <alpha_1..alpha_d>/Z; the point is
/// frac(sum n_i alpha_i).
class HPoint {
public:
    HPoint() = default;
    explicit HPoint(int d) : n_(static_cast<std::size_t>(d), 0) {}
    explicit HPoint(std::vector<std::int64_t> n) : n_(std::move(n)) {}

    int dim() const { return static_cast<int>(n_.size()); }
    std::int64_t operator[](int i) const { return n_[static_cast<std::size_t>(i)]; }
    const std::vector<std::int64_t>& coords() const { return n_; }
    bool is_zero() const {
        return std::all_of(n_.begin(), n_.end(), [](std::int64_t x) { return x == 0; });
    }

    HPoint operator+(const HPoint& o) const {
        check(o);
        HPoint r(*this);
        for (std::size_t i = 0; i < n_.size(); ++i) r.n_[i] += o.n_[i];
        return r;
    }
    HPoint operator-(const HPoint& o) const {
        check(o);
        HPoint r(*this);
        for (std::size_t i = 0; i < n_.size(); ++i) r.n_[i] -= o.n_[i];
        return r;
    }
    HPoint operator-() const {
        HPoint r(*this);
        for (auto& x : r.n_) x = -x;
        return r;
    }

    std::string str() const {
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < n_.size(); ++i) os << (i ? "," : "") << n_[i];
        os << ')';
        return os.str();
    }

    friend bool operator==(const HPoint&, const HPoint&) = default;
    friend auto operator<=>(const HPoint&, const HPoint&) = default;

private:
    void check(const HPoint& o) const {
        if (o.n_.size() != n_.size()) throw DimensionMismatch("HPoints of different rank");
    }
    std::vector<std::int64_t> n_;
};

enum class Order { Less, Equal, Greater };

/// alpha_i = sqrt(p_i) for squarefree p_i > 1. Rational independence of
/// {1, alpha_1, ..., alpha_d} is assumed, not checked; for square roots of
/// distinct primes it holds.
class AngleBasis {
public:
    explicit AngleBasis(std::vector<int> radicands, int start_bits = 64, int cap_bits = 4096)
        : rad_(std::move(radicands)), start_(start_bits), cap_(cap_bits) {
        if (rad_.empty()) throw BadInput("basis needs at least one generator");
        for (int p : rad_) {
            if (p < 2) throw BadInput("radicand must be at least 2");
            for (int k = 2; k * k <= p; ++k)
                if (p % (k * k) == 0) throw BadInput("radicand " + std::to_string(p) + " is not squarefree");
        }
        if (start_ < 1 || cap_ < start_) throw BadInput("bad precision range");
    }

    /// "sqrt:2,3" or "2,3".
    static std::shared_ptr<const AngleBasis> parse(const std::string& spec, int cap_bits = 4096) {
        std::string body = spec.rfind("sqrt:", 0) == 0 ? spec.substr(5) : spec;
        std::vector<int> r;
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                int v = std::stoi(tok, &used);
                if (used != tok.size()) throw BadInput("bad radicand '" + tok + "'");
                r.push_back(v);
            } catch (const std::logic_error&) {
                throw BadInput("bad radicand '" + tok + "'");
            }
        }
        return std::make_shared<AngleBasis>(r, 64, cap_bits);
    }

    int dim() const { return static_cast<int>(rad_.size()); }
    const std::vector<int>& radicands() const { return rad_; }
    std::string id() const {
        std::string s = "sqrt:";
        for (std::size_t i = 0; i < rad_.size(); ++i) s += (i ? "," : "") + std::to_string(rad_[i]);
        return s;
    }
    int start_bits() const { return start_; }
    int cap_bits() const { return cap_; }

    /// Bounds lo <= 2^bits * frac(n.alpha) <= hi, or false when the value
    /// straddles an integer at this precision.
    bool frac_bounds(const HPoint& n, int bits, mpz_class& lo, mpz_class& hi) const {
        if (n.dim() != dim()) throw DimensionMismatch("point rank differs from basis rank");
        mpz_class s = 0;
        long neg = 0, pos = 0;
        for (int i = 0; i < dim(); ++i) {
            if (n[i] == 0) continue;
            const mpz_class& r = root(i, bits);
            mpz_class c(static_cast<long>(n[i]));
            s += c * r;
            if (n[i] > 0)
                pos += static_cast<long>(n[i]);
            else
                neg += static_cast<long>(n[i]);
        }
        lo = s + neg;
        hi = s + pos;
        mpz_class flo, fhi;
        mpz_fdiv_q_2exp(flo.get_mpz_t(), lo.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
        mpz_fdiv_q_2exp(fhi.get_mpz_t(), hi.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
        if (flo != fhi) return false;
        mpz_class shift = flo << bits;
        lo -= shift;
        hi -= shift;
        return true;
    }

    /// Order of frac(n.alpha) and frac(m.alpha).
    Order compare(const HPoint& n, const HPoint& m) const {
        if (n == m) return Order::Equal;
        mpz_class l1, h1, l2, h2;
        for (int bits = start_; bits <= cap_; bits *= 2) {
            if (!frac_bounds(n, bits, l1, h1) || !frac_bounds(m, bits, l2, h2)) continue;
            if (h1 < l2) return Order::Less;
            if (h2 < l1) return Order::Greater;
        }
        throw PrecisionCap("no separation of " + n.str() + " and " + m.str() + " within " + std::to_string(cap_) + " bits");
    }

    bool less(const HPoint& n, const HPoint& m) const { return compare(n, m) == Order::Less; }

    /// Approximate value, for display only.
    double approx(const HPoint& n) const {
        mpz_class lo, hi;
        for (int bits = start_; bits <= cap_; bits *= 2)
            if (frac_bounds(n, bits, lo, hi)) {
                mpf_class f(lo, 128);
                f /= mpf_class(mpz_class(1) << bits, 128);
                return f.get_d();
            }
        return 0.0;
    }

private:
    const mpz_class& root(int i, int bits) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(i, bits);
        auto it = roots_.find(key);
        if (it != roots_.end()) return it->second;
        mpz_class v = mpz_class(rad_[static_cast<std::size_t>(i)]) << (2 * bits);
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
        return roots_.emplace(key, std::move(r)).first->second;
    }

    std::vector<int> rad_;
    int start_, cap_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, mpz_class> roots_;
};

using BasisPtr = std::shared_ptr<const AngleBasis>;

inline Order h_compare(const AngleBasis& b, const HPoint& n, const HPoint& m) { return b.compare(n, m); }

/// p lies on the half-open arc [x, y) of the circle (empty when x = y).
inline bool on_arc(const AngleBasis& b, const HPoint& p, const HPoint& x, const HPoint& y) {
    if (x == y) return false;
    return b.less(p - x, y - x);
}

/// Half-open arc [from, to) with a translation attached.
struct Arc {
    HPoint from, to, shift;
};

/// Interval exchange of [0,1): piece j is [a_j, a_{j+1}) (a_0 = 0, the last
/// piece ends at 1) and acts by x -> x + h_j mod 1. Canonical form: pieces
/// are maximal with one shift and an image that does not wrap past 1.
class IetMap {
public:
    IetMap(BasisPtr basis, std::vector<HPoint> breakpoints, std::vector<HPoint> shifts)
        : basis_(std::move(basis)), bp_(std::move(breakpoints)), sh_(std::move(shifts)) {
        if (!basis_) throw BadInput("null basis");
        if (bp_.empty() || bp_.size() != sh_.size()) throw BadInput("breakpoints and shifts must be nonempty and paired");
        const int d = basis_->dim();
        for (const auto& v : bp_)
            if (v.dim() != d) throw DimensionMismatch("breakpoint rank differs from basis rank");
        for (const auto& v : sh_)
            if (v.dim() != d) throw DimensionMismatch("shift rank differs from basis rank");
        if (!bp_.front().is_zero()) throw BadInput("first breakpoint must be 0");
        for (std::size_t j = 0; j + 1 < bp_.size(); ++j)
            if (!basis_->less(bp_[j], bp_[j + 1])) throw BadInput("breakpoints must be strictly increasing");
    }

    static IetMap identity(BasisPtr b) {
        HPoint z(b->dim());
        return IetMap(b, {z}, {z});
    }

    const BasisPtr& basis() const { return basis_; }
    int dim() const { return basis_->dim(); }
    std::size_t size() const { return bp_.size(); }
    const std::vector<HPoint>& breakpoints() const { return bp_; }
    const std::vector<HPoint>& shifts() const { return sh_; }

    /// End of piece j as a circle point (the last piece ends at 0 = 1).
    HPoint end_of(std::size_t j) const { return j + 1 < bp_.size() ? bp_[j + 1] : HPoint(dim()); }

    std::size_t piece_of(const HPoint& x) const {
        std::size_t lo = 0, hi = bp_.size();
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (basis_->less(x, bp_[mid]))
                hi = mid;
            else
                lo = mid;
        }
        return lo;
    }

    HPoint apply(const HPoint& x) const { return x + sh_[piece_of(x)]; }

    bool is_identity() const { return bp_.size() == 1 && sh_[0].is_zero(); }

    /// Arcs [a_j + h_j, a_{j+1} + h_j) covered by the images.
    std::vector<Arc> image_arcs() const {
        std::vector<Arc> out;
        for (std::size_t j = 0; j < bp_.size(); ++j) out.push_back({bp_[j] + sh_[j], end_of(j) + sh_[j], sh_[j]});
        return out;
    }

    friend bool operator==(const IetMap& a, const IetMap& b) {
        return a.basis_->id() == b.basis_->id() && a.bp_ == b.bp_ && a.sh_ == b.sh_;
    }

private:
    BasisPtr basis_;
    std::vector<HPoint> bp_;
    std::vector<HPoint> sh_;
};

namespace detail {

inline void sort_unique(const AngleBasis& b, std::vector<HPoint>& pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::sort(pts.begin(), pts.end(), [&](const HPoint& x, const HPoint& y) { return b.less(x, y); });
}

}  // namespace detail

/// Splits every piece at its wrap point -h_j, then merges neighbours with
/// equal shifts unless their common endpoint is such a wrap point.
inline IetMap canonical(const BasisPtr& basis, std::vector<HPoint> bp, std::vector<HPoint> sh) {
    const auto& b = *basis;
    const HPoint zero(b.dim());
    std::vector<HPoint> bp2, sh2;
    for (std::size_t j = 0; j < bp.size(); ++j) {
        bp2.push_back(bp[j]);
        sh2.push_back(sh[j]);
        const HPoint w = -sh[j];
        if (w == bp[j]) continue;
        // The single piece is the whole circle; otherwise [bp_j, end).
        bool inside = bp.size() == 1 ? !w.is_zero() : on_arc(b, w, bp[j], j + 1 < bp.size() ? bp[j + 1] : zero);
        if (inside) {
            bp2.push_back(w);
            sh2.push_back(sh[j]);
        }
    }
    std::vector<HPoint> bp3{bp2[0]}, sh3{sh2[0]};
    for (std::size_t j = 1; j < bp2.size(); ++j) {
        if (sh2[j] == sh3.back() && bp2[j] != -sh3.back()) continue;
        bp3.push_back(bp2[j]);
        sh3.push_back(sh2[j]);
    }
    return IetMap(basis, std::move(bp3), std::move(sh3));
}

/// The map that translates each arc by its shift and fixes the rest. Arcs
/// must be pairwise disjoint; this is the caller's responsibility.
inline IetMap from_arcs(const BasisPtr& basis, const std::vector<Arc>& arcs) {
    const auto& b = *basis;
    std::vector<HPoint> pts{HPoint(b.dim())};
    for (const auto& a : arcs) {
        pts.push_back(a.from);
        pts.push_back(a.to);
    }
    detail::sort_unique(b, pts);
    std::vector<HPoint> sh;
    for (const auto& p : pts) {
        HPoint s(b.dim());
        for (const auto& a : arcs)
            if (on_arc(b, p, a.from, a.to)) {
                s = a.shift;
                break;
            }
        sh.push_back(s);
    }
    return canonical(basis, std::move(pts), std::move(sh));
}

inline IetMap rotation(const BasisPtr& basis, const HPoint& h) {
    if (h.dim() != basis->dim()) throw DimensionMismatch("shift rank differs from basis rank");
    if (h.is_zero()) return IetMap::identity(basis);
    return IetMap(basis, {HPoint(basis->dim()), -h}, {h, h});
}

inline IetMap iet_inverse(const IetMap& t) {
    std::vector<Arc> arcs;
    for (const auto& a : t.image_arcs()) arcs.push_back({a.from, a.to, -a.shift});
    // A single full-circle arc (from == to) is a rotation.
    if (t.size() == 1) return rotation(t.basis(), -t.shifts()[0]);
    return from_arcs(t.basis(), arcs);
}

/// Breakpoints of outer o inner before canonicalization: inner's breakpoints
/// and inner-preimages of outer's, at most k1 + k2 of them.
inline std::pair<std::vector<HPoint>, std::vector<HPoint>> compose_raw(const IetMap& outer, const IetMap& inner) {
    if (outer.basis()->id() != inner.basis()->id()) throw PreconditionViolation("maps over different bases");
    const auto& b = *inner.basis();
    auto inv = iet_inverse(inner);
    std::vector<HPoint> pts = inner.breakpoints();
    for (const auto& y : outer.breakpoints()) pts.push_back(inv.apply(y));
    detail::sort_unique(b, pts);
    std::vector<HPoint> sh;
    for (const auto& c : pts) {
        auto j = inner.piece_of(c);
        HPoint z = c + inner.shifts()[j];
        sh.push_back(inner.shifts()[j] + outer.shifts()[outer.piece_of(z)]);
    }
    return {std::move(pts), std::move(sh)};
}

inline IetMap iet_compose(const IetMap& outer, const IetMap& inner) {
    auto [pts, sh] = compose_raw(outer, inner);
    return canonical(inner.basis(), std::move(pts), std::move(sh));
}

inline bool iet_equals(const IetMap& a, const IetMap& b) {
    if (a.basis()->id() != b.basis()->id()) throw PreconditionViolation("maps over different bases");
    return a == b;
}

inline IetMap iet_commutator(const IetMap& g, const IetMap& h) {
    return iet_compose(iet_inverse(g), iet_compose(iet_inverse(h), iet_compose(g, h)));
}

inline IetMap iet_power(const IetMap& t, int n) {
    IetMap base = n < 0 ? iet_inverse(t) : t;
    IetMap r = IetMap::identity(t.basis());
    for (int i = 0; i < std::abs(n); ++i) r = iet_compose(base, r);
    return r;
}

inline std::variant<int, ExceedsCap> iet_order(const IetMap& t, int cap) {
    if (cap < 1) throw PreconditionViolation("order cap must be positive");
    IetMap acc = t;
    for (int n = 1; n <= cap; ++n) {
        if (acc.is_identity()) return n;
        acc = iet_compose(t, acc);
    }
    return ExceedsCap{cap};
}

/// Images of the pieces tile the circle: sorted cyclically by start, each
/// image ends where the next begins. Combinatorial, no numerics beyond
/// ordering.
inline bool images_tile(const IetMap& t) {
    const auto& b = *t.basis();
    auto arcs = t.image_arcs();
    if (arcs.size() == 1) return true;
    std::sort(arcs.begin(), arcs.end(), [&](const Arc& x, const Arc& y) { return b.less(x.from, y.from); });
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const auto& next = arcs[(i + 1) % arcs.size()];
        if (arcs[i].to != next.from) return false;
        if (arcs[i].from == arcs[i].to) return false;
    }
    return true;
}

/// The 3-cycle U+h1 -> U+h2 -> U+h3 -> U+h1 of U = [a, b), identity
/// elsewhere.
inline IetMap interval_three_cycle(const BasisPtr& basis, const HPoint& a, const HPoint& b, const HPoint& h1,
                                   const HPoint& h2, const HPoint& h3) {
    if (a == b) return IetMap::identity(basis);
    const auto& B = *basis;
    std::vector<Arc> arcs{{a + h1, b + h1, h2 - h1}, {a + h2, b + h2, h3 - h2}, {a + h3, b + h3, h1 - h3}};
    if (h1 == h2 || h2 == h3 || h1 == h3) throw OverlapError("translates coincide");
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (on_arc(B, arcs[i].from, arcs[j].from, arcs[j].to) || on_arc(B, arcs[j].from, arcs[i].from, arcs[i].to))
                throw OverlapError("translated intervals " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                   " overlap");
    return from_arcs(basis, arcs);
}

inline bool arcs_disjoint(const AngleBasis& b, const HPoint& x1, const HPoint& y1, const HPoint& x2, const HPoint& y2) {
    if (x1 == y1 || x2 == y2) return true;
    return !on_arc(b, x1, x2, y2) && !on_arc(b, x2, x1, y1);
}

/// [a,b) n [c,e) for arcs shorter than half the circle; empty when disjoint.
inline std::pair<HPoint, HPoint> arc_intersection(const AngleBasis& b, const HPoint& a, const HPoint& e1, const HPoint& c,
                                                  const HPoint& e2) {
    const bool c_in = on_arc(b, c, a, e1), a_in = on_arc(b, a, c, e2);
    if (c_in && a_in && a != c) throw PreconditionViolation("arcs intersect in two pieces");
    auto shorter = [&](const HPoint& from, const HPoint& u, const HPoint& v) { return b.less(u - from, v - from) ? u : v; };
    if (c_in) return {c, shorter(c, e1, e2)};
    if (a_in) return {a, shorter(a, e1, e2)};
    return {a, a};
}

/// Interval form of the five-set identity: a = T_{U1,(0,g1,g2)},
/// b = T_{U2,(0,h1,h2)} with the six translates pairwise disjoint except
/// U1, U2; then [[b^-1,a^-1],[b,a]] = T_{U1 n U2,(0,g1,g2)}.
struct IntervalInstance {
    HPoint a1, b1, g1, g2;
    HPoint a2, b2, h1, h2;
};

struct IntervalFiveSet {
    IetMap lhs, rhs;
    bool holds = false;
};

inline void check_interval_hypotheses(const AngleBasis& b, const IntervalInstance& in) {
    const std::vector<std::pair<HPoint, HPoint>> sets = {
        {in.a1, in.b1}, {in.a1 + in.g1, in.b1 + in.g1}, {in.a1 + in.g2, in.b1 + in.g2},
        {in.a2, in.b2}, {in.a2 + in.h1, in.b2 + in.h1}, {in.a2 + in.h2, in.b2 + in.h2},
    };
    const char* names[] = {"U1", "U1+g1", "U1+g2", "U2", "U2+h1", "U2+h2"};
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            if (i == 0 && j == 3) continue;
            if (!arcs_disjoint(b, sets[i].first, sets[i].second, sets[j].first, sets[j].second))
                throw HypothesisViolation(std::string("intersecting pair: ") + names[i] + ", " + names[j]);
        }
}

inline IntervalFiveSet interval_five_set(const BasisPtr& basis, const IntervalInstance& in) {
    check_interval_hypotheses(*basis, in);
    const HPoint z(basis->dim());
    auto a = interval_three_cycle(basis, in.a1, in.b1, z, in.g1, in.g2);
    auto b = interval_three_cycle(basis, in.a2, in.b2, z, in.h1, in.h2);
    auto lhs = iet_commutator(iet_commutator(iet_inverse(b), iet_inverse(a)), iet_commutator(b, a));
    auto [lo, hi] = arc_intersection(*basis, in.a1, in.b1, in.a2, in.b2);
    auto rhs = interval_three_cycle(basis, lo, hi, z, in.g1, in.g2);
    bool holds = iet_equals(lhs, rhs);
    return {std::move(lhs), std::move(rhs), holds};
}

/// Random short vector: coordinates in [-k, k] with frac value below len.
template <class Rng>
HPoint short_vector(const AngleBasis& b, Rng& rng, int k, double len) {
    std::uniform_int_distribution<int> c(-k, k);
    for (;;) {
        std::vector<std::int64_t> n;
        for (int i = 0; i < b.dim(); ++i) n.push_back(c(rng));
        HPoint v(n);
        if (!v.is_zero() && b.approx(v) < len) return v;
    }
}

template <class Rng>
HPoint random_point(const AngleBasis& b, Rng& rng, int k) {
    std::uniform_int_distribution<int> c(-k, k);
    std::vector<std::int64_t> n;
    for (int i = 0; i < b.dim(); ++i) n.push_back(c(rng));
    return HPoint(n);
}

/// Random interval three-cycle on an arc of length < 0.2.
template <class Rng>
IetMap random_three_cycle(const BasisPtr& b, Rng& rng) {
    for (;;) {
        auto a = random_point(*b, rng, 4);
        auto e = a + short_vector(*b, rng, 8, 0.2);
        try {
            return interval_three_cycle(b, a, e, random_point(*b, rng, 3), random_point(*b, rng, 3), random_point(*b, rng, 3));
        } catch (const OverlapError&) {
        }
    }
}

/// Product of `factors` random rotations and interval three-cycles.
template <class Rng>
IetMap random_element(const BasisPtr& b, Rng& rng, int factors) {
    IetMap t = IetMap::identity(b);
    std::uniform_int_distribution<int> kind(0, 2);
    for (int f = 0; f < factors; ++f)
        t = iet_compose(kind(rng) == 0 ? rotation(b, random_point(*b, rng, 3)) : random_three_cycle(b, rng), t);
    return t;
}

/// A valid random interval instance; U1 and U2 overlap.
inline IntervalInstance sample_interval_instance(const BasisPtr& basis, std::uint64_t seed, int max_tries = 10000) {
    std::mt19937_64 rng(seed);
    const auto& b = *basis;
    for (int t = 0; t < max_tries; ++t) {
        IntervalInstance in;
        in.a1 = random_point(b, rng, 6);
        in.b1 = in.a1 + short_vector(b, rng, 12, 0.08);
        in.a2 = in.a1 + short_vector(b, rng, 12, 0.05);
        in.b2 = in.a2 + short_vector(b, rng, 12, 0.08);
        in.g1 = random_point(b, rng, 6);
        in.g2 = random_point(b, rng, 6);
        in.h1 = random_point(b, rng, 6);
        in.h2 = random_point(b, rng, 6);
        try {
            check_interval_hypotheses(b, in);
        } catch (const HypothesisViolation&) {
            continue;
        }
        return in;
    }
    throw ResourceCap("no valid interval instance found");
}

}  // namespace tfg::iet
