#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tfg/errors.hpp"

namespace tfg {

inline constexpr int kMaxDim = 4;

/// A point of Z^d, d <= kMaxDim. Unused trailing coordinates stay zero so
/// that comparison and hashing can look at the whole array.
class LatticeVector {
public:
    LatticeVector() = default;
    explicit LatticeVector(int dim) : dim_(static_cast<std::uint8_t>(dim)) {
        if (dim < 1 || dim > kMaxDim) throw DimensionMismatch("dimension out of range");
    }
    LatticeVector(std::initializer_list<int> xs) : LatticeVector(static_cast<int>(xs.size())) {
        std::copy(xs.begin(), xs.end(), c_.begin());
    }
    static LatticeVector from(std::span<const int> xs) {
        LatticeVector v(static_cast<int>(xs.size()));
        std::copy(xs.begin(), xs.end(), v.c_.begin());
        return v;
    }
    static LatticeVector axis(int dim, int i, int sign = 1) {
        LatticeVector v(dim);
        v.c_[static_cast<std::size_t>(i)] = sign;
        return v;
    }

    int dim() const { return dim_; }
    int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](int x) { return x == 0; });
    }
    int l1() const {
        int s = 0;
        for (int x : c_) s += std::abs(x);
        return s;
    }

    LatticeVector operator+(const LatticeVector& o) const {
        check(o);
        LatticeVector r(*this);
        for (int i = 0; i < kMaxDim; ++i) r.c_[i] += o.c_[i];
        return r;
    }
    LatticeVector operator-(const LatticeVector& o) const {
        check(o);
        LatticeVector r(*this);
        for (int i = 0; i < kMaxDim; ++i) r.c_[i] -= o.c_[i];
        return r;
    }
    LatticeVector operator-() const {
        LatticeVector r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }
    LatticeVector operator*(int k) const {
        LatticeVector r(*this);
        for (auto& x : r.c_) x *= k;
        return r;
    }
    LatticeVector& operator+=(const LatticeVector& o) { return *this = *this + o; }

    friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
    friend auto operator<=>(const LatticeVector& a, const LatticeVector& b) {
        if (a.dim_ != b.dim_) return a.dim_ <=> b.dim_;
        return a.c_ <=> b.c_;
    }

    std::vector<int> coords() const { return {c_.begin(), c_.begin() + dim_}; }
    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < dim_; ++i) {
            if (i) s += ",";
            s += std::to_string(c_[static_cast<std::size_t>(i)]);
        }
        return s + ")";
    }

    std::size_t hash() const {
        std::size_t h = dim_;
        for (int x : c_) h = h * 1000003u ^ static_cast<std::size_t>(static_cast<std::uint32_t>(x));
        return h;
    }

private:
    void check(const LatticeVector& o) const {
        if (o.dim_ != dim_) throw DimensionMismatch("lattice vectors of different dimension");
    }

    std::array<int, kMaxDim> c_{};
    std::uint8_t dim_ = 1;
};

/// Lexicographically ordered points of the l1 ball of radius r in Z^d.
inline std::vector<LatticeVector> ball_points(int dim, int radius) {
    if (dim < 1 || dim > kMaxDim) throw DimensionMismatch("dimension out of range");
    std::vector<LatticeVector> out;
    if (radius < 0) return out;
    LatticeVector v(dim);
    std::function<void(int, int)> rec = [&](int i, int budget) {
        if (i == dim) {
            out.push_back(v);
            return;
        }
        for (int x = -budget; x <= budget; ++x) {
            v[i] = x;
            rec(i + 1, budget - std::abs(x));
        }
        v[i] = 0;
    };
    rec(0, radius);
    return out;
}

using Symbol = std::uint8_t;

struct Cell {
    LatticeVector pos;
    Symbol sym = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell& a, const Cell& b) {
        if (auto c = a.pos <=> b.pos; c != 0) return c;
        return a.sym <=> b.sym;
    }
};

/// A finite labelled window of Z^d. Cells are kept sorted by position and
/// positions are unique, so structural equality is semantic equality.
class Patch {
public:
    Patch() = default;
    explicit Patch(int dim) : dim_(dim) {}
    Patch(int dim, std::vector<Cell> cells) : dim_(dim), cells_(std::move(cells)) {
        for (const auto& c : cells_)
            if (c.pos.dim() != dim_) throw DimensionMismatch("cell of wrong dimension");
        std::sort(cells_.begin(), cells_.end());
        for (std::size_t i = 1; i < cells_.size(); ++i)
            if (cells_[i].pos == cells_[i - 1].pos)
                throw ConflictError("patch labels a position twice: " + cells_[i].pos.str());
    }

    int dim() const { return dim_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    const std::vector<Cell>& cells() const { return cells_; }

    std::vector<LatticeVector> support() const {
        std::vector<LatticeVector> s;
        s.reserve(cells_.size());
        for (const auto& c : cells_) s.push_back(c.pos);
        return s;
    }

    std::optional<Symbol> at(const LatticeVector& p) const {
        auto it = std::lower_bound(cells_.begin(), cells_.end(), p,
                                   [](const Cell& c, const LatticeVector& q) { return c.pos < q; });
        if (it != cells_.end() && it->pos == p) return it->sym;
        return std::nullopt;
    }
    bool covers(const LatticeVector& p) const { return at(p).has_value(); }

    /// (f+g)(h) = f(h-g): the support moves by g, labels travel along.
    Patch shifted(const LatticeVector& g) const {
        if (g.dim() != dim_) throw DimensionMismatch("shift of wrong dimension");
        Patch r(dim_);
        r.cells_ = cells_;
        for (auto& c : r.cells_) c.pos += g;
        return r;
    }

    /// Adds one cell; the position must be fresh.
    Patch with(const LatticeVector& p, Symbol s) const {
        Patch r(dim_);
        r.cells_.reserve(cells_.size() + 1);
        auto it = std::lower_bound(cells_.begin(), cells_.end(), p,
                                   [](const Cell& c, const LatticeVector& q) { return c.pos < q; });
        if (it != cells_.end() && it->pos == p) throw ConflictError("cell already present");
        r.cells_.assign(cells_.begin(), it);
        r.cells_.push_back({p, s});
        r.cells_.insert(r.cells_.end(), it, cells_.end());
        return r;
    }

    Patch without(const LatticeVector& p) const {
        Patch r(dim_);
        for (const auto& c : cells_)
            if (c.pos != p) r.cells_.push_back(c);
        return r;
    }

    Patch restricted(std::span<const LatticeVector> support) const {
        std::vector<Cell> cs;
        for (const auto& p : support)
            if (auto s = at(p)) cs.push_back({p, *s});
        return Patch(dim_, std::move(cs));
    }

    /// True when every cell of `other` appears here with the same label.
    bool contains(const Patch& other) const {
        std::size_t i = 0;
        for (const auto& c : other.cells_) {
            while (i < cells_.size() && cells_[i].pos < c.pos) ++i;
            if (i == cells_.size() || cells_[i].pos != c.pos || cells_[i].sym != c.sym) return false;
        }
        return true;
    }

    LatticeVector min_corner() const {
        LatticeVector m(dim_);
        if (cells_.empty()) return m;
        m = cells_.front().pos;
        for (const auto& c : cells_)
            for (int i = 0; i < dim_; ++i) m[i] = std::min(m[i], c.pos[i]);
        return m;
    }
    LatticeVector max_corner() const {
        LatticeVector m(dim_);
        if (cells_.empty()) return m;
        m = cells_.front().pos;
        for (const auto& c : cells_)
            for (int i = 0; i < dim_; ++i) m[i] = std::max(m[i], c.pos[i]);
        return m;
    }
    /// l1 radius of the support around the origin.
    int radius() const {
        int r = 0;
        for (const auto& c : cells_) r = std::max(r, c.pos.l1());
        return r;
    }

    friend bool operator==(const Patch&, const Patch&) = default;
    friend auto operator<=>(const Patch& a, const Patch& b) {
        if (a.dim_ != b.dim_) return a.dim_ <=> b.dim_;
        return std::lexicographical_compare_three_way(a.cells_.begin(), a.cells_.end(),
                                                      b.cells_.begin(), b.cells_.end());
    }

    std::size_t hash() const {
        std::size_t h = static_cast<std::size_t>(dim_) * 0x9e3779b97f4a7c15ull;
        for (const auto& c : cells_) h = (h ^ c.pos.hash()) * 0x100000001b3ull ^ c.sym;
        return h;
    }

private:
    int dim_ = 1;
    std::vector<Cell> cells_;
};

inline Patch patch_shift(const Patch& p, const LatticeVector& g) { return p.shifted(g); }

/// Some common position carries different labels.
inline bool patches_conflict(const Patch& a, const Patch& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("patches of different dimension");
    const auto& x = a.cells();
    const auto& y = b.cells();
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i].pos < y[j].pos) ++i;
        else if (y[j].pos < x[i].pos) ++j;
        else {
            if (x[i].sym != y[j].sym) return true;
            ++i, ++j;
        }
    }
    return false;
}

inline Patch patch_union(const Patch& a, const Patch& b) {
    if (patches_conflict(a, b)) throw ConflictError("patches disagree on their overlap");
    std::vector<Cell> cs;
    cs.reserve(a.size() + b.size());
    std::set_union(a.cells().begin(), a.cells().end(), b.cells().begin(), b.cells().end(),
                   std::back_inserter(cs));
    return Patch(a.dim(), std::move(cs));
}

struct PatchHash {
    std::size_t operator()(const Patch& p) const { return p.hash(); }
};
struct LatticeVectorHash {
    std::size_t operator()(const LatticeVector& v) const { return v.hash(); }
};

inline std::vector<LatticeVector> shifted_support(std::span<const LatticeVector> s, const LatticeVector& g) {
    std::vector<LatticeVector> r;
    r.reserve(s.size());
    for (const auto& p : s) r.push_back(p + g);
    return r;
}

inline std::vector<LatticeVector> support_union(std::span<const LatticeVector> a, std::span<const LatticeVector> b) {
    std::vector<LatticeVector> r(a.begin(), a.end());
    r.insert(r.end(), b.begin(), b.end());
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

}  // namespace tfg
