#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "tfg/errors.hpp"
#include "tfg/word.hpp"

namespace tfg {

/// Permutation of {0..n-1}; (a*b)(x) = a(b(x)), matching the left action.
class Perm {
public:
    Perm() = default;
    explicit Perm(int n) : img_(static_cast<std::size_t>(n)) { std::iota(img_.begin(), img_.end(), 0); }
    explicit Perm(std::vector<int> images) : img_(std::move(images)) {
        std::vector<char> seen(img_.size(), 0);
        for (int x : img_) {
            if (x < 0 || x >= size() || seen[static_cast<std::size_t>(x)]) throw BadInput("not a permutation");
            seen[static_cast<std::size_t>(x)] = 1;
        }
    }

    /// The cycle (c0 c1 ... ck): c0 -> c1 -> ... -> ck -> c0.
    static Perm cycle(int n, const std::vector<int>& c) {
        Perm p(n);
        for (std::size_t i = 0; i < c.size(); ++i) {
            int from = c[i], to = c[(i + 1) % c.size()];
            if (from < 0 || from >= n) throw BadInput("cycle point out of range");
            p.img_[static_cast<std::size_t>(from)] = to;
        }
        Perm checked(p.img_);
        return checked;
    }

    int size() const { return static_cast<int>(img_.size()); }
    int operator()(int x) const { return img_[static_cast<std::size_t>(x)]; }
    const std::vector<int>& images() const { return img_; }

    Perm operator*(const Perm& b) const {
        if (b.size() != size()) throw DimensionMismatch("permutations of different degree");
        Perm r(size());
        for (int x = 0; x < size(); ++x) r.img_[static_cast<std::size_t>(x)] = (*this)(b(x));
        return r;
    }
    Perm inverse() const {
        Perm r(size());
        for (int x = 0; x < size(); ++x) r.img_[static_cast<std::size_t>((*this)(x))] = x;
        return r;
    }
    bool is_identity() const {
        for (int x = 0; x < size(); ++x)
            if ((*this)(x) != x) return false;
        return true;
    }
    bool is_even() const {
        std::vector<char> seen(img_.size(), 0);
        int transpositions = 0;
        for (int x = 0; x < size(); ++x) {
            if (seen[static_cast<std::size_t>(x)]) continue;
            int len = 0;
            for (int y = x; !seen[static_cast<std::size_t>(y)]; y = (*this)(y)) {
                seen[static_cast<std::size_t>(y)] = 1;
                ++len;
            }
            transpositions += len - 1;
        }
        return transpositions % 2 == 0;
    }

    /// Nontrivial cycles, each starting at its smallest point.
    std::vector<std::vector<int>> cycles() const {
        std::vector<std::vector<int>> out;
        std::vector<char> seen(img_.size(), 0);
        for (int x = 0; x < size(); ++x) {
            if (seen[static_cast<std::size_t>(x)] || (*this)(x) == x) continue;
            std::vector<int> c;
            for (int y = x; !seen[static_cast<std::size_t>(y)]; y = (*this)(y)) {
                seen[static_cast<std::size_t>(y)] = 1;
                c.push_back(y);
            }
            out.push_back(std::move(c));
        }
        return out;
    }

    /// (a b c) when this is a single 3-cycle.
    std::optional<std::array<int, 3>> as_three_cycle() const {
        auto cs = cycles();
        if (cs.size() != 1 || cs[0].size() != 3) return std::nullopt;
        return std::array<int, 3>{cs[0][0], cs[0][1], cs[0][2]};
    }

    std::string str(int base = 1) const {
        auto cs = cycles();
        if (cs.empty()) return "()";
        std::string s;
        for (const auto& c : cs) {
            s += "(";
            for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i] + base);
            s += ")";
        }
        return s;
    }

    friend bool operator==(const Perm&, const Perm&) = default;
    friend auto operator<=>(const Perm&, const Perm&) = default;

private:
    std::vector<int> img_;
};

inline Perm perm_commutator(const Perm& g, const Perm& h) { return g.inverse() * h.inverse() * g * h; }

/// Word over c_k = (k, k+1, k+2), k = 0..n-3 (generator index k), for a
/// 3-cycle on n points. A breadth-first search over ordered triples finds
/// a conjugator tau with tau(x y z) tau^-1 = c_0^{+-1}; the word is then
/// tau^-1 c_0^{+-1} tau.
inline GeneratorWord consecutive_cycle_factorize(int n, const Perm& target) {
    if (n < 3) throw BadInput("need at least three points");
    if (target.size() != n) throw DimensionMismatch("target degree differs from n");
    auto tc = target.as_three_cycle();
    if (!tc) throw NotAThreeCycle("target is not a 3-cycle: " + target.str());
    auto canon = [](std::array<int, 3> t) {
        auto m = std::min_element(t.begin(), t.end()) - t.begin();
        std::rotate(t.begin(), t.begin() + m, t.end());
        return t;
    };
    auto start = canon(*tc);
    auto apply = [&](const std::array<int, 3>& t, int k, int e) {
        std::array<int, 3> r{};
        for (int i = 0; i < 3; ++i) {
            int x = t[static_cast<std::size_t>(i)];
            if (x >= k && x <= k + 2) x = k + ((x - k + (e > 0 ? 1 : 2)) % 3);
            r[static_cast<std::size_t>(i)] = x;
        }
        return canon(r);
    };
    std::map<std::array<int, 3>, std::pair<std::array<int, 3>, Letter>> parent;
    std::queue<std::array<int, 3>> q;
    q.push(start);
    parent[start] = {start, {-1, 0}};
    std::optional<std::array<int, 3>> goal;
    const std::array<int, 3> fwd{0, 1, 2}, bwd{0, 2, 1};
    while (!q.empty()) {
        auto t = q.front();
        q.pop();
        if (t == fwd || t == bwd) {
            goal = t;
            break;
        }
        for (int k = 0; k + 2 < n; ++k)
            for (int e : {1, -1}) {
                auto u = apply(t, k, e);
                if (!parent.count(u)) {
                    parent[u] = {t, {k, e}};
                    q.push(u);
                }
            }
    }
    if (!goal) throw NotAThreeCycle("no conjugator found");
    // tau = t_m ... t_1 where t_1 was applied first.
    GeneratorWord tau;
    for (auto t = *goal; t != start; t = parent[t].first) tau.push_back(parent[t].second);
    GeneratorWord w = inverse_word(tau);
    w.push_back({0, *goal == fwd ? 1 : -1});
    w.insert(w.end(), tau.begin(), tau.end());
    return w;
}

inline Perm evaluate_perm_word(const GeneratorWord& w, const std::vector<Perm>& gens, int n) {
    Perm r(n);
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        const auto& g = gens.at(static_cast<std::size_t>(it->generator));
        r = (it->exp > 0 ? g : g.inverse()) * r;
    }
    return r;
}

inline std::vector<Perm> consecutive_cycles(int n) {
    std::vector<Perm> gens;
    for (int k = 0; k + 2 < n; ++k) gens.push_back(Perm::cycle(n, {k, k + 1, k + 2}));
    return gens;
}

}  // namespace tfg
