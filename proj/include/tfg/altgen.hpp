#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "tfg/errors.hpp"
#include "tfg/perm.hpp"
#include "tfg/word.hpp"

namespace tfg::altgen {

// Words of length d over {a,b,c} are indexed lexicographically with the
// first letter most significant, so aa=0, ab=1, ..., cc=8 for d=2.

inline int pow3(int k) {
    int r = 1;
    while (k-- > 0) r *= 3;
    return r;
}

inline std::string word_name(int d, int idx) {
    std::string s(static_cast<std::size_t>(d), 'a');
    for (int i = d - 1; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = static_cast<char>('a' + idx % 3);
        idx /= 3;
    }
    return s;
}

inline int word_index(const std::string& w) {
    int idx = 0;
    for (char c : w) {
        if (c < 'a' || c > 'c') throw BadInput("word letters must be a, b or c");
        idx = idx * 3 + (c - 'a');
    }
    return idx;
}

/// A permutation of X_d.
using WordPermutation = Perm;

/// Parses "(ab ac ba)" into a permutation of X_d.
inline WordPermutation parse_cycle(int d, const std::string& text) {
    std::vector<int> pts;
    std::string cur;
    for (char c : text) {
        if (c >= 'a' && c <= 'c') cur += c;
        else if (c != '(' && c != ')' && c != ',' && c != ' ') throw BadInput(std::string("unexpected '") + c + "' in cycle");
        else if (!cur.empty()) {
            if (static_cast<int>(cur.size()) != d) throw BadInput("word '" + cur + "' has wrong length");
            pts.push_back(word_index(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) {
        if (static_cast<int>(cur.size()) != d) throw BadInput("word '" + cur + "' has wrong length");
        pts.push_back(word_index(cur));
    }
    return Perm::cycle(pow3(d), pts);
}

inline std::string cycle_name(int d, const WordPermutation& p) {
    std::string s;
    for (const auto& c : p.cycles()) {
        s += "(";
        for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + word_name(d, c[i]);
        s += ")";
    }
    return s.empty() ? "()" : s;
}

/// B_d: all (XaY XbY XcY), |X|+|Y| = d-1, ordered by the varying position
/// and then by the base word XaY.
class GeneratorSetB {
public:
    explicit GeneratorSetB(int d) : d_(d) {
        if (d < 1) throw BadInput("dimension must be positive");
        int n = pow3(d);
        for (int p = 0; p < d; ++p) {
            int step = pow3(d - 1 - p);
            for (int u = 0; u < n; ++u) {
                if ((u / step) % 3 != 0) continue;
                index_[{p, u}] = static_cast<int>(family_.size());
                auto perm = Perm::cycle(n, {u, u + step, u + 2 * step});
                family_.add(cycle_name(d, perm), perm);
            }
        }
    }
    int dim() const { return d_; }
    int degree() const { return pow3(d_); }
    const GeneratorFamily<WordPermutation>& family() const { return family_; }
    const std::vector<WordPermutation>& perms() const { return family_.elements; }

    /// Index of the generator varying position p with base word u (letter a at p).
    int index_of(int p, int u) const { return index_.at({p, u}); }

    /// Letter for a 3-cycle that is a generator or the inverse of one.
    std::optional<Letter> letter_for(const WordPermutation& c) const {
        for (std::size_t i = 0; i < family_.size(); ++i) {
            if (family_.elements[i] == c) return Letter{static_cast<int>(i), 1};
            if (family_.elements[i] == c.inverse()) return Letter{static_cast<int>(i), -1};
        }
        return std::nullopt;
    }

private:
    int d_;
    GeneratorFamily<WordPermutation> family_;
    std::map<std::pair<int, int>, int> index_;
};

/// The consecutive cycles (aa ab ac), (ab ac ba), ..., (ca cb cc) of X_2 and
/// their hand-checkable expressions over B_2 (products read as
/// compositions, rightmost first).
struct BaseIdentity {
    std::string cycle;
    std::vector<std::string> product;
};

inline const std::vector<BaseIdentity>& base_identities() {
    static const std::vector<BaseIdentity> ids = {
        {"(aa ab ac)", {"(aa ab ac)"}},
        {"(ab ac ba)", {"(aa ba ca)", "(aa ab ac)", "(aa ca ba)"}},
        {"(ac ba bb)", {"(ac cc bc)", "(ba bb bc)", "(ac bc cc)"}},
        {"(ba bb bc)", {"(ba bb bc)"}},
        {"(bb bc ca)", {"(aa ba ca)", "(ba bb bc)", "(aa ca ba)"}},
        {"(bc ca cb)", {"(ac cc bc)", "(ca cb cc)", "(ac bc cc)"}},
        {"(ca cb cc)", {"(ca cb cc)"}},
    };
    return ids;
}

/// The base identities as words over B_2 (index k gives the cycle (k+1 k+2 k+3)).
inline std::vector<GeneratorWord> base_words(const GeneratorSetB& b2) {
    std::vector<GeneratorWord> out;
    for (const auto& id : base_identities()) {
        GeneratorWord w;
        for (const auto& c : id.product) {
            auto l = b2.letter_for(parse_cycle(2, c));
            if (!l) throw BadInput("base identity factor " + c + " is not in B_2");
            w.push_back(*l);
        }
        out.push_back(std::move(w));
    }
    return out;
}

inline bool verify_base_identities() {
    GeneratorSetB b2(2);
    auto words = base_words(b2);
    for (std::size_t k = 0; k < words.size(); ++k) {
        auto lhs = parse_cycle(2, base_identities()[k].cycle);
        if (lhs != Perm::cycle(9, {static_cast<int>(k), static_cast<int>(k) + 1, static_cast<int>(k) + 2})) return false;
        if (evaluate_perm_word(words[k], b2.perms(), 9) != lhs) return false;
    }
    return true;
}

namespace detail {

inline GeneratorWord factorize(int d, const WordPermutation& target, std::map<int, GeneratorSetB>& sets);

inline const GeneratorSetB& set_for(int d, std::map<int, GeneratorSetB>& sets) {
    auto it = sets.find(d);
    if (it == sets.end()) it = sets.emplace(d, GeneratorSetB(d)).first;
    return it->second;
}

inline GeneratorWord factorize_base(const WordPermutation& target, std::map<int, GeneratorSetB>& sets) {
    const auto& b2 = set_for(2, sets);
    auto words = base_words(b2);
    GeneratorWord out;
    for (const auto& l : consecutive_cycle_factorize(9, target)) {
        const auto& w = words.at(static_cast<std::size_t>(l.generator));
        auto piece = l.exp > 0 ? w : inverse_word(w);
        out.insert(out.end(), piece.begin(), piece.end());
    }
    return out;
}

inline GeneratorWord factorize(int d, const WordPermutation& target, std::map<int, GeneratorSetB>& sets) {
    if (d == 2) return factorize_base(target, sets);
    auto tc = target.as_three_cycle();
    if (!tc) throw NotAThreeCycle("target is not a 3-cycle");
    const auto& bd = set_for(d, sets);
    const int nprefix = pow3(d - 1);

    // Prefixes in order of appearance, padded with the smallest unused ones.
    std::vector<int> prefixes;
    for (int u : *tc)
        if (std::find(prefixes.begin(), prefixes.end(), u / 3) == prefixes.end()) prefixes.push_back(u / 3);
    for (int p = 0; prefixes.size() < 3 && p < nprefix; ++p)
        if (std::find(prefixes.begin(), prefixes.end(), p) == prefixes.end()) prefixes.push_back(p);
    auto to_base = [&](int u) {
        int i = static_cast<int>(std::find(prefixes.begin(), prefixes.end(), u / 3) - prefixes.begin());
        return 3 * i + u % 3;
    };
    auto base_target = Perm::cycle(9, {to_base((*tc)[0]), to_base((*tc)[1]), to_base((*tc)[2])});
    auto base_word = factorize_base(base_target, sets);
    const auto& b2 = set_for(2, sets);

    // (L0 L1 L2) over B_{d-1}, lifted by appending a fixed last letter.
    auto prefix_cycle = Perm::cycle(nprefix, {prefixes[0], prefixes[1], prefixes[2]});
    GeneratorWord prefix_word = factorize(d - 1, prefix_cycle, sets);
    const auto& bprev = set_for(d - 1, sets);

    GeneratorWord out;
    for (const auto& l : base_word) {
        const auto& c = b2.perms()[static_cast<std::size_t>(l.generator)];
        auto pts = c.as_three_cycle().value();
        int lo = *std::min_element(pts.begin(), pts.end());
        GeneratorWord piece;
        bool second_varies = (pts[0] / 3 == pts[1] / 3);
        if (second_varies) {
            int f = lo / 3;
            piece.push_back({bd.index_of(d - 1, prefixes[static_cast<std::size_t>(f)] * 3), 1});
        } else {
            int y = lo % 3;
            for (const auto& pl : prefix_word) {
                const auto& g = bprev.perms()[static_cast<std::size_t>(pl.generator)];
                auto gp = g.as_three_cycle().value();
                int u = *std::min_element(gp.begin(), gp.end());
                int step = std::min({std::abs(gp[1] - gp[0]), std::abs(gp[2] - gp[0]), std::abs(gp[2] - gp[1])});
                int p = 0;
                while (pow3(d - 2 - p) != step) ++p;
                piece.push_back({bd.index_of(p, u * 3 + y), pl.exp});
            }
        }
        // The generator orientation: c equals the lifted cycle or its inverse.
        auto lifted = evaluate_perm_word(piece, bd.perms(), bd.degree());
        auto expected_pts = std::array<int, 3>{};
        for (int i = 0; i < 3; ++i) {
            int v = pts[static_cast<std::size_t>(i)];
            expected_pts[static_cast<std::size_t>(i)] = prefixes[static_cast<std::size_t>(v / 3)] * 3 + v % 3;
        }
        auto expected = Perm::cycle(bd.degree(), {expected_pts[0], expected_pts[1], expected_pts[2]});
        if (lifted != expected) piece = inverse_word(piece);
        if (l.exp < 0) piece = inverse_word(piece);
        out.insert(out.end(), piece.begin(), piece.end());
    }
    return out;
}

}  // namespace detail

/// Word over B_d for a 3-cycle of X_d; verified before returning.
inline GeneratorWord altgen_factorize(int d, const WordPermutation& target) {
    if (d < 2) throw BadInput("BadDimension: need d >= 2");
    if (target.size() != pow3(d)) throw DimensionMismatch("target does not act on X_d");
    if (!target.as_three_cycle()) throw NotAThreeCycle("target is not a 3-cycle: " + target.str());
    std::map<int, GeneratorSetB> sets;
    auto w = detail::factorize(d, target, sets);
    const auto& bd = detail::set_for(d, sets);
    if (evaluate_perm_word(w, bd.perms(), bd.degree()) != target)
        throw Error("internal: factorization does not evaluate to target");
    return w;
}

/// Order of the group generated by B_2, by breadth-first closure.
inline std::uint64_t altgen_closure(int d = 2, std::uint64_t cap = 1'000'000) {
    if (d != 2) throw BadInput("closure is only supported for d = 2");
    GeneratorSetB b2(2);
    auto encode = [](const Perm& p) {
        std::uint64_t k = 0;
        for (int x : p.images()) k = k << 4 | static_cast<std::uint64_t>(x);
        return k;
    };
    std::unordered_set<std::uint64_t> seen;
    std::vector<Perm> frontier{Perm(9)};
    seen.insert(encode(frontier[0]));
    while (!frontier.empty()) {
        std::vector<Perm> next;
        for (const auto& p : frontier)
            for (const auto& g : b2.perms()) {
                auto q = g * p;
                if (seen.insert(encode(q)).second) {
                    next.push_back(std::move(q));
                    if (seen.size() > cap) throw ResourceCap("closure exceeds cap");
                }
            }
        frontier = std::move(next);
    }
    return seen.size();
}

}  // namespace tfg::altgen
