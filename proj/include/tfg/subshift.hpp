#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <map>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tfg/errors.hpp"
#include "tfg/lattice.hpp"

namespace tfg {

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty()) throw BadInput("alphabet must be nonempty");
        if (symbols_.size() > 255) throw BadInput("alphabet too large");
        auto sorted = symbols_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw BadInput("alphabet symbols must be distinct");
    }
    std::size_t size() const { return symbols_.size(); }
    const std::string& name(Symbol s) const {
        if (s >= symbols_.size()) throw UnknownSymbol("symbol index " + std::to_string(s));
        return symbols_[s];
    }
    Symbol index(const std::string& token) const {
        auto it = std::find(symbols_.begin(), symbols_.end(), token);
        if (it == symbols_.end()) throw UnknownSymbol("unknown symbol '" + token + "'");
        return static_cast<Symbol>(it - symbols_.begin());
    }
    const std::vector<std::string>& symbols() const { return symbols_; }

private:
    std::vector<std::string> symbols_;
};

/// Decides membership of finite patches in a closed shift-invariant set of
/// configurations. Answers depend only on the patch up to translation.
class SubshiftOracle {
public:
    SubshiftOracle(int dim, Alphabet alphabet) : dim_(dim), alphabet_(std::move(alphabet)) {}
    virtual ~SubshiftOracle() = default;
    SubshiftOracle(const SubshiftOracle&) = delete;
    SubshiftOracle& operator=(const SubshiftOracle&) = delete;

    int dim() const { return dim_; }
    const Alphabet& alphabet() const { return alphabet_; }
    virtual std::string id() const = 0;

    /// Whether some configuration contains the patch.
    bool is_admissible(const Patch& p) const {
        check_patch(p);
        if (p.empty()) return true;
        return admissible_impl(p);
    }

    /// The admissible patches on `support`, sorted.
    std::vector<Patch> enumerate_admissible(std::span<const LatticeVector> support) const {
        std::vector<LatticeVector> s(support.begin(), support.end());
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (const auto& v : s)
            if (v.dim() != dim_) throw DimensionMismatch("support of wrong dimension");
        if (auto cached = load_cached(s)) return *cached;
        auto out = enumerate_impl(s);
        std::sort(out.begin(), out.end());
        store_cached(s, out);
        return out;
    }

    /// Admissible one-cell extensions of `p` at a fresh position.
    std::vector<Patch> extensions(const Patch& p, const LatticeVector& pos) const {
        std::vector<Patch> out;
        for (std::size_t x = 0; x < alphabet_.size(); ++x) {
            auto q = p.with(pos, static_cast<Symbol>(x));
            if (is_admissible(q)) out.push_back(std::move(q));
        }
        return out;
    }

    /// Patches jointly contained in one configuration.
    bool compatible(const Patch& a, const Patch& b) const {
        if (patches_conflict(a, b)) return false;
        return is_admissible(patch_union(a, b));
    }

    /// A deterministic admissible window chosen by `seed`.
    Patch sample_window(std::uint64_t seed, std::span<const LatticeVector> support) const {
        return sample_impl(seed, support);
    }

    void set_enumeration_cap(std::size_t cap) { enum_cap_ = cap; }
    std::size_t enumeration_cap() const { return enum_cap_; }
    void set_cache_dir(std::filesystem::path dir) { cache_dir_ = std::move(dir); }

protected:
    virtual bool admissible_impl(const Patch& p) const = 0;
    virtual Patch sample_impl(std::uint64_t seed, std::span<const LatticeVector> support) const = 0;

    /// Depth-first extension, pruned by admissibility of partial patches
    /// (restrictions of admissible patches are admissible).
    virtual std::vector<Patch> enumerate_impl(const std::vector<LatticeVector>& support) const {
        std::vector<Patch> out;
        std::vector<Patch> stack{Patch(dim_)};
        std::vector<std::size_t> depth{0};
        while (!stack.empty()) {
            Patch p = std::move(stack.back());
            std::size_t k = depth.back();
            stack.pop_back();
            depth.pop_back();
            if (k == support.size()) {
                out.push_back(std::move(p));
                if (out.size() > enum_cap_) throw ResourceCap("admissible patch enumeration exceeds cap");
                continue;
            }
            auto ext = extensions(p, support[k]);
            for (auto it = ext.rbegin(); it != ext.rend(); ++it) {
                stack.push_back(std::move(*it));
                depth.push_back(k + 1);
            }
        }
        return out;
    }

    void check_patch(const Patch& p) const {
        if (p.dim() != dim_) throw DimensionMismatch("patch dimension differs from oracle");
        for (const auto& c : p.cells())
            if (c.sym >= alphabet_.size()) throw UnknownSymbol("symbol index out of alphabet");
    }

private:
    std::string cache_key(const std::vector<LatticeVector>& s) const {
        std::string key = id() + "|";
        for (const auto& v : s) key += v.str();
        return key;
    }
    std::filesystem::path cache_file(const std::string& key) const {
        auto h = std::hash<std::string>{}(key);
        std::string name = id();
        std::replace_if(name.begin(), name.end(), [](char c) { return !std::isalnum(static_cast<unsigned char>(c)); }, '_');
        return cache_dir_ / (name + "_" + std::to_string(h) + ".json");
    }
    std::optional<std::vector<Patch>> load_cached(const std::vector<LatticeVector>& s) const {
        if (cache_dir_.empty()) return std::nullopt;
        auto key = cache_key(s);
        std::ifstream in(cache_file(key));
        if (!in) return std::nullopt;
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception&) {
            return std::nullopt;
        }
        if (j.value("key", "") != key) return std::nullopt;
        std::vector<Patch> out;
        for (const auto& labels : j["patches"]) {
            std::vector<Cell> cells;
            for (std::size_t i = 0; i < s.size(); ++i) cells.push_back({s[i], labels[i].get<Symbol>()});
            out.emplace_back(dim_, std::move(cells));
        }
        return out;
    }
    void store_cached(const std::vector<LatticeVector>& s, const std::vector<Patch>& ps) const {
        if (cache_dir_.empty()) return;
        std::error_code ec;
        std::filesystem::create_directories(cache_dir_, ec);
        nlohmann::json j;
        j["key"] = cache_key(s);
        j["backend"] = id();
        auto& arr = j["patches"] = nlohmann::json::array();
        for (const auto& p : ps) {
            auto row = nlohmann::json::array();
            for (const auto& c : p.cells()) row.push_back(c.sym);
            arr.push_back(std::move(row));
        }
        std::lock_guard lock(cache_mutex_);
        auto path = cache_file(j["key"]);
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp);
            out << j.dump();
        }
        std::filesystem::rename(tmp, path, ec);
    }

    int dim_;
    Alphabet alphabet_;
    std::size_t enum_cap_ = 2'000'000;
    std::filesystem::path cache_dir_;
    mutable std::mutex cache_mutex_;
};

using OraclePtr = std::shared_ptr<const SubshiftOracle>;

/// X^{Z^d}: every patch is admissible.
class FullShift final : public SubshiftOracle {
public:
    FullShift(int dim, Alphabet alphabet) : SubshiftOracle(dim, std::move(alphabet)) {}

    std::string id() const override {
        std::string s = "full:" + std::to_string(dim()) + ":";
        for (std::size_t i = 0; i < alphabet().size(); ++i) s += (i ? "," : "") + alphabet().name(static_cast<Symbol>(i));
        return s;
    }

protected:
    bool admissible_impl(const Patch&) const override { return true; }

    std::vector<Patch> enumerate_impl(const std::vector<LatticeVector>& support) const override {
        double count = 1;
        for (std::size_t i = 0; i < support.size(); ++i) count *= static_cast<double>(alphabet().size());
        if (count > static_cast<double>(enumeration_cap()))
            throw ResourceCap("full-shift enumeration of " + std::to_string(support.size()) + " cells exceeds cap");
        return SubshiftOracle::enumerate_impl(support);
    }

    Patch sample_impl(std::uint64_t seed, std::span<const LatticeVector> support) const override {
        std::mt19937_64 rng(seed);
        std::vector<LatticeVector> s(support.begin(), support.end());
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        std::vector<Cell> cells;
        for (const auto& p : s) cells.push_back({p, static_cast<Symbol>(rng() % alphabet().size())});
        return Patch(dim(), std::move(cells));
    }
};

/// Chair substitution in its arrowed-square form on Z^2. Symbols are the
/// four diagonal arrow directions; a square with arrow d is replaced by a
/// 2x2 block whose d-quadrant and opposite quadrant carry d while the two
/// remaining quadrants point away from the centre.
class ChairShift final : public SubshiftOracle {
public:
    enum : Symbol { NE = 0, NW = 1, SW = 2, SE = 3 };

    /// `depth_margin` is added to ceil(log2(bounding-box diameter)) to pick
    /// the substitution depth used for occurrence scans. A window of width
    /// w <= 2^n lies in a 2x2 block of level-n supertiles, i.e. in theta^n of
    /// a legal 2x2 block, and every legal 2x2 block already occurs in some
    /// theta^3(s). Margin 3 therefore finds every legal patch.
    static constexpr int kCompleteMargin = 3;

    explicit ChairShift(int depth_margin = kCompleteMargin)
        : SubshiftOracle(2, Alphabet({"NE", "NW", "SW", "SE"})), margin_(depth_margin) {}

    std::string id() const override { return margin_ == kCompleteMargin ? "chair" : "chair+m" + std::to_string(margin_); }
    int depth_margin() const { return margin_; }

    /// Quadrant (qx, qy) of the 2x2 block, qx/qy in {0,1}, x to the right, y up.
    static Symbol child(Symbol parent, int qx, int qy) {
        Symbol quad = quadrant_symbol(qx, qy);
        if (quad == parent || quad == opposite(parent)) return parent;
        return quad;
    }
    static Symbol quadrant_symbol(int qx, int qy) {
        if (qx == 1 && qy == 1) return NE;
        if (qx == 0 && qy == 1) return NW;
        if (qx == 0 && qy == 0) return SW;
        return SE;
    }
    static Symbol opposite(Symbol s) { return static_cast<Symbol>((s + 2) % 4); }

    /// theta^n(s) as a 2^n x 2^n row-major grid indexed [y * side + x].
    struct Image {
        int side = 1;
        std::vector<Symbol> cells;
        Symbol at(int x, int y) const { return cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(side) + static_cast<std::size_t>(x)]; }
    };

    static Image substitute(Symbol s, int depth) {
        Image img{1, {s}};
        for (int n = 0; n < depth; ++n) {
            Image next{img.side * 2, std::vector<Symbol>(static_cast<std::size_t>(img.side) * static_cast<std::size_t>(img.side) * 4)};
            for (int y = 0; y < img.side; ++y)
                for (int x = 0; x < img.side; ++x)
                    for (int qy = 0; qy < 2; ++qy)
                        for (int qx = 0; qx < 2; ++qx)
                            next.cells[static_cast<std::size_t>(2 * y + qy) * static_cast<std::size_t>(next.side) + static_cast<std::size_t>(2 * x + qx)] =
                                child(img.at(x, y), qx, qy);
            img = std::move(next);
        }
        return img;
    }

    /// Substitution depth used for a patch whose bounding box has the given diameter.
    int depth_for(int diameter) const {
        int n = 0;
        while ((1 << n) < diameter) ++n;
        return n + margin_;
    }

    const std::vector<Image>& images(int depth) const {
        std::lock_guard lock(mutex_);
        auto it = images_.find(depth);
        if (it == images_.end()) {
            std::vector<Image> v;
            for (Symbol s = 0; s < 4; ++s) v.push_back(substitute(s, depth));
            it = images_.emplace(depth, std::move(v)).first;
        }
        return it->second;
    }

protected:
    bool admissible_impl(const Patch& p) const override { return legal(p.shifted(-p.min_corner())); }

    std::vector<Patch> enumerate_impl(const std::vector<LatticeVector>& support) const override {
        if (support.empty()) return {Patch(2)};
        Patch shape(2);
        std::vector<Cell> cells;
        for (const auto& v : support) cells.push_back({v, 0});
        shape = Patch(2, std::move(cells));
        auto lo = shape.min_corner(), hi = shape.max_corner();
        int w = hi[0] - lo[0] + 1, h = hi[1] - lo[1] + 1;
        const auto& imgs = images(depth_for(std::max(w, h)));
        std::unordered_map<Patch, bool, PatchHash> seen;
        std::vector<Patch> out;
        for (const auto& img : imgs) {
            for (int oy = 0; oy + h <= img.side; ++oy)
                for (int ox = 0; ox + w <= img.side; ++ox) {
                    std::vector<Cell> cs;
                    cs.reserve(support.size());
                    for (const auto& v : support)
                        cs.push_back({v, img.at(ox + v[0] - lo[0], oy + v[1] - lo[1])});
                    Patch q(2, std::move(cs));
                    if (seen.emplace(q, true).second) {
                        out.push_back(std::move(q));
                        if (out.size() > enumeration_cap()) throw ResourceCap("chair enumeration exceeds cap");
                    }
                }
        }
        return out;
    }

    Patch sample_impl(std::uint64_t seed, std::span<const LatticeVector> support) const override {
        std::mt19937_64 rng(seed);
        std::vector<LatticeVector> s(support.begin(), support.end());
        if (s.empty()) return Patch(2);
        std::vector<Cell> cells;
        for (const auto& v : s) cells.push_back({v, 0});
        Patch shape(2, std::move(cells));
        auto lo = shape.min_corner(), hi = shape.max_corner();
        int w = hi[0] - lo[0] + 1, h = hi[1] - lo[1] + 1;
        const auto& imgs = images(depth_for(std::max(w, h)) + 1);
        const auto& img = imgs[rng() % 4];
        int ox = static_cast<int>(rng() % static_cast<std::uint64_t>(img.side - w + 1));
        int oy = static_cast<int>(rng() % static_cast<std::uint64_t>(img.side - h + 1));
        std::vector<Cell> out;
        for (const auto& c : shape.cells())
            out.push_back({c.pos, img.at(ox + c.pos[0] - lo[0], oy + c.pos[1] - lo[1])});
        return Patch(2, std::move(out));
    }

private:
    /// Parent symbols compatible with child `c` sitting in quadrant (qx, qy),
    /// as a bit mask.
    static unsigned parent_mask(Symbol c, int qx, int qy) {
        Symbol q = quadrant_symbol(qx, qy);
        if (c == q) return 0xFu & ~(1u << opposite(q));
        if (c == opposite(q)) return 1u << c;
        return 0;
    }

    /// Legal 2x2 blocks (row-major from the lower left), from theta^3 images.
    const std::vector<std::array<Symbol, 4>>& blocks() const {
        std::call_once(blocks_once_, [this] {
            std::vector<std::array<Symbol, 4>> v;
            for (const auto& img : images(kCompleteMargin))
                for (int y = 0; y + 1 < img.side; ++y)
                    for (int x = 0; x + 1 < img.side; ++x)
                        v.push_back({img.at(x, y), img.at(x + 1, y), img.at(x, y + 1), img.at(x + 1, y + 1)});
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            blocks_ = std::move(v);
        });
        return blocks_;
    }

    /// Legality of a patch with min corner at the origin. A chair tiling is
    /// the image of another chair tiling under one substitution step, up to
    /// an offset in {0,1}^2, so a patch is legal iff for some offset the
    /// parent cells admit a legal labelling. Patches inside a 2x2 box are
    /// matched against the legal blocks.
    bool legal(const Patch& key) const {
        if (key.empty()) return true;
        {
            std::lock_guard lock(mutex_);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        auto hi = key.max_corner();
        bool found = false;
        if (hi[0] <= 1 && hi[1] <= 1) {
            for (const auto& b : blocks()) {
                bool ok = true;
                for (const auto& c : key.cells())
                    ok = ok && b[static_cast<std::size_t>(c.pos[1] * 2 + c.pos[0])] == c.sym;
                if (ok) {
                    found = true;
                    break;
                }
            }
        } else {
            for (int off = 0; off < 4 && !found; ++off) found = legal_with_offset(key, off & 1, off >> 1);
        }
        std::lock_guard lock(mutex_);
        memo_.emplace(key, found);
        return found;
    }

    bool legal_with_offset(const Patch& key, int ox, int oy) const {
        std::map<LatticeVector, unsigned> masks;
        for (const auto& c : key.cells()) {
            int X = c.pos[0] + ox, Y = c.pos[1] + oy;
            LatticeVector parent{X >> 1, Y >> 1};
            auto [it, fresh] = masks.emplace(parent, 0xFu);
            it->second &= parent_mask(c.sym, X & 1, Y & 1);
            if (!it->second) return false;
        }
        // Forced parent cells first, then a depth-first labelling of the
        // ambiguous ones pruned by legality of the partial parent patch.
        std::vector<Cell> forced;
        std::vector<std::pair<LatticeVector, unsigned>> open;
        for (const auto& [pos, m] : masks) {
            if (std::has_single_bit(m))
                forced.push_back({pos, static_cast<Symbol>(std::countr_zero(m))});
            else
                open.emplace_back(pos, m);
        }
        Patch base(2, std::move(forced));
        auto ok = [this](const Patch& q) { return legal(q.shifted(-q.min_corner())); };
        if (!ok(base)) return false;
        std::function<bool(std::size_t, const Patch&)> dfs = [&](std::size_t i, const Patch& partial) {
            if (i == open.size()) return true;
            for (Symbol s = 0; s < 4; ++s) {
                if (!(open[i].second >> s & 1u)) continue;
                Patch next = partial.with(open[i].first, s);
                if (ok(next) && dfs(i + 1, next)) return true;
            }
            return false;
        };
        return dfs(0, base);
    }

    int margin_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<int, std::vector<Image>> images_;
    mutable std::unordered_map<Patch, bool, PatchHash> memo_;
    mutable std::once_flag blocks_once_;
    mutable std::vector<std::array<Symbol, 4>> blocks_;
};

/// Parses "chair" or "full:<d>:<alphabet>" where the alphabet is either a
/// comma separated token list or a run of single characters.
inline std::shared_ptr<SubshiftOracle> make_mutable_oracle(const std::string& spec) {
    if (spec == "chair") return std::make_shared<ChairShift>();
    if (spec.rfind("full:", 0) == 0) {
        auto rest = spec.substr(5);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw BadInput("expected full:<d>:<alphabet>");
        int d = 0;
        try {
            d = std::stoi(rest.substr(0, colon));
        } catch (const std::exception&) {
            throw BadInput("bad dimension in shift spec '" + spec + "'");
        }
        auto letters = rest.substr(colon + 1);
        std::vector<std::string> syms;
        if (letters.find(',') != std::string::npos) {
            std::size_t pos = 0;
            while (pos <= letters.size()) {
                auto next = letters.find(',', pos);
                if (next == std::string::npos) next = letters.size();
                syms.push_back(letters.substr(pos, next - pos));
                pos = next + 1;
            }
        } else {
            for (char c : letters) syms.emplace_back(1, c);
        }
        if (d < 1 || d > kMaxDim) throw BadInput("dimension must be in 1.." + std::to_string(kMaxDim));
        if (syms.empty()) throw BadInput("empty alphabet");
        return std::make_shared<FullShift>(d, Alphabet(std::move(syms)));
    }
    throw BadInput("unknown shift spec '" + spec + "'");
}

inline OraclePtr make_oracle(const std::string& spec) { return make_mutable_oracle(spec); }

/// Backend with an on-disk enumeration cache and an enumeration cap.
inline OraclePtr make_oracle(const std::string& spec, const std::filesystem::path& cache_dir, std::size_t enum_cap) {
    auto o = make_mutable_oracle(spec);
    o->set_cache_dir(cache_dir);
    o->set_enumeration_cap(enum_cap);
    return o;
}

}  // namespace tfg
