#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tfg/errors.hpp"

namespace tfg {

struct Letter {
    int generator = 0;
    int exp = 1;  // +1 or -1
    friend bool operator==(const Letter&, const Letter&) = default;
};

/// A flat word l1 l2 ... ln; as a group element the rightmost letter acts first.
using GeneratorWord = std::vector<Letter>;

inline GeneratorWord inverse_word(const GeneratorWord& w) {
    GeneratorWord r(w.rbegin(), w.rend());
    for (auto& l : r) l.exp = -l.exp;
    return r;
}

/// Word certificate stored as a shared expression DAG. Nested commutator
/// certificates grow geometrically when flattened, so length and evaluation
/// work on the DAG; flatten() expands on request.
class Word {
    struct Node {
        enum class Kind { Identity, Letter, Product, Inverse } kind = Kind::Identity;
        Letter letter;
        std::vector<Word> factors;
        std::size_t length = 0;
    };

public:
    Word() : node_(std::make_shared<Node>()) {}

    static Word letter(int generator, int exp = 1) {
        if (exp != 1 && exp != -1) throw BadInput("letter exponent must be +-1");
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Letter;
        n->letter = {generator, exp};
        n->length = 1;
        return Word(std::move(n));
    }

    static Word product(std::vector<Word> factors) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Product;
        std::size_t len = 0;
        for (const auto& f : factors) len = saturating_add(len, f.length());
        n->factors = std::move(factors);
        n->length = len;
        return Word(std::move(n));
    }

    static Word from_flat(const GeneratorWord& w) {
        std::vector<Word> fs;
        for (const auto& l : w) fs.push_back(letter(l.generator, l.exp));
        return product(std::move(fs));
    }

    Word inverse() const {
        if (node_->kind == Node::Kind::Identity) return *this;
        if (node_->kind == Node::Kind::Letter) return letter(node_->letter.generator, -node_->letter.exp);
        if (node_->kind == Node::Kind::Inverse) return node_->factors.front();
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Inverse;
        n->factors = {*this};
        n->length = node_->length;
        return Word(std::move(n));
    }

    std::size_t length() const { return node_->length; }
    bool is_single_letter() const { return node_->kind == Node::Kind::Letter; }

    GeneratorWord flatten(std::size_t cap = 10'000'000) const {
        if (length() > cap) throw ResourceCap("word of length " + std::to_string(length()) + " exceeds flatten cap");
        GeneratorWord out;
        out.reserve(length());
        append(out, false);
        return out;
    }

    /// Evaluates the product with each DAG node computed once.
    template <class G>
    G evaluate(const std::vector<G>& generators, const G& identity, const std::function<G(const G&, const G&)>& compose,
               const std::function<G(const G&)>& invert) const {
        std::unordered_map<const Node*, G> memo;
        std::function<G(const Word&)> eval = [&](const Word& w) -> G {
            const Node* n = w.node_.get();
            switch (n->kind) {
                case Node::Kind::Identity:
                    return identity;
                case Node::Kind::Letter: {
                    const auto& g = generators.at(static_cast<std::size_t>(n->letter.generator));
                    return n->letter.exp > 0 ? g : invert(g);
                }
                default:
                    break;
            }
            if (auto it = memo.find(n); it != memo.end()) return it->second;
            G r = identity;
            if (n->kind == Node::Kind::Inverse) {
                r = invert(eval(n->factors.front()));
            } else {
                for (auto it = n->factors.rbegin(); it != n->factors.rend(); ++it) r = compose(eval(*it), r);
            }
            memo.emplace(n, r);
            return r;
        };
        return eval(*this);
    }

    /// Generators used anywhere in the word.
    std::vector<int> generators_used() const {
        std::vector<int> out;
        std::unordered_map<const Node*, bool> seen;
        std::function<void(const Word&)> walk = [&](const Word& w) {
            const Node* n = w.node_.get();
            if (n->kind == Node::Kind::Letter) {
                out.push_back(n->letter.generator);
                return;
            }
            if (!seen.emplace(n, true).second) return;
            for (const auto& f : n->factors) walk(f);
        };
        walk(*this);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

private:
    explicit Word(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static std::size_t saturating_add(std::size_t a, std::size_t b) {
        return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max() : a + b;
    }

    void append(GeneratorWord& out, bool inverted) const {
        const Node* n = node_.get();
        switch (n->kind) {
            case Node::Kind::Identity:
                return;
            case Node::Kind::Letter:
                out.push_back({n->letter.generator, inverted ? -n->letter.exp : n->letter.exp});
                return;
            case Node::Kind::Inverse:
                n->factors.front().append(out, !inverted);
                return;
            case Node::Kind::Product:
                if (inverted)
                    for (auto it = n->factors.rbegin(); it != n->factors.rend(); ++it) it->append(out, true);
                else
                    for (const auto& f : n->factors) f.append(out, false);
                return;
        }
    }

    std::shared_ptr<const Node> node_;
};

/// [x,y] = x^-1 y^-1 x y.
inline Word commutator_word(const Word& x, const Word& y) {
    return Word::product({x.inverse(), y.inverse(), x, y});
}

/// Flat evaluation, left to right, used to cross-check DAG evaluation.
template <class G>
G evaluate_flat(const GeneratorWord& w, const std::vector<G>& generators, const G& identity,
                const std::function<G(const G&, const G&)>& compose, const std::function<G(const G&)>& invert) {
    G r = identity;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        const auto& g = generators.at(static_cast<std::size_t>(it->generator));
        r = compose(it->exp > 0 ? g : invert(g), r);
    }
    return r;
}

/// Named, ordered generating list with unique labels.
template <class G>
struct GeneratorFamily {
    std::string name;
    std::vector<std::string> labels;
    std::vector<G> elements;

    std::size_t size() const { return elements.size(); }
    int add(std::string label, G element) {
        if (index_.count(label)) throw BadInput("duplicate generator label " + label);
        index_[label] = static_cast<int>(labels.size());
        labels.push_back(std::move(label));
        elements.push_back(std::move(element));
        return static_cast<int>(labels.size()) - 1;
    }
    int find(const std::string& label) const {
        auto it = index_.find(label);
        return it == index_.end() ? -1 : it->second;
    }

private:
    std::unordered_map<std::string, int> index_;
};

inline nlohmann::json word_to_json(const GeneratorWord& w, const std::vector<std::string>& labels) {
    auto arr = nlohmann::json::array();
    for (const auto& l : w) arr.push_back({{"label", labels.at(static_cast<std::size_t>(l.generator))}, {"exp", l.exp}});
    return arr;
}

}  // namespace tfg
