#pragma once

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "tfg/penrose/geometry.hpp"

namespace tfg::penrose {

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// Diagonal of the Smith normal form (d_1 | d_2 | ..., nonnegative), one
/// entry per min(rows, cols).
inline std::vector<mpz_class> smith_diagonal(IntMatrix m) {
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    const std::size_t n = std::min(rows, cols);
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // Pivot: smallest nonzero |entry| in the trailing block.
            std::size_t pr = rows, pc = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (m[i][j] != 0 && (pr == rows || abs(m[i][j]) < abs(m[pr][pc]))) pr = i, pc = j;
            if (pr == rows) return [&] {
                std::vector<mpz_class> d;
                for (std::size_t i = 0; i < n; ++i) d.push_back(abs(m[i][i]));
                return d;
            }();
            std::swap(m[t], m[pr]);
            for (auto& row : m) std::swap(row[t], row[pc]);
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                mpz_class f = m[i][t] / m[t][t];
                for (std::size_t j = t; j < cols; ++j) m[i][j] -= f * m[t][j];
                clean &= (m[i][t] == 0);
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                mpz_class f = m[t][j] / m[t][t];
                for (std::size_t i = t; i < rows; ++i) m[i][j] -= f * m[i][t];
                clean &= (m[t][j] == 0);
            }
            if (!clean) continue;
            // Divisibility: fold any offending row into row t and repeat.
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (m[i][j] % m[t][t] != 0) {
                        for (std::size_t c = t; c < cols; ++c) m[t][c] += m[i][c];
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
    }
    std::vector<mpz_class> d;
    for (std::size_t i = 0; i < n; ++i) d.push_back(abs(m[i][i]));
    return d;
}

inline Cyclo w1() { return Cyclo::zeta(2) - Cyclo::zeta(3); }
inline Cyclo w2() {
    return (Cyclo::rational(1) - Cyclo::zeta(2) - Cyclo::zeta(3) + Cyclo::zeta(4)) * mpq_class(5);
}

struct QuotientStructure {
    std::vector<mpz_class> invariant_factors;  // nonzero SNF diagonal
    int free_rank = 0;
    IntMatrix relations;  // rows: P basis coordinates, columns: w1, w2

    /// e.g. "Z^2 (+) Z/5"; unit factors are dropped.
    std::string str() const {
        std::string s = "Z^" + std::to_string(free_rank);
        for (const auto& d : invariant_factors)
            if (d != 1) s += " (+) Z/" + d.get_str();
        return s;
    }
};

/// P / <w1, w2> from the relation matrix over the basis (1 - zeta) zeta^m.
inline QuotientStructure snf_quotient(const std::vector<int>& basis_order = {0, 1, 2, 3}) {
    QuotientStructure q2;
    auto c1 = p_basis_coords(w1()), c2 = p_basis_coords(w2());
    for (int m : basis_order) q2.relations.push_back({c1[static_cast<std::size_t>(m)], c2[static_cast<std::size_t>(m)]});
    for (const auto& d : smith_diagonal(q2.relations))
        if (d != 0) q2.invariant_factors.push_back(d);
    q2.free_rank = 4 - static_cast<int>(q2.invariant_factors.size());
    return q2;
}

/// Frame coordinates (a, b) with z = a w1 + b w2, exact.
inline std::pair<QF, QF> frame_coords(const Cyclo& z) {
    const Pt p = z.pt(), e1 = w1().pt(), e2 = w2().pt();
    QF det = cross(e1, e2);
    return {cross(p, e2) / det, cross(e1, p) / det};
}

namespace detail {

// floor of a frame coordinate, nudged by the tag when it is an integer.
inline mpz_class tagged_floor(const QF& c, const QF& dc) {
    mpz_class f = c.floor();
    if (!(c == QF(mpq_class(f)))) return f;
    int sd = dc.sign();
    if (sd == 0) throw MissingTag("point on an edge line of F needs a side tag");
    return sd > 0 ? f : f - 1;
}

}  // namespace detail

/// The representative of xi modulo <w1, w2> in the parallelogram F spanned
/// by w1 and w2, frame coordinates in [0,1) x [0,1) after tag resolution.
inline TaggedPoint fundamental_reduce(const TaggedPoint& xi) {
    auto [a, b] = frame_coords(xi.xi);
    auto [da, db] = frame_coords(xi.dir);
    mpz_class fa = detail::tagged_floor(a, da), fb = detail::tagged_floor(b, db);
    Cyclo shift = w1() * mpq_class(fa) + w2() * mpq_class(fb);
    return {xi.xi - shift, xi.dir};
}

}  // namespace tfg::penrose
