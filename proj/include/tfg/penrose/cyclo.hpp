#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tfg/errors.hpp"
#include "tfg/penrose/qf.hpp"

namespace tfg::penrose {

class NotInP : public Error {
public:
    using Error::Error;
};

/// Plane point with coordinates (x, y / sin72deg), both in Q(sqrt5). Any
/// point of Q(zeta) has this form; dot products and the sign of cross
/// products stay inside Q(sqrt5).
struct Pt {
    QF x, yp;

    Pt operator+(const Pt& o) const { return {x + o.x, yp + o.yp}; }
    Pt operator-(const Pt& o) const { return {x - o.x, yp - o.yp}; }
    Pt operator-() const { return {-x, -yp}; }
    Pt operator*(const QF& k) const { return {x * k, yp * k}; }
    friend bool operator==(const Pt&, const Pt&) = default;
    bool operator<(const Pt& o) const {
        if (x.a() != o.x.a()) return x.a() < o.x.a();
        if (x.b() != o.x.b()) return x.b() < o.x.b();
        if (yp.a() != o.yp.a()) return yp.a() < o.yp.a();
        return yp.b() < o.yp.b();
    }

    double ax() const { return x.approx(); }
    double ay() const { return yp.approx() * std::sqrt(sin72_sq().approx()); }
};

inline QF dot(const Pt& a, const Pt& b) { return a.x * b.x + sin72_sq() * a.yp * b.yp; }
/// cross(a, b) / sin72deg; same sign as the true cross product.
inline QF cross(const Pt& a, const Pt& b) { return a.x * b.yp - a.yp * b.x; }
inline QF norm2(const Pt& a) { return dot(a, a); }

/// sum c_j zeta^j, zeta = exp(2 pi i / 5), rational c_j, kept in the
/// unique representative with sum c_j = 0.
class Cyclo {
public:
    Cyclo() { c_.fill(0); }
    explicit Cyclo(std::array<mpq_class, 5> c) : c_(std::move(c)) { normalize(); }
    static Cyclo from_ints(const std::array<long, 5>& n) {
        std::array<mpq_class, 5> c;
        for (std::size_t j = 0; j < 5; ++j) c[j] = n[j];
        return Cyclo(c);
    }
    static Cyclo rational(const mpq_class& r) {
        std::array<mpq_class, 5> c;
        c.fill(0);
        c[0] = r;
        return Cyclo(c);
    }
    static Cyclo zeta(int k) {
        std::array<mpq_class, 5> c;
        c.fill(0);
        c[static_cast<std::size_t>(((k % 5) + 5) % 5)] = 1;
        return Cyclo(c);
    }

    const std::array<mpq_class, 5>& coeffs() const { return c_; }
    const mpq_class& operator[](int j) const { return c_[static_cast<std::size_t>(j)]; }

    Cyclo operator+(const Cyclo& o) const {
        auto c = c_;
        for (std::size_t j = 0; j < 5; ++j) c[j] += o.c_[j];
        return Cyclo(c);
    }
    Cyclo operator-(const Cyclo& o) const {
        auto c = c_;
        for (std::size_t j = 0; j < 5; ++j) c[j] -= o.c_[j];
        return Cyclo(c);
    }
    Cyclo operator-() const { return Cyclo() - *this; }
    Cyclo operator*(const Cyclo& o) const {
        std::array<mpq_class, 5> c;
        c.fill(0);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j) c[(i + j) % 5] += c_[i] * o.c_[j];
        return Cyclo(c);
    }
    Cyclo operator*(const mpq_class& r) const {
        auto c = c_;
        for (auto& x : c) x *= r;
        return Cyclo(c);
    }
    /// Complex conjugate: zeta^j -> zeta^-j.
    Cyclo conj() const { return galois(4); }
    /// The field automorphism zeta -> zeta^k, k = 1..4.
    Cyclo galois(int k) const {
        std::array<mpq_class, 5> c;
        c.fill(0);
        for (std::size_t j = 0; j < 5; ++j) c[(j * static_cast<std::size_t>(k)) % 5] += c_[j];
        return Cyclo(c);
    }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }
    bool in_P() const {
        for (const auto& x : c_)
            if (x.get_den() != 1) return false;
        return true;
    }
    /// Unique zero-sum integer coordinates of an element of P.
    std::array<long, 5> p_coords() const {
        if (!in_P()) throw NotInP("not an element of P: " + str());
        std::array<long, 5> n{};
        for (std::size_t j = 0; j < 5; ++j) n[j] = c_[j].get_num().get_si();
        return n;
    }

    Pt pt() const {
        const QF cs[5] = {q(1), cos72(), -cos36(), -cos36(), cos72()};
        const QF sn[5] = {q(0), q(1), sin_ratio(), -sin_ratio(), q(-1)};
        Pt p{q(0), q(0)};
        for (std::size_t j = 0; j < 5; ++j) {
            p.x += cs[j] * QF(c_[j]);
            p.yp += sn[j] * QF(c_[j]);
        }
        return p;
    }
    static Cyclo from_pt(const Pt& p) {
        const mpq_class &xa = p.x.a(), &xb = p.x.b(), &ya = p.yp.a(), &yb = p.yp.b();
        mpq_class u = 2 * yb;
        mpq_class c1 = ya + yb;
        mpq_class s23 = c1 - 4 * xb;
        mpq_class c2 = (s23 + u) / 2, c3 = (s23 - u) / 2;
        mpq_class c0 = xa + (c1 + c2 + c3) / 4;
        return Cyclo({c0, c1, c2, c3, mpq_class(0)});
    }

    QF re() const { return pt().x; }
    QF abs2() const { return norm2(pt()); }

    std::string str() const {
        std::string s = "[";
        for (std::size_t j = 0; j < 5; ++j) s += (j ? "," : "") + c_[j].get_str();
        return s + "]";
    }

    friend bool operator==(const Cyclo& a, const Cyclo& b) { return a.c_ == b.c_; }
    bool operator<(const Cyclo& o) const { return c_ < o.c_; }

private:
    void normalize() {
        mpq_class t = 0;
        for (auto& x : c_) {
            x.canonicalize();
            t += x;
        }
        t /= 5;
        for (auto& x : c_) x -= t;
    }
    std::array<mpq_class, 5> c_;
};

/// P basis (1 - zeta) zeta^m, m = 0..3; coordinates of x in P.
inline std::array<long, 4> p_basis_coords(const Cyclo& x) {
    auto n = x.p_coords();
    std::array<long, 4> c{};
    long acc = 0;
    for (std::size_t m = 0; m < 4; ++m) {
        acc += n[m];
        c[m] = acc;
    }
    return c;
}

inline Cyclo p_basis(int m) { return (Cyclo::rational(1) - Cyclo::zeta(1)) * Cyclo::zeta(m); }

/// sum n_j zeta^j for an integer 5-vector (not necessarily zero-sum).
inline Cyclo from_k(const std::array<long, 5>& k) { return Cyclo::from_ints(k); }
/// sum n_j zeta^{2j}.
inline Cyclo star_k(const std::array<long, 5>& k) { return from_k(k).galois(2); }

}  // namespace tfg::penrose
