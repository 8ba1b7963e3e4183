#pragma once

#include <cmath>
#include <compare>
#include <string>

#include <gmpxx.h>

#include "tfg/errors.hpp"

namespace tfg::penrose {

/// a + b sqrt5 with rational a, b.
class QF {
public:
    QF() = default;
    QF(long a) : a_(a), b_(0) {}  // NOLINT(google-explicit-constructor)
    QF(mpq_class a, mpq_class b = 0) : a_(std::move(a)), b_(std::move(b)) {
        a_.canonicalize();
        b_.canonicalize();
    }

    const mpq_class& a() const { return a_; }
    const mpq_class& b() const { return b_; }

    QF operator+(const QF& o) const { return {a_ + o.a_, b_ + o.b_}; }
    QF operator-(const QF& o) const { return {a_ - o.a_, b_ - o.b_}; }
    QF operator-() const { return {-a_, -b_}; }
    QF operator*(const QF& o) const { return {a_ * o.a_ + 5 * b_ * o.b_, a_ * o.b_ + b_ * o.a_}; }
    QF conj() const { return {a_, -b_}; }
    /// a^2 - 5 b^2, the field norm.
    mpq_class norm() const { return a_ * a_ - 5 * b_ * b_; }
    QF inverse() const {
        mpq_class n = norm();
        if (n == 0) throw Error("division by zero in Q(sqrt5)");
        return {a_ / n, -b_ / n};
    }
    QF operator/(const QF& o) const { return *this * o.inverse(); }
    QF& operator+=(const QF& o) { return *this = *this + o; }
    QF& operator-=(const QF& o) { return *this = *this - o; }
    QF& operator*=(const QF& o) { return *this = *this * o; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }

    /// Exact sign of a + b sqrt5: compare a^2 with 5 b^2 when the signs differ.
    int sign() const {
        int sa = sgn(a_), sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        int c = cmp(a_ * a_, 5 * b_ * b_);
        return c > 0 ? sa : (c < 0 ? sb : 0);
    }

    double approx() const { return a_.get_d() + b_.get_d() * std::sqrt(5.0); }

    /// Greatest integer <= value, exact.
    mpz_class floor() const {
        mpz_class f(std::floor(approx()));
        while ((*this - QF(mpq_class(f))).sign() < 0) --f;
        while ((*this - QF(mpq_class(f + 1))).sign() >= 0) ++f;
        return f;
    }

    std::string str() const { return a_.get_str() + (sgn(b_) < 0 ? "-" : "+") + mpq_class(abs(b_)).get_str() + "r5"; }

    friend bool operator==(const QF& x, const QF& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend std::strong_ordering operator<=>(const QF& x, const QF& y) {
        int s = (x - y).sign();
        return s < 0 ? std::strong_ordering::less : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpq_class a_ = 0, b_ = 0;
};

inline QF q(long num, long den = 1) { return QF(mpq_class(num, den)); }
inline QF sqrt5() { return QF(0, 1); }

// Constants used throughout: cosines of multiples of 36 degrees, and
// s2 = sin^2(72deg) = (10 + 2 sqrt5) / 16.
inline QF cos36() { return QF(mpq_class(1, 4), mpq_class(1, 4)); }
inline QF cos72() { return QF(mpq_class(-1, 4), mpq_class(1, 4)); }
inline QF sin72_sq() { return QF(mpq_class(5, 8), mpq_class(1, 8)); }
/// sin(36deg) / sin(72deg) = 1 / (2 cos36) = (sqrt5 - 1) / 2.
inline QF sin_ratio() { return QF(mpq_class(-1, 2), mpq_class(1, 2)); }

}  // namespace tfg::penrose
