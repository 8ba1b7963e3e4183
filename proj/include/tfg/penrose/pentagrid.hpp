#pragma once

// Brute-force pentagrid dual in floating point, independent of the
// pentagon membership test: grid j is the set of lines
// Re(z zeta^-j) + gamma_j in Z, and every mesh of the pentagrid gives the
// vertex sum_j K_j zeta^j with K_j = ceil(Re(z zeta^-j) + gamma_j).
// gamma_j = -(2/5) Re(xi zeta^-2j) matches the membership convention
// xi + sum k_j zeta^{2j} in V_s.

#include <array>
#include <cmath>
#include <set>

namespace tfg::penrose::pentagrid {

using K = std::array<long, 5>;

inline std::set<K> vertices(double xi_x, double xi_y, double radius) {
    double c[5], s[5], gamma[5];
    for (int j = 0; j < 5; ++j) {
        c[j] = std::cos(2 * M_PI * j / 5);
        s[j] = std::sin(2 * M_PI * j / 5);
        gamma[j] = -0.4 * (xi_x * std::cos(4 * M_PI * j / 5) + xi_y * std::sin(4 * M_PI * j / 5));
    }
    std::set<K> out;
    // A vertex lies within 5 of 5/2 z, so meshes of interest have |z| <= zmax.
    const double zmax = (radius + 5) / 2.5;
    const long nmax = static_cast<long>(std::ceil(zmax + 1));
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b)
            for (long na = -nmax; na <= nmax; ++na)
                for (long nb = -nmax; nb <= nmax; ++nb) {
                    // Solve x c_a + y s_a = na - gamma_a, x c_b + y s_b = nb - gamma_b.
                    double ra = static_cast<double>(na) - gamma[a], rb = static_cast<double>(nb) - gamma[b];
                    double det = c[a] * s[b] - s[a] * c[b];
                    double x = (ra * s[b] - s[a] * rb) / det, y = (c[a] * rb - ra * c[b]) / det;
                    if (std::hypot(x, y) > zmax) continue;
                    K base{};
                    for (int j = 0; j < 5; ++j) base[static_cast<std::size_t>(j)] = static_cast<long>(std::ceil(x * c[j] + y * s[j] + gamma[j]));
                    base[static_cast<std::size_t>(a)] = na;
                    base[static_cast<std::size_t>(b)] = nb;
                    for (int da = 0; da < 2; ++da)
                        for (int db = 0; db < 2; ++db) {
                            K k = base;
                            k[static_cast<std::size_t>(a)] += da;
                            k[static_cast<std::size_t>(b)] += db;
                            double px = 0, py = 0;
                            for (int j = 0; j < 5; ++j) {
                                px += static_cast<double>(k[static_cast<std::size_t>(j)]) * c[j];
                                py += static_cast<double>(k[static_cast<std::size_t>(j)]) * s[j];
                            }
                            if (std::hypot(px, py) <= radius) out.insert(k);
                        }
                }
    return out;
}

}  // namespace tfg::penrose::pentagrid
