#pragma once

#include <cstddef>
#include <vector>

#include "hill/errors.hpp"

namespace hill {

/// Monomial coefficients of the Legendre polynomial P_n:
/// P_n(u) = sum_k c[k] u^(n-2k), k = 0 .. n/2.
/// Built by the three-term recurrence (n+1)P_{n+1} = (2n+1)uP_n - nP_{n-1}.
inline std::vector<double> legendre_coefficients(std::size_t n) {
    std::vector<double> prev{1.0};  // P_0
    if (n == 0) return prev;
    std::vector<double> cur{1.0};  // P_1
    for (std::size_t m = 1; m < n; ++m) {
        // next has degree m+1: coefficients of u^(m+1-2k).
        std::vector<double> next((m + 1) / 2 + 1, 0.0);
        const double a = (2.0 * m + 1.0) / (m + 1.0);
        const double b = static_cast<double>(m) / (m + 1.0);
        for (std::size_t k = 0; k < cur.size(); ++k) next[k] += a * cur[k];
        // prev has degree m-1; u^(m-1-2k) contributes to next's u^(m+1-2(k+1)).
        for (std::size_t k = 0; k < prev.size(); ++k) next[k + 1] -= b * prev[k];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// Evaluate P_n(u) by the three-term recurrence.
inline double legendre_value(std::size_t n, double u) {
    double pm = 1.0;
    if (n == 0) return pm;
    double p = u;
    for (std::size_t m = 1; m < n; ++m) {
        const double next = ((2.0 * m + 1.0) * u * p - m * pm) / (m + 1.0);
        pm = p;
        p = next;
    }
    return p;
}

/// Evaluate r^n P_n(x/r) through its polynomial form in (x, r^2).
/// This removes the apparent 0/0 at r = 0: the result is the homogeneous
/// polynomial sum_k c[k] x^(n-2k) (r^2)^k.
inline double solid_legendre(std::size_t n, double x, double r2) {
    const std::vector<double> c = legendre_coefficients(n);
    // Horner in r2/x is unstable near x = 0; evaluate term by term instead.
    // Degrees are small (<= N+2, default 4), so this costs nothing.
    double value = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        double term = c[k];
        for (std::size_t i = 0; i < n - 2 * k; ++i) term *= x;
        for (std::size_t i = 0; i < k; ++i) term *= r2;
        value += term;
    }
    return value;
}

}  // namespace hill
