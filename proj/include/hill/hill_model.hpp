#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "hill/errors.hpp"
#include "hill/legendre.hpp"
#include "hill/states.hpp"

namespace hill {

/// Distance from the origin to either collinear equilibrium, 3^(-1/3).
inline const double rho = 1.0 / std::cbrt(3.0);

/// Energy of the rotating-frame model:
///   H = 1/2 (Px^2 + Py^2 + Pz^2) + Px py - px Py - 1/R + 1/2 (R^2 - 3 px^2).
inline double hamiltonian(const RotState& s) {
    const double R2 = s.px * s.px + s.py * s.py + s.pz * s.pz;
    const double R = std::sqrt(R2);
    if (R == 0.0) throw domain_error("hamiltonian: state at the singularity R = 0");
    const double kinetic = 0.5 * (s.Px * s.Px + s.Py * s.Py + s.Pz * s.Pz);
    const double coriolis = s.Px * s.py - s.px * s.Py;
    return kinetic + coriolis - 1.0 / R + 0.5 * (R2 - 3.0 * s.px * s.px);
}

/// Time derivative of the state under the rotating-frame equations of motion.
inline RotState vector_field(const RotState& s) {
    const double R2 = s.px * s.px + s.py * s.py + s.pz * s.pz;
    const double R = std::sqrt(R2);
    if (R == 0.0) throw domain_error("vector_field: state at the singularity R = 0");
    const double R3 = R * R2;
    RotState d;
    d.px = s.Px + s.py;
    d.py = s.Py - s.px;
    d.pz = s.Pz;
    d.Px = -s.px / R3 + 2.0 * s.px + s.Py;
    d.Py = -s.py / R3 - s.py - s.Px;
    d.Pz = -s.pz / R3 - s.pz;
    return d;
}

/// Jacobian of vector_field with respect to (px,py,pz,Px,Py,Pz),
/// used to propagate variational equations alongside the state.
inline std::array<std::array<double, 6>, 6> vector_field_jacobian(const RotState& s) {
    const double R2 = s.px * s.px + s.py * s.py + s.pz * s.pz;
    const double R = std::sqrt(R2);
    if (R == 0.0) throw domain_error("vector_field_jacobian: state at the singularity R = 0");
    const double R3 = R * R2;
    const double R5 = R3 * R2;
    std::array<std::array<double, 6>, 6> J{};
    J[0][1] = 1.0;
    J[0][3] = 1.0;
    J[1][0] = -1.0;
    J[1][4] = 1.0;
    J[2][5] = 1.0;
    const double p[3] = {s.px, s.py, s.pz};
    // Gravity gradient: d(-p_i/R^3)/dp_j = -delta_ij/R^3 + 3 p_i p_j / R^5.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            J[3 + i][j] = (i == j ? -1.0 / R3 : 0.0) + 3.0 * p[i] * p[j] / R5;
    J[3][0] += 2.0;
    J[4][1] += -1.0;
    J[5][2] += -1.0;
    J[3][4] = 1.0;
    J[4][3] = -1.0;
    return J;
}

/// The two collinear equilibria +-(rho, 0, 0, 0, rho, 0).
inline std::pair<RotState, RotState> libration_points() {
    RotState plus{rho, 0.0, 0.0, 0.0, rho, 0.0};
    RotState minus{-rho, 0.0, 0.0, 0.0, -rho, 0.0};
    return {plus, minus};
}

/// Shift the origin to the +x equilibrium: local displacements and momenta.
inline LocalState translate_t1(const RotState& s) {
    return LocalState{s.px - rho, s.py, s.pz, s.Px, s.Py - rho, s.Pz};
}

inline RotState translate_t1_inverse(const LocalState& s) {
    return RotState{rho + s.x, s.y, s.z, s.X, s.Y + rho, s.Z};
}

namespace detail {

/// n-th perturbation term divided by n!: the degree-(n+2) piece of the
/// potential's local expansion, -(1/rho^(n+3)) r^(n+2) P_(n+2)(-x/r),
/// evaluated in polynomial form so that r = 0 is regular.
inline double perturbation_term_over_factorial(int n, const LocalState& s) {
    const double r2 = s.x * s.x + s.y * s.y + s.z * s.z;
    double scale = -1.0 / rho;
    for (int i = 0; i < n + 2; ++i) scale /= rho;
    return scale * solid_legendre(static_cast<std::size_t>(n + 2), -s.x, r2);
}

}  // namespace detail

/// n-th term of the local expansion of the energy about the equilibrium
/// (n >= 1), normalized so that the series reads H0 + sum_n Hn/n!.
inline double perturbation_term(int n, const LocalState& s) {
    if (n < 1) throw domain_error("perturbation_term: order must be >= 1");
    double factorial = 1.0;
    for (int i = 2; i <= n; ++i) factorial *= i;
    return factorial * detail::perturbation_term_over_factorial(n, s);
}

/// Quadratic part of the local energy (linear dynamics about the equilibrium).
inline double quadratic_hamiltonian(const LocalState& s) {
    return 0.5 * (s.X * s.X + s.Y * s.Y) - (s.x * s.Y - s.X * s.y) +
           2.0 * (s.y * s.y - 2.0 * s.x * s.x) + 0.5 * (s.Z * s.Z + 4.0 * s.z * s.z);
}

/// Local energy truncated at order N: H0 + sum_{n=1..N} Hn/n!.
/// Offset from the full energy by the constant value at the equilibrium.
inline double expanded_hamiltonian(const LocalState& s, int N = 2) {
    if (N < 0) throw domain_error("expanded_hamiltonian: truncation order must be >= 0");
    double H = quadratic_hamiltonian(s);
    for (int n = 1; n <= N; ++n) H += detail::perturbation_term_over_factorial(n, s);
    return H;
}

}  // namespace hill
