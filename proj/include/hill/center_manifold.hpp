#pragma once

#include <utility>

#include "hill/constants.hpp"
#include "hill/states.hpp"

namespace hill {

/// Quadratic part of the center-manifold energy: two harmonic oscillators
/// with planar frequency omega and vertical frequency nu.
inline double cm_quadratic(const CMState& s, const ModelConstants& c) {
    return 0.5 * (s.Y2 * s.Y2 + c.omega * c.omega * s.y2 * s.y2) +
           0.5 * (s.Z2 * s.Z2 + c.nu * c.nu * s.z2 * s.z2);
}

/// Cubic part of the center-manifold energy (odd in Y2, even in z2, Z2).
inline double cm_cubic(const CMState& s, const ModelConstants& c) {
    const double w2 = c.omega * c.omega;
    const double bracket = -13.5 * s.y2 * s.y2 - 3.0 * (2.0 * w2 - 5.0) * s.z2 * s.z2 +
                           (19.0 - 4.0 * w2) / 9.0 * s.Y2 * s.Y2;
    return c.rho * c.rho * c.tau / 56.0 * bracket * s.Y2;
}

/// Quartic part of the center-manifold energy. Coefficients are exact
/// rationals in omega^2 scaled by rho.
inline double cm_quartic(const CMState& s, const ModelConstants& c) {
    const double w2 = c.omega * c.omega;
    const double y2 = s.y2 * s.y2, Y2 = s.Y2 * s.Y2;
    const double z2 = s.z2 * s.z2, Z2 = s.Z2 * s.Z2;
    double sum = 0.0;
    sum += -81.0 * (1322.0 * w2 + 22707.0) / 1083488.0 * y2 * y2;
    sum += 27.0 * (643.0 * w2 + 22588.0) / 270872.0 * y2 * Y2;
    sum += -27.0 * (w2 - 16.0) / 812.0 * s.y2 * s.Y2 * s.z2 * s.Z2;
    sum += -27.0 * (36962.0 * w2 - 19773.0) / 1122184.0 * y2 * z2;
    sum += 27.0 * (5.0 * w2 + 36.0) / 1624.0 * y2 * Z2;
    sum += (82144.0 * w2 - 445831.0) / 2437848.0 * Y2 * Y2;
    sum += 9.0 * (55909.0 * w2 - 137470.0) / 561092.0 * Y2 * z2;
    sum += 3.0 * (w2 - 16.0) / 812.0 * Y2 * Z2;
    sum += 27.0 * (34.0 * w2 - 225.0) / 1624.0 * z2 * z2;
    sum += 27.0 * (3.0 * w2 + 10.0) / 812.0 * z2 * Z2;
    return c.rho * sum;
}

/// Center-manifold energy through quartic order: C0 + C1 + C2/2.
inline double cm_hamiltonian(const CMState& s, const ModelConstants& c) {
    return cm_quadratic(s, c) + cm_cubic(s, c) + 0.5 * cm_quartic(s, c);
}

namespace detail {

/// Quadratic forms entering the saddle corrections; arguments are the
/// oscillator variables of whichever subindex the caller works in.
inline double t3_delta1(double y, double Y, double z, double Z, const ModelConstants& c) {
    const double w2 = c.omega * c.omega;
    return (12109.0 * w2 + 31536.0) / 1393056.0 * y * y +
           (107.0 * w2 + 2106.0) / 696528.0 * Y * Y +
           (113.0 * w2 + 918.0) / 29232.0 * z * z + (4.0 * w2 + 81.0) / 14616.0 * Z * Z;
}

inline double t3_delta2(double y, double Y, double z, double Z, const ModelConstants& c) {
    const double w2 = c.omega * c.omega;
    return 9.0 * (13.0 * w2 + 159.0) / 38696.0 * y * Y + 3.0 * (3.0 * w2 + 10.0) / 1624.0 * z * Z;
}

}  // namespace detail

/// First-order saddle-direction displacements of a center-manifold state:
/// the manifold sits at x2 = X2 = 0, so x1 = -rho^2 sigma (lambda D1 + D2)
/// and X1 = +rho^2 sigma (lambda D1 - D2), with D1, D2 evaluated in the
/// oscillator variables of the given state.
inline SaddleCorrection t3_saddle_corrections(const CMState& s, const ModelConstants& c) {
    const double d1 = detail::t3_delta1(s.y2, s.Y2, s.z2, s.Z2, c);
    const double d2 = detail::t3_delta2(s.y2, s.Y2, s.z2, s.Z2, c);
    const double f = c.rho * c.rho * c.sigma;
    return SaddleCorrection{-f * (c.lambda * d1 + d2), f * (c.lambda * d1 - d2)};
}

/// Inverse direction: recover (x2, X2) from a subindex-1 state, with D1, D2
/// evaluated in the subindex-1 oscillator variables.
inline std::pair<double, double> t3_inverse_corrections(const DecoupledState& s,
                                                        const ModelConstants& c) {
    const double d1 = detail::t3_delta1(s.y1, s.Y1, s.z1, s.Z1, c);
    const double d2 = detail::t3_delta2(s.y1, s.Y1, s.z1, s.Z1, c);
    const double f = c.rho * c.rho * c.sigma;
    return {s.x1 + f * (c.lambda * d1 + d2), s.X1 - f * (c.lambda * d1 - d2)};
}

/// Embed a center-manifold state into the decoupled variables: oscillator
/// components pass through, saddle components come from the corrections.
inline DecoupledState cm_to_decoupled(const CMState& s, const ModelConstants& c) {
    const SaddleCorrection sc = t3_saddle_corrections(s, c);
    return DecoupledState{sc.x1, s.y2, s.z2, sc.X1, s.Y2, s.Z2};
}

struct DetunedSplit {
    double principal;     ///< isotropic oscillator at frequency omega
    double perturbation;  ///< detuning term plus the cubic and quartic parts
};

/// Rewrite the center-manifold energy as an isotropic oscillator plus a
/// small perturbation: principal + perturbation == cm_hamiltonian exactly.
inline DetunedSplit detuned_split(const CMState& s, const ModelConstants& c) {
    const double w2 = c.omega * c.omega;
    const double principal = 0.5 * (s.Y2 * s.Y2 + s.Z2 * s.Z2) + 0.5 * w2 * (s.y2 * s.y2 + s.z2 * s.z2);
    const double perturbation =
        cm_cubic(s, c) - 0.5 * w2 * c.delta * s.z2 * s.z2 + 0.5 * cm_quartic(s, c);
    return DetunedSplit{principal, perturbation};
}

}  // namespace hill
