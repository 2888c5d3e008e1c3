#pragma once

#include <array>
#include <cmath>

namespace hill {

/// Rotating-frame state: position (px,py,pz) and conjugate momenta (Px,Py,Pz),
/// which equal the inertial velocity components.  All quantities in Hill units.
struct RotState {
    double px = 0, py = 0, pz = 0;
    double Px = 0, Py = 0, Pz = 0;

    std::array<double, 6> to_array() const { return {px, py, pz, Px, Py, Pz}; }
    static RotState from_array(const std::array<double, 6>& a) {
        return {a[0], a[1], a[2], a[3], a[4], a[5]};
    }
    double radius() const { return std::sqrt(px * px + py * py + pz * pz); }
};

/// State in coordinates centered on a collinear libration point.
struct LocalState {
    double x = 0, y = 0, z = 0;
    double X = 0, Y = 0, Z = 0;

    double r() const { return std::sqrt(x * x + y * y + z * z); }
};

/// State after the linear decoupling map: (x1,X1) span the saddle plane,
/// (y1,Y1) the planar oscillation, (z1,Z1) the vertical oscillation.
struct DecoupledState {
    double x1 = 0, y1 = 0, z1 = 0;
    double X1 = 0, Y1 = 0, Z1 = 0;
};

/// Center-manifold state (the saddle pair x2 = X2 = 0 is implicit).
struct CMState {
    double y2 = 0, z2 = 0;
    double Y2 = 0, Z2 = 0;

    double norm() const { return std::sqrt(y2 * y2 + z2 * z2 + Y2 * Y2 + Z2 * Z2); }
};

/// Saddle-plane corrections produced by the center-manifold reduction.
struct SaddleCorrection {
    double x1 = 0, X1 = 0;
};

/// Action-angle chart of the planar/vertical oscillator pair:
/// ell is the elliptic anomaly, g the ellipse orientation, L >= 0 the total
/// action, G the signed angular-momentum-like action with |G| <= L.
struct LissajousState {
    double ell = 0, g = 0;
    double L = 0, G = 0;
};

/// Same chart after averaging over the elliptic anomaly (mean elements).
using MeanLissajousState = LissajousState;

/// Point on the reduced sphere of radius Lp/2.
struct HopfPoint {
    double I1 = 0, I2 = 0, I3 = 0;
    double Lp = 0;

    double radius() const { return std::sqrt(I1 * I1 + I2 * I2 + I3 * I3); }
};

inline double max_abs(std::initializer_list<double> xs) {
    double m = 0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace hill
