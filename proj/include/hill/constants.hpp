#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hill/errors.hpp"
#include "hill/hill_model.hpp"
#include "hill/states.hpp"

namespace hill {

using Mat4 = std::array<std::array<double, 4>, 4>;

/// Coefficient matrix of the linearized planar system d/dt (x,y,X,Y) = M1 (x,y,X,Y).
inline Mat4 m1_matrix() {
    return Mat4{{{0.0, 1.0, 1.0, 0.0},
                 {-1.0, 0.0, 0.0, 1.0},
                 {8.0, 0.0, 0.0, 1.0},
                 {0.0, -4.0, -1.0, 0.0}}};
}

/// Shared constant record: frequencies, detuning, decoupling matrix, and the
/// coefficients of the twice-reduced Hamiltonian. Immutable after construction.
struct ModelConstants {
    double rho;         ///< equilibrium distance 3^(-1/3)
    double lambda;      ///< hyperbolic rate, (2*sqrt(7)+1)^(1/2)
    double omega;       ///< planar oscillation frequency, (2*sqrt(7)-1)^(1/2)
    double nu;          ///< vertical oscillation frequency, exactly 2
    double delta;       ///< detuning 1 - (nu/omega)^2 = (23 - 8*sqrt(7))/27
    double delta_star;  ///< (delta/2)(1 + delta/4)
    double sigma;       ///< normalization of the hyperbolic columns of A
    double tau;         ///< normalization of the elliptic columns of A
    double k0, k1, k2, k3, k4;  ///< reduced-Hamiltonian coefficients
    Mat4 A;             ///< decoupling matrix: (x,y,X,Y) = A (x1,y1,X1,Y1)
    Mat4 A_inv;         ///< symplectic inverse of A
};

namespace detail {

/// Symplectic product a^T J b with coordinates (x,y) and momenta (X,Y):
/// J maps (x,y,X,Y) -> (X,Y,-x,-y).
inline double symplectic_product(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    return a[0] * b[2] + a[1] * b[3] - a[2] * b[0] - a[3] * b[1];
}

/// Columns of A before normalization: eigenvector template in terms of
/// lambda and omega. Column order (hyperbolic+, elliptic-coordinate,
/// hyperbolic-, elliptic-momentum).
inline std::array<std::array<double, 4>, 4> unnormalized_columns(double lambda, double omega) {
    const double l2 = lambda * lambda;
    const double w2 = omega * omega;
    std::array<double, 4> u1{2.0 * lambda, l2 - 9.0, l2 + 9.0, lambda * (l2 - 7.0)};
    std::array<double, 4> u2{0.0, -(w2 + 9.0), 9.0 - w2, 0.0};
    std::array<double, 4> u3{-2.0 * lambda, l2 - 9.0, l2 + 9.0, lambda * (7.0 - l2)};
    std::array<double, 4> u4{2.0, 0.0, 0.0, -(w2 + 7.0)};
    return {u1, u2, u3, u4};
}

}  // namespace detail

/// Build the shared constants. sigma and tau are the positive roots of the
/// canonicity conditions sigma^2 = Omega(u1,u3), tau^2 = Omega(u2,u4) on the
/// unnormalized eigenvector columns; every other column pairing vanishes
/// identically, which makes A symplectic.
inline ModelConstants build_constants() {
    ModelConstants c{};
    const double sqrt7 = std::sqrt(7.0);
    c.rho = rho;
    c.lambda = std::sqrt(2.0 * sqrt7 + 1.0);
    c.omega = std::sqrt(2.0 * sqrt7 - 1.0);
    c.nu = 2.0;
    c.delta = (23.0 - 8.0 * sqrt7) / 27.0;
    c.delta_star = 0.5 * c.delta * (1.0 + 0.25 * c.delta);

    const auto u = detail::unnormalized_columns(c.lambda, c.omega);
    const double sigma2 = detail::symplectic_product(u[0], u[2]);
    const double tau2 = detail::symplectic_product(u[1], u[3]);
    if (!(sigma2 > 0.0) || !(tau2 > 0.0))
        throw numerical_error("build_constants: canonicity conditions have no positive roots");
    c.sigma = std::sqrt(sigma2);
    c.tau = std::sqrt(tau2);

    const double scale[4] = {c.sigma, c.tau, c.sigma, c.tau};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c.A[i][j] = u[j][i] / scale[j];

    // Symplectic inverse A^{-1} = -J A^T J; entrywise
    // A_inv[i][j] = s A[(j+2)%4][(i+2)%4] with s = +1 when i, j fall in the
    // same (coordinate | momentum) block and -1 otherwise.
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double s = ((i < 2) == (j < 2)) ? 1.0 : -1.0;
            c.A_inv[i][j] = s * c.A[(j + 2) % 4][(i + 2) % 4];
        }

    const double w2 = c.omega * c.omega;
    c.k0 = (w2 + 2.0) * c.rho / 6733104.0;
    c.k1 = (6829135.0 - 609646.0 * w2) / 16.0 * c.k0;
    c.k2 = (126184.0 - 9583.0 * w2) * c.k0;
    c.k3 = -0.75 * (439957.0 - 103954.0 * w2) * c.k0;
    c.k4 = 0.75 * (7293079.0 - 1280862.0 * w2) * c.k0;
    return c;
}

/// Eigenvalues of m1_matrix(), ordered (+lambda, -lambda, +i omega, -i omega).
inline std::array<std::complex<double>, 4> linear_eigenstructure() {
    const Mat4 m = m1_matrix();
    Eigen::Matrix4d M;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) M(i, j) = m[i][j];
    Eigen::EigenSolver<Eigen::Matrix4d> solver(M);
    if (solver.info() != Eigen::Success)
        throw numerical_error("linear_eigenstructure: eigenvalue solve failed");
    std::array<std::complex<double>, 4> ev;
    for (int i = 0; i < 4; ++i) ev[i] = solver.eigenvalues()(i);
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.real() - b.real()) > 1e-9) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    // Sorted descending by real part: +lambda, (+i omega, -i omega), -lambda.
    std::swap(ev[1], ev[3]);
    std::swap(ev[2], ev[3]);
    return ev;
}

/// Decouple the linear dynamics: (x1,y1,X1,Y1) = A^{-1} (x,y,X,Y), z pass-through.
inline DecoupledState t2_forward(const LocalState& s, const ModelConstants& c) {
    const double v[4] = {s.x, s.y, s.X, s.Y};
    double w[4] = {0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) w[i] += c.A_inv[i][j] * v[j];
    return DecoupledState{w[0], w[1], s.z, w[2], w[3], s.Z};
}

/// Back to local variables: (x,y,X,Y) = A (x1,y1,X1,Y1), z pass-through.
inline LocalState t2_inverse(const DecoupledState& s, const ModelConstants& c) {
    const double v[4] = {s.x1, s.y1, s.X1, s.Y1};
    double w[4] = {0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) w[i] += c.A[i][j] * v[j];
    return LocalState{w[0], w[1], s.z1, w[2], w[3], s.Z1};
}

/// Quadratic Hamiltonian in decoupled variables:
/// lambda x1 X1 + (Y1^2 + omega^2 y1^2)/2 + (Z1^2 + nu^2 z1^2)/2.
inline double decoupled_quadratic(const DecoupledState& s, const ModelConstants& c) {
    return c.lambda * s.x1 * s.X1 + 0.5 * (s.Y1 * s.Y1 + c.omega * c.omega * s.y1 * s.y1) +
           0.5 * (s.Z1 * s.Z1 + c.nu * c.nu * s.z1 * s.z1);
}

}  // namespace hill
