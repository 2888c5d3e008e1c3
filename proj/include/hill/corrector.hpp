#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "hill/errors.hpp"
#include "hill/hill_model.hpp"
#include "hill/states.hpp"
#include "hill/trajectory.hpp"

namespace hill {

enum class CorrectorConstraint {
    none,    ///< phase condition only; the family direction is resolved by the
             ///< minimum-norm step (use with care near strongly unstable orbits)
    energy,  ///< pin the energy to `target`
    period,  ///< pin the period to `target`
};

enum class SymmetryMode {
    automatic,  ///< use half-period shooting when the seed lies on a symmetry set
    on,         ///< require a symmetric seed; error otherwise
    off,        ///< always use full-period shooting
};

struct CorrectorOptions {
    // Energy is the default member selector: it varies strongly along every
    // family here, whereas the period is nearly flat along the vertical
    // family and pins the member badly.
    CorrectorConstraint constraint = CorrectorConstraint::energy;
    double target = std::numeric_limits<double>::quiet_NaN();  ///< energy/period value;
                                                               ///< NaN takes it from the seed
    double tol = 1e-12;  ///< convergence threshold on the full-period residual
    int max_iter = 15;
    double integrator_tol = 1e-13;
    SymmetryMode symmetry = SymmetryMode::automatic;
};

struct PeriodicOrbit {
    RotState ic;
    double period = 0.0;
    double energy = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double residual = 0.0;  ///< periodicity norm of the converged orbit
    int iterations = 0;
    bool planar = false;
};

namespace detail {

/// Gradient of the Hamiltonian, read off the canonical vector field.
inline std::array<double, 6> hamiltonian_gradient(const RotState& s) {
    const auto f = vector_field(s).to_array();
    return {-f[3], -f[4], -f[5], f[0], f[1], f[2]};
}

inline Eigen::VectorXd solve_min_norm(const Eigen::MatrixXd& J, const Eigen::VectorXd& rhs) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(sv.size() - 1) / sv(0) < 1e-14)
        throw singular_jacobian_error("correct: shooting Jacobian is numerically singular");
    // Directions weaker than this relative threshold carry no reliable
    // correction signal; dropping them keeps the step minimum-norm.
    svd.setThreshold(1e-12);
    return svd.solve(rhs);
}

struct DivergenceMonitor {
    double last = std::numeric_limits<double>::infinity();
    int growing = 0;
    void check(double norm) {
        growing = norm > last ? growing + 1 : 0;
        last = norm;
        if (growing >= 3)
            throw divergence_error("correct: residual grew for three consecutive iterations");
    }
};

inline PeriodicOrbit finish_orbit(const RotState& ic, double period, double residual,
                                  int iterations, const Mat6& stm, bool planar) {
    PeriodicOrbit orbit;
    orbit.ic = ic;
    orbit.period = period;
    orbit.energy = hamiltonian(ic);
    orbit.residual = residual;
    orbit.iterations = iterations;
    orbit.planar = planar;
    std::tie(orbit.s1, orbit.s2) = stability_indices(stm, planar);
    return orbit;
}

/// Reflection symmetries of the equations of motion whose fixed sets seed
/// half-period shooting. A state on a fixed set has y = X = 0 plus either
/// Z = 0 (in-plane velocity reflection) or z = 0 (vertical reflection);
/// driving the same combination to zero at the half period closes the orbit.
struct SymmetricSystem {
    std::vector<int> rows;      ///< components driven to zero at t = h
    std::vector<int> unknowns;  ///< free seed components (plus h)
};

inline std::optional<SymmetricSystem> symmetric_pattern(const RotState& s,
                                                        double tol = 1e-11) {
    if (std::abs(s.py) > tol || std::abs(s.Px) > tol) return std::nullopt;
    const bool z_zero = std::abs(s.pz) <= tol;
    const bool Z_zero = std::abs(s.Pz) <= tol;
    if (z_zero && Z_zero) return SymmetricSystem{{1, 3}, {0, 4}};
    if (Z_zero) return SymmetricSystem{{1, 3, 5}, {0, 2, 4}};
    if (z_zero) return SymmetricSystem{{1, 2, 3}, {0, 4, 5}};
    return std::nullopt;
}

/// Full-state shooting: unknowns (ic, T) restricted to the in-plane block
/// for planar seeds (whose out-of-plane variations decouple and would
/// otherwise turn singular exactly at the out-of-plane bifurcations).
/// A backtracking line search guards against the violent nonlinearity the
/// unstable multiplier induces.
inline PeriodicOrbit correct_general(const RotState& seed, double period_guess,
                                     const CorrectorOptions& opts) {
    const bool planar = std::abs(seed.pz) <= 1e-13 && std::abs(seed.Pz) <= 1e-13;
    const std::vector<int> idx = planar ? std::vector<int>{0, 1, 3, 4}
                                        : std::vector<int>{0, 1, 2, 3, 4, 5};
    const int m = static_cast<int>(idx.size());

    std::array<double, 6> y = seed.to_array();
    if (planar) y[2] = y[5] = 0.0;
    double T = period_guess;
    const double y_anchor = y[1];
    double target = opts.target;
    if (std::isnan(target))
        target = opts.constraint == CorrectorConstraint::energy ? hamiltonian(seed)
                                                                : period_guess;

    const int rows = m + 1 + (opts.constraint == CorrectorConstraint::none ? 0 : 1);
    auto residual_vec = [&](const std::array<double, 6>& yy, double TT,
                            const RotState& end) {
        Eigen::VectorXd F(rows);
        for (int i = 0; i < m; ++i) F(i) = end.to_array()[idx[i]] - yy[idx[i]];
        F(m) = yy[1] - y_anchor;
        if (opts.constraint == CorrectorConstraint::energy)
            F(m + 1) = hamiltonian(RotState::from_array(yy)) - target;
        else if (opts.constraint == CorrectorConstraint::period)
            F(m + 1) = TT - target;
        return F;
    };

    DivergenceMonitor monitor;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        const RotState ic = RotState::from_array(y);
        const VariationalResult var = variational_flow(ic, T, opts.integrator_tol);
        const Eigen::VectorXd F = residual_vec(y, T, var.state);

        double per2 = 0.0;
        const auto yT = var.state.to_array();
        for (int i = 0; i < 6; ++i) per2 += (yT[i] - y[i]) * (yT[i] - y[i]);
        if (F.norm() <= opts.tol)
            return finish_orbit(ic, T, std::sqrt(per2), iter, var.stm, var.planar);
        monitor.check(F.norm());

        const auto fT = vector_field(var.state).to_array();
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(rows, m + 1);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j)
                J(i, j) = var.stm(idx[i], idx[j]) - (i == j ? 1.0 : 0.0);
            J(i, m) = fT[idx[i]];
        }
        for (int j = 0; j < m; ++j) J(m, j) = idx[j] == 1 ? 1.0 : 0.0;
        if (opts.constraint == CorrectorConstraint::energy) {
            const auto grad = hamiltonian_gradient(ic);
            for (int j = 0; j < m; ++j) J(m + 1, j) = grad[idx[j]];
        } else if (opts.constraint == CorrectorConstraint::period) {
            J(m + 1, m) = 1.0;
        }

        const Eigen::VectorXd step = solve_min_norm(J, -F);
        // Backtracking line search on the residual norm (plain flow only).
        double scale = 1.0;
        std::array<double, 6> y_try = y;
        double T_try = T;
        for (int bt = 0; bt < 8; ++bt) {
            y_try = y;
            for (int j = 0; j < m; ++j) y_try[idx[j]] += scale * step(j);
            T_try = T + scale * step(m);
            if (T_try > 0.0) {
                try {
                    const RotState end = flow_state(RotState::from_array(y_try), T_try,
                                                    opts.integrator_tol);
                    if (residual_vec(y_try, T_try, end).norm() < F.norm()) break;
                } catch (const numerical_error&) {
                    // fall through and shrink
                }
            }
            scale *= 0.5;
        }
        y = y_try;
        T = T_try;
        if (!(T > 0.0)) throw divergence_error("correct: period iterate became non-positive");
    }
    throw numerical_error("correct: no convergence within max_iter iterations");
}

/// Half-period shooting from a symmetry fixed set: the unstable multiplier
/// enters only over half the period, which widens the Newton basin
/// dramatically for strongly unstable orbits.
inline PeriodicOrbit correct_symmetric(const RotState& seed, double period_guess,
                                       const CorrectorOptions& opts,
                                       const SymmetricSystem& sys) {
    const auto& ri = sys.rows;
    const auto& ui = sys.unknowns;
    const int nu = static_cast<int>(ui.size()) + 1;
    const int rows = static_cast<int>(ri.size()) +
                     (opts.constraint == CorrectorConstraint::none ? 0 : 1);

    std::array<double, 6> y{};
    for (int j : ui) y[j] = seed.to_array()[j];
    double h = 0.5 * period_guess;
    double target = opts.target;
    if (std::isnan(target))
        target = opts.constraint == CorrectorConstraint::energy
                     ? hamiltonian(RotState::from_array(y))
                     : period_guess;
    // Converge the half-period conditions below the requested full-period
    // residual: the second half re-amplifies the defect.
    const double inner_tol = std::max(opts.tol * 1e-2, 2e-14);

    DivergenceMonitor monitor;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        const RotState ic = RotState::from_array(y);
        const VariationalResult var = variational_flow(ic, h, opts.integrator_tol);
        const auto yh = var.state.to_array();

        Eigen::VectorXd F(rows);
        for (std::size_t i = 0; i < ri.size(); ++i) F(static_cast<int>(i)) = yh[ri[i]];
        if (opts.constraint == CorrectorConstraint::energy)
            F(rows - 1) = hamiltonian(ic) - target;
        else if (opts.constraint == CorrectorConstraint::period)
            F(rows - 1) = 2.0 * h - target;

        if (F.norm() <= inner_tol) {
            // Assemble the full-period monodromy and residual numerically.
            const VariationalResult full = variational_flow(ic, 2.0 * h, opts.integrator_tol);
            const auto yT = full.state.to_array();
            double r2 = 0.0;
            for (int i = 0; i < 6; ++i) r2 += (yT[i] - y[i]) * (yT[i] - y[i]);
            return finish_orbit(ic, 2.0 * h, std::sqrt(r2), iter, full.stm, full.planar);
        }
        monitor.check(F.norm());

        const auto fh = vector_field(var.state).to_array();
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(rows, nu);
        for (std::size_t i = 0; i < ri.size(); ++i) {
            for (std::size_t j = 0; j < ui.size(); ++j)
                J(static_cast<int>(i), static_cast<int>(j)) = var.stm(ri[i], ui[j]);
            J(static_cast<int>(i), nu - 1) = fh[ri[i]];
        }
        if (opts.constraint == CorrectorConstraint::energy) {
            const auto grad = hamiltonian_gradient(ic);
            for (std::size_t j = 0; j < ui.size(); ++j)
                J(rows - 1, static_cast<int>(j)) = grad[ui[j]];
        } else if (opts.constraint == CorrectorConstraint::period) {
            J(rows - 1, nu - 1) = 2.0;
        }

        const Eigen::VectorXd step = solve_min_norm(J, -F);
        for (std::size_t j = 0; j < ui.size(); ++j) y[ui[j]] += step(static_cast<int>(j));
        h += step(nu - 1);
        if (!(h > 0.0)) throw divergence_error("correct: period iterate became non-positive");
    }
    throw numerical_error("correct: no convergence within max_iter iterations");
}

}  // namespace detail

/// Refine an approximate periodic orbit by Newton shooting. Seeds lying on a
/// reflection-symmetry fixed set (y = X = 0 with z = 0 or Z = 0) are, by
/// default, corrected with half-period shooting; otherwise full-period
/// shooting with a phase plane through the seed is used. An optional
/// constraint pins the energy or the period (default: energy).
inline PeriodicOrbit correct(const RotState& seed, double period_guess,
                             const CorrectorOptions& opts = {}) {
    if (!(period_guess > 0.0)) throw domain_error("correct: period guess must be positive");
    const auto f0 = vector_field(seed).to_array();
    double fn = 0.0;
    for (double v : f0) fn += v * v;
    if (std::sqrt(fn) < 1e-10)
        throw domain_error("correct: seed is numerically an equilibrium");

    const auto pattern = detail::symmetric_pattern(seed);
    if (opts.symmetry == SymmetryMode::on && !pattern)
        throw domain_error("correct: symmetric mode needs a seed on a symmetry fixed set "
                           "(y = X = 0 and z = 0 or Z = 0)");
    if (opts.symmetry != SymmetryMode::off && pattern)
        return detail::correct_symmetric(seed, period_guess, opts, *pattern);
    return detail::correct_general(seed, period_guess, opts);
}

}  // namespace hill
