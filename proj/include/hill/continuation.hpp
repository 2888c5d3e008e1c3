#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "hill/corrector.hpp"
#include "hill/errors.hpp"
#include "hill/hill_model.hpp"
#include "hill/states.hpp"
#include "hill/trajectory.hpp"

namespace hill {

struct ContinuationOptions {
    double initial_step = 2e-3;
    double min_step = 1e-9;
    double max_step = 0.25;
    double grow_factor = 1.6;
    double shrink_factor = 0.4;
    int grow_threshold = 4;  ///< grow the step when Newton needs at most this many iterations
    double tol = 1e-12;
    double integrator_tol = 1e-12;
    int max_iter = 12;
    int max_retries = 12;
};

namespace detail {

struct ArclengthResult {
    std::array<double, 6> y;
    double T = 0.0;
    Mat6 stm;
    bool planar = false;
    double residual = 0.0;
    int iterations = 0;
};

/// Newton solve of the periodicity system with a phase plane through the
/// predictor and a pseudo-arclength pin onto the predictor plane.
inline ArclengthResult arclength_newton(std::array<double, 6> y, double T,
                                        const Eigen::VectorXd& u_pred,
                                        const Eigen::VectorXd& tangent,
                                        const std::vector<int>& idx,
                                        const ContinuationOptions& opts) {
    const int m = static_cast<int>(idx.size());
    DivergenceMonitor monitor;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        const RotState ic = RotState::from_array(y);
        const VariationalResult var = variational_flow(ic, T, opts.integrator_tol);
        const auto yT = var.state.to_array();

        Eigen::VectorXd u(m + 1);
        for (int j = 0; j < m; ++j) u(j) = y[idx[j]];
        u(m) = T;

        Eigen::VectorXd F(m + 2);
        double per2 = 0.0;
        for (int i = 0; i < 6; ++i) per2 += (yT[i] - y[i]) * (yT[i] - y[i]);
        for (int i = 0; i < m; ++i) F(i) = yT[idx[i]] - y[idx[i]];
        F(m) = y[1] - u_pred(std::distance(idx.begin(),
                                           std::find(idx.begin(), idx.end(), 1)));
        F(m + 1) = tangent.dot(u - u_pred);

        if (F.norm() <= opts.tol) {
            ArclengthResult out;
            out.y = y;
            out.T = T;
            out.stm = var.stm;
            out.planar = var.planar;
            out.residual = std::sqrt(per2);
            out.iterations = iter;
            return out;
        }
        monitor.check(F.norm());

        const auto fT = vector_field(var.state).to_array();
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m + 2, m + 1);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j)
                J(i, j) = var.stm(idx[i], idx[j]) - (i == j ? 1.0 : 0.0);
            J(i, m) = fT[idx[i]];
        }
        for (int j = 0; j < m; ++j)
            if (idx[j] == 1) J(m, j) = 1.0;
        J.row(m + 1) = tangent.transpose();

        const Eigen::VectorXd step = solve_min_norm(J, -F);
        for (int j = 0; j < m; ++j) y[idx[j]] += step(j);
        T += step(m);
        if (!(T > 0.0))
            throw divergence_error("continue_family: period iterate became non-positive");
    }
    throw numerical_error("continue_family: member correction did not converge");
}

/// Family tangent from a member's monodromy: nullspace of the
/// periodicity + phase system at that member.
inline Eigen::VectorXd tangent_from_stm(const Mat6& stm, const RotState& endpoint,
                                        const std::vector<int>& idx) {
    const int m = static_cast<int>(idx.size());
    const auto fT = vector_field(endpoint).to_array();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j)
            J(i, j) = stm(idx[i], idx[j]) - (i == j ? 1.0 : 0.0);
        J(i, m) = fT[idx[i]];
    }
    for (int j = 0; j < m; ++j)
        if (idx[j] == 1) J(m, j) = 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
    Eigen::VectorXd t = svd.matrixV().col(m);
    return t / t.norm();
}

inline Eigen::VectorXd family_tangent(const PeriodicOrbit& orbit,
                                      const std::vector<int>& idx, double integrator_tol) {
    const VariationalResult var = variational_flow(orbit.ic, orbit.period, integrator_tol);
    return tangent_from_stm(var.stm, var.state, idx);
}

inline PeriodicOrbit member_from(const ArclengthResult& r) {
    return finish_orbit(RotState::from_array(r.y), r.T, r.residual, r.iterations, r.stm,
                        r.planar);
}

}  // namespace detail

/// Pseudo-arclength continuation of a periodic-orbit family. `direction`
/// (+1/-1) selects the sense of increasing/decreasing energy at the seed.
/// Returns up to n_members new members (the seed itself is not repeated);
/// fewer are returned when the family terminates first, e.g. by running
/// into a collision orbit.
inline std::vector<PeriodicOrbit> continue_family(const PeriodicOrbit& seed, int direction,
                                                  int n_members,
                                                  const ContinuationOptions& opts = {}) {
    if (seed.residual > 1e-10)
        throw domain_error("continue_family: seed residual exceeds 1e-10");
    if (direction != 1 && direction != -1)
        throw domain_error("continue_family: direction must be +1 or -1");
    if (n_members < 1) throw domain_error("continue_family: need at least one member");

    const bool planar = seed.planar;
    const std::vector<int> idx = planar ? std::vector<int>{0, 1, 3, 4}
                                        : std::vector<int>{0, 1, 2, 3, 4, 5};
    const int m = static_cast<int>(idx.size());

    auto pack = [&idx, m](const std::array<double, 6>& y, double T) {
        Eigen::VectorXd u(m + 1);
        for (int j = 0; j < m; ++j) u(j) = y[idx[j]];
        u(m) = T;
        return u;
    };

    Eigen::VectorXd tangent = detail::family_tangent(seed, idx, opts.integrator_tol);
    {
        // Orient the initial tangent along the requested energy direction.
        const auto grad = detail::hamiltonian_gradient(seed.ic);
        double dE = 0.0;
        for (int j = 0; j < m; ++j) dE += grad[idx[j]] * tangent(j);
        const double sense = std::abs(dE) > 1e-12 ? dE : tangent(m);
        if (sense * direction < 0.0) tangent = -tangent;
    }

    std::array<double, 6> y = seed.ic.to_array();
    if (planar) y[2] = y[5] = 0.0;
    double T = seed.period;
    Eigen::VectorXd u = pack(y, T);

    std::vector<PeriodicOrbit> family;
    family.reserve(static_cast<std::size_t>(n_members));
    double ds = opts.initial_step;
    while (static_cast<int>(family.size()) < n_members) {
        detail::ArclengthResult accepted;
        bool ok = false;
        for (int retry = 0; retry <= opts.max_retries && !ok; ++retry) {
            const Eigen::VectorXd u_pred = u + ds * tangent;
            std::array<double, 6> y_pred = y;
            for (int j = 0; j < m; ++j) y_pred[idx[j]] = u_pred(j);
            try {
                accepted =
                    detail::arclength_newton(y_pred, u_pred(m), u_pred, tangent, idx, opts);
                ok = true;
            } catch (const numerical_error&) {
                ds *= opts.shrink_factor;
                if (ds < opts.min_step) {
                    // Families can end (e.g. running into a collision orbit):
                    // return the stretch computed so far instead of discarding
                    // it.  Collapse with nothing computed means the seed itself
                    // sits at the family's end, which is an error.
                    if (!family.empty()) return family;
                    throw numerical_error(
                        "continue_family: continuation step collapsed near family "
                        "termination");
                }
            }
        }
        if (!ok) {
            if (!family.empty()) return family;
            throw numerical_error("continue_family: member correction kept failing");
        }

        const Eigen::VectorXd u_new = pack(accepted.y, accepted.T);
        // Recompute the nullspace tangent at the accepted member (its
        // monodromy is already in hand) and keep the traversal sense by
        // continuity.  A secant update would be poisoned by solver noise
        // once the step gets small, and freezes at folds.
        Eigen::VectorXd t_new = detail::tangent_from_stm(
            accepted.stm, RotState::from_array(accepted.y), idx);
        if (t_new.dot(tangent) < 0.0) t_new = -t_new;
        tangent = t_new;
        y = accepted.y;
        T = accepted.T;
        u = u_new;
        family.push_back(detail::member_from(accepted));

        if (accepted.iterations <= opts.grow_threshold)
            ds = std::min(ds * opts.grow_factor, opts.max_step);
        else if (accepted.iterations >= opts.max_iter - 2)
            ds = std::max(ds * opts.shrink_factor, opts.min_step);
    }
    return family;
}

struct BifurcationEvent {
    double energy;           ///< energy of the |s| = 2 crossing
    int index_id;            ///< 1 or 2: which stability index crossed
    int crossing_direction;  ///< +1 when |s| rises through 2 along the family
    double s_value;          ///< the index value at the crossing (near +2 or -2)
};

/// Find |s_i| = 2 crossings along a continued family and refine each by
/// bisection (re-correcting interpolated members) to |delta energy| <= 1e-4.
inline std::vector<BifurcationEvent> locate_bifurcations(
    const std::vector<PeriodicOrbit>& family, const ContinuationOptions& opts = {}) {
    std::vector<BifurcationEvent> events;
    if (family.size() < 2) return events;

    auto interpolated_member = [&opts](const PeriodicOrbit& a, const PeriodicOrbit& b,
                                       double w) {
        const auto ya = a.ic.to_array();
        const auto yb = b.ic.to_array();
        std::array<double, 6> y;
        for (int i = 0; i < 6; ++i) y[i] = (1.0 - w) * ya[i] + w * yb[i];
        CorrectorOptions copts;
        copts.tol = opts.tol;
        copts.integrator_tol = opts.integrator_tol;
        copts.max_iter = opts.max_iter;
        // Pinning the interpolated energy makes the bisection parameter the
        // energy itself.
        copts.constraint = CorrectorConstraint::energy;
        copts.target = (1.0 - w) * a.energy + w * b.energy;
        return correct(RotState::from_array(y), (1.0 - w) * a.period + w * b.period, copts);
    };

    for (int id = 1; id <= 2; ++id) {
        auto index_of = [id](const PeriodicOrbit& o) { return id == 1 ? o.s1 : o.s2; };
        for (std::size_t k = 0; k + 1 < family.size(); ++k) {
            const double ga = std::abs(index_of(family[k])) - 2.0;
            const double gb = std::abs(index_of(family[k + 1])) - 2.0;
            if (ga == 0.0 || ga * gb >= 0.0) continue;

            PeriodicOrbit lo = family[k];
            PeriodicOrbit hi = family[k + 1];
            double glo = ga;
            for (int it = 0; it < 60 && std::abs(hi.energy - lo.energy) > 1e-4; ++it) {
                PeriodicOrbit mid;
                try {
                    mid = interpolated_member(lo, hi, 0.5);
                } catch (const numerical_error&) {
                    break;  // keep the best bracket found so far
                }
                const double gm = std::abs(index_of(mid)) - 2.0;
                if (glo * gm <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            BifurcationEvent ev;
            ev.energy = 0.5 * (lo.energy + hi.energy);
            ev.index_id = id;
            ev.crossing_direction = gb > ga ? 1 : -1;
            ev.s_value = 0.5 * (index_of(lo) + index_of(hi));
            events.push_back(ev);
        }
    }
    std::sort(events.begin(), events.end(),
              [](const BifurcationEvent& a, const BifurcationEvent& b) {
                  return a.energy < b.energy;
              });
    return events;
}

}  // namespace hill
