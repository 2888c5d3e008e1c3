#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hill/dop853.hpp"
#include "hill/errors.hpp"
#include "hill/hill_model.hpp"
#include "hill/states.hpp"

namespace hill {

using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Minimum allowed distance from the origin during propagation.
inline constexpr double collision_radius = 1e-3;

namespace detail {

inline void check_tolerance(double tol) {
    if (!(tol >= 1e-14 && tol <= 1e-6))
        throw domain_error("propagation tolerance must lie in [1e-14, 1e-6]");
}

inline void check_collision(const RotState& s) {
    if (s.radius() < collision_radius)
        throw collision_error("trajectory passed within the collision radius");
}

}  // namespace detail

struct Trajectory {
    std::vector<double> times;
    std::vector<RotState> states;
    DenseOutput<6> dense;

    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
    RotState at(double t) const { return RotState::from_array(dense.eval(t)); }
};

/// Integrate the equations of motion from s0 over [0, t_end] with dense output.
inline Trajectory propagate(const RotState& s0, double t_end, double tol = 1e-12) {
    detail::check_tolerance(tol);
    detail::check_collision(s0);
    auto rhs = [](double, const std::array<double, 6>& y, std::array<double, 6>& dy) {
        const RotState s = RotState::from_array(y);
        detail::check_collision(s);
        dy = vector_field(s).to_array();
    };
    IntegratorOptions opts;
    opts.rtol = tol;
    opts.atol = tol;
    opts.dense = true;
    auto solver = make_dop853<6>(rhs, opts);
    auto res = solver.integrate(0.0, s0.to_array(), t_end);
    Trajectory tr;
    tr.times = std::move(res.times);
    tr.states.reserve(res.states.size());
    for (const auto& y : res.states) tr.states.push_back(RotState::from_array(y));
    tr.dense = std::move(res.dense);
    return tr;
}

/// End state of the flow without dense output or variational baggage.
inline RotState flow_state(const RotState& s0, double t_end, double tol = 1e-12) {
    detail::check_tolerance(tol);
    detail::check_collision(s0);
    auto rhs = [](double, const std::array<double, 6>& y, std::array<double, 6>& dy) {
        const RotState s = RotState::from_array(y);
        detail::check_collision(s);
        dy = vector_field(s).to_array();
    };
    IntegratorOptions opts;
    opts.rtol = tol;
    opts.atol = tol;
    auto solver = make_dop853<6>(rhs, opts);
    return RotState::from_array(solver.integrate(0.0, s0.to_array(), t_end).states.back());
}

struct VariationalResult {
    RotState state;                 ///< end state of the flow
    Mat6 stm;                       ///< state-transition matrix over [0, t_end]
    std::vector<double> times;
    std::vector<RotState> states;
    bool planar;                    ///< orbit stayed in the z = Z = 0 plane
};

/// Integrate the flow together with its 6x6 variational equations.
inline VariationalResult variational_flow(const RotState& s0, double t_end,
                                          double tol = 1e-12) {
    detail::check_tolerance(tol);
    detail::check_collision(s0);
    auto rhs = [](double, const std::array<double, 42>& y, std::array<double, 42>& dy) {
        const RotState s{y[0], y[1], y[2], y[3], y[4], y[5]};
        detail::check_collision(s);
        const RotState f = vector_field(s);
        const auto fa = f.to_array();
        std::copy(fa.begin(), fa.end(), dy.begin());
        const auto J = vector_field_jacobian(s);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                double v = 0.0;
                for (int k = 0; k < 6; ++k) v += J[i][k] * y[6 + 6 * k + j];
                dy[6 + 6 * i + j] = v;
            }
    };
    std::array<double, 42> y0{};
    const auto sa = s0.to_array();
    std::copy(sa.begin(), sa.end(), y0.begin());
    for (int i = 0; i < 6; ++i) y0[6 + 7 * i] = 1.0;

    IntegratorOptions opts;
    opts.rtol = tol;
    opts.atol = tol;
    auto solver = make_dop853<42>(rhs, opts);
    auto res = solver.integrate(0.0, y0, t_end);

    VariationalResult out;
    out.times = std::move(res.times);
    out.states.reserve(res.states.size());
    double max_z = 0.0;
    for (const auto& y : res.states) {
        out.states.push_back(RotState{y[0], y[1], y[2], y[3], y[4], y[5]});
        max_z = std::max({max_z, std::abs(y[2]), std::abs(y[5])});
    }
    const auto& yf = res.states.back();
    out.state = RotState{yf[0], yf[1], yf[2], yf[3], yf[4], yf[5]};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) out.stm(i, j) = yf[6 + 6 * i + j];
    out.planar = max_z <= 1e-12;
    return out;
}

struct Monodromy {
    Mat6 M;
    double s1 = 0.0;  ///< in-plane index for planar orbits
    double s2 = 0.0;  ///< out-of-plane index for planar orbits
    double period = 0.0;
    double periodicity_residual = 0.0;
    bool non_periodic_warning = false;
    bool complex_index_flag = false;  ///< an index had imaginary residual > 1e-6
    bool planar = false;
};

/// Map a stability index onto the customary plotting scale.
inline double scaled_stability_index(double s) {
    return 2.0 * std::asinh(s) / std::asinh(2.0);
}

/// Infinity norm of M^T J M - J, the deviation from symplecticity.
inline double symplectic_defect(const Mat6& M) {
    Mat6 J = Mat6::Zero();
    for (int i = 0; i < 3; ++i) {
        J(i, i + 3) = 1.0;
        J(i + 3, i) = -1.0;
    }
    return (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
}

namespace detail {

/// lambda + 1/lambda for a reciprocal eigenvalue pair, averaged over the two
/// members for symmetry; flags when the imaginary residual is material.
inline double pair_index(std::complex<double> a, std::complex<double> b, bool* complex_flag) {
    const std::complex<double> s = 0.5 * ((a + 1.0 / a) + (b + 1.0 / b));
    if (std::abs(s.imag()) > 1e-6 && complex_flag) *complex_flag = true;
    return s.real();
}

/// Remove the two eigenvalues closest to 1 (the autonomous-flow unit pair)
/// and return the remaining ones.
inline std::vector<std::complex<double>> deflate_unit_pair(
    std::vector<std::complex<double>> ev) {
    for (int drop = 0; drop < 2; ++drop) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < ev.size(); ++i)
            if (std::abs(ev[i] - 1.0) < std::abs(ev[best] - 1.0)) best = i;
        ev.erase(ev.begin() + static_cast<long>(best));
    }
    return ev;
}

/// Split four eigenvalues into two reciprocal pairs and return their indices.
inline std::pair<double, double> reciprocal_pair_indices(
    const std::vector<std::complex<double>>& ev, bool* complex_flag) {
    // Anchor on the largest modulus; its partner minimizes |ab - 1|.
    std::size_t a = 0;
    for (std::size_t i = 1; i < ev.size(); ++i)
        if (std::abs(ev[i]) > std::abs(ev[a])) a = i;
    std::size_t b = a == 0 ? 1 : 0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (i == a) continue;
        if (std::abs(ev[i] * ev[a] - 1.0) < std::abs(ev[b] * ev[a] - 1.0)) b = i;
    }
    std::vector<std::complex<double>> rest;
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (i != a && i != b) rest.push_back(ev[i]);
    const double s_first = pair_index(ev[a], ev[b], complex_flag);
    const double s_second = pair_index(rest[0], rest[1], complex_flag);
    return {s_first, s_second};
}

}  // namespace detail

/// The two nontrivial stability indices of a one-period state-transition
/// matrix. For planar orbits the out-of-plane index comes directly from the
/// decoupled (z, Z) block and the pair is labeled (in-plane, out-of-plane);
/// otherwise the larger index comes first.
inline std::pair<double, double> stability_indices(const Mat6& M, bool planar,
                                                   bool* complex_flag = nullptr) {
    if (planar) {
        // (z, Z) perturbations decouple; their 2x2 block has det 1, so the
        // index is simply its trace.
        const double s_out = M(2, 2) + M(5, 5);
        Eigen::Matrix4d M4;
        const int idx[4] = {0, 1, 3, 4};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) M4(i, j) = M(idx[i], idx[j]);
        Eigen::EigenSolver<Eigen::Matrix4d> es(M4);
        std::vector<std::complex<double>> ev(4);
        for (int i = 0; i < 4; ++i) ev[i] = es.eigenvalues()(i);
        const auto rest = detail::deflate_unit_pair(std::move(ev));
        return {detail::pair_index(rest[0], rest[1], complex_flag), s_out};
    }
    Eigen::EigenSolver<Mat6> es(M);
    std::vector<std::complex<double>> ev(6);
    for (int i = 0; i < 6; ++i) ev[i] = es.eigenvalues()(i);
    const auto rest = detail::deflate_unit_pair(std::move(ev));
    auto [sa, sb] = detail::reciprocal_pair_indices(rest, complex_flag);
    return {std::max(sa, sb), std::min(sa, sb)};
}

/// State-transition matrix over one period plus the stability indices.
inline Monodromy monodromy(const RotState& orbit_ic, double period, double tol = 1e-12) {
    if (!(period > 0.0)) throw domain_error("monodromy: period must be positive");
    const VariationalResult var = variational_flow(orbit_ic, period, tol);

    Monodromy mono;
    mono.M = var.stm;
    mono.period = period;
    mono.planar = var.planar;
    const auto y0 = orbit_ic.to_array();
    const auto yT = var.state.to_array();
    double r2 = 0.0;
    for (int i = 0; i < 6; ++i) r2 += (yT[i] - y0[i]) * (yT[i] - y0[i]);
    mono.periodicity_residual = std::sqrt(r2);
    mono.non_periodic_warning = mono.periodicity_residual > 1e-6;
    std::tie(mono.s1, mono.s2) = stability_indices(var.stm, var.planar,
                                                   &mono.complex_index_flag);
    return mono;
}

}  // namespace hill
