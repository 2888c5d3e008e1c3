#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "hill/constants.hpp"
#include "hill/dop853.hpp"
#include "hill/errors.hpp"
#include "hill/normalization.hpp"
#include "hill/states.hpp"

namespace hill {

enum class EquilibriumFamily { Ep1, Em1, Ep2, Em2, Ep3, Em3 };
enum class StabilityType { elliptic, hyperbolic };
enum class OrbitKind {
    vertical_lyapunov,
    planar_lyapunov,
    halo_north,
    halo_south,
    bridge_a,
    bridge_b,
};

inline std::string to_string(EquilibriumFamily f) {
    switch (f) {
        case EquilibriumFamily::Ep1: return "E+1";
        case EquilibriumFamily::Em1: return "E-1";
        case EquilibriumFamily::Ep2: return "E+2";
        case EquilibriumFamily::Em2: return "E-2";
        case EquilibriumFamily::Ep3: return "E+3";
        case EquilibriumFamily::Em3: return "E-3";
    }
    return "?";
}

inline std::string to_string(StabilityType s) {
    return s == StabilityType::elliptic ? "elliptic" : "hyperbolic";
}

inline std::string to_string(OrbitKind k) {
    switch (k) {
        case OrbitKind::vertical_lyapunov: return "vertical-lyapunov";
        case OrbitKind::planar_lyapunov: return "planar-lyapunov";
        case OrbitKind::halo_north: return "halo-north";
        case OrbitKind::halo_south: return "halo-south";
        case OrbitKind::bridge_a: return "bridge-a";
        case OrbitKind::bridge_b: return "bridge-b";
    }
    return "?";
}

inline OrbitKind parse_orbit_kind(const std::string& name) {
    for (OrbitKind k :
         {OrbitKind::vertical_lyapunov, OrbitKind::planar_lyapunov, OrbitKind::halo_north,
          OrbitKind::halo_south, OrbitKind::bridge_a, OrbitKind::bridge_b})
        if (to_string(k) == name) return k;
    throw domain_error("unknown orbit family: " + name);
}

/// Project mean elements onto the reduced sphere of radius L'/2.
inline HopfPoint to_hopf(const MeanLissajousState& st, const ModelConstants& c) {
    const StateFunctions f = state_functions(st.L, st.G, c);
    const double P = c.omega * f.s * f.d;
    return HopfPoint{P * std::cos(2.0 * st.g), P * std::sin(2.0 * st.g), 0.5 * st.G, st.L};
}

/// Recover mean elements from a sphere point; the anomaly is supplied by the
/// caller (it is not part of the reduced state). At the poles g' is
/// undefined; it is returned as 0 and `circular` is set when provided.
inline MeanLissajousState from_hopf(const HopfPoint& p, double ell, const ModelConstants& c,
                                    bool* circular = nullptr) {
    (void)c;
    if (circular) *circular = false;
    MeanLissajousState st;
    st.ell = ell;
    st.L = p.Lp;
    st.G = std::clamp(2.0 * p.I3, -p.Lp, p.Lp);
    if (std::hypot(p.I1, p.I2) < 1e-14 * p.Lp) {
        st.g = 0.0;
        if (circular) *circular = true;
    } else {
        st.g = 0.5 * std::atan2(p.I2, p.I1);
    }
    return st;
}

/// Energy of the reduced one-degree-of-freedom flow.
inline double reduced_hamiltonian(const HopfPoint& p, const ModelConstants& c) {
    return c.omega * (1.0 - 0.5 * c.delta_star) * p.Lp - c.k1 * p.Lp * p.Lp +
           (c.k2 * p.Lp - c.omega * c.delta_star) * p.I1 +
           c.k3 * (p.I2 * p.I2 - p.I1 * p.I1) + c.k4 * p.I3 * p.I3;
}

/// Right-hand side of the reduced flow (tangent to the sphere).
inline HopfPoint reduced_flow(const HopfPoint& p, const ModelConstants& c) {
    const double a = c.delta_star * c.omega - c.k2 * p.Lp;
    HopfPoint d;
    d.Lp = p.Lp;
    d.I1 = 2.0 * (c.k3 - c.k4) * p.I2 * p.I3;
    d.I2 = (a + 2.0 * (c.k3 + c.k4) * p.I1) * p.I3;
    d.I3 = -(a + 4.0 * c.k3 * p.I1) * p.I2;
    return d;
}

/// Jacobian of the reduced flow with respect to (I1, I2, I3).
inline std::array<std::array<double, 3>, 3> reduced_flow_jacobian(const HopfPoint& p,
                                                                  const ModelConstants& c) {
    const double a = c.delta_star * c.omega - c.k2 * p.Lp;
    return {{{0.0, 2.0 * (c.k3 - c.k4) * p.I3, 2.0 * (c.k3 - c.k4) * p.I2},
             {2.0 * (c.k3 + c.k4) * p.I3, 0.0, a + 2.0 * (c.k3 + c.k4) * p.I1},
             {-4.0 * c.k3 * p.I2, -(a + 4.0 * c.k3 * p.I1), 0.0}}};
}

struct BifurcationThresholds {
    double L0;      ///< birth of the E+-2 pair at E-1
    double L1;      ///< birth of the E+-3 pair
    double L2;      ///< death of the E+-3 pair at E+1
    double Ltilde;  ///< E+-2 at the poles (k2 Ltilde = delta* omega)
};

inline BifurcationThresholds thresholds(const ModelConstants& c) {
    const double dw = c.delta_star * c.omega;
    return BifurcationThresholds{dw / (c.k2 + c.k3 + c.k4), dw / (c.k2 + 2.0 * c.k3),
                                 dw / (c.k2 - 2.0 * c.k3), dw / c.k2};
}

struct ReducedEquilibrium {
    EquilibriumFamily family;
    HopfPoint point;
    StabilityType stability;
    OrbitKind orbit;
};

namespace detail {

/// Classify an equilibrium by the eigenvalues of the flow linearized in the
/// sphere's tangent plane: a 2x2 traceless matrix, so det > 0 means an
/// imaginary pair (elliptic) and det < 0 a real pair (hyperbolic).
/// Returns +1 elliptic, -1 hyperbolic, 0 degenerate (too close to call).
inline int tangent_classification(const HopfPoint& p, const ModelConstants& c) {
    const double R = p.radius();
    const std::array<double, 3> n = {p.I1 / R, p.I2 / R, p.I3 / R};
    // Build an orthonormal tangent basis from the axis least aligned with n.
    std::array<double, 3> e{0.0, 0.0, 0.0};
    const int axis = std::abs(n[0]) <= std::abs(n[1])
                         ? (std::abs(n[0]) <= std::abs(n[2]) ? 0 : 2)
                         : (std::abs(n[1]) <= std::abs(n[2]) ? 1 : 2);
    e[axis] = 1.0;
    auto cross = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return std::array<double, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                     a[0] * b[1] - a[1] * b[0]};
    };
    std::array<double, 3> t1 = cross(n, e);
    const double n1 = std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
    for (auto& v : t1) v /= n1;
    const std::array<double, 3> t2 = cross(n, t1);
    const auto J = reduced_flow_jacobian(p, c);
    double M[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    const std::array<double, 3>* basis[2] = {&t1, &t2};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double v = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) v += (*basis[a])[i] * J[i][j] * (*basis[b])[j];
            M[a][b] = v;
        }
    const double det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
    double frob = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) frob += M[a][b] * M[a][b];
    if (std::abs(det) < 1e-9 * frob) return 0;
    return det > 0.0 ? 1 : -1;
}

inline void cross_check_stability(const ReducedEquilibrium& eq, const ModelConstants& c) {
    const int cls = tangent_classification(eq.point, c);
    if (cls == 0) return;  // at (or numerically at) a bifurcation
    const StabilityType eig =
        cls > 0 ? StabilityType::elliptic : StabilityType::hyperbolic;
    if (eig != eq.stability)
        throw numerical_error("equilibria: closed-form stability label disagrees with the "
                              "tangent-flow eigenvalues for " +
                              to_string(eq.family));
}

}  // namespace detail

/// All equilibria of the reduced flow at sphere parameter Lp, with stability
/// labels cross-checked against the linearized flow.
inline std::vector<ReducedEquilibrium> equilibria(double Lp, const ModelConstants& c) {
    if (!(Lp > 0.0)) throw domain_error("equilibria: L' must be positive");
    const BifurcationThresholds th = thresholds(c);
    std::vector<ReducedEquilibrium> eqs;

    const StabilityType sp1 = Lp < th.L2 ? StabilityType::elliptic : StabilityType::hyperbolic;
    eqs.push_back({EquilibriumFamily::Ep1, HopfPoint{0.5 * Lp, 0.0, 0.0, Lp}, sp1,
                   OrbitKind::vertical_lyapunov});
    const StabilityType sm1 = (Lp > th.L0 && Lp < th.L1) ? StabilityType::hyperbolic
                                                         : StabilityType::elliptic;
    eqs.push_back({EquilibriumFamily::Em1, HopfPoint{-0.5 * Lp, 0.0, 0.0, Lp}, sm1,
                   OrbitKind::planar_lyapunov});

    if (Lp >= th.L0) {
        const double I1H = (c.k2 * Lp - c.delta_star * c.omega) / (2.0 * (c.k3 + c.k4));
        const double I3 = 0.5 * std::sqrt(std::max(0.0, Lp * Lp - 4.0 * I1H * I1H));
        eqs.push_back({EquilibriumFamily::Ep2, HopfPoint{I1H, 0.0, I3, Lp},
                       StabilityType::elliptic, OrbitKind::halo_north});
        eqs.push_back({EquilibriumFamily::Em2, HopfPoint{I1H, 0.0, -I3, Lp},
                       StabilityType::elliptic, OrbitKind::halo_south});
    }
    if (Lp >= th.L1 && Lp <= th.L2) {
        const double I1B = (c.k2 * Lp - c.delta_star * c.omega) / (4.0 * c.k3);
        const double I2 = 0.5 * std::sqrt(std::max(0.0, Lp * Lp - 4.0 * I1B * I1B));
        eqs.push_back({EquilibriumFamily::Ep3, HopfPoint{I1B, I2, 0.0, Lp},
                       StabilityType::hyperbolic, OrbitKind::bridge_a});
        eqs.push_back({EquilibriumFamily::Em3, HopfPoint{I1B, -I2, 0.0, Lp},
                       StabilityType::hyperbolic, OrbitKind::bridge_b});
    }
    for (const auto& eq : eqs) detail::cross_check_stability(eq, c);
    return eqs;
}

/// The equilibrium carrying a given orbit family, if present at this Lp.
inline ReducedEquilibrium equilibrium_for(OrbitKind kind, double Lp, const ModelConstants& c) {
    for (const auto& eq : equilibria(Lp, c))
        if (eq.orbit == kind) return eq;
    throw domain_error("orbit family " + to_string(kind) + " does not exist at L' = " +
                       std::to_string(Lp));
}

struct LevelCurvePoint {
    HopfPoint p;
    int branch;  ///< 0:(+,+) 1:(+,-) 2:(-,+) 3:(-,-) signs of (I2, I3)
};

namespace detail {

/// Radicands I2^2(I1) and I3^2(I1) of the level set h = const after
/// eliminating the other component through the sphere constraint.
inline void level_radicands(double Lp, double h, double I1, const ModelConstants& c,
                            double& q2, double& q3) {
    const double a = c.delta_star * c.omega - c.k2 * Lp;
    const double common = a * I1 - (1.0 - 0.5 * c.delta_star) * c.omega * Lp + h;
    const double den = c.k4 - c.k3;
    q2 = -((c.k3 + c.k4) * I1 * I1 + common + (c.k1 - 0.25 * c.k4) * Lp * Lp) / den;
    q3 = (2.0 * c.k3 * I1 * I1 + common + (c.k1 - 0.25 * c.k3) * Lp * Lp) / den;
}

inline constexpr double radicand_clamp = 1e-12;

}  // namespace detail

/// Sample the level set {reduced_hamiltonian = h} on the sphere by sweeping
/// I1 across n nodes and emitting every distinct sign branch.
inline std::vector<LevelCurvePoint> level_curve(double Lp, double h, int n,
                                                const ModelConstants& c) {
    if (!(Lp > 0.0)) throw domain_error("level_curve: L' must be positive");
    if (n < 2) throw domain_error("level_curve: need at least two sweep nodes");
    std::vector<LevelCurvePoint> pts;
    for (int k = 0; k < n; ++k) {
        const double I1 = -0.5 * Lp + Lp * static_cast<double>(k) / (n - 1);
        double q2, q3;
        detail::level_radicands(Lp, h, I1, c, q2, q3);
        if (q2 < -detail::radicand_clamp || q3 < -detail::radicand_clamp) continue;
        const double I2 = std::sqrt(std::max(0.0, q2));
        const double I3 = std::sqrt(std::max(0.0, q3));
        for (int b = 0; b < 4; ++b) {
            const double s2 = (b & 2) ? -1.0 : 1.0;
            const double s3 = (b & 1) ? -1.0 : 1.0;
            if (s2 < 0.0 && I2 == 0.0) continue;
            if (s3 < 0.0 && I3 == 0.0) continue;
            pts.push_back({HopfPoint{I1, s2 * I2, s3 * I3, Lp}, b});
        }
    }
    return pts;
}

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int i, int j) { parent[find(i)] = find(j); }
};

}  // namespace detail

/// Number of connected components of the level set {H = h} on the sphere,
/// counted by sweeping I1 and joining sign branches wherever a radicand
/// vanishes or changes sign between adjacent nodes.
inline int count_level_components(double Lp, double h, int n, const ModelConstants& c) {
    if (n < 2) throw domain_error("count_level_components: need at least two sweep nodes");
    std::vector<double> q2(n), q3(n);
    std::vector<char> active(n);
    for (int k = 0; k < n; ++k) {
        const double I1 = -0.5 * Lp + Lp * static_cast<double>(k) / (n - 1);
        detail::level_radicands(Lp, h, I1, c, q2[k], q3[k]);
        active[k] = q2[k] >= -detail::radicand_clamp && q3[k] >= -detail::radicand_clamp;
    }
    detail::UnionFind uf(4 * n);
    const double join_tol = 10.0 * detail::radicand_clamp;
    auto cell = [](int k, int b) { return 4 * k + b; };
    for (int k = 0; k < n; ++k) {
        if (!active[k]) continue;
        // Same node, I2 = 0: branches differing in the I2 sign meet.
        if (q2[k] <= join_tol) {
            uf.unite(cell(k, 0), cell(k, 2));
            uf.unite(cell(k, 1), cell(k, 3));
        }
        // Same node, I3 = 0: branches differing in the I3 sign meet.
        if (q3[k] <= join_tol) {
            uf.unite(cell(k, 0), cell(k, 1));
            uf.unite(cell(k, 2), cell(k, 3));
        }
        // Adjacent active node: each branch continues.
        if (k + 1 < n && active[k + 1])
            for (int b = 0; b < 4; ++b) uf.unite(cell(k, b), cell(k + 1, b));
        // The curve folds back where a radicand crosses zero into an
        // inactive neighbor.
        for (int dk : {-1, 1}) {
            const int j = k + dk;
            if (j < 0 || j >= n || active[j]) continue;
            if (q2[j] < -detail::radicand_clamp) {
                uf.unite(cell(k, 0), cell(k, 2));
                uf.unite(cell(k, 1), cell(k, 3));
            }
            if (q3[j] < -detail::radicand_clamp) {
                uf.unite(cell(k, 0), cell(k, 1));
                uf.unite(cell(k, 2), cell(k, 3));
            }
        }
    }
    std::vector<int> roots;
    for (int k = 0; k < n; ++k) {
        if (!active[k]) continue;
        for (int b = 0; b < 4; ++b) {
            // Skip sign branches that duplicate the same geometric point.
            if ((b & 2) && q2[k] <= join_tol) continue;
            if ((b & 1) && q3[k] <= join_tol) continue;
            roots.push_back(uf.find(cell(k, b)));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return static_cast<int>(roots.size());
}

/// First-order period of the orbit associated with a reduced equilibrium:
/// T = 2 pi / (d ell'/dt). The anomaly rate is evaluated in its sphere form,
/// which stays finite at circular states with I1 = 0; `warned` is set when
/// the formula is used outside its trustworthy region (|L'^2 - G'^2| tiny).
inline double period_estimate(const ReducedEquilibrium& eq, const ModelConstants& c,
                              bool* warned = nullptr) {
    if (warned) *warned = false;
    const double Lp = eq.point.Lp;
    const double Gp = 2.0 * eq.point.I3;
    const double denom = Lp * Lp - Gp * Gp;
    double ratio;
    if (std::abs(denom) < 1e-9 * Lp * Lp) {
        if (warned) *warned = true;
        ratio = std::abs(eq.point.I1) < 1e-15 * Lp ? 0.0 : 2.0 * Lp * eq.point.I1 / denom;
    } else {
        ratio = 2.0 * Lp * eq.point.I1 / denom;
    }
    const double ell_rate = c.omega * (1.0 - 0.25 * c.delta * (1.0 + ratio));
    if (!(ell_rate > 0.0) || !std::isfinite(ell_rate)) {
        if (warned) *warned = true;
        return std::numeric_limits<double>::infinity();
    }
    return 2.0 * M_PI / ell_rate;
}

struct ReducedTrajectory {
    std::vector<double> times;
    std::vector<HopfPoint> points;
};

/// Integrate the reduced flow numerically from p0 over [0, t_end].
inline ReducedTrajectory integrate_reduced(const HopfPoint& p0, double t_end,
                                           const ModelConstants& c,
                                           IntegratorOptions opts = {1e-12, 1e-14}) {
    const double Lp = p0.Lp;
    auto rhs = [&c, Lp](double, const std::array<double, 3>& y, std::array<double, 3>& dy) {
        const HopfPoint d = reduced_flow(HopfPoint{y[0], y[1], y[2], Lp}, c);
        dy = {d.I1, d.I2, d.I3};
    };
    auto solver = make_dop853<3>(rhs, opts);
    auto res = solver.integrate(0.0, {p0.I1, p0.I2, p0.I3}, t_end);
    ReducedTrajectory tr;
    tr.times = std::move(res.times);
    tr.points.reserve(res.states.size());
    for (const auto& s : res.states) tr.points.push_back(HopfPoint{s[0], s[1], s[2], Lp});
    return tr;
}

}  // namespace hill
