#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <hill/hill.hpp>

using namespace hill;

namespace {

std::vector<double> critical_levels(double Lp, const ModelConstants& c) {
    std::vector<double> lev;
    for (const auto& e : equilibria(Lp, c)) lev.push_back(reduced_hamiltonian(e.point, c));
    std::sort(lev.begin(), lev.end());
    std::vector<double> uniq;
    for (double v : lev)
        if (uniq.empty() || std::abs(v - uniq.back()) > 1e-9 * std::max(1.0, std::abs(v)))
            uniq.push_back(v);
    return uniq;
}

}  // namespace

TEST_CASE("sphere projection and its inverse agree through the embedding") {
    const ModelConstants c = build_constants();
    std::mt19937_64 rng(918273);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> act(1e-3, 1.0);
    std::uniform_real_distribution<double> frac(-0.95, 0.95);
    for (int i = 0; i < 100; ++i) {
        MeanLissajousState st;
        st.ell = ang(rng);
        st.g = ang(rng);
        st.L = act(rng);
        st.G = frac(rng) * st.L;
        const HopfPoint p = to_hopf(st, c);
        CHECK(p.radius() == Catch::Approx(0.5 * st.L).epsilon(1e-13));
        bool circular = true;
        const MeanLissajousState back = from_hopf(p, st.ell, c, &circular);
        CHECK_FALSE(circular);
        CHECK(back.ell == st.ell);
        CHECK(back.L == st.L);
        CHECK(back.G == Catch::Approx(st.G).margin(1e-14 * st.L));
        // g is recovered modulo pi (only 2g is encoded on the sphere).
        CHECK(std::abs(std::remainder(back.g - st.g, M_PI)) <= 1e-12);
        const HopfPoint p2 = to_hopf(back, c);
        CHECK(max_abs({p2.I1 - p.I1, p2.I2 - p.I2, p2.I3 - p.I3}) <= 1e-14 * st.L);
    }
    // Poles: g is undefined, flagged circular.
    bool circular = false;
    const MeanLissajousState pole = from_hopf(HopfPoint{0.0, 0.0, 0.05, 0.1}, 0.3, c, &circular);
    CHECK(circular);
    CHECK(pole.g == 0.0);
    CHECK(pole.G == 0.1);
}

TEST_CASE("reduced flow is tangent to the sphere and conserves the energy") {
    const ModelConstants c = build_constants();
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double Lp = 0.5 + u(rng) * 0.4;
        const HopfPoint p{0.5 * Lp * u(rng), 0.5 * Lp * u(rng), 0.5 * Lp * u(rng), Lp};
        const HopfPoint d = reduced_flow(p, c);
        const double rad = d.I1 * p.I1 + d.I2 * p.I2 + d.I3 * p.I3;
        // Gradient of the energy in (I1, I2, I3).
        const double g1 = c.k2 * p.Lp - c.omega * c.delta_star - 2.0 * c.k3 * p.I1;
        const double g2 = 2.0 * c.k3 * p.I2;
        const double g3 = 2.0 * c.k4 * p.I3;
        const double dh = d.I1 * g1 + d.I2 * g2 + d.I3 * g3;
        CHECK(std::abs(rad) <= 1e-15);
        CHECK(std::abs(dh) <= 1e-15);
    }
}

TEST_CASE("flow jacobian matches finite differences") {
    const ModelConstants c = build_constants();
    const HopfPoint p{0.02, -0.035, 0.041, 0.13};
    const auto J = reduced_flow_jacobian(p, c);
    const double h = 1e-7;
    auto shifted = [&](int j, double eps) {
        HopfPoint q = p;
        if (j == 0) q.I1 += eps;
        if (j == 1) q.I2 += eps;
        if (j == 2) q.I3 += eps;
        return q;
    };
    for (int j = 0; j < 3; ++j) {
        const HopfPoint fu = reduced_flow(shifted(j, h), c);
        const HopfPoint fd = reduced_flow(shifted(j, -h), c);
        const double col[3] = {(fu.I1 - fd.I1) / (2 * h), (fu.I2 - fd.I2) / (2 * h),
                               (fu.I3 - fd.I3) / (2 * h)};
        for (int i = 0; i < 3; ++i) CHECK(J[i][j] == Catch::Approx(col[i]).margin(1e-9));
    }
}

TEST_CASE("pitchfork thresholds take their frozen values") {
    const ModelConstants c = build_constants();
    const BifurcationThresholds th = thresholds(c);
    CHECK(th.L0 == Catch::Approx(0.07686064020440647).epsilon(1e-14));
    CHECK(th.L1 == Catch::Approx(1.1711279417241518).epsilon(1e-14));
    CHECK(th.Ltilde == Catch::Approx(1.2983873226648175).epsilon(1e-14));
    CHECK(th.L2 == Catch::Approx(1.4566754186100739).epsilon(1e-14));
    // Reported-precision statement of the same values.
    CHECK(std::abs(th.L0 - 0.0768606) <= 1e-4 * th.L0);
    CHECK(std::abs(th.L1 - 1.17113) <= 1e-4 * th.L1);
    CHECK(std::abs(th.Ltilde - 1.29839) <= 1e-4 * th.Ltilde);
    CHECK(std::abs(th.L2 - 1.45668) <= 1e-4 * th.L2);
    CHECK((th.L0 < th.L1 && th.L1 < th.Ltilde && th.Ltilde < th.L2));
    CHECK(c.k2 * th.Ltilde == Catch::Approx(c.delta_star * c.omega).epsilon(1e-14));
}

TEST_CASE("equilibrium count steps 2 -> 4 -> 6 -> 4 across the thresholds") {
    const ModelConstants c = build_constants();
    const BifurcationThresholds th = thresholds(c);
    CHECK(equilibria(th.L0 - 1e-4, c).size() == 2);
    CHECK(equilibria(th.L0 + 1e-4, c).size() == 4);
    CHECK(equilibria(th.L1 - 1e-4, c).size() == 4);
    CHECK(equilibria(th.L1 + 1e-4, c).size() == 6);
    CHECK(equilibria(th.L2 - 1e-4, c).size() == 6);
    CHECK(equilibria(th.L2 + 1e-4, c).size() == 4);
}

TEST_CASE("equilibria sit on the sphere and annihilate the flow") {
    const ModelConstants c = build_constants();
    for (const double Lp : {0.05, 0.1, 0.5, 1.2, 1.2983873226648175, 2.0}) {
        for (const auto& eq : equilibria(Lp, c)) {
            CHECK(eq.point.radius() == Catch::Approx(0.5 * Lp).epsilon(1e-13));
            const HopfPoint d = reduced_flow(eq.point, c);
            CHECK(max_abs({d.I1, d.I2, d.I3}) <= 1e-12);
        }
    }
}

TEST_CASE("stability labels follow the threshold rules at 100 sphere sizes") {
    const ModelConstants c = build_constants();
    const BifurcationThresholds th = thresholds(c);
    for (int i = 0; i < 100; ++i) {
        // Log-spaced from 0.01 to 3, clear of the degenerate thresholds.
        const double Lp = 0.01 * std::pow(300.0, i / 99.0);
        // equilibria() itself cross-checks every label against the
        // linearized flow and throws on disagreement.
        std::vector<ReducedEquilibrium> eqs;
        REQUIRE_NOTHROW(eqs = equilibria(Lp, c));
        for (const auto& eq : eqs) {
            switch (eq.family) {
                case EquilibriumFamily::Ep1:
                    CHECK(eq.stability == (Lp < th.L2 ? StabilityType::elliptic
                                                      : StabilityType::hyperbolic));
                    CHECK(eq.orbit == OrbitKind::vertical_lyapunov);
                    break;
                case EquilibriumFamily::Em1:
                    CHECK(eq.stability == (Lp > th.L0 && Lp < th.L1
                                               ? StabilityType::hyperbolic
                                               : StabilityType::elliptic));
                    CHECK(eq.orbit == OrbitKind::planar_lyapunov);
                    break;
                case EquilibriumFamily::Ep2:
                case EquilibriumFamily::Em2:
                    CHECK(eq.stability == StabilityType::elliptic);
                    break;
                case EquilibriumFamily::Ep3:
                case EquilibriumFamily::Em3:
                    CHECK(eq.stability == StabilityType::hyperbolic);
                    break;
            }
        }
    }
}

TEST_CASE("energy gap between the axis equilibria has its closed form") {
    const ModelConstants c = build_constants();
    for (const double Lp : {0.01, 0.1, 0.8, 2.0}) {
        const auto ep = equilibrium_for(OrbitKind::vertical_lyapunov, Lp, c);
        const auto em = equilibrium_for(OrbitKind::planar_lyapunov, Lp, c);
        const double gap = reduced_hamiltonian(ep.point, c) - reduced_hamiltonian(em.point, c);
        const double expected = (c.k2 * Lp - c.omega * c.delta_star) * Lp;
        CHECK(gap == Catch::Approx(expected).margin(1e-15 * std::max(1.0, std::abs(expected))));
    }
}

TEST_CASE("orbit kinds map to families and absent kinds are rejected") {
    const ModelConstants c = build_constants();
    CHECK(equilibrium_for(OrbitKind::vertical_lyapunov, 0.05, c).family ==
          EquilibriumFamily::Ep1);
    CHECK(equilibrium_for(OrbitKind::planar_lyapunov, 0.05, c).family == EquilibriumFamily::Em1);
    CHECK(equilibrium_for(OrbitKind::halo_north, 0.1, c).family == EquilibriumFamily::Ep2);
    CHECK(equilibrium_for(OrbitKind::halo_south, 0.1, c).family == EquilibriumFamily::Em2);
    CHECK(equilibrium_for(OrbitKind::bridge_a, 1.3, c).family == EquilibriumFamily::Ep3);
    CHECK_THROWS_AS(equilibrium_for(OrbitKind::halo_north, 0.05, c), domain_error);
    CHECK_THROWS_AS(equilibrium_for(OrbitKind::bridge_a, 0.5, c), domain_error);
    CHECK_THROWS_AS(equilibrium_for(OrbitKind::bridge_b, 2.0, c), domain_error);
    CHECK_THROWS_AS(equilibria(0.0, c), domain_error);
    CHECK_THROWS_AS(equilibria(-0.1, c), domain_error);
    for (const char* name : {"vertical-lyapunov", "planar-lyapunov", "halo-north", "halo-south",
                             "bridge-a", "bridge-b"})
        CHECK(to_string(parse_orbit_kind(name)) == name);
    CHECK_THROWS_AS(parse_orbit_kind("spiral"), domain_error);
}

TEST_CASE("level curves lie on the sphere at the requested energy") {
    const ModelConstants c = build_constants();
    const double Lp = 0.1;
    const auto ep = equilibrium_for(OrbitKind::vertical_lyapunov, Lp, c);
    const auto em = equilibrium_for(OrbitKind::planar_lyapunov, Lp, c);
    const double h =
        0.5 * (reduced_hamiltonian(ep.point, c) + reduced_hamiltonian(em.point, c));
    const auto pts = level_curve(Lp, h, 400, c);
    REQUIRE(pts.size() > 100);
    for (const auto& lc : pts) {
        CHECK(std::abs(lc.p.radius() - 0.5 * Lp) <= 1e-12);
        CHECK(std::abs(reduced_hamiltonian(lc.p, c) - h) <= 1e-9);
        CHECK((lc.branch >= 0 && lc.branch < 4));
    }
    CHECK_THROWS_AS(level_curve(-1.0, h, 400, c), domain_error);
    CHECK_THROWS_AS(level_curve(Lp, h, 1, c), domain_error);
    CHECK_THROWS_AS(count_level_components(Lp, h, 1, c), domain_error);
}

TEST_CASE("level-set component counts between critical levels") {
    const ModelConstants c = build_constants();
    const BifurcationThresholds th = thresholds(c);
    const struct {
        double Lp;
        std::size_t n_eq;
        std::vector<int> counts;
    } cases[] = {
        {0.05, 2, {1}},
        {0.1, 4, {1, 2}},
        {0.7, 4, {1, 2}},
        {th.Ltilde, 6, {2, 2}},
        {2.5, 4, {1, 2}},
    };
    for (const auto& k : cases) {
        CHECK(equilibria(k.Lp, c).size() == k.n_eq);
        const auto lev = critical_levels(k.Lp, c);
        REQUIRE(lev.size() == k.counts.size() + 1);
        for (std::size_t i = 0; i + 1 < lev.size(); ++i) {
            const double mid = 0.5 * (lev[i] + lev[i + 1]);
            CHECK(count_level_components(k.Lp, mid, 2001, c) == k.counts[i]);
        }
    }
}

TEST_CASE("first-order periods at a small sphere") {
    const ModelConstants c = build_constants();
    bool warned = true;
    const auto ep = equilibrium_for(OrbitKind::vertical_lyapunov, 0.001, c);
    CHECK(period_estimate(ep, c, &warned) == Catch::Approx(3.139650549).margin(1e-8));
    CHECK_FALSE(warned);
    const auto em = equilibrium_for(OrbitKind::planar_lyapunov, 0.001, c);
    CHECK(period_estimate(em, c, &warned) == Catch::Approx(3.033019324).margin(1e-8));
    CHECK_FALSE(warned);
    const auto halo = equilibrium_for(OrbitKind::halo_north, 0.08, c);
    CHECK(period_estimate(halo, c, &warned) ==
          Catch::Approx(3.030779141294538).epsilon(1e-12));
    CHECK_FALSE(warned);
}

TEST_CASE("period formula is flagged unusable for pole-hugging equilibria") {
    const ModelConstants c = build_constants();
    const BifurcationThresholds th = thresholds(c);
    // Just off Ltilde the halo equilibria sit next to the poles, where the
    // anomaly rate degenerates; the estimate must warn instead of returning
    // a spurious number.
    const auto halo = equilibrium_for(OrbitKind::halo_north, th.Ltilde * (1.0 + 1e-6), c);
    bool warned = false;
    const double T = period_estimate(halo, c, &warned);
    CHECK(warned);
    CHECK(std::isinf(T));
}

TEST_CASE("nonlinear winding about the vertical equilibrium matches the linearization") {
    const ModelConstants c = build_constants();
    const double Lp = 1e-2;
    const auto eq = equilibrium_for(OrbitKind::vertical_lyapunov, Lp, c);
    const auto J = reduced_flow_jacobian(eq.point, c);
    // On the I1 axis the tangent plane is (I2, I3) and the block is
    // [[0, J23], [J32, 0]] with J23 J32 < 0: a linear center of rate
    // sqrt(-J23 J32).
    const double rate_linear = std::sqrt(-J[1][2] * J[2][1]);
    // Unwrap the polar angle over 40 linear periods, stepping in slices
    // short enough to keep the per-slice rotation below pi.
    HopfPoint p{eq.point.I1, 0.0, 1e-8, Lp};
    const double t_end = 40.0 * 2.0 * M_PI / rate_linear;
    const int slices = 400;
    double theta = 0.0, prev = std::atan2(p.I3, p.I2);
    for (int i = 0; i < slices; ++i) {
        p = integrate_reduced(p, t_end / slices, c).points.back();
        const double a = std::atan2(p.I3, p.I2);
        theta += std::remainder(a - prev, 2.0 * M_PI);
        prev = a;
    }
    const double rate_measured = std::abs(theta) / t_end;
    CHECK(rate_measured == Catch::Approx(rate_linear).epsilon(1e-6));
    CHECK(rate_linear == Catch::Approx(0.075284281).margin(1e-8));
}

TEST_CASE("long reduced integrations preserve the sphere and the energy") {
    const ModelConstants c = build_constants();
    const HopfPoint p0 = to_hopf(MeanLissajousState{0.0, 0.6, 0.08, 0.024}, c);
    const auto tr = integrate_reduced(p0, 1e4, c);
    REQUIRE(tr.points.size() > 100);
    REQUIRE(tr.times.back() == Catch::Approx(1e4));
    const double R0 = p0.radius(), H0 = reduced_hamiltonian(p0, c);
    double worst_r = 0.0, worst_h = 0.0;
    for (const auto& p : tr.points) {
        worst_r = std::max(worst_r, std::abs(p.radius() - R0));
        worst_h = std::max(worst_h, std::abs(reduced_hamiltonian(p, c) - H0));
    }
    CHECK(worst_r <= 1e-10);
    CHECK(worst_h <= 1e-10);
}
