#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <hill/hill.hpp>

using namespace hill;

namespace {

// Analytic vertical-oscillation seed at sphere parameter 0.001 and the
// Newton-refined members used as monodromy subjects below.
const RotState seed001{0.6931528075981269, 0.0, 0.0,
                       0.0, 0.6928173472492271, 0.0632613228738434};
const RotState vertical02{0.6893956569342028, 0.0, 0.0,
                          0.0, 0.6813883344923328, 0.28253190082387053};
constexpr double vertical02_period = 3.1518489951723554;
const RotState planar_orbit{0.7379701248155791, 0.0, 0.0,
                            0.0, 0.42223625149864685, 0.0};
constexpr double planar_period = 3.0448193885572428;

double state_distance(const RotState& a, const RotState& b) {
    return max_abs({a.px - b.px, a.py - b.py, a.pz - b.pz,
                    a.Px - b.Px, a.Py - b.Py, a.Pz - b.Pz});
}

}  // namespace

TEST_CASE("flow holds the equilibrium in place") {
    const auto [plus, minus] = libration_points();
    // The equilibrium is exponentially unstable (rate ~2.5), so roundoff
    // seeds grow fast; a short horizon keeps the test meaningful.
    CHECK(state_distance(flow_state(plus, 3.0), plus) <= 1e-9);
    CHECK(state_distance(flow_state(minus, 3.0), minus) <= 1e-9);
}

TEST_CASE("energy is conserved along a long propagation") {
    const double H0 = hamiltonian(seed001);
    const Trajectory tr = propagate(seed001, 50.0);
    double worst = 0.0;
    for (const auto& s : tr.states) worst = std::max(worst, std::abs(hamiltonian(s) - H0));
    CHECK(worst <= 1e-9);
}

TEST_CASE("dense output interpolates the flow map") {
    const Trajectory tr = propagate(seed001, 5.0);
    CHECK(tr.t_begin() == 0.0);
    CHECK(tr.t_end() == Catch::Approx(5.0));
    double worst = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double t = 5.0 * i / 20.0;
        worst = std::max(worst, state_distance(tr.at(t), flow_state(seed001, t)));
    }
    CHECK(worst <= 1e-10);
    CHECK_THROWS_AS(tr.at(5.5), domain_error);
    CHECK_THROWS_AS(tr.at(-0.5), domain_error);
}

TEST_CASE("backward integration undoes forward integration") {
    const RotState fwd = flow_state(seed001, 1.0);
    const RotState back = flow_state(fwd, -1.0);
    CHECK(state_distance(back, seed001) <= 1e-10);
}

TEST_CASE("state-transition matrix matches flow-map finite differences") {
    const double T = 2.0;
    const Mat6 stm = variational_flow(seed001, T).stm;
    const double h = 1e-7;
    for (int j = 0; j < 6; ++j) {
        auto up = seed001.to_array(), dn = seed001.to_array();
        up[j] += h;
        dn[j] -= h;
        const auto fu = flow_state(RotState::from_array(up), T).to_array();
        const auto fd = flow_state(RotState::from_array(dn), T).to_array();
        for (int i = 0; i < 6; ++i) {
            const double fdij = (fu[i] - fd[i]) / (2.0 * h);
            CHECK(stm(i, j) == Catch::Approx(fdij).margin(1e-5 * std::max(1.0, std::abs(fdij))));
        }
    }
}

TEST_CASE("monodromy of the refined vertical orbit") {
    const Monodromy m = monodromy(vertical02, vertical02_period);
    CHECK_FALSE(m.planar);
    CHECK_FALSE(m.non_periodic_warning);
    CHECK_FALSE(m.complex_index_flag);
    CHECK(m.periodicity_residual <= 1e-8);
    CHECK(std::abs(m.M.determinant() - 1.0) <= 1e-8);
    CHECK(symplectic_defect(m.M) <= 1e-7);
    CHECK(m.s1 == Catch::Approx(2550.48).margin(0.01));
    CHECK(m.s2 == Catch::Approx(1.9384).margin(1e-3));
}

TEST_CASE("monodromy of the refined planar orbit uses the decoupled block") {
    const Monodromy m = monodromy(planar_orbit, planar_period);
    CHECK(m.planar);
    CHECK_FALSE(m.non_periodic_warning);
    CHECK(m.periodicity_residual <= 1e-8);
    CHECK(symplectic_defect(m.M) <= 1e-7);
    CHECK(m.s1 == Catch::Approx(1937.6).margin(0.1));
    CHECK(m.s2 == Catch::Approx(1.9648).margin(1e-3));
}

TEST_CASE("a wrong period is flagged, not silently accepted") {
    const Monodromy m = monodromy(vertical02, vertical02_period * 1.01);
    CHECK(m.non_periodic_warning);
    CHECK(m.periodicity_residual >= 1e-4);
}

TEST_CASE("tiny vertical orbits recover the linear-theory multiplier") {
    const ModelConstants c = build_constants();
    const SynthesizedOrbit orbit = synthesize(OrbitKind::vertical_lyapunov, 1e-5, c);
    const PeriodicOrbit po = correct(orbit.samples.front().state, orbit.period);
    CHECK(po.period == Catch::Approx(3.14159773).margin(1e-6));
    const Monodromy m = monodromy(po.ic, po.period);
    // As the orbit shrinks onto the equilibrium the in-plane index tends to
    // 2 cosh(lambda T) with lambda the saddle rate of the linearization.
    const double predicted = 2.0 * std::cosh(c.lambda * po.period);
    CHECK(std::abs(m.s1 - predicted) / predicted <= 1e-3);
    CHECK(m.s1 == Catch::Approx(2643.866).margin(0.5));
    CHECK(m.s2 == Catch::Approx(1.9496).margin(1e-3));
}

TEST_CASE("index scaling is odd, fixed at the marginal value, and monotone") {
    CHECK(scaled_stability_index(0.0) == 0.0);
    CHECK(scaled_stability_index(2.0) == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(scaled_stability_index(-2.0) == Catch::Approx(-2.0).epsilon(1e-14));
    CHECK(scaled_stability_index(5.0) == -scaled_stability_index(-5.0));
    CHECK(scaled_stability_index(2550.0) ==
          Catch::Approx(2.0 * std::asinh(2550.0) / std::asinh(2.0)).epsilon(1e-14));
    double prev = scaled_stability_index(0.1);
    for (double s = 0.5; s < 100.0; s *= 2.0) {
        const double cur = scaled_stability_index(s);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("propagation rejects bad tolerances and collisions") {
    CHECK_THROWS_AS(propagate(seed001, 1.0, 1e-15), domain_error);
    CHECK_THROWS_AS(propagate(seed001, 1.0, 1e-5), domain_error);
    CHECK_THROWS_AS(flow_state(seed001, 1.0, 1e-15), domain_error);
    CHECK_THROWS_AS(monodromy(seed001, 0.0), domain_error);
    CHECK_THROWS_AS(monodromy(seed001, -1.0), domain_error);

    // Starting inside the collision radius.
    const RotState inside{5e-4, 0.0, 0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(propagate(inside, 1.0), collision_error);
    // Passing through it mid-flight; also catchable as the base class.
    const RotState plunging{0.3, 0.05, 0.1, 0.02, 0.1, 0.05};
    CHECK_THROWS_AS(flow_state(plunging, 3.0), collision_error);
    CHECK_THROWS_AS(flow_state(plunging, 3.0), numerical_error);
    CHECK_THROWS_WITH(flow_state(plunging, 3.0),
                      Catch::Matchers::ContainsSubstring("collision radius"));
}

TEST_CASE("planar flag reflects confinement to the symmetry plane") {
    CHECK(variational_flow(planar_orbit, 2.0).planar);
    CHECK_FALSE(variational_flow(vertical02, 2.0).planar);
}
