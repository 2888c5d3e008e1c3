#pragma once

#include <cmath>
#include <vector>

#include "hill/center_manifold.hpp"
#include "hill/constants.hpp"
#include "hill/errors.hpp"
#include "hill/hill_model.hpp"
#include "hill/hopf.hpp"
#include "hill/lissajous.hpp"
#include "hill/normalization.hpp"
#include "hill/states.hpp"

namespace hill {

struct OrbitSample {
    double ell;      ///< mean anomaly-like phase
    RotState state;  ///< orbit point in the original rotating frame
};

struct SynthesizedOrbit {
    OrbitKind family;
    double Lp;
    std::vector<OrbitSample> samples;  ///< closed: last sample repeats the first
    double period = 0.0;               ///< first-order analytic period
    double seed_phase = 0.0;           ///< recommended phase for correction seeds
    bool period_warning = false;
    bool corrections_skipped = false;  ///< near-circular guard tripped somewhere
};

/// Phase at which the analytic approximation seeds the corrector best.
inline double recommended_seed(OrbitKind family) {
    return family == OrbitKind::planar_lyapunov ? M_PI : 0.0;
}

/// One sample of the analytic orbit attached to a reduced equilibrium:
/// mean elements -> osculating elements -> center-manifold coordinates ->
/// saddle corrections -> linear change -> shifted origin.
inline RotState synthesized_state(const ReducedEquilibrium& eq, double ell,
                                  const ModelConstants& c, bool* skipped = nullptr) {
    const MeanLissajousState mean = from_hopf(eq.point, ell, c);
    const LissajousState osc = short_period_corrections(mean, c, skipped);
    const CMState cm = lissajous_to_cm(osc, c);
    const DecoupledState dec = cm_to_decoupled(cm, c);
    const LocalState local = t2_inverse(dec, c);
    return translate_t1_inverse(local);
}

/// Closed analytic orbit for a family that exists at this Lp, sampled at
/// n_samples uniform phases (plus the repeated closing point).
inline SynthesizedOrbit synthesize(OrbitKind family, double Lp, int n_samples,
                                   const ModelConstants& c) {
    if (n_samples < 1) throw domain_error("synthesize: need at least one sample");
    const ReducedEquilibrium eq = equilibrium_for(family, Lp, c);

    SynthesizedOrbit orbit;
    orbit.family = family;
    orbit.Lp = Lp;
    orbit.seed_phase = recommended_seed(family);
    orbit.period = period_estimate(eq, c, &orbit.period_warning);
    orbit.samples.reserve(static_cast<std::size_t>(n_samples) + 1);
    for (int k = 0; k < n_samples; ++k) {
        const double ell = 2.0 * M_PI * static_cast<double>(k) / n_samples;
        bool skipped = false;
        orbit.samples.push_back({ell, synthesized_state(eq, ell, c, &skipped)});
        orbit.corrections_skipped = orbit.corrections_skipped || skipped;
    }
    orbit.samples.push_back({2.0 * M_PI, orbit.samples.front().state});
    return orbit;
}

inline SynthesizedOrbit synthesize(OrbitKind family, double Lp, const ModelConstants& c) {
    return synthesize(family, Lp, 256, c);
}

}  // namespace hill
