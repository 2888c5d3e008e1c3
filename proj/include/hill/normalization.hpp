#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "hill/constants.hpp"
#include "hill/errors.hpp"
#include "hill/lissajous.hpp"
#include "hill/states.hpp"

namespace hill {

/// Averaged (mean-element) energy: B0 + B1 + B2/2 in primed variables.
inline double normalized_hamiltonian(const MeanLissajousState& st, const ModelConstants& c) {
    const StateFunctions f = state_functions(st.L, st.G, c);
    const double P = c.omega * f.s * f.d;  // omega s' d'
    const double b1 = -0.25 * c.delta * c.omega * (st.L + 2.0 * P * std::cos(2.0 * st.g));
    const double half_b2 = 0.25 * c.delta * b1 - c.k1 * st.L * st.L +
                           c.k2 * st.L * P * std::cos(2.0 * st.g) -
                           c.k3 * P * P * std::cos(4.0 * st.g) + 0.25 * c.k4 * st.G * st.G;
    return c.omega * st.L + b1 + half_b2;
}

/// One row of the short-period correction table: harmonic multipliers plus
/// the monomial lists for the L, ell and g columns. The G column is derived,
/// G = (g_mult / l_mult) * L. Rows with even g_mult belong to the detuning
/// group (prefactor delta/4, cos for momenta / sin for angles); rows with
/// odd g_mult to the coupling group (prefactor rho^2 tau omega / 4032,
/// sin for momenta / cos for angles).
struct CorrectionRow {
    int g_mult;
    int l_mult;
    std::vector<TrigTableEntry> L;    ///< stored as the header-scaled L/(4 s d omega)
    std::vector<TrigTableEntry> ell;
    std::vector<TrigTableEntry> g;
};

inline const std::vector<CorrectionRow>& correction_rows() {
    // Caption constants as rationals in omega^2:
    //   c13 = (7 w2 - 256)/3, c31 = 43 w2 - 184, c33 = 11 w2 - 32,
    //   c0 = c31 - 4 c33 = -(w2 + 56), c2 = 5 c31 - 36 c33 = 232 - 181 w2.
    static const std::vector<CorrectionRow> rows = [] {
        auto e = [](std::int64_t nc, std::int64_t no, std::int64_t den, int dp, int sp) {
            return TrigTableEntry{0, 0, nc, no, den, dp, sp};
        };
        std::vector<CorrectionRow> r;
        r.push_back({-2, 2, {e(-1, 0, 1, 2, 0)}, {e(1, 0, 1, 1, 1)}, {e(-1, 0, 1, 1, 1)}});
        r.push_back({0, 2,
                     {e(-2, 0, 1, 1, 1)},
                     {e(1, 0, 1, 2, 0), e(1, 0, 1, 0, 2)},
                     {e(1, 0, 1, 2, 0), e(-1, 0, 1, 0, 2)}});
        r.push_back({2, 2, {e(-1, 0, 1, 0, 2)}, {e(1, 0, 1, 1, 1)}, {e(1, 0, 1, 1, 1)}});
        r.push_back({1, -3,
                     {e(256, -7, 1, 2, 1)},                       // -3 c13 d^2 s
                     {e(-256, 7, 3, 3, 0), e(-512, 14, 3, 1, 2)},  // c13 (d^2 + 2 s^2) d
                     {e(-256, 7, 3, 3, 0), e(512, -14, 3, 1, 2)}});  // c13 (d^2 - 2 s^2) d
        r.push_back({1, -1,
                     {e(-168, -3, 1, 3, 0), e(368, -86, 1, 1, 2)},   // 3 c0 d^3 - 2 c31 d s^2
                     {e(-368, 86, 1, 0, 3), e(-232, 181, 1, 2, 1)},  // 2 c31 s^3 - c2 d^2 s
                     {e(368, -86, 1, 0, 3), e(-1240, 163, 1, 2, 1)}});  // 8 c31 d^2 s - ell
        r.push_back({1, 1,
                     {e(-168, -3, 1, 0, 3), e(368, -86, 1, 2, 1)},
                     {e(232, -181, 1, 1, 2), e(368, -86, 1, 3, 0)},  // c2 d s^2 - 2 c31 d^3
                     {e(-1240, 163, 1, 1, 2), e(368, -86, 1, 3, 0)}});  // 8 c31 d s^2 + ell
        r.push_back({1, 3,
                     {e(256, -7, 1, 1, 2)},                       // -3 c13 d s^2
                     {e(512, -14, 3, 2, 1), e(256, -7, 3, 0, 3)},  // -c13 (2 d^2 + s^2) s
                     {e(512, -14, 3, 2, 1), e(-256, 7, 3, 0, 3)}});  // c13 (s^2 - 2 d^2) s
        r.push_back({3, -3, {e(32, -11, 1, 3, 0)}, {e(-32, 11, 1, 2, 1)}, {e(32, -11, 1, 2, 1)}});
        r.push_back({3, -1,
                     {e(-184, 43, 1, 2, 1)},                       // c31 d^2 s
                     {e(184, -43, 1, 3, 0), e(368, -86, 1, 1, 2)},  // -c31 (d^2 + 2 s^2) d
                     {e(184, -43, 1, 3, 0), e(-368, 86, 1, 1, 2)}});  // c31 (2 s^2 - d^2) d
        r.push_back({3, 1,
                     {e(-184, 43, 1, 1, 2)},
                     {e(-368, 86, 1, 2, 1), e(-184, 43, 1, 0, 3)},  // c31 (2 d^2 + s^2) s
                     {e(-368, 86, 1, 2, 1), e(184, -43, 1, 0, 3)}});  // c31 (2 d^2 - s^2) s
        r.push_back({3, 3, {e(32, -11, 1, 0, 3)}, {e(32, -11, 1, 1, 2)}, {e(32, -11, 1, 1, 2)}});
        return r;
    }();
    return rows;
}

namespace detail {

inline double poly_value(const std::vector<TrigTableEntry>& entries, double w2, double d, double s) {
    double v = 0.0;
    for (const auto& e : entries) v += e.coefficient(w2, d, s);
    return v;
}

}  // namespace detail

/// First-order periodic corrections Delta(ell, g, L, G) evaluated at the
/// given elements. Momenta take cos (detuning rows) / sin (coupling rows);
/// angles take the quarter-period-shifted counterparts.
inline LissajousState short_period_delta(const LissajousState& st, const ModelConstants& c) {
    const StateFunctions f = state_functions(st.L, st.G, c);
    const double sd4 = 4.0 * f.s * f.d;
    const double w2 = c.omega * c.omega;
    const double pref_even = 0.25 * c.delta;
    const double pref_odd = c.rho * c.rho * c.tau * c.omega / 4032.0;
    LissajousState delta{0.0, 0.0, 0.0, 0.0};
    for (const auto& row : correction_rows()) {
        const bool even = row.g_mult % 2 == 0;
        const double pref = even ? pref_even : pref_odd;
        const double arg = row.g_mult * st.g + row.l_mult * st.ell;
        const double trig_momenta = even ? std::cos(arg) : std::sin(arg);
        const double trig_angles = even ? std::sin(arg) : std::cos(arg);
        // Header convention: the stored L column is L/(4 s d omega), so the
        // 1/(4 s d) of the correction formula cancels, leaving a net omega.
        const double EL = detail::poly_value(row.L, w2, f.d, f.s);
        delta.L += pref * EL * c.omega * trig_momenta;
        delta.G += pref * EL * c.omega * trig_momenta * row.g_mult / row.l_mult;
        delta.ell += pref * detail::poly_value(row.ell, w2, f.d, f.s) / sd4 * trig_angles;
        delta.g += pref * detail::poly_value(row.g, w2, f.d, f.s) / sd4 * trig_angles;
    }
    return delta;
}

/// Relative s d size below which the corrections are skipped (apparent
/// 1/(s d) factors make the angle corrections ill-defined at circular states).
inline constexpr double near_circular_cutoff = 1e-9;

inline bool near_circular(const LissajousState& st, const ModelConstants& c) {
    const StateFunctions f = state_functions(st.L, st.G, c);
    return f.s * f.d < near_circular_cutoff * st.L;
}

/// Mean -> osculating elements (adds the periodic corrections evaluated at
/// the mean state). Near-circular states are passed through unchanged and
/// flagged via `skipped` when provided.
inline LissajousState short_period_corrections(const MeanLissajousState& mean,
                                               const ModelConstants& c,
                                               bool* skipped = nullptr) {
    if (skipped) *skipped = false;
    if (near_circular(mean, c)) {
        if (skipped) *skipped = true;
        return mean;
    }
    const LissajousState d = short_period_delta(mean, c);
    LissajousState out = mean;
    out.ell += d.ell;
    out.g += d.g;
    out.L += d.L;
    out.G += d.G;
    return out;
}

/// Osculating -> mean elements (first-order inverse: subtract the
/// corrections evaluated at the osculating state).
inline MeanLissajousState short_period_corrections_inverse(const LissajousState& osc,
                                                           const ModelConstants& c,
                                                           bool* skipped = nullptr) {
    if (skipped) *skipped = false;
    if (near_circular(osc, c)) {
        if (skipped) *skipped = true;
        return osc;
    }
    const LissajousState d = short_period_delta(osc, c);
    MeanLissajousState out = osc;
    out.ell -= d.ell;
    out.g -= d.g;
    out.L -= d.L;
    out.G -= d.G;
    return out;
}

/// Boundedness audit of the assembled correction coefficients at the two
/// circular limits d -> 0 and s -> 0. Momentum columns carry no 1/(s d)
/// factor and are always finite; an angle column stays finite only if every
/// one of its monomials retains the corresponding s or d power.
struct CorrectionAuditRow {
    int g_mult;
    int l_mult;
    char column;      ///< 'l' or 'g'
    bool bounded_d0;  ///< finite as d -> 0 (G -> +L)
    bool bounded_s0;  ///< finite as s -> 0 (G -> -L)
};

inline std::vector<CorrectionAuditRow> correction_audit() {
    std::vector<CorrectionAuditRow> audit;
    for (const auto& row : correction_rows()) {
        for (const auto& [column, entries] :
             {std::pair<char, const std::vector<TrigTableEntry>*>{'l', &row.ell},
              std::pair<char, const std::vector<TrigTableEntry>*>{'g', &row.g}}) {
            bool d0 = true, s0 = true;
            for (const auto& e : *entries) {
                if (e.dpow < 1) d0 = false;
                if (e.spow < 1) s0 = false;
            }
            audit.push_back({row.g_mult, row.l_mult, column, d0, s0});
        }
    }
    return audit;
}

}  // namespace hill
