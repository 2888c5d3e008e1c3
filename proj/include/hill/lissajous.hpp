#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "hill/constants.hpp"
#include "hill/errors.hpp"
#include "hill/states.hpp"

namespace hill {

/// One trigonometric monomial of a Hamiltonian or correction table:
///   (num_const + num_om2 * omega^2) / den * d^dpow * s^spow
/// attached to the harmonic g_mult * g + l_mult * ell.
struct TrigTableEntry {
    int g_mult;
    int l_mult;
    std::int64_t num_const;
    std::int64_t num_om2;
    std::int64_t den;
    int dpow;
    int spow;

    double coefficient(double omega2, double d, double s) const {
        double value = (static_cast<double>(num_const) + static_cast<double>(num_om2) * omega2) /
                       static_cast<double>(den);
        for (int i = 0; i < dpow; ++i) value *= d;
        for (int i = 0; i < spow; ++i) value *= s;
        return value;
    }
    double angle(double g, double ell) const { return g_mult * g + l_mult * ell; }
};

/// First-order cosine table (prefactor delta/4 * omega^2).
inline constexpr std::array<TrigTableEntry, 7> a1_even_entries{{
    {0, -2, 1, 0, 1, 1, 1},
    {0, 0, -1, 0, 1, 2, 0},
    {0, 0, -1, 0, 1, 0, 2},
    {0, 2, 1, 0, 1, 1, 1},
    {2, -2, 1, 0, 1, 2, 0},
    {2, 0, -2, 0, 1, 1, 1},
    {2, 2, 1, 0, 1, 0, 2},
}};

/// First-order sine table (prefactor 3/448 * rho^2 * tau * omega).
inline constexpr std::array<TrigTableEntry, 10> a1_odd_entries{{
    {1, -3, 7, -10, 1, 2, 1},
    {1, -1, 86, -20, 1, 1, 2},
    {1, -1, 3, 6, 1, 3, 0},
    {1, 1, 86, -20, 1, 2, 1},
    {1, 1, 3, 6, 1, 0, 3},
    {1, 3, 7, -10, 1, 1, 2},
    {3, -3, 11, -2, 1, 3, 0},
    {3, -1, -43, 10, 1, 2, 1},
    {3, 1, -43, 10, 1, 1, 2},
    {3, 3, 11, -2, 1, 0, 3},
}};

/// Second-order cosine table (prefactor 9 rho / 62842304).
inline constexpr std::array<TrigTableEntry, 22> a2_entries{{
    {0, -4, -267911145, 4093434, 4, 2, 2},
    {0, -2, -21744207, 13803270, 2, 3, 1},
    {0, -2, -21744207, 13803270, 2, 1, 3},
    {0, 0, 163349271, -14200710, 4, 4, 0},
    {0, 0, 163349271, -14200710, 4, 0, 4},
    {0, 0, -212400873, 39782394, 1, 2, 2},
    {0, 4, -267911145, 4093434, 4, 2, 2},
    {0, 2, -21744207, 13803270, 2, 3, 1},
    {0, 2, -21744207, 13803270, 2, 1, 3},
    {2, -4, 13096395, 4343546, 1, 3, 1},
    {2, -2, 168872391, -37196094, 1, 2, 2},
    {2, -2, -45973827, 8226998, 1, 4, 0},
    {2, 0, 52735185, -14764338, 1, 3, 1},
    {2, 0, 52735185, -14764338, 1, 1, 3},
    {2, 2, 168872391, -37196094, 1, 2, 2},
    {2, 2, -45973827, 8226998, 1, 0, 4},
    {2, 4, 13096395, 4343546, 1, 1, 3},
    {4, -4, 35821341, -9394466, 4, 4, 0},
    {4, -2, 3324843, -622142, 1, 3, 1},
    {4, 0, -187700841, 44771994, 2, 2, 2},
    {4, 2, 3324843, -622142, 1, 1, 3},
    {4, 4, 35821341, -9394466, 4, 0, 4},
}};

/// Semi-axis-like state functions of the elliptic oscillator.
struct StateFunctions {
    double s;  ///< sqrt((L+G)/(2 omega))
    double d;  ///< sqrt((L-G)/(2 omega))
};

inline StateFunctions state_functions(double L, double G, const ModelConstants& c) {
    if (L < 0.0) throw domain_error("state_functions: L must be nonnegative");
    if (std::abs(G) > L * (1.0 + 1e-12) + 1e-300)
        throw domain_error("state_functions: |G| exceeds L");
    const double sp = std::max(0.0, (L + G) / (2.0 * c.omega));
    const double dp = std::max(0.0, (L - G) / (2.0 * c.omega));
    return StateFunctions{std::sqrt(sp), std::sqrt(dp)};
}

/// Elliptic-oscillator chart -> center-manifold coordinates.
inline CMState lissajous_to_cm(const LissajousState& s, const ModelConstants& c) {
    const StateFunctions f = state_functions(s.L, s.G, c);
    const double ca = std::cos(s.g + s.ell), sa = std::sin(s.g + s.ell);
    const double cb = std::cos(s.g - s.ell), sb = std::sin(s.g - s.ell);
    CMState out;
    out.y2 = f.s * ca - f.d * cb;
    out.z2 = f.s * sa - f.d * sb;
    out.Y2 = -c.omega * (f.s * sa + f.d * sb);
    out.Z2 = c.omega * (f.s * ca + f.d * cb);
    return out;
}

/// Inverse chart. The two counter-rotating circular components have complex
/// amplitudes s e^{i(g+ell)} and d e^{i(g-ell)}, recovered from the state.
/// Convention at |G| = L (one amplitude zero): g = 0, full phase in ell.
inline LissajousState cm_to_lissajous(const CMState& s, const ModelConstants& c) {
    const double w = c.omega;
    const double L = (0.5 * (s.Y2 * s.Y2 + s.Z2 * s.Z2) + 0.5 * w * w * (s.y2 * s.y2 + s.z2 * s.z2)) / w;
    if (L <= 0.0) throw domain_error("cm_to_lissajous: zero state has no angle chart");
    const double G = s.y2 * s.Z2 - s.z2 * s.Y2;
    // 2 s cos(a) = y2 + Z2/w, 2 s sin(a) = z2 - Y2/w   with a = g + ell;
    // 2 d cos(b) = Z2/w - y2, 2 d sin(b) = -(z2 + Y2/w) with b = g - ell.
    const double sc = s.y2 + s.Z2 / w, ss = s.z2 - s.Y2 / w;
    const double dc = s.Z2 / w - s.y2, ds = -(s.z2 + s.Y2 / w);
    LissajousState out;
    out.L = L;
    out.G = std::max(-L, std::min(L, G));
    if (L - G <= 1e-14 * L) {  // d = 0: circular, only a defined
        out.g = 0.0;
        out.ell = std::atan2(ss, sc);
    } else if (L + G <= 1e-14 * L) {  // s = 0: circular retrograde, only b defined
        out.g = 0.0;
        out.ell = -std::atan2(ds, dc);
    } else {
        const double a = std::atan2(ss, sc);
        const double b = std::atan2(ds, dc);
        out.g = 0.5 * (a + b);
        out.ell = 0.5 * (a - b);
    }
    return out;
}

/// Oscillator energy in the elliptic chart: A0 + A1 + A2/2 assembled from
/// the three coefficient tables.
inline double lissajous_hamiltonian(const LissajousState& st, const ModelConstants& c) {
    const StateFunctions f = state_functions(st.L, st.G, c);
    const double w2 = c.omega * c.omega;
    double a1 = 0.0;
    for (const auto& e : a1_even_entries)
        a1 += 0.25 * c.delta * w2 * e.coefficient(w2, f.d, f.s) * std::cos(e.angle(st.g, st.ell));
    for (const auto& e : a1_odd_entries)
        a1 += 3.0 / 448.0 * c.rho * c.rho * c.tau * c.omega * e.coefficient(w2, f.d, f.s) *
              std::sin(e.angle(st.g, st.ell));
    double a2 = 0.0;
    for (const auto& e : a2_entries)
        a2 += 9.0 * c.rho / 62842304.0 * e.coefficient(w2, f.d, f.s) *
              std::cos(e.angle(st.g, st.ell));
    return c.omega * st.L + a1 + 0.5 * a2;
}

}  // namespace hill
