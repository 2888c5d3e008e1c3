#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hill/errors.hpp"

namespace hill {

struct IntegratorOptions {
    double rtol = 1e-12;
    double atol = 1e-12;
    double initial_step = 0.0;  ///< 0 = choose automatically
    double max_step = 0.0;      ///< 0 = unlimited
    long long max_steps = 10000000;
    bool dense = false;  ///< record interpolation coefficients per step
};

namespace dop853 {

// Dormand-Prince 8(5,3) tableau.
inline constexpr double c2 = 0.526001519587677318785587544488e-01;
inline constexpr double c3 = 0.789002279381515978178381316732e-01;
inline constexpr double c4 = 0.118350341907227396726757197510e+00;
inline constexpr double c5 = 0.281649658092772603273242802490e+00;
inline constexpr double c6 = 0.333333333333333333333333333333e+00;
inline constexpr double c7 = 0.25e+00;
inline constexpr double c8 = 0.307692307692307692307692307692e+00;
inline constexpr double c9 = 0.651282051282051282051282051282e+00;
inline constexpr double c10 = 0.6e+00;
inline constexpr double c11 = 0.857142857142857142857142857142e+00;
inline constexpr double c14 = 0.1e+00;
inline constexpr double c15 = 0.2e+00;
inline constexpr double c16 = 0.777777777777777777777777777778e+00;

inline constexpr double a21 = 5.26001519587677318785587544488e-2;
inline constexpr double a31 = 1.97250569845378994544595329183e-2;
inline constexpr double a32 = 5.91751709536136983633785987549e-2;
inline constexpr double a41 = 2.95875854768068491816892993775e-2;
inline constexpr double a43 = 8.87627564304205475450678981324e-2;
inline constexpr double a51 = 2.41365134159266685502369798665e-1;
inline constexpr double a53 = -8.84549479328286085344864962717e-1;
inline constexpr double a54 = 9.24834003261792003115737966543e-1;
inline constexpr double a61 = 3.7037037037037037037037037037e-2;
inline constexpr double a64 = 1.70828608729473871279604482173e-1;
inline constexpr double a65 = 1.25467687566822425016691814123e-1;
inline constexpr double a71 = 3.7109375e-2;
inline constexpr double a74 = 1.70252211019544039314978060272e-1;
inline constexpr double a75 = 6.02165389804559606850219397283e-2;
inline constexpr double a76 = -1.7578125e-2;
inline constexpr double a81 = 3.70920001185047927108779319836e-2;
inline constexpr double a84 = 1.70383925712239993810214054705e-1;
inline constexpr double a85 = 1.07262030446373284651809199168e-1;
inline constexpr double a86 = -1.53194377486244017527936158236e-2;
inline constexpr double a87 = 8.27378916381402288758473766002e-3;
inline constexpr double a91 = 6.24110958716075717114429577812e-1;
inline constexpr double a94 = -3.36089262944694129406857109825e0;
inline constexpr double a95 = -8.68219346841726006818189891453e-1;
inline constexpr double a96 = 2.75920996994467083049415600797e1;
inline constexpr double a97 = 2.01540675504778934086186788979e1;
inline constexpr double a98 = -4.34898841810699588477366255144e1;
inline constexpr double a101 = 4.77662536438264365890433908527e-1;
inline constexpr double a104 = -2.48811461997166764192642586468e0;
inline constexpr double a105 = -5.90290826836842996371446475743e-1;
inline constexpr double a106 = 2.12300514481811942347288949897e1;
inline constexpr double a107 = 1.52792336328824235832596922938e1;
inline constexpr double a108 = -3.32882109689848629194453265587e1;
inline constexpr double a109 = -2.03312017085086261358222928593e-2;
inline constexpr double a111 = -9.3714243008598732571704021658e-1;
inline constexpr double a114 = 5.18637242884406370830023853209e0;
inline constexpr double a115 = 1.09143734899672957818500254654e0;
inline constexpr double a116 = -8.14978701074692612513997267357e0;
inline constexpr double a117 = -1.85200656599969598641566180701e1;
inline constexpr double a118 = 2.27394870993505042818970056734e1;
inline constexpr double a119 = 2.49360555267965238987089396762e0;
inline constexpr double a1110 = -3.0467644718982195003823669022e0;
inline constexpr double a121 = 2.27331014751653820792359768449e0;
inline constexpr double a124 = -1.05344954667372501984066689879e1;
inline constexpr double a125 = -2.00087205822486249909675718444e0;
inline constexpr double a126 = -1.79589318631187989172765950534e1;
inline constexpr double a127 = 2.79488845294199600508499808837e1;
inline constexpr double a128 = -2.85899827713502369474065508674e0;
inline constexpr double a129 = -8.87285693353062954433549289258e0;
inline constexpr double a1210 = 1.23605671757943030647266201528e1;
inline constexpr double a1211 = 6.43392746015763530355970484046e-1;

inline constexpr double a141 = 5.61675022830479523392909219681e-2;
inline constexpr double a147 = 2.53500210216624811088794765333e-1;
inline constexpr double a148 = -2.46239037470802489917441475441e-1;
inline constexpr double a149 = -1.24191423263816360469010140626e-1;
inline constexpr double a1410 = 1.5329179827876569731206322685e-1;
inline constexpr double a1411 = 8.20105229563468988491666602057e-3;
inline constexpr double a1412 = 7.56789766054569976138603589584e-3;
inline constexpr double a1413 = -8.298e-3;
inline constexpr double a151 = 3.18346481635021405060768473261e-2;
inline constexpr double a156 = 2.83009096723667755288322961402e-2;
inline constexpr double a157 = 5.35419883074385676223797384372e-2;
inline constexpr double a158 = -5.49237485713909884646569340306e-2;
inline constexpr double a1511 = -1.08347328697249322858509316994e-4;
inline constexpr double a1512 = 3.82571090835658412954920192323e-4;
inline constexpr double a1513 = -3.40465008687404560802977114492e-4;
inline constexpr double a1514 = 1.41312443674632500278074618366e-1;
inline constexpr double a161 = -4.28896301583791923408573538692e-1;
inline constexpr double a166 = -4.69762141536116384314449447206e0;
inline constexpr double a167 = 7.68342119606259904184240953878e0;
inline constexpr double a168 = 4.06898981839711007970213554331e0;
inline constexpr double a169 = 3.56727187455281109270669543021e-1;
inline constexpr double a1613 = -1.39902416515901462129418009734e-3;
inline constexpr double a1614 = 2.9475147891527723389556272149e0;
inline constexpr double a1615 = -9.15095847217987001081870187138e0;

inline constexpr double b1 = 5.42937341165687622380535766363e-2;
inline constexpr double b6 = 4.45031289275240888144113950566e0;
inline constexpr double b7 = 1.89151789931450038304281599044e0;
inline constexpr double b8 = -5.8012039600105847814672114227e0;
inline constexpr double b9 = 3.1116436695781989440891606237e-1;
inline constexpr double b10 = -1.52160949662516078556178806805e-1;
inline constexpr double b11 = 2.01365400804030348374776537501e-1;
inline constexpr double b12 = 4.47106157277725905176885569043e-2;

// 3rd-order error weights (applied against the 8th-order combination).
inline constexpr double e31 = 0.244094488188976377952755905512e+00;
inline constexpr double e32 = 0.733846688281611857341361741547e+00;
inline constexpr double e33 = 0.220588235294117647058823529412e-01;

// 5th-order error weights.
inline constexpr double e51 = 0.1312004499419488073250102996e-01;
inline constexpr double e56 = -0.1225156446376204440720569753e+01;
inline constexpr double e57 = -0.4957589496572501915214079952e+00;
inline constexpr double e58 = 0.1664377182454986536961530415e+01;
inline constexpr double e59 = -0.3503288487499736816886487290e+00;
inline constexpr double e510 = 0.3341791187130174790297318841e+00;
inline constexpr double e511 = 0.8192320648511571246570742613e-01;
inline constexpr double e512 = -0.2235530786388629525884427845e-01;

// Dense-output interpolation weights.
inline constexpr double d41 = -0.84289382761090128651353491142e+01;
inline constexpr double d46 = 0.56671495351937776962531783590e+00;
inline constexpr double d47 = -0.30689499459498916912797304727e+01;
inline constexpr double d48 = 0.23846676565120698287728149680e+01;
inline constexpr double d49 = 0.21170345824450282767155149946e+01;
inline constexpr double d410 = -0.87139158377797299206789907490e+00;
inline constexpr double d411 = 0.22404374302607882758541771650e+01;
inline constexpr double d412 = 0.63157877876946881815570249290e+00;
inline constexpr double d413 = -0.88990336451333310820698117400e-01;
inline constexpr double d414 = 0.18148505520854727256656404962e+02;
inline constexpr double d415 = -0.91946323924783554000451984436e+01;
inline constexpr double d416 = -0.44360363875948939664310572000e+01;
inline constexpr double d51 = 0.10427508642579134603413151009e+02;
inline constexpr double d56 = 0.24228349177525818288430175319e+03;
inline constexpr double d57 = 0.16520045171727028198505394887e+03;
inline constexpr double d58 = -0.37454675472269020279518312152e+03;
inline constexpr double d59 = -0.22113666853125306036270938578e+02;
inline constexpr double d510 = 0.77334326684722638389603898808e+01;
inline constexpr double d511 = -0.30674084731089398182061213626e+02;
inline constexpr double d512 = -0.93321305264302278729567221706e+01;
inline constexpr double d513 = 0.15697238121770843886131091075e+02;
inline constexpr double d514 = -0.31139403219565177677282850411e+02;
inline constexpr double d515 = -0.93529243588444783865713862664e+01;
inline constexpr double d516 = 0.35816841486394083752465898540e+02;
inline constexpr double d61 = 0.19985053242002433820987653617e+02;
inline constexpr double d66 = -0.38703730874935176555105901742e+03;
inline constexpr double d67 = -0.18917813819516756882830838328e+03;
inline constexpr double d68 = 0.52780815920542364900561016686e+03;
inline constexpr double d69 = -0.11573902539959630126141871134e+02;
inline constexpr double d610 = 0.68812326946963000169666922661e+01;
inline constexpr double d611 = -0.10006050966910838403183860980e+01;
inline constexpr double d612 = 0.77771377980534432092869265740e+00;
inline constexpr double d613 = -0.27782057523535084065932004339e+01;
inline constexpr double d614 = -0.60196695231264120758267380846e+02;
inline constexpr double d615 = 0.84320405506677161018159903784e+02;
inline constexpr double d616 = 0.11992291136182789328035130030e+02;
inline constexpr double d71 = -0.25693933462703749003312586129e+02;
inline constexpr double d76 = -0.15418974869023643374053993627e+03;
inline constexpr double d77 = -0.23152937917604549567536039109e+03;
inline constexpr double d78 = 0.35763911791061412378285349910e+03;
inline constexpr double d79 = 0.93405324183624310003907691704e+02;
inline constexpr double d710 = -0.37458323136451633156875139351e+02;
inline constexpr double d711 = 0.10409964950896230045147246184e+03;
inline constexpr double d712 = 0.29840293426660503123344363579e+02;
inline constexpr double d713 = -0.43533456590011143754432175058e+02;
inline constexpr double d714 = 0.96324553959188282948394950600e+02;
inline constexpr double d715 = -0.39177261675615439165231486172e+02;
inline constexpr double d716 = -0.14972683625798562581422125276e+03;

inline constexpr double machine_eps = 2.220446049250313e-16;

}  // namespace dop853

/// Interpolation coefficients for one accepted step.
template <std::size_t N>
struct DenseSegment {
    double t0;  ///< step start time
    double h;   ///< signed step
    std::array<std::array<double, N>, 8> r;

    std::array<double, N> eval(double t) const {
        const double s = (t - t0) / h;
        const double s1 = 1.0 - s;
        std::array<double, N> y;
        for (std::size_t i = 0; i < N; ++i) {
            const double a6 = r[6][i] + s * r[7][i];
            const double a5 = r[5][i] + s1 * a6;
            const double a4 = r[4][i] + s * a5;
            const double a3 = r[3][i] + s1 * a4;
            const double a2 = r[2][i] + s * a3;
            const double a1 = r[1][i] + s1 * a2;
            y[i] = r[0][i] + s * a1;
        }
        return y;
    }
};

/// Piecewise-polynomial interpolant over the whole integration span.
template <std::size_t N>
class DenseOutput {
  public:
    std::vector<DenseSegment<N>> segments;

    bool empty() const { return segments.empty(); }
    double t_begin() const { return segments.front().t0; }
    double t_end() const { return segments.back().t0 + segments.back().h; }

    std::array<double, N> eval(double t) const {
        if (segments.empty()) throw domain_error("dense output: no segments recorded");
        const double dir = segments.front().h >= 0.0 ? 1.0 : -1.0;
        const double span = std::abs(t_end() - t_begin());
        const double slack = 1e-9 * std::max(1.0, span);
        if ((t - t_begin()) * dir < -slack || (t - t_end()) * dir > slack)
            throw domain_error("dense output: time outside integration span");
        // Binary search for the first segment whose end lies at or past t.
        std::size_t lo = 0, hi = segments.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            const double end = segments[mid].t0 + segments[mid].h;
            if ((end - t) * dir >= 0.0)
                hi = mid;
            else
                lo = mid + 1;
        }
        return segments[lo].eval(t);
    }
};

/// Adaptive Dormand-Prince 8(5,3) integrator with optional dense output.
/// RHS signature: void(double t, const std::array<double,N>& y,
///                     std::array<double,N>& dydt).
template <std::size_t N, typename RHS>
class Dop853 {
  public:
    using State = std::array<double, N>;

    struct Result {
        std::vector<double> times;  ///< accepted step times, starting at t0
        std::vector<State> states;
        DenseOutput<N> dense;
        long long steps = 0;
        long long rejected = 0;
    };

    Dop853(RHS rhs, IntegratorOptions opts = {}) : f_(rhs), opts_(opts) {}

    Result integrate(double t0, const State& y0, double t1) {
        Result out;
        out.times.push_back(t0);
        out.states.push_back(y0);
        if (t1 == t0) return out;

        const double dir = t1 > t0 ? 1.0 : -1.0;
        double t = t0;
        State y = y0;
        State k1;
        f_(t, y, k1);

        double h = opts_.initial_step != 0.0 ? std::abs(opts_.initial_step)
                                             : initial_step(t, y, k1, dir, std::abs(t1 - t0));
        if (opts_.max_step > 0.0) h = std::min(h, opts_.max_step);
        h = std::min(h, std::abs(t1 - t0));

        bool just_rejected = false;
        while (true) {
            if (out.steps + out.rejected > opts_.max_steps)
                throw numerical_error("dop853: maximum number of steps exceeded");
            if (h < 4.0 * dop853::machine_eps * std::max(std::abs(t), std::abs(t1)))
                throw numerical_error("dop853: step size underflow (tolerance too tight)");

            bool last = false;
            if ((t + dir * h - t1) * dir >= 0.0) {
                h = std::abs(t1 - t);
                last = true;
            }
            const double hs = dir * h;

            State k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, yw, bsum, ynew;
            stages(t, y, k1, hs, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, yw, bsum, ynew);

            // Hairer's combined 5th/3rd-order error estimate.
            double err3 = 0.0, err5 = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sc =
                    opts_.atol + opts_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                const double e3 = bsum[i] - dop853::e31 * k1[i] - dop853::e32 * k9[i] -
                                  dop853::e33 * k12[i];
                const double e5 = dop853::e51 * k1[i] + dop853::e56 * k6[i] +
                                  dop853::e57 * k7[i] + dop853::e58 * k8[i] +
                                  dop853::e59 * k9[i] + dop853::e510 * k10[i] +
                                  dop853::e511 * k11[i] + dop853::e512 * k12[i];
                err3 += (e3 / sc) * (e3 / sc);
                err5 += (e5 / sc) * (e5 / sc);
            }
            const double deno = err5 + 0.01 * err3;
            const double err = deno > 0.0 ? h * err5 * std::sqrt(1.0 / (N * deno)) : 0.0;

            constexpr double alpha = 0.125, safe = 0.9, min_scale = 1.0 / 3.0, max_scale = 6.0;
            if (err <= 1.0) {
                const double t_new = last ? t1 : t + hs;
                State k13;
                f_(t_new, ynew, k13);
                if (opts_.dense)
                    out.dense.segments.push_back(
                        make_segment(t, hs, y, ynew, k1, k6, k7, k8, k9, k10, k11, k12, k13));
                t = t_new;
                y = ynew;
                k1 = k13;
                ++out.steps;
                out.times.push_back(t);
                out.states.push_back(y);
                if (last) return out;

                double scale = err == 0.0 ? max_scale
                                          : std::clamp(safe * std::pow(err, -alpha), min_scale,
                                                       max_scale);
                if (just_rejected) scale = std::min(scale, 1.0);
                just_rejected = false;
                h *= scale;
                if (opts_.max_step > 0.0) h = std::min(h, opts_.max_step);
            } else {
                h *= std::max(safe * std::pow(err, -alpha), min_scale);
                just_rejected = true;
                ++out.rejected;
            }
        }
    }

  private:
    RHS f_;
    IntegratorOptions opts_;

    static double rms(const State& v, const State& sc) {
        double sum = 0.0;
        for (std::size_t i = 0; i < N; ++i) sum += (v[i] / sc[i]) * (v[i] / sc[i]);
        return std::sqrt(sum / N);
    }

    double initial_step(double t, const State& y, const State& f0, double dir, double span) {
        State sc;
        for (std::size_t i = 0; i < N; ++i) sc[i] = opts_.atol + opts_.rtol * std::abs(y[i]);
        const double d0 = rms(y, sc);
        const double d1 = rms(f0, sc);
        double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, span);
        State y1, f1, df;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h0 * f0[i];
        f_(t + dir * h0, y1, f1);
        for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - f0[i];
        const double d2 = rms(df, sc) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                      : std::pow(0.01 / dm, 1.0 / 8.0);
        return std::min({100.0 * h0, h1, span});
    }

    void stages(double t, const State& y, const State& k1, double h, State& k2, State& k3,
                State& k4, State& k5, State& k6, State& k7, State& k8, State& k9, State& k10,
                State& k11, State& k12, State& yw, State& bsum, State& ynew) {
        using namespace dop853;
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + h * (a21 * k1[i]);
        f_(t + c2 * h, yw, k2);
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f_(t + c3 * h, yw, k3);
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + h * (a41 * k1[i] + a43 * k3[i]);
        f_(t + c4 * h, yw, k4);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
        f_(t + c5 * h, yw, k5);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
        f_(t + c6 * h, yw, k6);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        f_(t + c7 * h, yw, k7);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] +
                                a87 * k7[i]);
        f_(t + c8 * h, yw, k8);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] +
                                a97 * k7[i] + a98 * k8[i]);
        f_(t + c9 * h, yw, k9);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] +
                                a107 * k7[i] + a108 * k8[i] + a109 * k9[i]);
        f_(t + c10 * h, yw, k10);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] +
                                a117 * k7[i] + a118 * k8[i] + a119 * k9[i] + a1110 * k10[i]);
        f_(t + c11 * h, yw, k11);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] +
                                a127 * k7[i] + a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] +
                                a1211 * k11[i]);
        f_(t + h, yw, k12);
        for (std::size_t i = 0; i < N; ++i) {
            bsum[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] +
                      b10 * k10[i] + b11 * k11[i] + b12 * k12[i];
            ynew[i] = y[i] + h * bsum[i];
        }
    }

    DenseSegment<N> make_segment(double t, double h, const State& y, const State& ynew,
                                 const State& k1, const State& k6, const State& k7,
                                 const State& k8, const State& k9, const State& k10,
                                 const State& k11, const State& k12, const State& k13) {
        using namespace dop853;
        DenseSegment<N> seg;
        seg.t0 = t;
        seg.h = h;
        auto& r = seg.r;
        for (std::size_t i = 0; i < N; ++i) {
            r[0][i] = y[i];
            r[1][i] = ynew[i] - y[i];
            r[2][i] = h * k1[i] - r[1][i];
            r[3][i] = r[1][i] - h * k13[i] - r[2][i];
            r[4][i] = d41 * k1[i] + d46 * k6[i] + d47 * k7[i] + d48 * k8[i] + d49 * k9[i] +
                      d410 * k10[i] + d411 * k11[i] + d412 * k12[i];
            r[5][i] = d51 * k1[i] + d56 * k6[i] + d57 * k7[i] + d58 * k8[i] + d59 * k9[i] +
                      d510 * k10[i] + d511 * k11[i] + d512 * k12[i];
            r[6][i] = d61 * k1[i] + d66 * k6[i] + d67 * k7[i] + d68 * k8[i] + d69 * k9[i] +
                      d610 * k10[i] + d611 * k11[i] + d612 * k12[i];
            r[7][i] = d71 * k1[i] + d76 * k6[i] + d77 * k7[i] + d78 * k8[i] + d79 * k9[i] +
                      d710 * k10[i] + d711 * k11[i] + d712 * k12[i];
        }
        // Three extra stages refine the high-order interpolation rows.
        State yw, k14, k15, k16;
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + h * (a141 * k1[i] + a147 * k7[i] + a148 * k8[i] + a149 * k9[i] +
                                a1410 * k10[i] + a1411 * k11[i] + a1412 * k12[i] +
                                a1413 * k13[i]);
        f_(t + c14 * h, yw, k14);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + h * (a151 * k1[i] + a156 * k6[i] + a157 * k7[i] + a158 * k8[i] +
                                a1511 * k11[i] + a1512 * k12[i] + a1513 * k13[i] +
                                a1514 * k14[i]);
        f_(t + c15 * h, yw, k15);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + h * (a161 * k1[i] + a166 * k6[i] + a167 * k7[i] + a168 * k8[i] +
                                a169 * k9[i] + a1613 * k13[i] + a1614 * k14[i] +
                                a1615 * k15[i]);
        f_(t + c16 * h, yw, k16);
        for (std::size_t i = 0; i < N; ++i) {
            r[4][i] = h * (r[4][i] + d413 * k13[i] + d414 * k14[i] + d415 * k15[i] +
                           d416 * k16[i]);
            r[5][i] = h * (r[5][i] + d513 * k13[i] + d514 * k14[i] + d515 * k15[i] +
                           d516 * k16[i]);
            r[6][i] = h * (r[6][i] + d613 * k13[i] + d614 * k14[i] + d615 * k15[i] +
                           d616 * k16[i]);
            r[7][i] = h * (r[7][i] + d713 * k13[i] + d714 * k14[i] + d715 * k15[i] +
                           d716 * k16[i]);
        }
        return seg;
    }
};

/// Convenience factory (deduces the RHS type).
template <std::size_t N, typename RHS>
Dop853<N, RHS> make_dop853(RHS rhs, IntegratorOptions opts = {}) {
    return Dop853<N, RHS>(rhs, opts);
}

}  // namespace hill
