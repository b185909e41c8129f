#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hvdp/errors.hpp"
#include "ode_detail.hpp"

namespace hvdp::ode::detail {

namespace {

// Dormand-Prince 8(5,3): 12 stages plus the FSAL stage, three extra stages
// for the 7th-order continuous extension.
constexpr double kC[16] = {0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274, 0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077, 0.6512820512820513, 0.6, 0.8571428571428571, 1.0, 1.0, 0.1, 0.2, 0.7777777777777778};
// Row s holds the coefficients of stages 0..s-1.
constexpr double kA[16][16] = {
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259, 0.0, 0.0, 0.0, 0.0},
    {0.056167502283047954, 0.0, 0.0, 0.0, 0.0, 0.0, 0.25350021021662483, -0.2462390374708025, -0.12419142326381637, 0.15329179827876568, 0.00820105229563469, 0.007567897660545699, -0.008298, 0.0, 0.0, 0.0},
    {0.03183464816350214, 0.0, 0.0, 0.0, 0.0, 0.028300909672366776, 0.053541988307438566, -0.05492374857139099, 0.0, 0.0, -0.00010834732869724932, 0.0003825710908356584, -0.00034046500868740456, 0.1413124436746325, 0.0, 0.0},
    {-0.42889630158379194, 0.0, 0.0, 0.0, 0.0, -4.697621415361164, 7.683421196062599, 4.06898981839711, 0.3567271874552811, 0.0, 0.0, 0.0, -0.0013990241651590145, 2.9475147891527724, -9.15095847217987, 0.0},
};
constexpr double kB[] = {0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259};
constexpr double kE3[] = {-0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, -0.4226823213237919, -0.1521609496625161, 0.20136540080403034, 0.02265179219836082, 0.0};
constexpr double kE5[] = {0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294, 0.0};
constexpr double kD[4][16] = {
    {-8.428938276109013, 0.0, 0.0, 0.0, 0.0, 0.5667149535193777, -3.0689499459498917, 2.38466765651207, 2.117034582445028, -0.871391583777973, 2.2404374302607883, 0.6315787787694688, -0.08899033645133331, 18.148505520854727, -9.194632392478356, -4.436036387594894},
    {10.427508642579134, 0.0, 0.0, 0.0, 0.0, 242.28349177525817, 165.20045171727028, -374.5467547226902, -22.113666853125306, 7.733432668472264, -30.674084731089398, -9.332130526430229, 15.697238121770845, -31.139403219565178, -9.35292435884448, 35.81684148639408},
    {19.985053242002433, 0.0, 0.0, 0.0, 0.0, -387.0373087493518, -189.17813819516758, 527.8081592054236, -11.57390253995963, 6.8812326946963, -1.0006050966910838, 0.7777137798053443, -2.778205752353508, -60.19669523126412, 84.32040550667716, 11.99229113618279},
    {-25.69393346270375, 0.0, 0.0, 0.0, 0.0, -154.18974869023643, -231.5293791760455, 357.6391179106141, 93.40532418362432, -37.45832313645163, 104.0996495089623, 29.8402934266605, -43.53345659001114, 96.32455395918828, -39.17726167561544, -149.72683625798564},
};

constexpr int kStages = 12;
constexpr double kSafe = 0.9;
constexpr double kFacMin = 1.0 / 3.0;  // step may shrink by at most 3x
constexpr double kFacMax = 6.0;        // and grow by at most 6x
constexpr double kExpo = 1.0 / 8.0;

// Mixed 5th/3rd-order error norm of Hairer's code.
double error_norm(const std::vector<std::vector<double>>& K, std::span<const double> y, std::span<const double> ynew,
                  double h, const IntegratorConfig& cfg) {
    const std::size_t n = y.size();
    double e5 = 0.0, e3 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s5 = 0.0, s3 = 0.0;
        for (int j = 0; j <= kStages; ++j) {
            s5 += kE5[j] * K[j][i];
            s3 += kE3[j] * K[j][i];
        }
        const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        e5 += (s5 / sk) * (s5 / sk);
        e3 += (s3 / sk) * (s3 / sk);
    }
    if (e5 == 0.0 && e3 == 0.0) return 0.0;
    return std::abs(h) * e5 / std::sqrt((e5 + 0.01 * e3) * static_cast<double>(n));
}

}  // namespace

IntegrationStats dop853_steps(const Rhs& rhs, std::span<const double> y0_in, double t0, double t1,
                              const IntegratorConfig& cfg, const StepObserver& observer) {
    const std::size_t n = y0_in.size();
    IntegrationStats st;
    std::vector<double> y(y0_in.begin(), y0_in.end()), ynew(n), ytmp(n);
    std::vector<std::vector<double>> K(16, std::vector<double>(n));
    std::vector<double> rcont;

    const double span_len = t1 - t0;
    const double h_min = 1e-14 * span_len;
    double t = t0;

    rhs(t, y, K[0]);
    ++st.rhs_evals;
    if (!all_finite(K[0])) throw NonFiniteStateError("vector field is not finite at the initial state");

    double h = cfg.initial_step > 0.0 ? std::min({cfg.initial_step, cfg.max_step, span_len})
                                      : initial_step(rhs, y, K[0], t, span_len, cfg, 8, st.rhs_evals);
    bool last_rejected = false;
    bool nonfinite_pending = false;

    auto stage = [&](int s, double ts) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < s; ++j) acc += kA[s][j] * K[j][i];
            ytmp[i] = y[i] + h * acc;
        }
        rhs(ts, ytmp, K[s]);
    };

    while (t < t1) {
        if (st.accepted + st.rejected >= cfg.max_steps)
            throw ConvergenceError("integrator exceeded max_steps at t = " + std::to_string(t));
        if (h < h_min || t + h == t) {
            if (nonfinite_pending)
                throw NonFiniteStateError("state became non-finite near t = " + std::to_string(t));
            throw StepUnderflowError("step size underflow at t = " + std::to_string(t));
        }
        bool final_step = false;
        if (t + h >= t1 || t + 1.01 * h >= t1) {
            h = t1 - t;
            final_step = true;
        }
        const double tnew = final_step ? t1 : t + h;

        for (int s = 1; s < kStages; ++s) stage(s, s == kStages - 1 ? tnew : t + kC[s] * h);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < kStages; ++j) acc += kB[j] * K[j][i];
            ynew[i] = y[i] + h * acc;
        }
        rhs(tnew, ynew, K[kStages]);
        st.rhs_evals += kStages;

        if (!all_finite(ynew) || !all_finite(K[kStages])) {
            nonfinite_pending = true;
            h *= 0.1;
            ++st.rejected;
            last_rejected = true;
            continue;
        }
        nonfinite_pending = false;

        const double err = error_norm(K, y, ynew, h, cfg);
        const double fac11 = std::pow(err, kExpo);
        if (err <= 1.0) {
            double fac = std::clamp(fac11 / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
            double hnew = std::min(h / fac, cfg.max_step);
            if (last_rejected) hnew = std::min(hnew, h);

            rcont.clear();
            if (cfg.dense_output) {
                for (int s = kStages + 1; s < 16; ++s) stage(s, t + kC[s] * h);
                st.rhs_evals += 3;
                rcont.resize(8 * n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double dy = ynew[i] - y[i];
                    rcont[i] = y[i];
                    rcont[n + i] = dy;
                    rcont[2 * n + i] = h * K[0][i] - dy;
                    rcont[3 * n + i] = 2.0 * dy - h * (K[kStages][i] + K[0][i]);
                    for (int r = 0; r < 4; ++r) {
                        double acc = 0.0;
                        for (int j = 0; j < 16; ++j) acc += kD[r][j] * K[j][i];
                        rcont[(4 + r) * n + i] = h * acc;
                    }
                }
            }
            ++st.accepted;
            StepView view(t, tnew - t, y, ynew, rcont);
            const bool keep_going = observer ? observer(view) : true;

            std::swap(y, ynew);
            std::swap(K[0], K[kStages]);  // FSAL
            t = tnew;
            h = hnew;
            last_rejected = false;
            if (!keep_going) {
                st.stopped_early = true;
                break;
            }
        } else {
            h = h / std::min(1.0 / kFacMin, fac11 / kSafe);
            ++st.rejected;
            last_rejected = true;
        }
    }
    st.t_end = t;
    st.y_end = y;
    return st;
}

}  // namespace hvdp::ode::detail
