#include "hvdp/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hvdp/errors.hpp"

namespace hvdp {

namespace {
constexpr double kPi = std::numbers::pi;

double wrap_to(double v, double period) { return v - period * std::round(v / period); }
}  // namespace

double CoupledParams::nu1() const { return quadratic_frequency ? omega1 : std::sqrt(omega1); }
double CoupledParams::nu2() const { return quadratic_frequency ? omega2 : std::sqrt(omega2); }

double CoupledParams::kappa() const {
    const double a = nu1() * nu2();
    return eps * omega1 * omega1 * omega2 * omega2 / (a * a);
}

void validate(const CoupledParams& cp) {
    if (!(cp.omega1 > 0.0) || !(cp.omega2 > 0.0) || !std::isfinite(cp.omega1) || !std::isfinite(cp.omega2))
        throw InvalidArgument("coupled oscillator frequencies must be positive and finite");
    if (!(cp.eps >= 0.0) || !std::isfinite(cp.eps)) throw InvalidArgument("coupling eps must be >= 0 and finite");
}

CoupledCart coupled_rhs(const CoupledCart& s, const CoupledParams& cp) {
    const double k1 = cp.quadratic_frequency ? cp.omega1 * cp.omega1 : cp.omega1;
    const double k2 = cp.quadratic_frequency ? cp.omega2 * cp.omega2 : cp.omega2;
    const double c = 2.0 * cp.eps * cp.omega1 * cp.omega1 * cp.omega2 * cp.omega2;
    return {s.p1, s.p2, -k1 * s.q1 - c * s.q1 * s.q2 * s.q2, -k2 * s.q2 - c * s.q2 * s.q1 * s.q1};
}

double coupled_energy(const CoupledCart& s, const CoupledParams& cp) {
    const double k1 = cp.quadratic_frequency ? cp.omega1 * cp.omega1 : cp.omega1;
    const double k2 = cp.quadratic_frequency ? cp.omega2 * cp.omega2 : cp.omega2;
    return 0.5 * (s.p1 * s.p1 + k1 * s.q1 * s.q1 + s.p2 * s.p2 + k2 * s.q2 * s.q2) +
           cp.eps * cp.omega1 * cp.omega1 * cp.omega2 * cp.omega2 * s.q1 * s.q1 * s.q2 * s.q2;
}

CoupledCart alphabeta_to_cart(const CoupledAlphaBeta& s, double t, const CoupledParams& cp) {
    if (s.alpha1 < 0.0 || s.alpha2 < 0.0) throw DomainError("alpha must be non-negative");
    const double n1 = cp.nu1(), n2 = cp.nu2();
    const double r1 = std::sqrt(2.0 * s.alpha1), r2 = std::sqrt(2.0 * s.alpha2);
    const double f1 = n1 * (t + s.beta1), f2 = n2 * (t + s.beta2);
    return {r1 / n1 * std::sin(f1), r2 / n2 * std::sin(f2), r1 * std::cos(f1), r2 * std::cos(f2)};
}

CoupledAlphaBeta cart_to_alphabeta(const CoupledCart& s, double t, const CoupledParams& cp) {
    const double n1 = cp.nu1(), n2 = cp.nu2();
    CoupledAlphaBeta out;
    out.alpha1 = 0.5 * (s.p1 * s.p1 + n1 * n1 * s.q1 * s.q1);
    out.alpha2 = 0.5 * (s.p2 * s.p2 + n2 * n2 * s.q2 * s.q2);
    if (out.alpha1 <= 0.0 || out.alpha2 <= 0.0) throw DomainError("phase undefined at zero amplitude");
    out.beta1 = wrap_to(std::atan2(n1 * s.q1, s.p1) - n1 * t, 2.0 * kPi) / n1;
    out.beta2 = wrap_to(std::atan2(n2 * s.q2, s.p2) - n2 * t, 2.0 * kPi) / n2;
    return out;
}

CoupledAlphaBeta averaged_rhs(const CoupledAlphaBeta& s, double t, const CoupledParams& cp, AveragedForm form) {
    const double n1 = cp.nu1(), n2 = cp.nu2(), e = cp.kappa();
    const double a12 = s.alpha1 * s.alpha2;
    if (form == AveragedForm::nonresonant) return {0.0, 0.0, e * s.alpha2, e * s.alpha1};
    const double arg = 2.0 * (n1 - n2) * t + 2.0 * (s.beta1 * n1 - s.beta2 * n2);
    const double sn = std::sin(arg), cs = std::cos(arg);
    return {e * a12 * n1 * sn, -e * a12 * n2 * sn, e * s.alpha2 + 0.5 * e * s.alpha2 * cs,
            e * s.alpha1 + 0.5 * e * s.alpha1 * cs};
}

std::array<double, 2> nonresonant_prediction(double alpha1, double alpha2, const CoupledParams& cp) {
    return {cp.kappa() * alpha2, cp.kappa() * alpha1};
}

bool near_resonance(double alpha1, double alpha2, const CoupledParams& cp) {
    const double n1 = cp.nu1(), n2 = cp.nu2();
    return std::abs(n1 - n2) < 5.0 * cp.eps * std::max(alpha1, alpha2) / std::min(n1, n2);
}

CompareReport compare(const CoupledParams& cp, double horizon, const CompareConfig& cfg) {
    validate(cp);
    if (!(horizon > 0.0)) throw InvalidArgument("compare horizon must be positive");
    if (cfg.samples < 2) throw InvalidArgument("compare needs at least two samples");

    CompareReport rep;
    rep.horizon = horizon;
    rep.form = cfg.automatic_form
                   ? (near_resonance(cfg.initial.alpha1, cfg.initial.alpha2, cp) ? AveragedForm::resonant
                                                                                 : AveragedForm::nonresonant)
                   : cfg.form;

    const CoupledCart c0 = alphabeta_to_cart(cfg.initial, 0.0, cp);
    const std::vector<double> y_full{c0.q1, c0.q2, c0.p1, c0.p2};
    const auto full = ode::integrate(
        [&](double, std::span<const double> y, std::span<double> dy) {
            const auto d = coupled_rhs({y[0], y[1], y[2], y[3]}, cp);
            dy[0] = d.q1;
            dy[1] = d.q2;
            dy[2] = d.p1;
            dy[3] = d.p2;
        },
        y_full, 0.0, horizon, cfg.integrator);

    const CoupledAlphaBeta& a0 = cfg.initial;
    const std::vector<double> y_avg{a0.alpha1, a0.alpha2, a0.beta1, a0.beta2};
    const AveragedForm form = rep.form;
    const auto avg = ode::integrate(
        [&](double t, std::span<const double> y, std::span<double> dy) {
            const auto d = averaged_rhs({y[0], y[1], y[2], y[3]}, t, cp, form);
            dy[0] = d.alpha1;
            dy[1] = d.alpha2;
            dy[2] = d.beta1;
            dy[3] = d.beta2;
        },
        y_avg, 0.0, horizon, cfg.integrator);

    const double n1 = cp.nu1(), n2 = cp.nu2();
    const double e0 = coupled_energy(c0, cp);
    double prev1 = a0.beta1, prev2 = a0.beta2;
    rep.times.reserve(cfg.samples);
    for (int k = 0; k < cfg.samples; ++k) {
        const double t = horizon * k / (cfg.samples - 1);
        const auto yf = full.eval(t);
        const auto ya = avg.eval(t);
        const CoupledCart c{yf[0], yf[1], yf[2], yf[3]};
        CoupledAlphaBeta f = cart_to_alphabeta(c, t, cp);
        // Unwrap each beta onto the branch nearest the previous sample.
        f.beta1 = prev1 + wrap_to(f.beta1 - prev1, 2.0 * kPi / n1);
        f.beta2 = prev2 + wrap_to(f.beta2 - prev2, 2.0 * kPi / n2);
        prev1 = f.beta1;
        prev2 = f.beta2;
        const CoupledAlphaBeta a{ya[0], ya[1], ya[2], ya[3]};
        rep.alpha_deviation =
            std::max({rep.alpha_deviation, std::abs(f.alpha1 - a.alpha1), std::abs(f.alpha2 - a.alpha2)});
        rep.phase_deviation = std::max(
            {rep.phase_deviation, n1 * std::abs(f.beta1 - a.beta1), n2 * std::abs(f.beta2 - a.beta2)});
        rep.energy_drift =
            std::max(rep.energy_drift, std::abs(coupled_energy(c, cp) - e0) / std::max(1.0, std::abs(e0)));
        rep.times.push_back(t);
        rep.full.push_back(f);
        rep.averaged.push_back(a);
    }
    return rep;
}

}  // namespace hvdp
