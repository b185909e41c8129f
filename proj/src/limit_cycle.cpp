#include "hvdp/limit_cycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hvdp/dual_dynamics.hpp"
#include "hvdp/errors.hpp"

namespace hvdp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pi(double a) {
    a = std::remainder(a, kTwoPi);
    if (a <= -std::numbers::pi) a += kTwoPi;
    return a;
}

ode::Rhs vdp_field(const Params& p) {
    return [p](double, std::span<const double> y, std::span<double> dy) {
        const auto d = vdp_rhs(y[0], y[1], p);
        dy[0] = d[0];
        dy[1] = d[1];
    };
}

// Section theta = 0: x' falls through zero with x > 0.
double section_g(double, std::span<const double> y) { return y[1]; }

}  // namespace

double polar_radius(double x, double v, double omega) { return std::hypot(x, v / omega); }

double polar_angle(double x, double v, double omega) { return std::atan2(-v / omega, x); }

double polar_rate(double x, double v, const Params& p) {
    const double s = v / p.omega;
    const double r2 = x * x + s * s;
    return p.omega + p.eps * x * s * (x * x - 1.0) / r2;
}

SettledState settle(const Params& p, double n_transient, const LimitCycleConfig& cfg, double x0,
                    double v0) {
    validate(p);
    if (!(p.eps > 0.0)) throw InvalidArgument("settle needs eps > 0 (no attracting cycle at eps = 0)");
    const double cap = n_transient > 0.0
                           ? n_transient
                           : std::max<double>(cfg.min_periods, std::ceil(20.0 / p.eps));
    const int max_returns = static_cast<int>(std::ceil(cap));
    const double t_guess = kTwoPi / p.omega;

    SettledState out;
    bool have_prev = false, done = false;
    double prev_x = 0.0;
    int returns = 0;
    const double y0[2] = {x0, v0};
    const double t_end = 4.0 * t_guess * (max_returns + 2);
    std::vector<double> buf(2);

    ode::integrate_steps(vdp_field(p), y0, 0.0, t_end, cfg.integrator, [&](const ode::StepView& s) {
        auto tc = ode::locate_in_step(s, section_g, ode::Direction::falling);
        if (!tc) return true;
        s.eval(*tc, buf);
        if (buf[0] <= 0.0) return true;
        ++returns;
        if (have_prev) {
            out.return_distance = std::abs(buf[0] - prev_x);
            if (returns >= cfg.min_periods && out.return_distance <= cfg.return_tol) {
                done = true;
            }
        }
        prev_x = buf[0];
        have_prev = true;
        out.x = buf[0];
        out.v = 0.0;
        out.periods = returns;
        return !done && returns < max_returns;
    });
    if (!done)
        throw ConvergenceError("limit cycle did not settle: return distance " +
                               std::to_string(out.return_distance) + " after " +
                               std::to_string(returns) + " returns");
    return out;
}

LimitCycleData measure(const Params& p, int n_theta, const LimitCycleConfig& cfg) {
    validate(p);
    if (n_theta < 8) throw InvalidArgument("n_theta must be >= 8");
    if (cfg.n_returns < 1) throw InvalidArgument("n_returns must be >= 1");
    LimitCycleData lc;
    lc.params = p;
    const std::size_t n = static_cast<std::size_t>(n_theta);
    lc.theta_grid.resize(n);
    for (std::size_t j = 0; j < n; ++j) lc.theta_grid[j] = kTwoPi * static_cast<double>(j) / n_theta;

    if (p.eps == 0.0) {
        lc.period = kTwoPi / p.omega;
        lc.frequency = p.omega;
        lc.amplitude = 2.0;
        lc.R_table.assign(n, 2.0);
        lc.Omega_table.assign(n, p.omega);
        lc.normalized_frequency = p.omega;
        lc.period_x_rising = lc.period;
        lc.radius = PeriodicSeries(lc.R_table);
        std::vector<double> inv(n, 1.0 / p.omega);
        lc.inverse_rate = PeriodicSeries(inv);
        return lc;
    }

    const SettledState st = settle(p, 0.0, cfg);
    lc.return_distance = st.return_distance;

    // Targets in unwrapped theta over the first turn: the grid plus pi for the amplitude.
    std::vector<double> targets(lc.theta_grid.begin() + 1, lc.theta_grid.end());
    targets.push_back(std::numbers::pi);
    std::sort(targets.begin(), targets.end());
    std::vector<double> R_at_target(targets.size()), W_at_target(targets.size());
    std::size_t next_target = 0;

    std::vector<double> section_times, xrise_times;
    double theta_a = 0.0;  // unwrapped theta at the start of the current step
    const double w = p.omega;
    std::vector<double> buf(2);

    const double y0[2] = {st.x, 0.0};
    const double t_end = 4.0 * (kTwoPi / w) * (cfg.n_returns + 2);
    ode::integrate_steps(vdp_field(p), y0, 0.0, t_end, cfg.integrator, [&](const ode::StepView& s) {
        const double th0 = polar_angle(s.y0()[0], s.y0()[1], w);
        const double dth = wrap_pi(polar_angle(s.y1()[0], s.y1()[1], w) - th0);
        const double theta_b = theta_a + dth;
        while (next_target < targets.size() && targets[next_target] <= theta_b) {
            const double target = targets[next_target];
            ode::EventFn g = [&](double, std::span<const double> y) {
                return theta_a + wrap_pi(polar_angle(y[0], y[1], w) - th0) - target;
            };
            const auto tc = ode::locate_in_step(s, g, ode::Direction::rising);
            if (!tc) throw ConvergenceError("failed to locate a theta grid crossing");
            s.eval(*tc, buf);
            R_at_target[next_target] = polar_radius(buf[0], buf[1], w);
            W_at_target[next_target] = polar_rate(buf[0], buf[1], p);
            ++next_target;
        }
        theta_a = theta_b;

        if (auto tc = ode::locate_in_step(s, section_g, ode::Direction::falling)) {
            if (s.eval_component(*tc, 0) > 0.0) section_times.push_back(*tc);
        }
        ode::EventFn xg = [](double, std::span<const double> y) { return y[0]; };
        if (auto tc = ode::locate_in_step(s, xg, ode::Direction::rising)) {
            if (s.eval_component(*tc, 1) > 0.0) xrise_times.push_back(*tc);
        }
        return static_cast<int>(section_times.size()) < cfg.n_returns ||
               static_cast<int>(xrise_times.size()) < cfg.n_returns + 1;
    });
    if (static_cast<int>(section_times.size()) < cfg.n_returns || next_target < targets.size())
        throw ConvergenceError("limit cycle measurement ended before enough returns");

    const std::size_t nr = static_cast<std::size_t>(cfg.n_returns);
    lc.period = section_times[nr - 1] / cfg.n_returns;
    lc.frequency = kTwoPi / lc.period;
    lc.period_x_rising = (xrise_times[nr] - xrise_times[0]) / cfg.n_returns;

    lc.R_table.resize(n);
    lc.Omega_table.resize(n);
    lc.R_table[0] = polar_radius(st.x, 0.0, w);
    lc.Omega_table[0] = polar_rate(st.x, 0.0, p);
    double x_at_pi = 0.0;
    std::size_t gi = 1;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (gi < n && targets[k] == lc.theta_grid[gi]) {
            lc.R_table[gi] = R_at_target[k];
            lc.Omega_table[gi] = W_at_target[k];
            ++gi;
        }
        if (targets[k] == std::numbers::pi) x_at_pi = R_at_target[k];
    }
    lc.amplitude = std::max(st.x, x_at_pi);

    for (std::size_t j = 0; j < n; ++j) {
        if (!(lc.Omega_table[j] > 0.0))
            throw DomainError("angular rate is not positive on the cycle at theta = " +
                              std::to_string(lc.theta_grid[j]));
    }
    std::vector<double> inv(n);
    for (std::size_t j = 0; j < n; ++j) inv[j] = 1.0 / lc.Omega_table[j];
    lc.inverse_rate = PeriodicSeries(inv);
    lc.radius = PeriodicSeries(lc.R_table);
    lc.normalized_frequency = 1.0 / lc.inverse_rate.mean();
    const double rel = std::abs(lc.normalized_frequency - lc.frequency) / lc.frequency;
    if (rel > 1e-8)
        throw ConvergenceError("frequency from return times and from the rate table disagree by " +
                               std::to_string(rel));
    return lc;
}

double psi_of_theta(const LimitCycleData& lc, double theta) {
    const double turns = std::floor(theta / kTwoPi);
    const double phi = theta - kTwoPi * turns;
    return kTwoPi * turns + phi + lc.inverse_rate.oscillating_integral(phi) / lc.inverse_rate.mean();
}

double radius_at(const LimitCycleData& lc, double theta) { return lc.radius(theta); }

double rate_at(const LimitCycleData& lc, double theta) { return 1.0 / lc.inverse_rate(theta); }

}  // namespace hvdp
