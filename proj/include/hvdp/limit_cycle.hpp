#pragma once

#include <vector>

#include "hvdp/ode.hpp"
#include "hvdp/params.hpp"
#include "hvdp/periodic_series.hpp"

namespace hvdp {

// Polar chart of the (x, x') plane: r = sqrt(x^2 + (x'/w)^2), theta = atan2(-x'/w, x).
// theta increases along the flow and is uniform rotation at rate w when eps = 0.
double polar_radius(double x, double v, double omega);
double polar_angle(double x, double v, double omega);
// d theta/dt = w + eps u s (u^2 - 1)/r^2 with u = x, s = x'/w.
double polar_rate(double x, double v, const Params& p);

struct LimitCycleConfig {
    ode::IntegratorConfig integrator{1e-12, 1e-12};
    double return_tol = 1e-9;  // Poincare return distance accepted as settled
    int min_periods = 50;      // transient lower bound
    int n_returns = 20;        // returns averaged for the period
};

struct SettledState {
    double x = 0.0;  // on the section theta = 0, where x' = 0 and x > 0
    double v = 0.0;
    double return_distance = 0.0;
    int periods = 0;
};

// Integrate from (x0, v0) (default (2, 0)) until the return map on theta = 0
// moves the state by at most return_tol, after at least min_periods returns.
// n_transient caps the number of returns; 0 selects max(min_periods, 20/eps).
// Throws ConvergenceError when the cap is reached first.
SettledState settle(const Params& p, double n_transient = 0.0, const LimitCycleConfig& cfg = {},
                    double x0 = 2.0, double v0 = 0.0);

struct LimitCycleData {
    Params params;
    double period = 0.0;     // mean Poincare return time on theta = 0
    double frequency = 0.0;  // 2 pi / period
    double amplitude = 0.0;  // max |x|
    std::vector<double> theta_grid;
    std::vector<double> R_table;
    std::vector<double> Omega_table;

    // 2 pi / integral of d theta / Omega over one turn.
    double normalized_frequency = 0.0;
    // Period measured on the section x = 0, x' > 0 instead.
    double period_x_rising = 0.0;
    double return_distance = 0.0;

    // Trigonometric interpolants of the tables.
    PeriodicSeries radius;
    PeriodicSeries inverse_rate;  // 1 / Omega
};

// Frozen-parameter cycle. At eps = 0 there is no attracting cycle; the eps -> 0+
// limit is returned (R = 2, Omega = w).
LimitCycleData measure(const Params& p, int n_theta = 512, const LimitCycleConfig& cfg = {});

// psi = w * integral_0^theta d theta' / Omega, using the spectral antiderivative
// of the tabulated 1/Omega. psi(theta + 2 pi) = psi(theta) + 2 pi.
double psi_of_theta(const LimitCycleData& lc, double theta);
double radius_at(const LimitCycleData& lc, double theta);
double rate_at(const LimitCycleData& lc, double theta);

}  // namespace hvdp
