#pragma once

#include <cstdint>

#include "hvdp/params.hpp"

namespace hvdp {

struct Rational {
    std::int64_t num;
    std::int64_t den;
    constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Highest power of eps retained, 1..4. Order k drops every term in eps^(k+1) and above.
class SeriesOrder {
public:
    constexpr SeriesOrder(int order = 4) : order_(order) {
        if (order < 1 || order > 4) throw_invalid();
    }
    constexpr int value() const { return order_; }
    constexpr bool keeps(int eps_power) const { return eps_power <= order_; }

private:
    [[noreturn]] static void throw_invalid();
    int order_;
};

// Rates on the manifold alpha1 = alpha2, beta1 = -beta2 (eps^3 and eps^4 truncations).
double reduced_alpha_rate(double alpha1, const Params& p, SeriesOrder o = {});
double reduced_beta_rate(double alpha1, const Params& p, SeriesOrder o = {});

// w^2 - eps^2/32
double fixed_point_alpha(const Params& p, SeriesOrder o = {});

// -eps^2/(16 w^2) + 17 eps^4/(3072 w^4)
double beta1_rate(const Params& p, SeriesOrder o = {});

// w + w beta1_rate: w - eps^2/(16 w) + 17 eps^4/(3072 w^3)
double limit_cycle_frequency(const Params& p, SeriesOrder o = {});

// x as a harmonic series in B = w (t + beta1), through eps^3.
double solution_x(double B, const Params& p, SeriesOrder o = {});

// max over B of solution_x, located by a coarse scan plus Brent refinement.
double series_amplitude(const Params& p, SeriesOrder o = {});

// Action-angle chart I = alpha / w.
double action_fixed_point(const Params& p, SeriesOrder o = {});
double phi1_rate(double I1, const Params& p, SeriesOrder o = {});
double action_rate(double I1, const Params& p, SeriesOrder o = {});

struct Connection {
    double A1 = 0.0;  // d-omega component
    double A2 = 0.0;  // d-eps component
};

// A = (-eps/(8 w^2), 0), with curl dA2/dw - dA1/deps = 1/(8 w^2).
Connection connection(const Params& p);
double connection_curl(const Params& p);

}  // namespace hvdp
