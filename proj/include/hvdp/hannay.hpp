#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hvdp/lie_series.hpp"
#include "hvdp/param_loop.hpp"

namespace hvdp {

// Connection one-form on (omega, eps) space and its curl dA2/domega - dA1/deps.
struct ConnectionModel {
    std::function<Connection(const Params&)> A;
    std::function<double(const Params&)> curl;
    std::string name;
};

// A = (-eps/(8 w^2), 0).
ConnectionModel vdp_connection();

enum class IntegralMethod { closed_form, line_quadrature, green_theorem };
const char* to_string(IntegralMethod m);

struct LoopIntegralResult {
    double phi_H = 0.0;
    IntegralMethod method = IntegralMethod::line_quadrature;
    double error_estimate = 0.0;
    // Square loops under the default connection also carry the exact value.
    std::optional<double> closed_form;
};

// (eps_max - eps_min)/8 (1/w_min - 1/w_max): only the horizontal edges contribute.
double square_closed_form(const SquareBounds& b);

// Adaptive Gauss-Kronrod line integral of A1 dw + A2 de, piece by piece.
// Throws ConvergenceError if the error estimate exceeds abs_tol.
LoopIntegralResult hannay_angle(const ParamLoop& loop, const ConnectionModel& conn = vdp_connection(),
                                double abs_tol = 1e-10);

// Area integral of the curl over the enclosed region, signed by orientation:
// tanh-sinh over eps (split at breakpoint levels and eps extrema), Gauss-Kronrod
// over each interior omega chord. Throws InvalidArgument for non-simple loops.
LoopIntegralResult green_theorem_oracle(const ParamLoop& loop,
                                        const ConnectionModel& conn = vdp_connection(),
                                        double abs_tol = 1e-10);

// Signed enclosed area (positive for counter-clockwise) of a dense polygon approximation.
double signed_area(const ParamLoop& loop, int samples_per_piece = 512);

// True when a dense polygon approximation of the loop crosses itself.
bool self_intersects(const ParamLoop& loop, int samples_per_piece = 256);

}  // namespace hvdp
