#pragma once

#include <span>

#include "hvdp/ode.hpp"

namespace hvdp::ode::detail {

bool all_finite(std::span<const double> v);
double weighted_rms(std::span<const double> v, std::span<const double> ya, std::span<const double> yb,
                    const IntegratorConfig& cfg);
// Hairer's starting-step heuristic for a method of the given order.
double initial_step(const Rhs& rhs, std::span<const double> y0, std::span<const double> f0, double t0,
                    double span_len, const IntegratorConfig& cfg, int order, std::size_t& nevals);

IntegrationStats dop853_steps(const Rhs& rhs, std::span<const double> y0, double t0, double t1,
                              const IntegratorConfig& cfg, const StepObserver& observer);

}  // namespace hvdp::ode::detail
