#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace hvdp::ode {

// dydt = f(t, y). Must write every component of dydt.
using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

// Embedded Runge-Kutta pairs: Dormand-Prince 5(4) with a 4th-order continuous
// extension, and Dormand-Prince 8(5,3) with a 7th-order one.
enum class Method { dopri5, dop853 };

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0 selects the step automatically
    std::size_t max_steps = 100'000'000;
    Method method = Method::dop853;
    // Build the continuous extension of every step (dop853 spends three extra
    // evaluations on it). Without it StepView::eval throws.
    bool dense_output = true;

    // Throws InvalidArgument for tolerances outside (0, 0.1] or a bad step size.
    void validate() const;
};

// One accepted step [t0, t0 + h] with its continuous extension.
class StepView {
public:
    StepView(double t0, double h, std::span<const double> y0, std::span<const double> y1,
             std::span<const double> rcont)
        : t0_(t0), h_(h), y0_(y0), y1_(y1), rcont_(rcont) {}

    double t0() const { return t0_; }
    double t1() const { return t0_ + h_; }
    double h() const { return h_; }
    std::size_t dim() const { return y0_.size(); }
    std::span<const double> y0() const { return y0_; }
    std::span<const double> y1() const { return y1_; }
    std::span<const double> coefficients() const { return rcont_; }

    // Continuous extension; t should lie in [t0, t1].
    void eval(double t, std::span<double> out) const;
    double eval_component(double t, std::size_t i) const;

private:
    double t0_, h_;
    std::span<const double> y0_, y1_, rcont_;
};

struct IntegrationStats {
    double t_end = 0.0;
    std::vector<double> y_end;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
    bool stopped_early = false;
};

// Called after each accepted step; return false to stop the integration.
using StepObserver = std::function<bool(const StepView&)>;

// Adaptive integration with cfg.method, streaming every accepted step.
IntegrationStats integrate_steps(const Rhs& rhs, std::span<const double> y0, double t0, double t1,
                                 const IntegratorConfig& cfg, const StepObserver& observer);

class Trajectory {
public:
    explicit Trajectory(std::size_t dim = 0) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return times_.size(); }
    std::size_t steps() const { return times_.empty() ? 0 : times_.size() - 1; }
    const std::vector<double>& times() const { return times_; }
    std::span<const double> state(std::size_t i) const;
    StepView step(std::size_t i) const;

    // Dense evaluation anywhere in [times.front(), times.back()].
    std::vector<double> eval(double t) const;

    void push_initial(double t, std::span<const double> y);
    void push_step(const StepView& s);

private:
    std::size_t dim_;
    std::vector<double> times_;
    std::vector<double> states_;
    std::vector<double> rcont_;
};

Trajectory integrate(const Rhs& rhs, std::span<const double> y0, double t0, double t1,
                     const IntegratorConfig& cfg = {});

enum class Direction { rising, falling, any };

using EventFn = std::function<double(double t, std::span<const double> y)>;

struct Crossing {
    double t;
    std::vector<double> y;
};

// Sign change of g inside one step, refined on the dense output by bisection
// followed by a secant polish. A zero exactly at t0 is not reported.
std::optional<double> locate_in_step(const StepView& step, const EventFn& g, Direction dir,
                                     double time_tol = 1e-13);

std::vector<Crossing> find_crossings(const Trajectory& traj, const EventFn& g, Direction dir);

}  // namespace hvdp::ode
