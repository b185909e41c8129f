#pragma once

#include <string>
#include <vector>

#include "hvdp/limit_cycle.hpp"
#include "hvdp/param_loop.hpp"
#include "hvdp/spline.hpp"

namespace hvdp {

// Frozen-parameter cycles measured along a loop and interpolated in s:
// periodic cubic for loops smooth through s = 0, not-a-knot per smooth piece otherwise.
class FrozenGrid {
public:
    FrozenGrid() = default;
    FrozenGrid(ParamLoop loop, std::vector<double> s_nodes, std::vector<LimitCycleData> data);

    const ParamLoop& loop() const { return loop_; }
    const std::vector<double>& s_nodes() const { return s_; }
    const std::vector<LimitCycleData>& data() const { return data_; }

    double frequency(double s) const;
    double radius(double theta, double s) const;
    double psi(double theta, double s) const;
    // T * integral_0^1 frequency(s) ds by adaptive Gauss-Kronrod per piece.
    double dynamic_phase(double T) const;

private:
    struct Piece {
        double s0, s1;
        CubicSpline spline;
    };
    const Piece& piece_for(double s) const;
    void coefficients(double s, std::vector<double>& out) const;

    ParamLoop loop_;
    std::vector<double> s_;
    std::vector<LimitCycleData> data_;
    std::vector<Piece> pieces_;
    std::size_t n_theta_ = 0;
    std::size_t harmonics_ = 0;  // retained per table
};

// Nodes are spread over the smooth pieces in proportion to their s-length
// (at least three intervals each); corners are always nodes. threads = 0 runs
// one worker per hardware thread.
FrozenGrid frozen_grid(const ParamLoop& loop, int n_s = 64, int n_theta = 512,
                       const LimitCycleConfig& cfg = {}, unsigned threads = 1);

// Orientation in which phases are reported. along_flow counts the angle in the
// direction the oscillator turns (theta of the polar chart, all phases
// positive). phase_plane counts it counter-clockwise in the (x, xdot) plane,
// where the flow turns clockwise, so every phase changes sign.
enum class PhaseSense { along_flow, phase_plane };
const char* to_string(PhaseSense s);

struct SweepConfig {
    ode::IntegratorConfig integrator{1e-11, 1e-11};
    double min_cycles = 50.0;  // adiabaticity guard, in periods 2 pi / min omega
    PhaseSense sense = PhaseSense::phase_plane;
};

struct PhaseResult {
    double total_phase = 0.0;
    double dynamic_phase = 0.0;
    double geometric_phase = 0.0;
    double T = 0.0;
    double cycles = 0.0;         // T w(0) / 2 pi with the frozen frequency at lambda(0)
    double winding = 0.0;        // full turns of theta over the sweep
    double max_deviation = 0.0;  // max |r(t) - R(theta(t), lambda(t))|
    std::size_t steps = 0;
};

// Start on the frozen cycle at lambda(0) with theta = 0, integrate with
// lambda(t) = loop(t/T), and read the phase off psi at the end; the dynamic
// phase uses the frozen frequencies. Throws AdiabaticityError when
// T < min_cycles * 2 pi / min omega.
PhaseResult sweep(const FrozenGrid& grid, double T, const SweepConfig& cfg = {});
PhaseResult sweep(const ParamLoop& loop, double T, const SweepConfig& cfg = {});

// Sweep duration for a given Tw(0)/2pi.
double duration_for_cycles(const FrozenGrid& grid, double cycles);

struct ConvergenceRow {
    double cycles = 0.0;
    double T = 0.0;
    PhaseResult result;
    bool ok = false;
    std::string error;
};

// One sweep per duration, evaluated concurrently; rows sorted by T. Failed
// rows carry the error message instead of a result.
std::vector<ConvergenceRow> convergence_study(const FrozenGrid& grid, const std::vector<double>& T_list,
                                              const SweepConfig& cfg = {}, unsigned threads = 1);

}  // namespace hvdp
