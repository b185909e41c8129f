#include "hvdp/geophase.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "hvdp/dual_dynamics.hpp"
#include "hvdp/errors.hpp"
#include "hvdp/parallel.hpp"

namespace hvdp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pi(double a) {
    a = std::remainder(a, kTwoPi);
    if (a <= -std::numbers::pi) a += kTwoPi;
    return a;
}

// Channel layout per node: frequency, then (a, b) of 1/Omega, then (a, b) of R,
// each with harmonics 0..K.
std::size_t channel_count(std::size_t K) { return 1 + 4 * (K + 1); }

void pack(const LimitCycleData& lc, std::size_t K, double* out) {
    out[0] = lc.frequency;
    auto put = [&](const PeriodicSeries& ps, double* dst) {
        const auto& a = ps.cos_coeffs();
        const auto& b = ps.sin_coeffs();
        for (std::size_t k = 0; k <= K; ++k) {
            dst[k] = k < a.size() ? a[k] : 0.0;
            dst[K + 1 + k] = k < b.size() ? b[k] : 0.0;
        }
    };
    put(lc.inverse_rate, out + 1);
    put(lc.radius, out + 1 + 2 * (K + 1));
}

}  // namespace

FrozenGrid::FrozenGrid(ParamLoop loop, std::vector<double> s_nodes, std::vector<LimitCycleData> data)
    : loop_(std::move(loop)), s_(std::move(s_nodes)), data_(std::move(data)) {
    if (s_.size() != data_.size() || s_.size() < 2) throw InvalidArgument("frozen grid: size mismatch");
    n_theta_ = data_.front().theta_grid.size();
    harmonics_ = 0;
    for (const auto& d : data_) {
        if (d.theta_grid.size() != n_theta_) throw InvalidArgument("frozen grid: mixed n_theta");
        harmonics_ = std::max({harmonics_, d.inverse_rate.active_harmonics(), d.radius.active_harmonics()});
    }
    const std::size_t nc = channel_count(harmonics_);
    const auto& bp = loop_.breakpoints();
    const bool periodic = bp.size() == 2 && loop_.kind() != LoopKind::polyline &&
                          loop_.kind() != LoopKind::square;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        std::vector<double> xs, vals;
        for (std::size_t j = 0; j < s_.size(); ++j) {
            if (s_[j] < bp[i] || s_[j] > bp[i + 1]) continue;
            xs.push_back(s_[j]);
            vals.resize(vals.size() + nc);
            pack(data_[j], harmonics_, vals.data() + vals.size() - nc);
        }
        pieces_.push_back({bp[i], bp[i + 1],
                           CubicSpline(std::move(xs), std::move(vals), nc,
                                       periodic ? CubicSpline::Boundary::periodic
                                                : CubicSpline::Boundary::not_a_knot)});
    }
}

const FrozenGrid::Piece& FrozenGrid::piece_for(double s) const {
    for (const auto& p : pieces_)
        if (s <= p.s1) return p;
    return pieces_.back();
}

void FrozenGrid::coefficients(double s, std::vector<double>& out) const {
    const Piece& p = piece_for(s);
    out.resize(p.spline.channels());
    p.spline.eval(std::clamp(s, p.s0, p.s1), out);
}

double FrozenGrid::frequency(double s) const {
    const Piece& p = piece_for(s);
    return p.spline.eval(std::clamp(s, p.s0, p.s1), 0);
}

double FrozenGrid::radius(double theta, double s) const {
    thread_local std::vector<double> c;
    coefficients(s, c);
    const std::size_t K = harmonics_;
    const double* a = c.data() + 1 + 2 * (K + 1);
    const double* b = a + K + 1;
    double r = a[0];
    for (std::size_t k = 1; k <= K; ++k) {
        const double kt = static_cast<double>(k) * theta;
        r += a[k] * std::cos(kt) + b[k] * std::sin(kt);
    }
    return r;
}

double FrozenGrid::psi(double theta, double s) const {
    std::vector<double> c;
    coefficients(s, c);
    const std::size_t K = harmonics_;
    std::vector<double> a(c.begin() + 1, c.begin() + 2 + K);
    std::vector<double> b(c.begin() + 2 + K, c.begin() + 3 + 2 * K);
    const PeriodicSeries inv = PeriodicSeries::from_coefficients(std::move(a), std::move(b), n_theta_);
    const double turns = std::floor(theta / kTwoPi);
    const double phi = theta - kTwoPi * turns;
    return kTwoPi * turns + phi + inv.oscillating_integral(phi) / inv.mean();
}

double FrozenGrid::dynamic_phase(double T) const {
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0;
    for (const auto& p : pieces_) {
        auto f = [&](double s) { return p.spline.eval(s, 0); };
        // The integrand is a cubic on each knot interval; integrate interval by interval.
        const auto& xs = s_;
        double a = p.s0;
        for (double x : xs) {
            if (x <= p.s0 || x > p.s1) continue;
            total += gauss_kronrod<double, 15>::integrate(f, a, x, 0, 0.0);
            a = x;
        }
    }
    return T * total;
}

FrozenGrid frozen_grid(const ParamLoop& loop, int n_s, int n_theta, const LimitCycleConfig& cfg,
                       unsigned threads) {
    loop.validate();
    if (n_s < 4) throw InvalidArgument("n_s must be >= 4");
    const auto& bp = loop.breakpoints();
    std::vector<double> s_nodes{0.0};
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double len = bp[i + 1] - bp[i];
        const int m = std::max(3, static_cast<int>(std::lround(n_s * len)));
        for (int j = 1; j <= m; ++j) s_nodes.push_back(j == m ? bp[i + 1] : bp[i] + len * j / m);
    }
    const std::size_t n = s_nodes.size();
    std::vector<LimitCycleData> data(n);
    // The last node is s = 1, the same parameters as s = 0.
    parallel_for(n - 1, threads, [&](std::size_t j) { data[j] = measure(loop.at(s_nodes[j]), n_theta, cfg); });
    data[n - 1] = data[0];
    return FrozenGrid(loop, std::move(s_nodes), std::move(data));
}

const char* to_string(PhaseSense s) {
    return s == PhaseSense::along_flow ? "along_flow" : "phase_plane";
}

double duration_for_cycles(const FrozenGrid& grid, double cycles) {
    return cycles * kTwoPi / grid.data().front().frequency;
}

PhaseResult sweep(const FrozenGrid& grid, double T, const SweepConfig& cfg) {
    const ParamLoop& loop = grid.loop();
    loop.validate();
    const double guard = cfg.min_cycles * kTwoPi / loop.min_omega();
    if (!(T >= guard))
        throw AdiabaticityError("sweep duration " + std::to_string(T) + " is below the adiabatic guard " +
                                std::to_string(guard));
    const LimitCycleData& lc0 = grid.data().front();

    PhaseResult res;
    res.T = T;
    res.cycles = T * lc0.frequency / kTwoPi;

    ode::Rhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
        const Params p = loop.at(t / T);
        const auto d = vdp_rhs(y[0], y[1], p);
        dy[0] = d[0];
        dy[1] = d[1];
    };

    std::vector<double> y{lc0.R_table[0], 0.0};
    const double theta0 = polar_angle(y[0], y[1], lc0.params.omega);
    double theta_unwrapped = theta0;
    double theta_prev = theta0;

    const auto& bp = loop.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double ta = T * bp[i], tb = (i + 2 == bp.size()) ? T : T * bp[i + 1];
        const auto st = ode::integrate_steps(rhs, y, ta, tb, cfg.integrator, [&](const ode::StepView& s) {
            const double t1 = s.t1();
            const double sv = std::min(1.0, t1 / T);
            const Params p = loop.at(sv);
            const double x = s.y1()[0], v = s.y1()[1];
            const double th = polar_angle(x, v, p.omega);
            theta_unwrapped += wrap_pi(th - theta_prev);
            theta_prev = th;
            const double dev = std::abs(polar_radius(x, v, p.omega) - grid.radius(theta_unwrapped, sv));
            res.max_deviation = std::max(res.max_deviation, dev);
            return true;
        });
        y = st.y_end;
        res.steps += st.accepted;
    }

    // Snap the accumulated angle onto the exact end-point angle.
    const double th_end = polar_angle(y[0], y[1], loop.at(1.0).omega);
    const double turns = std::round((theta_unwrapped - th_end) / kTwoPi);
    const double theta_T = th_end + kTwoPi * turns;
    res.winding = std::floor((theta_T - theta0) / kTwoPi);

    res.total_phase = psi_of_theta(lc0, theta_T) - psi_of_theta(lc0, theta0);
    res.dynamic_phase = grid.dynamic_phase(T);
    if (cfg.sense == PhaseSense::phase_plane) {
        res.total_phase = -res.total_phase;
        res.dynamic_phase = -res.dynamic_phase;
    }
    res.geometric_phase = res.total_phase - res.dynamic_phase;
    return res;
}

PhaseResult sweep(const ParamLoop& loop, double T, const SweepConfig& cfg) {
    return sweep(frozen_grid(loop), T, cfg);
}

std::vector<ConvergenceRow> convergence_study(const FrozenGrid& grid, const std::vector<double>& T_list,
                                              const SweepConfig& cfg, unsigned threads) {
    if (T_list.empty()) throw InvalidArgument("convergence study needs at least one duration");
    std::vector<double> Ts = T_list;
    std::sort(Ts.begin(), Ts.end());
    std::vector<ConvergenceRow> rows(Ts.size());
    parallel_for(Ts.size(), threads, [&](std::size_t i) {
        ConvergenceRow& row = rows[i];
        row.T = Ts[i];
        row.cycles = Ts[i] * grid.data().front().frequency / kTwoPi;
        try {
            row.result = sweep(grid, Ts[i], cfg);
            row.ok = true;
        } catch (const Error& e) {
            row.error = e.what();
        }
    });
    return rows;
}

}  // namespace hvdp
