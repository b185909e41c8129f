#include "hvdp/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hvdp/errors.hpp"
#include "ode_detail.hpp"

namespace hvdp::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
constexpr double a21 = 0.2;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension (Hairer, Norsett & Wanner, contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafe = 0.9;
constexpr double kFacMin = 0.2;   // step may shrink by at most 5x
constexpr double kFacMax = 10.0;  // and grow by at most 10x
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;

}  // namespace

namespace detail {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double weighted_rms(std::span<const double> v, std::span<const double> ya,
                    std::span<const double> yb, const IntegratorConfig& cfg) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(ya[i]), std::abs(yb[i]));
        double q = v[i] / sk;
        s += q * q;
    }
    return std::sqrt(s / static_cast<double>(v.size()));
}

double initial_step(const Rhs& rhs, std::span<const double> y0, std::span<const double> f0,
                    double t0, double span_len, const IntegratorConfig& cfg, int order, std::size_t& nevals) {
    const std::size_t n = y0.size();
    double dnf = weighted_rms(f0, y0, y0, cfg);
    double dny = weighted_rms(y0, y0, y0, cfg);
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
    h = std::min({h, cfg.max_step, span_len});
    std::vector<double> y1(n), f1(n), diff(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h * f0[i];
    rhs(t0 + h, y1, f1);
    ++nevals;
    for (std::size_t i = 0; i < n; ++i) diff[i] = f1[i] - f0[i];
    double der2 = weighted_rms(diff, y0, y0, cfg) / h;
    double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / order);
    return std::min({100.0 * h, h1, cfg.max_step, span_len});
}

}  // namespace detail

using detail::all_finite;
using detail::initial_step;
using detail::weighted_rms;

void IntegratorConfig::validate() const {
    auto ok_tol = [](double v) { return std::isfinite(v) && v > 0.0 && v <= 0.1; };
    if (!ok_tol(rel_tol) || !ok_tol(abs_tol))
        throw InvalidArgument("integrator tolerances must lie in (0, 0.1]");
    if (!(max_step > 0.0)) throw InvalidArgument("max_step must be > 0");
    if (!(initial_step >= 0.0) || !std::isfinite(initial_step))
        throw InvalidArgument("initial_step must be finite and >= 0");
    if (max_steps == 0) throw InvalidArgument("max_steps must be > 0");
}

void StepView::eval(double t, std::span<double> out) const {
    for (std::size_t i = 0; i < y0_.size(); ++i) out[i] = eval_component(t, i);
}

double StepView::eval_component(double t, std::size_t i) const {
    const std::size_t n = y0_.size();
    const std::size_t blocks = rcont_.size() / n;
    const double s = (t - t0_) / h_;
    const double s1 = 1.0 - s;
    const double* r = rcont_.data();
    if (blocks == 5)
        return r[i] + s * (r[n + i] + s1 * (r[2 * n + i] + s * (r[3 * n + i] + s1 * r[4 * n + i])));
    if (blocks == 8) {
        // y0 + F0 x + F1 x(1-x) + F2 x^2(1-x) + ... nested from F6 outwards.
        double y = 0.0;
        for (std::size_t k = 7; k >= 1; --k) {
            y += r[k * n + i];
            y *= (k % 2 == 1) ? s : s1;
        }
        return r[i] + y;
    }
    throw InvalidArgument("step has no continuous extension (dense_output disabled)");
}

namespace {

IntegrationStats dopri5_steps(const Rhs& rhs, std::span<const double> y0_in, double t0, double t1,
                              const IntegratorConfig& cfg, const StepObserver& observer) {
    const std::size_t n = y0_in.size();
    IntegrationStats st;
    std::vector<double> y(y0_in.begin(), y0_in.end()), ynew(n), ytmp(n), err(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> rcont(5 * n);

    const double span_len = t1 - t0;
    const double h_min = 1e-14 * span_len;
    double t = t0;

    rhs(t, y, k1);
    ++st.rhs_evals;
    if (!all_finite(k1)) throw NonFiniteStateError("vector field is not finite at the initial state");

    double h = cfg.initial_step > 0.0 ? std::min({cfg.initial_step, cfg.max_step, span_len})
                                      : initial_step(rhs, y, k1, t, span_len, cfg, 5, st.rhs_evals);
    double facold = 1e-4;
    bool last_rejected = false;
    bool nonfinite_pending = false;

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

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const double tnew = final_step ? t1 : t + h;
        rhs(tnew, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(tnew, ynew, k7);
        st.rhs_evals += 6;

        if (!all_finite(ynew) || !all_finite(k7)) {
            nonfinite_pending = true;
            h *= 0.1;
            ++st.rejected;
            last_rejected = true;
            continue;
        }
        nonfinite_pending = false;

        for (std::size_t i = 0; i < n; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double e = weighted_rms(err, y, ynew, cfg);

        const double fac11 = std::pow(e, kExpo1);
        if (e <= 1.0) {
            double fac = fac11 / std::pow(facold, kBeta);
            fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
            double hnew = std::min(h / fac, cfg.max_step);
            if (last_rejected) hnew = std::min(hnew, h);
            facold = std::max(e, 1e-4);

            if (!cfg.dense_output) rcont.clear();
            for (std::size_t i = 0; i < n && cfg.dense_output; ++i) {
                const double dy = ynew[i] - y[i];
                const double bspl = h * k1[i] - dy;
                rcont[i] = y[i];
                rcont[n + i] = dy;
                rcont[2 * n + i] = bspl;
                rcont[3 * n + i] = dy - h * k7[i] - bspl;
                rcont[4 * n + i] =
                    h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            ++st.accepted;
            StepView view(t, tnew - t, y, ynew, rcont);
            const bool keep_going = observer ? observer(view) : true;

            std::swap(y, ynew);
            std::swap(k1, k7);  // FSAL
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

}  // namespace

IntegrationStats integrate_steps(const Rhs& rhs, std::span<const double> y0, double t0, double t1,
                                 const IntegratorConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1))
        throw InvalidArgument("integrate requires finite t1 > t0");
    if (y0.empty()) throw InvalidArgument("empty state vector");
    if (!all_finite(y0)) throw NonFiniteStateError("initial state is not finite");
    return cfg.method == Method::dop853 ? detail::dop853_steps(rhs, y0, t0, t1, cfg, observer)
                                        : dopri5_steps(rhs, y0, t0, t1, cfg, observer);
}

std::span<const double> Trajectory::state(std::size_t i) const {
    return {states_.data() + i * dim_, dim_};
}

StepView Trajectory::step(std::size_t i) const {
    const std::size_t stride = rcont_.size() / steps();
    return StepView(times_[i], times_[i + 1] - times_[i], state(i), state(i + 1),
                    {rcont_.data() + i * stride, stride});
}

void Trajectory::push_initial(double t, std::span<const double> y) {
    times_.assign(1, t);
    states_.assign(y.begin(), y.end());
    rcont_.clear();
}

void Trajectory::push_step(const StepView& s) {
    if (s.coefficients().empty()) throw InvalidArgument("trajectory steps need dense output");
    times_.push_back(s.t1());
    states_.insert(states_.end(), s.y1().begin(), s.y1().end());
    rcont_.insert(rcont_.end(), s.coefficients().begin(), s.coefficients().end());
}

std::vector<double> Trajectory::eval(double t) const {
    if (times_.size() < 2) throw InvalidArgument("trajectory has no steps");
    if (t < times_.front() || t > times_.back())
        throw InvalidArgument("evaluation time outside the trajectory");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    if (i >= steps()) i = steps() - 1;
    std::vector<double> out(dim_);
    step(i).eval(t, out);
    return out;
}

Trajectory integrate(const Rhs& rhs, std::span<const double> y0, double t0, double t1,
                     const IntegratorConfig& cfg) {
    Trajectory traj(y0.size());
    traj.push_initial(t0, y0);
    integrate_steps(rhs, y0, t0, t1, cfg, [&](const StepView& s) {
        traj.push_step(s);
        return true;
    });
    return traj;
}

std::optional<double> locate_in_step(const StepView& step, const EventFn& g, Direction dir,
                                     double time_tol) {
    std::vector<double> buf(step.dim());
    double ta = step.t0(), tb = step.t1();
    double ga = g(ta, step.y0());
    double gb = g(tb, step.y1());
    const bool rising = ga < 0.0 && gb >= 0.0;
    const bool falling = ga > 0.0 && gb <= 0.0;
    if (dir == Direction::rising && !rising) return std::nullopt;
    if (dir == Direction::falling && !falling) return std::nullopt;
    if (dir == Direction::any && !rising && !falling) return std::nullopt;
    if (gb == 0.0) return tb;

    auto geval = [&](double t) {
        step.eval(t, buf);
        return g(t, buf);
    };
    const double tol = std::max(time_tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(tb));
    while (tb - ta > tol) {
        const double tm = 0.5 * (ta + tb);
        if (tm <= ta || tm >= tb) break;
        const double gm = geval(tm);
        if (gm == 0.0) return tm;
        if ((gm < 0.0) == (ga < 0.0)) {
            ta = tm;
            ga = gm;
        } else {
            tb = tm;
            gb = gm;
        }
    }
    // Secant polish inside the final bracket.
    double tc = ta - ga * (tb - ta) / (gb - ga);
    if (!(tc >= ta && tc <= tb)) tc = 0.5 * (ta + tb);
    return tc;
}

std::vector<Crossing> find_crossings(const Trajectory& traj, const EventFn& g, Direction dir) {
    std::vector<Crossing> out;
    for (std::size_t i = 0; i < traj.steps(); ++i) {
        StepView s = traj.step(i);
        if (auto tc = locate_in_step(s, g, dir)) {
            Crossing c{*tc, std::vector<double>(traj.dim())};
            s.eval(*tc, c.y);
            out.push_back(std::move(c));
        }
    }
    return out;
}

}  // namespace hvdp::ode
