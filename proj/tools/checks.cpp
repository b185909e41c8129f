#include "checks.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "hvdp/dual_dynamics.hpp"
#include "hvdp/errors.hpp"
#include "hvdp/geophase.hpp"
#include "hvdp/hannay.hpp"
#include "hvdp/lie_series.hpp"
#include "hvdp/limit_cycle.hpp"
#include "hvdp/resonance.hpp"

namespace hvdp::checks {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Adds a detail line and folds the check into the criterion verdict.
void check(Criterion& c, bool ok, const std::string& line) {
    c.details.push_back(std::string(ok ? "ok   " : "FAIL ") + line);
    if (!ok) c.pass = false;
}

// Informational detail line; does not affect the verdict.
void note(Criterion& c, const std::string& line) { c.details.push_back("     " + line); }

void frequency(Criterion& c) {
    c.title = "limit-cycle frequency vs eps^4 series";
    c.budget = 30.0;
    std::map<double, std::pair<double, double>> cache;
    auto err = [&](double eps) {
        auto it = cache.find(eps);
        if (it == cache.end()) {
            const Params p{1.0, eps};
            it = cache.emplace(eps, std::pair{measure(p).frequency, limit_cycle_frequency(p)}).first;
        }
        return it->second;
    };
    const auto [m1, s1] = err(0.1);
    check(c, std::abs(m1 - s1) <= 1e-6, fmt("eps=0.1 measured %.10f series %.10f |d|=%.2e <= 1e-6", m1, s1, std::abs(m1 - s1)));
    const auto [m3, s3] = err(0.3);
    check(c, std::abs(m3 - s3) <= 1e-5, fmt("eps=0.3 measured %.10f series %.10f |d|=%.2e <= 1e-5", m3, s3, std::abs(m3 - s3)));

    const double eps[] = {0.05, 0.1, 0.2, 0.4};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::string errs;
    for (double e : eps) {
        const auto [m, s] = err(e);
        const double lx = std::log(e), ly = std::log(std::abs(m - s));
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
        errs += fmt(" %.3e", std::abs(m - s));
    }
    const double n = 4.0;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    check(c, slope >= 5.0, fmt("log-log slope over eps {0.05,0.1,0.2,0.4} = %.3f >= 5 (|d|:%s)", slope, errs.c_str()));
}

void amplitude(Criterion& c) {
    c.title = "limit-cycle amplitude at eps = 0.1";
    c.budget = 10.0;
    const Params p{1.0, 0.1};
    const double a = measure(p).amplitude;
    const double s = series_amplitude(p);
    check(c, std::abs(a - published::amplitude) <= 1e-3,
          fmt("measured %.8f published %.1f |d|=%.2e <= 1e-3", a, published::amplitude, std::abs(a - 2.0)));
    check(c, std::abs(a - s) <= 2e-3, fmt("series max %.8f |d|=%.2e <= 2e-3", s, std::abs(a - s)));
}

void square_hannay(Criterion& c) {
    c.title = "square-loop Hannay angle";
    c.budget = 1.0;
    const auto loop = ParamLoop::square(0.6, 0.8, 0.1, 0.3);
    const auto r = hannay_angle(loop);
    const double cf = r.closed_form.value_or(std::nan(""));
    check(c, std::abs(r.phi_H - cf) <= 1e-8,
          fmt("quadrature %.12f closed form %.12f |d|=%.2e <= 1e-8", r.phi_H, cf, std::abs(r.phi_H - cf)));
    check(c, std::abs(r.phi_H - published::square_hannay) <= 5e-5,
          fmt("published %.4f delta %+.2e (<= 5e-5)", published::square_hannay, r.phi_H - published::square_hannay));
}

// Sweep at T w(0)/2pi = 500 in the phase-plane sense; along-flow value printed too.
PhaseResult sweep500(Criterion& c, const ParamLoop& loop, unsigned threads) {
    const auto grid = frozen_grid(loop, 64, 512, {}, threads);
    const double T = duration_for_cycles(grid, 500.0);
    const PhaseResult r = sweep(grid, T);
    c.details.push_back(fmt("     T=%.3f cycles=%.1f total=%.9f dynamic=%.9f max|r-R|=%.2e steps=%zu", r.T, r.cycles,
                            r.total_phase, r.dynamic_phase, r.max_deviation, r.steps));
    c.details.push_back(fmt("     along-flow orientation: psi_G=%.8f", -r.geometric_phase));
    return r;
}

void square_geophase(Criterion& c, unsigned threads) {
    c.title = "geometric phase = Hannay angle, square loop, 500 cycles";
    c.budget = 600.0;
    const auto loop = ParamLoop::square(0.6, 0.8, 0.1, 0.3);
    const double phi = hannay_angle(loop).phi_H;
    const double g = sweep500(c, loop, threads).geometric_phase;
    check(c, std::abs(g - published::square_geometric) <= 1e-3,
          fmt("psi_G %.8f published %.4f delta %+.2e (<= 1e-3)", g, published::square_geometric,
              g - published::square_geometric));
    check(c, std::abs(g - phi) <= 1.5e-3, fmt("phi_H %.8f delta %+.2e (<= 1.5e-3)", phi, g - phi));
}

void ellipse_geophase(Criterion& c, unsigned threads) {
    c.title = "geometric phase = Hannay angle, ellipse loop, 500 cycles";
    c.budget = 600.0;
    const auto loop = ParamLoop::ellipse(0.8, 0.1, 0.2, 0.1);
    const auto green = green_theorem_oracle(loop);
    const double quad = hannay_angle(loop).phi_H;
    const double g = sweep500(c, loop, threads).geometric_phase;
    check(c, std::abs(g - published::ellipse_geometric) <= 1.5e-3,
          fmt("psi_G %.8f published %.3f delta %+.2e (<= 1.5e-3)", g, published::ellipse_geometric,
              g - published::ellipse_geometric));
    check(c, std::abs(g - green.phi_H) <= 2e-3,
          fmt("Green phi_H %.8f (line %.8f) delta %+.2e (<= 2e-3)", green.phi_H, quad, g - green.phi_H));
    c.details.push_back(fmt("note published Hannay angle %.4f differs from quadrature by %+.2e; psi_G - %.4f = %+.2e",
                            published::ellipse_hannay, published::ellipse_hannay - green.phi_H,
                            published::ellipse_hannay, g - published::ellipse_hannay));
}

double dual_h_drift(double tol) {
    const Params p{1.0, 0.01};
    const CartState s0 = phys_to_cart({2.0, 0.0, 0.5, 0.0}, p);
    const double h0 = hamiltonian(s0, p);
    double drift = 0.0;
    const ode::Rhs rhs = [&](double, std::span<const double> y, std::span<double> dy) {
        const auto d = hamilton_rhs({y[0], y[1], y[2], y[3]}, p);
        dy[0] = d.x, dy[1] = d.y, dy[2] = d.px, dy[3] = d.py;
    };
    const std::vector<double> y0{s0.x, s0.y, s0.px, s0.py};
    ode::integrate_steps(rhs, y0, 0.0, 100.0 * kTwoPi, {tol, tol}, [&](const ode::StepView& st) {
        const auto y = st.y1();
        drift = std::max(drift, std::abs(hamiltonian({y[0], y[1], y[2], y[3]}, p) - h0));
        return true;
    });
    return drift / std::max(1.0, std::abs(h0));
}

struct AugDrift {
    double absolute = 0.0;  // |H(t) - H(0)| / max(1, |H(0)|)
    double scaled = 0.0;    // |H(t) - H(0)| / max_t |y||f|
};

AugDrift augmented_drift(double eps) {
    const Params q{1.0, eps};
    const VectorField f = [&](std::span<const double> x, std::span<double> fx) {
        const auto d = vdp_rhs(x[0], x[1], q);
        fx[0] = d[0], fx[1] = d[1];
    };
    const ode::Rhs aug = [&](double, std::span<const double> z, std::span<double> dz) {
        f(z.first(2), dz.first(2));
        const auto dy = augment(f, z.first(2), z.subspan(2, 2));
        dz[2] = dy[0], dz[3] = dy[1];
    };
    const std::vector<double> z0{1.5, 0.2, 0.3, -0.4};
    auto energy = [&](std::span<const double> z, double* scale) {
        double fx[2];
        f(z.first(2), fx);
        if (scale) *scale = std::max(*scale, std::hypot(z[2], z[3]) * std::hypot(fx[0], fx[1]));
        return z[2] * fx[0] + z[3] * fx[1];
    };
    double scale = 0.0, drift = 0.0;
    const double e0 = energy(z0, &scale);
    ode::integrate_steps(aug, z0, 0.0, 10.0 * kTwoPi, {1e-10, 1e-10}, [&](const ode::StepView& st) {
        drift = std::max(drift, std::abs(energy(st.y1(), &scale) - e0));
        return true;
    });
    return {drift / std::max(1.0, std::abs(e0)), drift / scale};
}

void conservation(Criterion& c) {
    c.title = "dual Hamiltonian and augmented-system conservation";
    // Known to fail: no embedded RK pair reaches 1e-9 at tol 1e-10 over 100 cycles.
    const double d10 = dual_h_drift(1e-10);
    check(c, d10 <= 1e-9, fmt("H relative drift over 100 cycles (tol 1e-10, eps=0.01) = %.2e <= 1e-9", d10));
    note(c, fmt("same run against the 100*tol invariant: %.2e <= 1e-8 %s", d10, d10 <= 1e-8 ? "holds" : "violated"));
    const double d11 = dual_h_drift(1e-11);
    note(c, fmt("at tol 1e-11 the drift is %.2e", d11));

    const AugDrift a = augmented_drift(0.1);
    check(c, a.absolute <= 1e-7,
          fmt("augmented H = y.f(x) drift over 10 cycles (eps=0.1) = %.2e <= 1e-7", a.absolute));
    const AugDrift b = augmented_drift(0.3);
    note(c, fmt("eps=0.3: |y| grows ~3e7, drift %.2e absolute, %.2e relative to max|y||f|", b.absolute, b.scaled));
}

void manifold(Criterion& c) {
    c.title = "invariant manifold of the alpha-beta flow";
    for (const Params p : {Params{1.0, 0.2}, Params{0.7, 0.4}}) {
        const double w2 = p.omega * p.omega;
        const std::vector<double> y0{0.8 * w2, 0.8 * w2, 0.37, -0.37};
        const ode::Rhs rhs = [&](double, std::span<const double> y, std::span<double> dy) {
            const auto d = alphabeta_rhs({y[0], y[1], y[2], y[3]}, p);
            dy[0] = d.alpha1, dy[1] = d.alpha2, dy[2] = d.beta1, dy[3] = d.beta2;
        };
        double da = 0.0, db = 0.0;
        ode::integrate_steps(rhs, y0, 0.0, 50.0 * kTwoPi / p.omega, {1e-10, 1e-10}, [&](const ode::StepView& st) {
            const auto y = st.y1();
            da = std::max(da, std::abs(y[0] - y[1]));
            db = std::max(db, std::abs(y[2] + y[3]));
            return true;
        });
        check(c, da <= 1e-8 && db <= 1e-8,
              fmt("w=%.1f eps=%.1f, 50 cycles: max|a1-a2|=%.2e max|b1+b2|=%.2e <= 1e-8", p.omega, p.eps, da, db));
    }
}

// Central difference of component `out` of alphabeta_rhs along coordinate `in`.
double partial(const AlphaBeta& s, const Params& p, int out, int in) {
    auto get = [](const AlphaBeta& a, int i) {
        const double v[] = {a.alpha1, a.beta1, a.alpha2, a.beta2};
        return v[i];
    };
    auto shifted = [&](double d) {
        AlphaBeta t = s;
        double* v[] = {&t.alpha1, &t.beta1, &t.alpha2, &t.beta2};
        *v[in] += d;
        return t;
    };
    const double h = 1e-6 * std::max(1.0, std::abs(get(s, in)));
    // component order (f1, f2, f3, f4) = (alpha1', beta1', alpha2', beta2')
    auto comp = [&](const AlphaBeta& d) {
        const double v[] = {d.alpha1, d.beta1, d.alpha2, d.beta2};
        return v[out];
    };
    return (comp(alphabeta_rhs(shifted(h), p)) - comp(alphabeta_rhs(shifted(-h), p))) / (2.0 * h);
}

void appendix_flow(Criterion& c) {
    c.title = "canonical alpha-beta flow: symplecticity and manifold reduction";
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    // (out, in) pairs: df1/da1 + df2/db1, df3/da2 + df4/db2, df1/da2 + df4/db1, df3/da1 + df2/db2
    constexpr int kPairs[4][4] = {{0, 0, 1, 1}, {2, 2, 3, 3}, {0, 2, 3, 1}, {2, 0, 1, 3}};
    double worst[4] = {0, 0, 0, 0};
    double worst_red = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Params p{0.6 + 0.8 * U(rng), 0.05 + 0.35 * U(rng)};
        const double w2 = p.omega * p.omega;
        const AlphaBeta s{w2 * (0.5 + U(rng)), w2 * (0.5 + U(rng)), kTwoPi / p.omega * U(rng),
                          kTwoPi / p.omega * U(rng)};
        for (int j = 0; j < 4; ++j) {
            const double a = partial(s, p, kPairs[j][0], kPairs[j][1]);
            const double b = partial(s, p, kPairs[j][2], kPairs[j][3]);
            worst[j] = std::max(worst[j], std::abs(a + b) / std::max({std::abs(a), std::abs(b), 1e-8}));
        }
        const double a = s.alpha1;
        const double beta = s.beta1;
        const AlphaBeta m = alphabeta_rhs({a, a, beta, -beta}, p);
        const double ra = reduced_alpha_rate(a, p), rb = reduced_beta_rate(a, p);
        worst_red = std::max({worst_red, std::abs(m.alpha1 - ra) / std::max(1.0, std::abs(ra)),
                              std::abs(m.beta1 - rb) / std::max(1.0, std::abs(rb))});
    }
    const char* names[] = {"df1/da1+df2/db1", "df3/da2+df4/db2", "df1/da2+df4/db1", "df3/da1+df2/db2"};
    for (int j = 0; j < 4; ++j)
        check(c, worst[j] <= 1e-6, fmt("%s, 100 random points: max relative %.2e <= 1e-6", names[j], worst[j]));
    check(c, worst_red <= 1e-12, fmt("manifold reduction to the reduced rates: max |d| %.2e <= 1e-12", worst_red));
}

void fixed_point(Criterion& c) {
    c.title = "fixed-point consistency";
    for (double eps : {0.1, 0.2, 0.4}) {
        const Params p{1.0, eps};
        boost::math::tools::eps_tolerance<double> tol(50);
        const auto [lo, hi] =
            boost::math::tools::bisect([&](double a) { return reduced_alpha_rate(a, p); }, 0.5, 1.5, tol);
        const double root = 0.5 * (lo + hi);
        const double fp = fixed_point_alpha(p);
        const double e4 = eps * eps * eps * eps;
        check(c, std::abs(root - fp) <= e4,
              fmt("eps=%.1f bisection root %.12f vs %.12f |d|=%.2e <= eps^4=%.1e", eps, root, fp, std::abs(root - fp), e4));
    }
    double worst = 0.0;
    for (double w : {0.5, 0.8, 1.0, 1.7, 3.0})
        for (double eps : {0.0, 0.1, 0.3, 0.7}) {
            const Params p{w, eps};
            worst = std::max(worst, std::abs(w * action_fixed_point(p) - fixed_point_alpha(p)));
        }
    check(c, worst <= 1e-12, fmt("w * I1* = alpha1* over a (w, eps) grid: max |d| %.2e <= 1e-12", worst));
}

void resonance(Criterion& c) {
    c.title = "coupled oscillators: energy, averaging, rate identity";
    const CoupledParams cp{1.0, 1.0, 0.05};
    const CoupledCart s0 = alphabeta_to_cart({1.0, 0.8, 0.1, -0.2}, 0.0, cp);
    const double h0 = coupled_energy(s0, cp);
    double drift = 0.0;
    const ode::Rhs rhs = [&](double, std::span<const double> y, std::span<double> dy) {
        const auto d = coupled_rhs({y[0], y[1], y[2], y[3]}, cp);
        dy[0] = d.q1, dy[1] = d.q2, dy[2] = d.p1, dy[3] = d.p2;
    };
    ode::integrate_steps(rhs, std::vector<double>{s0.q1, s0.q2, s0.p1, s0.p2}, 0.0, 100.0 * kTwoPi,
                         {1e-12, 1e-12}, [&](const ode::StepView& st) {
                             const auto y = st.y1();
                             drift = std::max(drift, std::abs(coupled_energy({y[0], y[1], y[2], y[3]}, cp) - h0));
                             return true;
                         });
    drift /= std::max(1.0, std::abs(h0));
    check(c, drift <= 1e-9, fmt("energy relative drift over 100 periods (tol 1e-12) = %.2e <= 1e-9", drift));

    const double d1 = compare({1.0, 1.0, 0.05}, 1.0 / 0.05).alpha_deviation;
    const double d2 = compare({1.0, 1.0, 0.025}, 1.0 / 0.025).alpha_deviation;
    const double ratio = d2 / d1;
    check(c, ratio >= 0.3 && ratio <= 0.7,
          fmt("resonant w1=w2=1, horizon 1/eps: alpha deviation %.3e (eps=0.05) -> %.3e (eps=0.025), ratio %.3f in [0.3, 0.7]",
              d1, d2, ratio));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const CoupledParams q{0.5 + U(rng), 0.5 + U(rng), 0.2 * U(rng), true};
        const CoupledAlphaBeta s{2 * U(rng), 2 * U(rng), 10 * U(rng), 10 * U(rng)};
        const double t = 50 * U(rng);
        const auto d = averaged_rhs(s, t, q);
        const double a = q.omega2 * d.alpha1, b = q.omega1 * d.alpha2;
        worst = std::max(worst, std::abs(a + b) / std::max({std::abs(a), std::abs(b), 1e-300}));
    }
    check(c, worst <= 4.0 * std::numeric_limits<double>::epsilon(),
          fmt("w2 a1' + w1 a2' at 100 random points: max relative %.2e (rounding only, <= 4 ulp)", worst));
}

}  // namespace

Criterion run(int id, const Options& opt) {
    Criterion c;
    c.id = id;
    c.pass = true;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        switch (id) {
            case 1: frequency(c); break;
            case 2: amplitude(c); break;
            case 3: square_hannay(c); break;
            case 4: square_geophase(c, opt.threads); break;
            case 5: ellipse_geophase(c, opt.threads); break;
            case 6: conservation(c); break;
            case 7: manifold(c); break;
            case 8: appendix_flow(c); break;
            case 9: fixed_point(c); break;
            case 10: resonance(c); break;
            default: throw InvalidArgument("criterion id must be in 1..10");
        }
    } catch (const std::exception& e) {
        check(c, false, std::string("error: ") + e.what());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0.0)
        check(c, c.seconds <= c.budget, fmt("runtime %.2f s <= %.0f s", c.seconds, c.budget));
    return c;
}

std::string format(const Criterion& c, bool with_details) {
    std::string out = fmt("[%s] criterion %2d: %s (%.2f s)\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), c.seconds);
    if (with_details)
        for (const auto& d : c.details) out += "    " + d + "\n";
    return out;
}

}  // namespace hvdp::checks
