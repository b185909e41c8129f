#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "hvdp/errors.hpp"
#include "hvdp/resonance.hpp"

using namespace hvdp;
using doctest::Approx;

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;
}

TEST_CASE("coupled_rhs") {
    const CoupledParams verbatim{0.7, 1.3, 0.0};
    const CoupledCart d = coupled_rhs({0.5, -0.2, 0.1, 0.4}, verbatim);
    CHECK(d.q1 == 0.1);
    CHECK(d.q2 == 0.4);
    CHECK(d.p1 == Approx(-0.7 * 0.5));
    CHECK(d.p2 == Approx(-1.3 * -0.2));

    CoupledParams quad{0.7, 1.3, 0.1, true};
    const CoupledCart s{0.5, -0.2, 0.1, 0.4};
    const CoupledCart e = coupled_rhs(s, quad);
    const double k = 0.1 * 0.49 * 1.69;
    CHECK(e.p1 == Approx(-0.49 * 0.5 - 2 * k * 0.5 * 0.04).epsilon(1e-14));
    CHECK(e.p2 == Approx(-1.69 * -0.2 - 2 * k * -0.2 * 0.25).epsilon(1e-14));
    CHECK(quad.nu1() == 0.7);
    CHECK(verbatim.nu1() == Approx(std::sqrt(0.7)));

    CHECK_THROWS_AS(validate(CoupledParams{0.0, 1.0, 0.1}), InvalidArgument);
    CHECK_THROWS_AS(validate(CoupledParams{1.0, 1.0, -0.1}), InvalidArgument);
}

TEST_CASE("coupled energy conservation and invariant subspace") {
    for (bool quad : {false, true}) {
        const CoupledParams cp{1.0, 1.7, 0.1, quad};
        const CoupledCart s0{0.8, 0.5, -0.3, 0.2};
        const double h0 = coupled_energy(s0, cp);
        double drift = 0.0;
        ode::integrate_steps(
            [&](double, std::span<const double> y, std::span<double> dy) {
                const auto d = coupled_rhs({y[0], y[1], y[2], y[3]}, cp);
                dy[0] = d.q1, dy[1] = d.q2, dy[2] = d.p1, dy[3] = d.p2;
            },
            std::vector<double>{s0.q1, s0.q2, s0.p1, s0.p2}, 0.0, 100 * kTwoPi / cp.nu1(), {1e-12, 1e-12},
            [&](const ode::StepView& st) {
                const auto y = st.y1();
                drift = std::max(drift, std::abs(coupled_energy({y[0], y[1], y[2], y[3]}, cp) - h0));
                return true;
            });
        CHECK(drift / std::max(1.0, std::abs(h0)) <= 1e-9);

        bool zero = true;
        ode::integrate_steps(
            [&](double, std::span<const double> y, std::span<double> dy) {
                const auto d = coupled_rhs({y[0], y[1], y[2], y[3]}, cp);
                dy[0] = d.q1, dy[1] = d.q2, dy[2] = d.p1, dy[3] = d.p2;
            },
            std::vector<double>{0.8, 0.0, -0.3, 0.0}, 0.0, 50.0, {1e-10, 1e-10}, [&](const ode::StepView& st) {
                zero = zero && st.y1()[1] == 0.0 && st.y1()[3] == 0.0;
                return true;
            });
        CHECK(zero);
    }
}

TEST_CASE("alpha-beta chart of the coupled system") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.5, 1.5), ut(0.0, 30.0);
    for (bool quad : {false, true}) {
        const CoupledParams cp{0.8, 1.9, 0.05, quad};
        for (int i = 0; i < 50; ++i) {
            const CoupledCart c{u(rng), u(rng), u(rng), u(rng)};
            const double t = ut(rng);
            const CoupledAlphaBeta ab = cart_to_alphabeta(c, t, cp);
            CHECK(ab.alpha1 == Approx((c.p1 * c.p1 + cp.nu1() * cp.nu1() * c.q1 * c.q1) / 2).epsilon(1e-13));
            const CoupledCart back = alphabeta_to_cart(ab, t, cp);
            CHECK(back.q1 == Approx(c.q1).epsilon(1e-12));
            CHECK(back.q2 == Approx(c.q2).epsilon(1e-12));
            CHECK(back.p1 == Approx(c.p1).epsilon(1e-12));
            CHECK(back.p2 == Approx(c.p2).epsilon(1e-12));
        }
    }
}

TEST_CASE("averaged_rhs hand values and identities") {
    const double a = 0.7, e = 0.04;
    for (bool quad : {false, true}) {
        const CoupledParams cp{1.0, 1.0, e, quad};
        const CoupledAlphaBeta d = averaged_rhs({a, a, 0.3, 0.3}, 1.7, cp);
        CHECK(std::abs(d.alpha1) <= 1e-17);
        CHECK(d.beta1 == Approx(1.5 * e * a).epsilon(1e-14));
    }
    const CoupledAlphaBeta z = averaged_rhs({0.4, 0.9, 0.1, -0.3}, 2.0, {1.0, 1.3, 0.0});
    CHECK(z.alpha1 == 0.0);
    CHECK(z.alpha2 == 0.0);
    CHECK(z.beta1 == 0.0);
    CHECK(z.beta2 == 0.0);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ua(0.1, 2.0), uw(0.5, 2.0), ub(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const CoupledParams quad{uw(rng), uw(rng), 0.1, true};
        const CoupledAlphaBeta s{ua(rng), ua(rng), ub(rng), ub(rng)};
        const CoupledAlphaBeta d = averaged_rhs(s, ub(rng), quad);
        const double x = quad.omega2 * d.alpha1, y = quad.omega1 * d.alpha2;
        CHECK(std::abs(x + y) <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), std::abs(y)));

        const CoupledParams verbatim{quad.omega1, quad.omega2, 0.1, false};
        const CoupledAlphaBeta v = averaged_rhs(s, 0.5, verbatim);
        const double xv = verbatim.nu2() * v.alpha1, yv = verbatim.nu1() * v.alpha2;
        CHECK(std::abs(xv + yv) <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(xv), std::abs(yv)));
    }
}

TEST_CASE("nonresonant prediction") {
    const auto z = nonresonant_prediction(1.0, 2.0, {1.0, 2.3, 0.0});
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
    const auto r = nonresonant_prediction(1.0, 2.0, {1.0, 1.0, 0.05});
    CHECK(r[0] == Approx(0.1));
    CHECK(r[1] == Approx(0.05));
    CHECK(near_resonance(1.0, 1.0, {1.0, 1.0, 0.05}));
    CHECK_FALSE(near_resonance(1.0, 1.0, {1.0, 2.3, 0.02, true}));
}

TEST_CASE("secular phase drift of the full system matches the nonresonant rate") {
    const CoupledParams cp{1.0, 2.3, 0.02, true};
    CompareConfig cfg;
    cfg.samples = 400;
    const CompareReport rep = compare(cp, 1.0 / cp.eps, cfg);
    CHECK(rep.form == AveragedForm::nonresonant);
    // Least-squares slope of the full beta_i(t).
    for (int i = 0; i < 2; ++i) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(rep.times.size());
        for (std::size_t k = 0; k < rep.times.size(); ++k) {
            const double t = rep.times[k], b = i == 0 ? rep.full[k].beta1 : rep.full[k].beta2;
            sx += t, sy += b, sxx += t * t, sxy += t * b;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const auto pred = nonresonant_prediction(cfg.initial.alpha1, cfg.initial.alpha2, cp);
        MESSAGE("beta" << i + 1 << " slope " << slope << " predicted " << pred[i]);
        CHECK(std::abs(slope - pred[i]) <= 5 * cp.eps * cp.eps);
    }
}

TEST_CASE("averaged flow tracks the full flow to first order") {
    CompareConfig cfg;
    cfg.samples = 500;
    const CompareReport zero = compare({1.0, 1.0, 0.0}, 20.0, cfg);
    CHECK(zero.alpha_deviation <= 1e-9);
    CHECK(zero.phase_deviation <= 1e-9);

    const CompareReport a = compare({1.0, 1.0, 0.05}, 1 / 0.05, cfg);
    const CompareReport b = compare({1.0, 1.0, 0.025}, 1 / 0.025, cfg);
    CHECK(a.form == AveragedForm::resonant);
    CHECK(a.alpha_deviation <= 5 * 0.05);
    CHECK(a.energy_drift <= 1e-9);
    const double ratio = b.alpha_deviation / a.alpha_deviation;
    MESSAGE("resonant deviation " << a.alpha_deviation << " -> " << b.alpha_deviation << " ratio " << ratio);
    CHECK(ratio >= 0.3);
    CHECK(ratio <= 0.7);

    const CompareReport nr = compare({1.0, 2.3, 0.05}, 1 / 0.05, cfg);
    CHECK(nr.form == AveragedForm::nonresonant);
    CHECK(nr.alpha_deviation <= 5 * 0.05);
    CHECK(nr.times.size() == nr.full.size());
    CHECK(nr.times.size() == nr.averaged.size());
}
