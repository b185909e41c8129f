#include <doctest.h>

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "hvdp/errors.hpp"
#include "hvdp/lie_series.hpp"

using namespace hvdp;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double bisect(F f, double lo, double hi) {
    boost::math::tools::eps_tolerance<double> tol(52);
    const auto r = boost::math::tools::bisect(f, lo, hi, tol);
    return 0.5 * (r.first + r.second);
}

}  // namespace

TEST_CASE("SeriesOrder range") {
    CHECK_THROWS_AS(SeriesOrder(0), InvalidArgument);
    CHECK_THROWS_AS(SeriesOrder(5), InvalidArgument);
    CHECK(SeriesOrder(3).keeps(3));
    CHECK_FALSE(SeriesOrder(3).keeps(4));
}

TEST_CASE("reduced_alpha_rate") {
    CHECK(reduced_alpha_rate(0.0, {0.8, 0.3}) == 0.0);
    CHECK(reduced_alpha_rate(1.0, {1.0, 0.2}) == Approx(-2.5e-4).epsilon(1e-12));
    const Params p{1.0, 0.1};
    const double a_star = fixed_point_alpha(p);
    for (int i = 1; i < 100; ++i) {
        const double a = a_star * i / 100.0;
        CHECK(reduced_alpha_rate(a, p) > 0.0);
    }
    CHECK(reduced_alpha_rate(1.2 * a_star, p) < 0.0);
}

TEST_CASE("reduced_beta_rate") {
    CHECK(reduced_beta_rate(0.7, {1.0, 0.0}) == 0.0);
    const double e = 0.3;
    CHECK(reduced_beta_rate(1.0, {1.0, e}, 2) == Approx(-e * e / 16).epsilon(1e-14));

    // At the truncated fixed point the two truncations differ by O(eps^6).
    for (double eps : {0.001, 0.005, 0.01}) {
        const Params p{1.0, eps};
        CHECK(std::abs(reduced_beta_rate(fixed_point_alpha(p), p) - beta1_rate(p)) <= 1e-12);
    }
    const Params a{1.0, 0.1}, b{1.0, 0.05};
    const double da = std::abs(reduced_beta_rate(fixed_point_alpha(a), a) - beta1_rate(a));
    const double db = std::abs(reduced_beta_rate(fixed_point_alpha(b), b) - beta1_rate(b));
    CHECK(std::log2(da / db) == Approx(6.0).epsilon(0.02));
}

TEST_CASE("fixed_point_alpha") {
    CHECK(fixed_point_alpha({1.0, 0.0}) == 1.0);
    CHECK(fixed_point_alpha({1.0, 0.4}) == Approx(0.995).epsilon(1e-15));
    for (double eps : {0.1, 0.2, 0.4}) {
        const Params p{1.0, eps};
        const double root = bisect([&](double a) { return reduced_alpha_rate(a, p); }, 0.5, 1.5);
        CHECK(std::abs(root - fixed_point_alpha(p)) <= std::pow(eps, 4));
    }
}

TEST_CASE("beta1_rate") {
    CHECK(beta1_rate({1.0, 0.3}) == Approx(-0.0055801758).epsilon(1e-9));
    CHECK(beta1_rate({0.6, 0.0}) == 0.0);
}

TEST_CASE("limit_cycle_frequency") {
    CHECK(limit_cycle_frequency({1.0, 0.0}) == 1.0);
    CHECK(limit_cycle_frequency({1.0, 0.1}) == Approx(0.9993755534).epsilon(1e-10));
    CHECK(limit_cycle_frequency({1.0, 0.3}) == Approx(0.9944198242).epsilon(1e-10));

    const Params p{0.7, 0.35};
    const double w = p.omega, e = p.eps;
    CHECK(limit_cycle_frequency(p, 1) == w);
    CHECK(limit_cycle_frequency(p, 2) - limit_cycle_frequency(p, 1) == Approx(-e * e / (16 * w)).epsilon(1e-13));
    CHECK(limit_cycle_frequency(p, 3) == limit_cycle_frequency(p, 2));
    CHECK(limit_cycle_frequency(p, 4) - limit_cycle_frequency(p, 3) ==
          Approx(17 * std::pow(e, 4) / (3072 * w * w * w)).epsilon(1e-9));
    CHECK(limit_cycle_frequency({0.7, -0.35}) == limit_cycle_frequency(p));
}

TEST_CASE("solution_x") {
    for (double B : {0.0, 0.4, 1.7, 3.0})
        CHECK(solution_x(B, {1.0, 0.0}) == Approx(2 * std::sin(B)).epsilon(1e-15));
    for (double e : {0.1, 0.3}) {
        CHECK(solution_x(kPi / 2, {1.0, e}) == Approx(2 - 0.130208333333 * e * e).epsilon(1e-11));
        CHECK(solution_x(0.0, {1.0, e}) == Approx(-e / 4 + 0.0553385417 * e * e * e).epsilon(1e-9));
    }
    // Only odd harmonics appear, sines with even and cosines with odd eps powers:
    // x(B + pi; eps) = -x(B; eps) and x(-B; -eps) = -x(B; eps).
    for (int i = 0; i < 24; ++i) {
        const double B = 2 * kPi * i / 24;
        const double x = solution_x(B, {0.9, 0.3});
        CHECK(std::abs(solution_x(B + kPi, {0.9, 0.3}) + x) <= 1e-13);
        CHECK(std::abs(solution_x(-B, {0.9, -0.3}) + x) <= 1e-13);
    }
}

TEST_CASE("series_amplitude is the maximum of solution_x") {
    const Params p{1.0, 0.4};
    double best = 0.0;
    for (int i = 0; i < 200000; ++i) best = std::max(best, solution_x(2 * kPi * i / 200000, p));
    CHECK(series_amplitude(p) >= best - 1e-12);
    CHECK(series_amplitude(p) - best <= 1e-8);
}

TEST_CASE("action-angle chart") {
    CHECK(action_fixed_point({1.0, 0.0}) == 1.0);
    CHECK(action_fixed_point({2.0, 0.4}) == Approx(1.9975).epsilon(1e-15));
    for (double w : {0.6, 1.0, 1.4})
        for (double e : {0.0, 0.1, 0.3}) {
            const Params p{w, e};
            CHECK(std::abs(w * action_fixed_point(p) - fixed_point_alpha(p)) <= 1e-12);
            for (double a : {0.3, 0.9, 1.7})
                CHECK(std::abs(w * action_rate(a / w, p) - reduced_alpha_rate(a, p)) <= 1e-12);
        }

    CHECK(phi1_rate(0.8, {1.3, 0.0}) == 1.3);
    CHECK(phi1_rate(1.0, {1.0, 0.3}) == Approx(1.0 - 0.09 / 16).epsilon(1e-15));
    // Substituting I* into phi1_rate reproduces the frequency series through
    // eps^2; the eps^4 terms differ by (10/512 - 17/3072) eps^4 / w^3 = 43/3072 eps^4 / w^3.
    const Params q{1.0, 0.2};
    const double d = phi1_rate(action_fixed_point(q), q) - limit_cycle_frequency(q);
    CHECK(d == Approx(43.0 / 3072 * std::pow(0.2, 4)).epsilon(0.01 * 0.04 * 10));
    CHECK(std::abs(d) <= 1.5e-2 * std::pow(0.2, 4));

    CHECK(action_rate(0.0, q) == 0.0);
    for (double e : {0.1, 0.2, 0.4}) {
        const Params p{1.0, e};
        const double root = bisect([&](double I) { return action_rate(I, p); }, 0.5, 1.5);
        CHECK(std::abs(root - action_fixed_point(p)) <= e * e * e);
    }
}

TEST_CASE("connection") {
    const Connection z = connection({0.9, 0.0});
    CHECK(z.A1 == 0.0);
    CHECK(z.A2 == 0.0);
    CHECK(connection({0.7, 0.2}).A1 == Approx(-0.0510204082).epsilon(1e-9));
    CHECK(connection({0.7, 0.2}).A2 == 0.0);
    CHECK(connection({1.0, 0.3}).A1 == Approx(-0.0375).epsilon(1e-15));

    // curl = dA2/dw - dA1/de by central differences.
    for (double w : {0.6, 0.8, 1.1}) {
        const double e = 0.2, h = 1e-6;
        const double dA2 = (connection({w + h, e}).A2 - connection({w - h, e}).A2) / (2 * h);
        const double dA1 = (connection({w, e + h}).A1 - connection({w, e - h}).A1) / (2 * h);
        CHECK(connection_curl({w, e}) == Approx(dA2 - dA1).epsilon(1e-8));
        CHECK(connection_curl({w, e}) == Approx(1 / (8 * w * w)).epsilon(1e-15));
    }
}
