#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hvdp/errors.hpp"
#include "hvdp/hannay.hpp"

using namespace hvdp;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSquare = (0.3 - 0.1) / 8 * (1 / 0.6 - 1 / 0.8);
const double kEllipse = kPi * (4 / std::sqrt(15.0) - 1) / 8;

// A = (-eps/2, w/2): curl 1, so the loop integral is the signed area.
ConnectionModel area_connection() {
    return {[](const Params& p) { return Connection{-p.eps / 2, p.omega / 2}; }, [](const Params&) { return 1.0; },
            "area"};
}

}  // namespace

TEST_CASE("square loop") {
    const ParamLoop sq = ParamLoop::square(0.6, 0.8, 0.1, 0.3);
    const LoopIntegralResult r = hannay_angle(sq);
    REQUIRE(r.closed_form.has_value());
    CHECK(std::abs(*r.closed_form - kSquare) <= 1e-15);
    CHECK(std::abs(r.phi_H - kSquare) <= 1e-12);
    CHECK(std::abs(r.phi_H - 0.0104) <= 5e-5);
    CHECK(r.error_estimate <= 1e-10);
    CHECK(square_closed_form({0.6, 0.8, 0.1, 0.3}) == Approx(0.01041667).epsilon(1e-6));

    const LoopIntegralResult g = green_theorem_oracle(sq);
    CHECK(g.method == IntegralMethod::green_theorem);
    CHECK(std::abs(g.phi_H - kSquare) <= 1e-8);
}

TEST_CASE("ellipse loop") {
    const ParamLoop el = ParamLoop::ellipse(0.8, 0.1, 0.2, 0.1);
    const LoopIntegralResult line = hannay_angle(el);
    const LoopIntegralResult green = green_theorem_oracle(el);
    CHECK(std::abs(green.phi_H - kEllipse) <= 1e-9);
    CHECK(std::abs(line.phi_H - kEllipse) <= 1e-9);
    CHECK(std::abs(line.phi_H - green.phi_H) <= std::max({1e-8, line.error_estimate, green.error_estimate}));
    CHECK_FALSE(line.closed_form.has_value());
}

TEST_CASE("orientation reversal flips the sign") {
    for (const ParamLoop& loop : {ParamLoop::square(0.6, 0.8, 0.1, 0.3), ParamLoop::ellipse(0.8, 0.1, 0.2, 0.1)}) {
        const ParamLoop rv = loop.reversed();
        CHECK(hannay_angle(rv).phi_H == Approx(-hannay_angle(loop).phi_H).epsilon(1e-12));
        CHECK(green_theorem_oracle(rv).phi_H == Approx(-green_theorem_oracle(loop).phi_H).epsilon(1e-12));
        CHECK(signed_area(rv) == Approx(-signed_area(loop)).epsilon(1e-12));
    }
}

TEST_CASE("zero-area loop") {
    const ParamLoop seg = ParamLoop::polyline({{0.6, 0.1}, {0.9, 0.3}});
    CHECK(std::abs(hannay_angle(seg).phi_H) <= 1e-12);
}

TEST_CASE("reparameterization invariance") {
    const ParamLoop el = ParamLoop::ellipse(0.8, 0.1, 0.2, 0.1);
    // s -> u(s) = s + 0.1 sin(2 pi s) / (2 pi), a monotone map of [0, 1] onto itself.
    auto u = [](double s) { return s + 0.1 * std::sin(2 * kPi * s) / (2 * kPi); };
    auto du = [](double s) { return 1 + 0.1 * std::cos(2 * kPi * s); };
    const ParamLoop re = ParamLoop::parametric([&](double s) { return el.at(u(s)); },
                                               [&](double s) {
                                                   const Params d = el.derivative(u(s));
                                                   return Params{d.omega * du(s), d.eps * du(s)};
                                               });
    CHECK(std::abs(hannay_angle(re).phi_H - hannay_angle(el).phi_H) <= 1e-10);
}

TEST_CASE("additivity over loops sharing an edge") {
    const ParamLoop whole = ParamLoop::polyline({{0.6, 0.1}, {0.9, 0.1}, {0.9, 0.3}, {0.6, 0.3}});
    const ParamLoop left = ParamLoop::polyline({{0.6, 0.1}, {0.7, 0.1}, {0.7, 0.3}, {0.6, 0.3}});
    const ParamLoop right = ParamLoop::polyline({{0.7, 0.1}, {0.9, 0.1}, {0.9, 0.3}, {0.7, 0.3}});
    CHECK(std::abs(hannay_angle(left).phi_H + hannay_angle(right).phi_H - hannay_angle(whole).phi_H) <= 1e-9);
    CHECK(std::abs(hannay_angle(whole).phi_H - square_closed_form({0.6, 0.9, 0.1, 0.3})) <= 1e-12);
}

TEST_CASE("pluggable connection") {
    const ParamLoop el = ParamLoop::ellipse(0.8, 0.1, 0.2, 0.1);
    const double area = kPi * 0.2 * 0.1;
    CHECK(hannay_angle(el, area_connection()).phi_H == Approx(area).epsilon(1e-10));
    CHECK(green_theorem_oracle(el, area_connection()).phi_H == Approx(area).epsilon(1e-10));
    CHECK(signed_area(el, 4096) == Approx(area).epsilon(1e-5));
}

TEST_CASE("non-simple loops") {
    const ParamLoop eight = ParamLoop::polyline({{0.6, 0.1}, {0.8, 0.3}, {0.8, 0.1}, {0.6, 0.3}});
    CHECK(self_intersects(eight));
    CHECK_FALSE(self_intersects(ParamLoop::square(0.6, 0.8, 0.1, 0.3)));
    CHECK_THROWS_AS(green_theorem_oracle(eight), InvalidArgument);
    // The two lobes cancel for a connection with constant curl.
    CHECK(std::abs(hannay_angle(eight, area_connection()).phi_H) <= 1e-12);
}
