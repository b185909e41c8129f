#include "hvdp/lie_series.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "hvdp/errors.hpp"

namespace hvdp {

namespace {

// alpha' on the manifold: eps (a - a^2/w^2) + eps^3 (-9a^4 + 16a^3 w^2 - 8a^2 w^4)/(32 w^8)
constexpr Rational kA3[] = {{-9, 32}, {16, 32}, {-8, 32}};

// beta1' on the manifold.
// eps^2 (-11a^2 + 12a w^2 - 2w^4)/(16 w^6)
constexpr Rational kB2[] = {{-11, 16}, {12, 16}, {-2, 16}};
// eps^4 (-2527a^4 + 5032a^3 w^2 - 3052a^2 w^4 + 528a w^6 - 24 w^8)/(3072 w^12)
constexpr Rational kB4[] = {{-2527, 3072}, {5032, 3072}, {-3052, 3072}, {528, 3072}, {-24, 3072}};

constexpr Rational kFixedAlpha2{-1, 32};
constexpr Rational kBeta1Eps2{-1, 16};
constexpr Rational kBeta1Eps4{17, 3072};

struct Harmonic {
    int eps_power;
    int n;
    bool sine;
    Rational c;
};

constexpr Harmonic kSolution[] = {
    {0, 1, true, {2, 1}},
    {1, 3, false, {-1, 4}},
    {2, 1, true, {1, 64}},
    {2, 3, true, {3, 32}},
    {2, 5, true, {-5, 96}},
    {3, 1, false, {13, 256}},
    {3, 3, false, {15, 512}},
    {3, 5, false, {-85, 2304}},
    {3, 7, false, {7, 576}},
};

constexpr Rational kConnection{-1, 8};

}  // namespace

void SeriesOrder::throw_invalid() { throw InvalidArgument("series order must be in 1..4"); }

double reduced_alpha_rate(double a, const Params& p, SeriesOrder o) {
    const double w2 = p.omega * p.omega;
    const double e = p.eps;
    double r = e * (a - a * a / w2);
    if (o.keeps(3)) {
        const double w8 = w2 * w2 * w2 * w2;
        const double a2 = a * a;
        const double poly = a2 * (kA3[0].value() * a2 + kA3[1].value() * a * w2 + kA3[2].value() * w2 * w2);
        r += e * e * e * poly / w8;
    }
    return r;
}

double reduced_beta_rate(double a, const Params& p, SeriesOrder o) {
    const double w2 = p.omega * p.omega;
    const double e2 = p.eps * p.eps;
    double r = 0.0;
    if (o.keeps(2)) {
        const double poly = kB2[0].value() * a * a + kB2[1].value() * a * w2 + kB2[2].value() * w2 * w2;
        r += e2 * poly / (w2 * w2 * w2);
    }
    if (o.keeps(4)) {
        const double w4 = w2 * w2;
        const double poly = (((kB4[0].value() * a + kB4[1].value() * w2) * a + kB4[2].value() * w4) * a +
                             kB4[3].value() * w4 * w2) * a + kB4[4].value() * w4 * w4;
        r += e2 * e2 * poly / (w4 * w4 * w4);
    }
    return r;
}

double fixed_point_alpha(const Params& p, SeriesOrder o) {
    double a = p.omega * p.omega;
    if (o.keeps(2)) a += kFixedAlpha2.value() * p.eps * p.eps;
    return a;
}

double beta1_rate(const Params& p, SeriesOrder o) {
    const double w2 = p.omega * p.omega;
    const double e2 = p.eps * p.eps;
    double r = 0.0;
    if (o.keeps(2)) r += kBeta1Eps2.value() * e2 / w2;
    if (o.keeps(4)) r += kBeta1Eps4.value() * e2 * e2 / (w2 * w2);
    return r;
}

double limit_cycle_frequency(const Params& p, SeriesOrder o) {
    return p.omega + p.omega * beta1_rate(p, o);
}

double solution_x(double B, const Params& p, SeriesOrder o) {
    double x = 0.0;
    for (const Harmonic& h : kSolution) {
        if (h.eps_power > 0 && !o.keeps(h.eps_power)) continue;
        const double scale = std::pow(p.eps / p.omega, h.eps_power);
        const double trig = h.sine ? std::sin(h.n * B) : std::cos(h.n * B);
        x += h.c.value() * scale * trig;
    }
    return x;
}

double series_amplitude(const Params& p, SeriesOrder o) {
    constexpr int kScan = 720;
    const double two_pi = 2.0 * std::numbers::pi;
    int best = 0;
    double best_val = -INFINITY;
    for (int i = 0; i < kScan; ++i) {
        const double v = std::abs(solution_x(two_pi * i / kScan, p, o));
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double step = two_pi / kScan;
    auto neg = [&](double B) { return -std::abs(solution_x(B, p, o)); };
    const auto r = boost::math::tools::brent_find_minima(neg, (best - 1) * step, (best + 1) * step,
                                                         std::numeric_limits<double>::digits);
    return std::max(best_val, -r.second);
}

double action_fixed_point(const Params& p, SeriesOrder o) {
    double I = p.omega;
    if (o.keeps(2)) I += kFixedAlpha2.value() * p.eps * p.eps / p.omega;
    return I;
}

double phi1_rate(double I, const Params& p, SeriesOrder o) {
    const double w = p.omega;
    double r = w;
    if (o.keeps(2)) {
        // -(11 I^2 - 12 I w + 2 w^2)/(16 w^3) eps^2
        const double poly = -kB2[0].value() * I * I - kB2[1].value() * I * w - kB2[2].value() * w * w;
        r -= poly * p.eps * p.eps / (w * w * w);
    }
    return r;
}

double action_rate(double I, const Params& p, SeriesOrder o) {
    const double w = p.omega;
    const double e = p.eps;
    double r = e * (I - I * I / w);
    if (o.keeps(3)) {
        const double I2 = I * I;
        const double poly = I2 * (kA3[0].value() * I2 + kA3[1].value() * I * w + kA3[2].value() * w * w);
        const double w5 = w * w * w * w * w;
        r += e * e * e * poly / w5;
    }
    return r;
}

Connection connection(const Params& p) {
    return {kConnection.value() * p.eps / (p.omega * p.omega), 0.0};
}

double connection_curl(const Params& p) { return -kConnection.value() / (p.omega * p.omega); }

}  // namespace hvdp
