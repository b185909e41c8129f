#include "hvdp/dual_dynamics.hpp"

#include <cmath>
#include <numbers>

#include "hvdp/errors.hpp"
#include "reduced_hamiltonian.hpp"

namespace hvdp {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double wrap_pi(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::remainder(a, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    return a;
}

void check_order(int order) {
    if (order < 1 || order > 4) throw InvalidArgument("series order must be in 1..4");
}

void check_alphas(double a1, double a2) {
    if (!(a1 > 0.0) || !(a2 > 0.0) || !std::isfinite(a1) || !std::isfinite(a2))
        throw DomainError("alpha-beta flow needs alpha1 > 0 and alpha2 > 0");
}

}  // namespace

std::array<double, 2> vdp_rhs(double x, double v, const Params& p) {
    return {v, -p.eps * (x * x - 1.0) * v - p.omega * p.omega * x};
}

PhysState dual_rhs(const PhysState& s, const Params& p) {
    const auto [dx, dv] = vdp_rhs(s.x, s.xdot, p);
    const double damp = p.eps * (s.x * s.x - 1.0);
    return {dx, dv, s.ydot, damp * s.ydot - p.omega * p.omega * s.y};
}

double hamiltonian(const CartState& s, const Params& p) {
    return s.px * s.py + p.omega * p.omega * s.x * s.y + p.eps * (s.x * s.x - 1.0) * s.y * s.py;
}

CartState hamilton_rhs(const CartState& s, const Params& p) {
    const double w2 = p.omega * p.omega;
    const double g = p.eps * (s.x * s.x - 1.0);
    return {s.py, s.px + g * s.y, -w2 * s.y - 2.0 * p.eps * s.x * s.y * s.py, -w2 * s.x - g * s.py};
}

CartState phys_to_cart(const PhysState& s, const Params& p) {
    return {s.x, s.y, s.ydot - p.eps * (s.x * s.x - 1.0) * s.y, s.xdot};
}

PhysState cart_to_phys(const CartState& s, const Params& p) {
    return {s.x, s.py, s.y, s.px + p.eps * (s.x * s.x - 1.0) * s.y};
}

RotatedState cart_to_rotated(const CartState& s) {
    return {(s.x + s.y) * kInvSqrt2, (s.x - s.y) * kInvSqrt2, (s.px + s.py) * kInvSqrt2,
            (s.px - s.py) * kInvSqrt2};
}

CartState rotated_to_cart(const RotatedState& s) {
    return {(s.X + s.Y) * kInvSqrt2, (s.X - s.Y) * kInvSqrt2, (s.PX + s.PY) * kInvSqrt2,
            (s.PX - s.PY) * kInvSqrt2};
}

double unperturbed_hamiltonian(const RotatedState& s, const Params& p) {
    const double w2 = p.omega * p.omega;
    return 0.5 * (s.PX * s.PX + w2 * s.X * s.X) - 0.5 * (s.PY * s.PY + w2 * s.Y * s.Y);
}

AlphaBeta rotated_to_alphabeta(const RotatedState& s, double t, const Params& p) {
    const double w = p.omega;
    AlphaBeta ab;
    ab.alpha1 = 0.5 * (s.PX * s.PX + w * w * s.X * s.X);
    ab.alpha2 = 0.5 * (s.PY * s.PY + w * w * s.Y * s.Y);
    if (!(ab.alpha1 > 0.0) || !(ab.alpha2 > 0.0))
        throw DomainError("phase undefined: alpha1 or alpha2 vanishes");
    const double phi1 = std::atan2(w * s.X, s.PX);   // w (t + beta1)
    const double phi2 = std::atan2(w * s.Y, -s.PY);  // w (t - beta2)
    ab.beta1 = wrap_pi(phi1 - w * t) / w;
    ab.beta2 = wrap_pi(w * t - phi2) / w;
    return ab;
}

RotatedState alphabeta_to_rotated(const AlphaBeta& ab, double t, const Params& p) {
    if (ab.alpha1 < 0.0 || ab.alpha2 < 0.0) throw DomainError("alpha must be >= 0");
    const double w = p.omega;
    const double r1 = std::sqrt(2.0 * ab.alpha1);
    const double r2 = std::sqrt(2.0 * ab.alpha2);
    const double ph1 = w * (t + ab.beta1);
    const double ph2 = w * (t - ab.beta2);
    return {r1 / w * std::sin(ph1), r2 / w * std::sin(ph2), r1 * std::cos(ph1), -r2 * std::cos(ph2)};
}

double reduced_hamiltonian(double alpha1, double alpha2, double theta, const Params& p, int order) {
    check_order(order);
    check_alphas(alpha1, alpha2);
    const auto k = detail::k_orders(alpha1, alpha2, theta, p.omega);
    return detail::eps_sum(k.K, p.eps, order);
}

AlphaBeta alphabeta_rhs(const AlphaBeta& s, const Params& p, int order) {
    check_order(order);
    check_alphas(s.alpha1, s.alpha2);
    const double theta = p.omega * (s.beta1 + s.beta2);
    const auto k = detail::k_orders(s.alpha1, s.alpha2, theta, p.omega);
    // K(a, b; e) = -K(b, a; -e), hence dK/dalpha2 (a1, a2; e) = -dK/dalpha1 (a2, a1; -e).
    const auto ks = detail::k_orders(s.alpha2, s.alpha1, theta, p.omega);

    std::array<double, 5> f1s{};
    for (int n = 1; n <= 4; ++n) f1s[n] = -p.omega * k.dK_dtheta[n];
    AlphaBeta d;
    d.alpha1 = detail::eps_sum(f1s, p.eps, order);
    d.beta1 = detail::eps_sum(k.dK_dalpha1, p.eps, order);
    d.alpha2 = d.alpha1;
    d.beta2 = -detail::eps_sum(ks.dK_dalpha1, -p.eps, order);
    return d;
}

ReducedCoords to_reduced(const AlphaBeta& s) {
    return {s.alpha1, s.beta1 + s.beta2, s.beta1 - s.beta2};
}

AlphaBeta from_reduced(const ReducedCoords& r, double alpha2) {
    return {r.alpha1, alpha2, 0.5 * (r.gamma1 + r.gamma2), 0.5 * (r.gamma1 - r.gamma2)};
}

ReducedCoords reduced_rhs(const ReducedCoords& r, const Params& p, int order) {
    const AlphaBeta d = alphabeta_rhs(from_reduced(r, r.alpha1), p, order);
    return {d.alpha1, d.beta1 + d.beta2, d.beta1 - d.beta2};
}

std::vector<double> augment(const VectorField& f, std::span<const double> x,
                            std::span<const double> y) {
    const std::size_t n = x.size();
    if (y.size() != n) throw InvalidArgument("augment: x and y must have the same length");
    std::vector<double> xp(x.begin(), x.end()), fp(n), fm(n), out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double h = std::max(1e-6, 1e-6 * std::abs(x[j]));
        xp[j] = x[j] + h;
        f(xp, fp);
        xp[j] = x[j] - h;
        f(xp, fm);
        xp[j] = x[j];
        // column j of J; (J^T y)_j = sum_i J_ij y_i
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += (fp[i] - fm[i]) / (2.0 * h) * y[i];
        out[j] = -acc;
    }
    return out;
}

}  // namespace hvdp
