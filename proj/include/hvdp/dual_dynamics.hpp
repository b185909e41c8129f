#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "hvdp/params.hpp"

namespace hvdp {

// (x, x', y, y'): the oscillator and its auxiliary partner.
struct PhysState {
    double x = 0, xdot = 0, y = 0, ydot = 0;
};

struct CartState {
    double x = 0, y = 0, px = 0, py = 0;
};

struct RotatedState {
    double X = 0, Y = 0, PX = 0, PY = 0;
};

// alpha has the dimension of omega^2; beta is a time offset.
struct AlphaBeta {
    double alpha1 = 0, alpha2 = 0, beta1 = 0, beta2 = 0;
};

struct ReducedCoords {
    double alpha1 = 0;
    double gamma1 = 0;  // beta1 + beta2
    double gamma2 = 0;  // beta1 - beta2
};

std::array<double, 2> vdp_rhs(double x, double v, const Params& p);

PhysState dual_rhs(const PhysState& s, const Params& p);

double hamiltonian(const CartState& s, const Params& p);
CartState hamilton_rhs(const CartState& s, const Params& p);

CartState phys_to_cart(const PhysState& s, const Params& p);
PhysState cart_to_phys(const CartState& s, const Params& p);

RotatedState cart_to_rotated(const CartState& s);
CartState rotated_to_cart(const RotatedState& s);

// Linear part of H in the rotated chart: (PX^2 + w^2 X^2)/2 - (PY^2 + w^2 Y^2)/2.
double unperturbed_hamiltonian(const RotatedState& s, const Params& p);

// Harmonic chart
//   X  = sqrt(2 a1)/w sin(w (t + b1)),  PX =  sqrt(2 a1) cos(w (t + b1))
//   Y  = sqrt(2 a2)/w sin(w (t - b2)),  PY = -sqrt(2 a2) cos(w (t - b2))
// The inverse returns w*beta wrapped to (-pi, pi], so beta is continuous in t
// except where w (t + b1) itself wraps. Throws DomainError when either
// amplitude vanishes.
AlphaBeta rotated_to_alphabeta(const RotatedState& s, double t, const Params& p);
RotatedState alphabeta_to_rotated(const AlphaBeta& ab, double t, const Params& p);

// Canonical flow in (alpha, beta) truncated at eps^order (order in 1..4).
// alpha1' = f1, beta1' = f2, alpha2' = f3 = f1, beta2' = f4.
// Throws DomainError unless alpha1 > 0 and alpha2 > 0.
AlphaBeta alphabeta_rhs(const AlphaBeta& s, const Params& p, int order = 4);

// Reduced Hamiltonian K(alpha1, alpha2, theta) with theta = w (beta1 + beta2),
// the generator of alphabeta_rhs: f1 = f3 = -w dK/dtheta, f2 = dK/dalpha1,
// f4 = dK/dalpha2. The zeroth-order part alpha1 - alpha2 has been absorbed
// by the chart and is not included.
double reduced_hamiltonian(double alpha1, double alpha2, double theta, const Params& p,
                           int order = 4);

ReducedCoords to_reduced(const AlphaBeta& s);
AlphaBeta from_reduced(const ReducedCoords& r, double alpha2);

// (alpha1', gamma1', gamma2') of alphabeta_rhs with alpha2 = alpha1.
ReducedCoords reduced_rhs(const ReducedCoords& r, const Params& p, int order = 4);

// y' = -J(x)^T y for a vector field f with Jacobian J, by central differences
// with step max(1e-6, 1e-6 |x_i|).
using VectorField = std::function<void(std::span<const double> x, std::span<double> fx)>;
std::vector<double> augment(const VectorField& f, std::span<const double> x,
                            std::span<const double> y);

}  // namespace hvdp
