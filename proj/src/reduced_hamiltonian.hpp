#pragma once

#include <array>

namespace hvdp::detail {

// Per-order coefficients (index n multiplies eps^n, index 0 unused) of the
// reduced Hamiltonian and its two derivatives needed by the alpha-beta flow.
struct KOrders {
    std::array<double, 5> K{};
    std::array<double, 5> dK_dtheta{};
    std::array<double, 5> dK_dalpha1{};
};

KOrders k_orders(double alpha1, double alpha2, double theta, double omega);

// ((S1 e + S2 e^2) + S3 e^3) + S4 e^4, dropping powers above order. The fixed
// association keeps f(e) and f(-e) bit-identical when S1 = S3 = 0.
double eps_sum(const std::array<double, 5>& s, double eps, int order);

}  // namespace hvdp::detail
