#include "reduced_hamiltonian.hpp"

#include <cmath>
#include <cstdint>

namespace hvdp::detail {

namespace {

// K = sum eps^n (num/den) sqrt(a1)^p1 sqrt(a2)^p2 w^pw trig(m theta).
//
// Odd orders are sine series symmetric under a1 <-> a2, even orders are cosine
// series antisymmetric under the swap. The theta-dependent part is the
// antiderivative of the alpha1 rate; the theta-mean part is fixed by the
// beta rates. Corrected coefficients, each confirmed by the symplecticity
// identities and by the reduction onto alpha1 = alpha2, theta = 0:
//   eps^3 cos3 of alpha1': sqrt(a1 a2)(27a1+27a2-64w^2) -> a1 a2 (27a1+27a2-64w^2)
//   eps^3 cos4 of alpha1': 36 sqrt(a1 a2) -> 36 a1 a2 sqrt(a1 a2)
//   eps^4 of alpha1': the brace carries a trailing sin(theta), as at eps^2
//   eps^4 mean of beta1': 10108 a1 a2^3 -> 101080 a1 a2^3, a3^3 -> a1^3
//   eps^4 cos3 of beta1': prefactor a2 sqrt(a1 a2) is short one sqrt(a1)
//   eps^4 cos3/cos4 of both beta rates are taken from dK/dalpha alone
struct Term {
    int order;
    int m;
    bool sine;
    int p1, p2, pw;
    std::int64_t num, den;
};

constexpr Term kTerms[] = {
    {1, 1, true,   3,  1,  -3, 1, 4},
    {1, 1, true,   1,  3,  -3, 1, 4},
    {1, 1, true,   1,  1,  -1, -1, 1},
    {1, 2, true,   2,  2,  -3, 1, 4},
    {2, 0, false,  6,  0,  -6, -11, 256},
    {2, 0, false,  4,  2,  -6, -33, 256},
    {2, 0, false,  2,  4,  -6, 33, 256},
    {2, 0, false,  0,  6,  -6, 11, 256},
    {2, 0, false,  4,  0,  -4, 3, 16},
    {2, 0, false,  0,  4,  -4, -3, 16},
    {2, 0, false,  2,  0,  -2, -1, 8},
    {2, 0, false,  0,  2,  -2, 1, 8},
    {2, 1, false,  5,  1,  -6, -11, 64},
    {2, 1, false,  1,  5,  -6, 11, 64},
    {2, 1, false,  3,  1,  -4, 3, 8},
    {2, 1, false,  1,  3,  -4, -3, 8},
    {2, 2, false,  4,  2,  -6, -11, 128},
    {2, 2, false,  2,  4,  -6, 11, 128},
    {3, 1, true,   7,  1,  -9, 9, 2048},
    {3, 1, true,   5,  3,  -9, 27, 1024},
    {3, 1, true,   3,  5,  -9, 27, 1024},
    {3, 1, true,   1,  7,  -9, 9, 2048},
    {3, 1, true,   5,  1,  -7, -1, 32},
    {3, 1, true,   3,  3,  -7, -3, 32},
    {3, 1, true,   1,  5,  -7, -1, 32},
    {3, 1, true,   3,  1,  -5, 1, 16},
    {3, 1, true,   1,  3,  -5, 1, 16},
    {3, 2, true,   6,  2,  -9, 27, 2048},
    {3, 2, true,   4,  4,  -9, 9, 256},
    {3, 2, true,   2,  6,  -9, 27, 2048},
    {3, 2, true,   4,  2,  -7, -1, 16},
    {3, 2, true,   2,  4,  -7, -1, 16},
    {3, 2, true,   2,  2,  -5, 1, 16},
    {3, 3, true,   5,  3,  -9, 27, 2048},
    {3, 3, true,   3,  5,  -9, 27, 2048},
    {3, 3, true,   3,  3,  -7, -1, 32},
    {3, 4, true,   4,  4,  -9, 9, 2048},
    {4, 0, false, 10,  0, -12, -2527, 786432},
    {4, 0, false,  8,  2, -12, -12635, 262144},
    {4, 0, false,  6,  4, -12, -12635, 196608},
    {4, 0, false,  4,  6, -12, 12635, 196608},
    {4, 0, false,  2,  8, -12, 12635, 262144},
    {4, 0, false,  0, 10, -12, 2527, 786432},
    {4, 0, false,  8,  0, -10, 629, 24576},
    {4, 0, false,  6,  2, -10, 629, 3072},
    {4, 0, false,  2,  6, -10, -629, 3072},
    {4, 0, false,  0,  8, -10, -629, 24576},
    {4, 0, false,  6,  0,  -8, -763, 12288},
    {4, 0, false,  4,  2,  -8, -763, 4096},
    {4, 0, false,  2,  4,  -8, 763, 4096},
    {4, 0, false,  0,  6,  -8, 763, 12288},
    {4, 0, false,  4,  0,  -6, 11, 256},
    {4, 0, false,  0,  4,  -6, -11, 256},
    {4, 0, false,  2,  0,  -4, -1, 128},
    {4, 0, false,  0,  2,  -4, 1, 128},
    {4, 1, false,  9,  1, -12, -2527, 98304},
    {4, 1, false,  7,  3, -12, -12635, 98304},
    {4, 1, false,  3,  7, -12, 12635, 98304},
    {4, 1, false,  1,  9, -12, 2527, 98304},
    {4, 1, false,  7,  1, -10, 629, 4096},
    {4, 1, false,  5,  3, -10, 629, 2048},
    {4, 1, false,  3,  5, -10, -629, 2048},
    {4, 1, false,  1,  7, -10, -629, 4096},
    {4, 1, false,  5,  1,  -8, -763, 3072},
    {4, 1, false,  1,  5,  -8, 763, 3072},
    {4, 1, false,  3,  1,  -6, 11, 128},
    {4, 1, false,  1,  3,  -6, -11, 128},
    {4, 2, false,  8,  2, -12, -2527, 65536},
    {4, 2, false,  6,  4, -12, -12635, 196608},
    {4, 2, false,  4,  6, -12, 12635, 196608},
    {4, 2, false,  2,  8, -12, 2527, 65536},
    {4, 2, false,  6,  2, -10, 629, 4096},
    {4, 2, false,  2,  6, -10, -629, 4096},
    {4, 2, false,  4,  2,  -8, -763, 6144},
    {4, 2, false,  2,  4,  -8, 763, 6144},
    {4, 3, false,  7,  3, -12, -2527, 98304},
    {4, 3, false,  3,  7, -12, 2527, 98304},
    {4, 3, false,  5,  3, -10, 629, 12288},
    {4, 3, false,  3,  5, -10, -629, 12288},
    {4, 4, false,  6,  4, -12, -2527, 393216},
    {4, 4, false,  4,  6, -12, 2527, 393216},
};

constexpr int kMinPow = -2;
constexpr int kMaxPow = 10;

struct Powers {
    double v[kMaxPow - kMinPow + 1];
    double operator[](int k) const { return v[k - kMinPow]; }
};

Powers root_powers(double r) {
    Powers p{};
    p.v[0 - kMinPow] = 1.0;
    for (int k = 1; k <= kMaxPow; ++k) p.v[k - kMinPow] = p.v[k - 1 - kMinPow] * r;
    p.v[-1 - kMinPow] = 1.0 / r;
    p.v[-2 - kMinPow] = 1.0 / (r * r);
    return p;
}

}  // namespace

KOrders k_orders(double alpha1, double alpha2, double theta, double omega) {
    const Powers r1 = root_powers(std::sqrt(alpha1));
    const Powers r2 = root_powers(std::sqrt(alpha2));
    double winv[13];
    winv[0] = 1.0;
    for (int k = 1; k <= 12; ++k) winv[k] = winv[k - 1] / omega;
    double c[5], s[5];
    for (int m = 0; m <= 4; ++m) {
        c[m] = std::cos(m * theta);
        s[m] = std::sin(m * theta);
    }

    KOrders out;
    for (const Term& t : kTerms) {
        const double coef = static_cast<double>(t.num) / static_cast<double>(t.den) * winv[-t.pw];
        const double trig = t.sine ? s[t.m] : c[t.m];
        const double dtrig = t.sine ? t.m * c[t.m] : -t.m * s[t.m];
        const double mono = r1[t.p1] * r2[t.p2];
        out.K[t.order] += coef * mono * trig;
        out.dK_dtheta[t.order] += coef * mono * dtrig;
        if (t.p1 != 0) out.dK_dalpha1[t.order] += 0.5 * t.p1 * coef * r1[t.p1 - 2] * r2[t.p2] * trig;
    }
    return out;
}

double eps_sum(const std::array<double, 5>& s, double eps, int order) {
    const double e2 = eps * eps;
    const double e3 = e2 * eps;
    const double e4 = e2 * e2;
    double f = s[1] * eps;
    if (order >= 2) f += s[2] * e2;
    if (order >= 3) f += s[3] * e3;
    if (order >= 4) f += s[4] * e4;
    return f;
}

}  // namespace hvdp::detail
