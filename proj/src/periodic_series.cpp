#include "hvdp/periodic_series.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "hvdp/errors.hpp"

namespace hvdp {

PeriodicSeries::PeriodicSeries(std::span<const double> samples) : n_(samples.size()) {
    if (n_ < 2) throw InvalidArgument("periodic series needs at least two samples");
    const std::size_t half = n_ / 2;
    a_.assign(half + 1, 0.0);
    b_.assign(half + 1, 0.0);
    std::vector<double> cs(n_), sn(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_);
        cs[j] = std::cos(ang);
        sn[j] = std::sin(ang);
    }
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (std::size_t k = 0; k <= half; ++k) {
        double sa = 0.0, sb = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t idx = (j * k) % n_;
            sa += samples[j] * cs[idx];
            sb += samples[j] * sn[idx];
        }
        const bool edge = k == 0 || (n_ % 2 == 0 && k == half);
        a_[k] = (edge ? 1.0 : 2.0) * sa * inv_n;
        b_[k] = edge ? 0.0 : 2.0 * sb * inv_n;
    }
    double scale = 0.0;
    for (std::size_t k = 0; k <= half; ++k) scale = std::max({scale, std::abs(a_[k]), std::abs(b_[k])});
    kmax_ = half;
    while (kmax_ > 0 && std::abs(a_[kmax_]) <= 1e-17 * scale && std::abs(b_[kmax_]) <= 1e-17 * scale)
        --kmax_;
}

PeriodicSeries PeriodicSeries::from_coefficients(std::vector<double> a, std::vector<double> b,
                                                 std::size_t n) {
    if (a.empty() || a.size() != b.size()) throw InvalidArgument("coefficient arrays must match");
    PeriodicSeries ps;
    ps.n_ = n;
    ps.kmax_ = a.size() - 1;
    ps.a_ = std::move(a);
    ps.b_ = std::move(b);
    return ps;
}

double PeriodicSeries::operator()(double t) const {
    const std::complex<double> z = std::polar(1.0, t);
    std::complex<double> zk = 1.0;
    double f = a_[0];
    for (std::size_t k = 1; k <= kmax_; ++k) {
        zk *= z;
        f += a_[k] * zk.real() + b_[k] * zk.imag();
    }
    return f;
}

double PeriodicSeries::derivative(double t) const {
    const std::complex<double> z = std::polar(1.0, t);
    std::complex<double> zk = 1.0;
    double f = 0.0;
    for (std::size_t k = 1; k <= kmax_; ++k) {
        zk *= z;
        const double kk = static_cast<double>(k);
        f += kk * (-a_[k] * zk.imag() + b_[k] * zk.real());
    }
    return f;
}

double PeriodicSeries::oscillating_integral(double t) const {
    const std::complex<double> z = std::polar(1.0, t);
    std::complex<double> zk = 1.0;
    double f = 0.0;
    for (std::size_t k = 1; k <= kmax_; ++k) {
        zk *= z;
        const double kk = static_cast<double>(k);
        f += (a_[k] * zk.imag() + b_[k] * (1.0 - zk.real())) / kk;
    }
    return f;
}

}  // namespace hvdp
