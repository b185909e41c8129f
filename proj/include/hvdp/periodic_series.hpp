#pragma once

#include <span>
#include <vector>

namespace hvdp {

// Trigonometric interpolant of N uniform samples f(2 pi j / N), j = 0..N-1:
//   f(t) = a0 + sum_k (a_k cos kt + b_k sin kt),  k = 1..N/2
// (the Nyquist cosine carries half weight so the samples are reproduced).
class PeriodicSeries {
public:
    PeriodicSeries() = default;
    explicit PeriodicSeries(std::span<const double> samples);
    // Direct construction from coefficients (b[0] is ignored); n is the sample count.
    static PeriodicSeries from_coefficients(std::vector<double> a, std::vector<double> b, std::size_t n);

    std::size_t size() const { return n_; }
    double mean() const { return a_.empty() ? 0.0 : a_[0]; }
    double operator()(double t) const;
    double derivative(double t) const;
    // Integral of f - mean from 0 to t; periodic in t.
    double oscillating_integral(double t) const;

    const std::vector<double>& cos_coeffs() const { return a_; }
    const std::vector<double>& sin_coeffs() const { return b_; }
    // Number of harmonics actually summed (trailing negligible ones are skipped).
    std::size_t active_harmonics() const { return kmax_; }

private:
    std::size_t n_ = 0;
    std::size_t kmax_ = 0;
    std::vector<double> a_, b_;
};

}  // namespace hvdp
