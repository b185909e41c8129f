#include "hvdp/spline.hpp"

#include <algorithm>
#include <cmath>

#include "hvdp/errors.hpp"

namespace hvdp {

void solve_dense(std::vector<double> a, std::size_t n, std::vector<double>& b, std::size_t nrhs) {
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
        if (a[piv * n + k] == 0.0) throw ConvergenceError("singular linear system");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            for (std::size_t j = 0; j < nrhs; ++j) std::swap(b[k * nrhs + j], b[piv * nrhs + j]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i * n + k] / a[k * n + k];
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
            for (std::size_t j = 0; j < nrhs; ++j) b[i * nrhs + j] -= f * b[k * nrhs + j];
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t j = 0; j < nrhs; ++j) {
            double s = b[kk * nrhs + j];
            for (std::size_t c = kk + 1; c < n; ++c) s -= a[kk * n + c] * b[c * nrhs + j];
            b[kk * nrhs + j] = s / a[kk * n + kk];
        }
    }
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> values, std::size_t channels,
                         Boundary b)
    : x_(std::move(x)), y_(std::move(values)), channels_(channels) {
    const std::size_t n = x_.size();
    if (channels_ == 0 || n < 2 || y_.size() != n * channels_)
        throw InvalidArgument("spline: inconsistent node/value sizes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw InvalidArgument("spline nodes must be strictly increasing");

    m_.assign(n * channels_, 0.0);
    if (b == Boundary::not_a_knot && n == 2) return;  // linear
    if (b == Boundary::not_a_knot && n == 3) {
        // Single parabola: constant second derivative.
        for (std::size_t c = 0; c < channels_; ++c) {
            const double d0 = (y_[channels_ + c] - y_[c]) / (x_[1] - x_[0]);
            const double d1 = (y_[2 * channels_ + c] - y_[channels_ + c]) / (x_[2] - x_[1]);
            const double m = 2.0 * (d1 - d0) / (x_[2] - x_[0]);
            for (std::size_t i = 0; i < 3; ++i) m_[i * channels_ + c] = m;
        }
        return;
    }
    if (b == Boundary::periodic && n < 3) throw InvalidArgument("periodic spline needs >= 3 nodes");

    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];
    auto yv = [&](std::size_t i, std::size_t c) { return y_[i * channels_ + c]; };

    std::vector<double> a(n * n, 0.0), rhs(n * channels_, 0.0);
    // Interior continuity of the first derivative.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        a[i * n + i - 1] = h[i - 1] / 6.0;
        a[i * n + i] = (h[i - 1] + h[i]) / 3.0;
        a[i * n + i + 1] = h[i] / 6.0;
        for (std::size_t c = 0; c < channels_; ++c)
            rhs[i * channels_ + c] =
                (yv(i + 1, c) - yv(i, c)) / h[i] - (yv(i, c) - yv(i - 1, c)) / h[i - 1];
    }
    if (b == Boundary::periodic) {
        // Row 0: M0 = Mn. Row n-1 holds the seam derivative match at x0 == xn.
        a[0] = 1.0;
        a[n - 1] = -1.0;
        const std::size_t r = n - 1;
        const double hl = h[n - 2], hf = h[0];
        std::fill(a.begin() + r * n, a.begin() + (r + 1) * n, 0.0);
        a[r * n + n - 2] = hl / 6.0;
        a[r * n + n - 1] = hl / 3.0;
        a[r * n + 0] += hf / 3.0;
        a[r * n + 1] += hf / 6.0;
        for (std::size_t c = 0; c < channels_; ++c)
            rhs[r * channels_ + c] = (yv(1, c) - yv(0, c)) / hf - (yv(n - 1, c) - yv(n - 2, c)) / hl;
    } else {
        // Third derivative continuous at x1 and x(n-2).
        a[0] = -1.0 / h[0];
        a[1] = 1.0 / h[0] + 1.0 / h[1];
        a[2] = -1.0 / h[1];
        const std::size_t r = n - 1;
        a[r * n + n - 3] = -1.0 / h[n - 3];
        a[r * n + n - 2] = 1.0 / h[n - 3] + 1.0 / h[n - 2];
        a[r * n + n - 1] = -1.0 / h[n - 2];
    }
    solve_dense(std::move(a), n, rhs, channels_);
    m_ = std::move(rhs);
}

std::size_t CubicSpline::interval(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

void CubicSpline::eval(double x, std::span<double> out) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h;
    const double B = (x - x_[i]) / h;
    const double C = (A * A * A - A) * h * h / 6.0;
    const double D = (B * B * B - B) * h * h / 6.0;
    const double* y0 = &y_[i * channels_];
    const double* y1 = &y_[(i + 1) * channels_];
    const double* m0 = &m_[i * channels_];
    const double* m1 = &m_[(i + 1) * channels_];
    for (std::size_t c = 0; c < channels_; ++c) out[c] = A * y0[c] + B * y1[c] + C * m0[c] + D * m1[c];
}

double CubicSpline::eval(double x, std::size_t c) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h;
    const double B = (x - x_[i]) / h;
    return A * y_[i * channels_ + c] + B * y_[(i + 1) * channels_ + c] +
           ((A * A * A - A) * m_[i * channels_ + c] + (B * B * B - B) * m_[(i + 1) * channels_ + c]) *
               h * h / 6.0;
}

double CubicSpline::derivative(double x, std::size_t c) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h;
    const double B = (x - x_[i]) / h;
    const double y0 = y_[i * channels_ + c], y1 = y_[(i + 1) * channels_ + c];
    const double m0 = m_[i * channels_ + c], m1 = m_[(i + 1) * channels_ + c];
    return (y1 - y0) / h - (3.0 * A * A - 1.0) * h / 6.0 * m0 + (3.0 * B * B - 1.0) * h / 6.0 * m1;
}

}  // namespace hvdp
