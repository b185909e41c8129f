#pragma once

#include <span>
#include <vector>

namespace hvdp {

// Cubic spline through (x_i, y_i) carrying several channels at once, so that a
// whole table per node can be interpolated with shared weights.
//   periodic:    y(x0) = y(xn) is assumed and the spline is C2 across the seam
//   not_a_knot:  third derivative continuous at x1 and x(n-1)
// With fewer than four nodes not_a_knot degenerates to the interpolating
// polynomial (linear or quadratic).
class CubicSpline {
public:
    enum class Boundary { periodic, not_a_knot };

    CubicSpline() = default;
    // values is row-major: node i, channel c at values[i * channels + c].
    CubicSpline(std::vector<double> x, std::vector<double> values, std::size_t channels, Boundary b);

    std::size_t channels() const { return channels_; }
    std::size_t nodes() const { return x_.size(); }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    void eval(double x, std::span<double> out) const;
    double eval(double x, std::size_t channel = 0) const;
    double derivative(double x, std::size_t channel = 0) const;

private:
    std::size_t interval(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives, same layout as y_
    std::size_t channels_ = 0;
};

// Dense LU with partial pivoting; solves A X = B in place for several
// right-hand sides (B is n x nrhs row-major). Throws on a singular matrix.
void solve_dense(std::vector<double> a, std::size_t n, std::vector<double>& b, std::size_t nrhs);

}  // namespace hvdp
