#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hvdp/params.hpp"

namespace hvdp {

enum class LoopKind { square, ellipse, polyline, parametric };

const char* to_string(LoopKind k);

struct SquareBounds {
    double omega_min, omega_max, eps_min, eps_max;
};

// Closed curve lambda(s) = (omega(s), eps(s)), s in [0, 1], oriented by increasing s.
// breakpoints() lists the s values where lambda may fail to be smooth, always
// including 0 and 1; lambda is smooth on each piece between consecutive ones.
class ParamLoop {
public:
    using Curve = std::function<Params(double s)>;

    // Vertices (wmin, emin) -> (wmax, emin) -> (wmax, emax) -> (wmin, emax), counter-clockwise.
    static ParamLoop square(double omega_min, double omega_max, double eps_min, double eps_max);
    // omega = w0 + a_w cos(2 pi s + phase), eps = e0 + a_e sin(2 pi s + phase).
    static ParamLoop ellipse(double omega0, double eps0, double a_omega, double a_eps,
                             double phase = 0.0);
    // Closed polygon through the vertices (the closing edge is implicit), with
    // equal s per edge.
    static ParamLoop polyline(std::vector<Params> vertices);
    // User curve with its s-derivative; breakpoints strictly inside (0, 1) optional.
    static ParamLoop parametric(Curve curve, Curve derivative, std::vector<double> breakpoints = {});
    // lambda(s) = p for all s.
    static ParamLoop constant(const Params& p);

    LoopKind kind() const { return kind_; }
    Params at(double s) const { return curve_(s); }
    Params derivative(double s) const { return derivative_(s); }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::optional<SquareBounds>& square_bounds() const { return square_; }
    const std::vector<Params>& vertices() const { return vertices_; }
    bool reversed_orientation() const { return reversed_; }

    ParamLoop reversed() const;

    // Throws InvalidArgument unless |lambda(1) - lambda(0)| <= 1e-12 and
    // omega > 0, eps >= 0 on every breakpoint and on n_check samples.
    void validate(int n_check = 2048) const;

    // Minimum of omega over the loop (dense sampling refined per piece).
    double min_omega() const;

    std::string describe() const;

private:
    LoopKind kind_ = LoopKind::parametric;
    Curve curve_;
    Curve derivative_;
    std::vector<double> breaks_{0.0, 1.0};
    std::optional<SquareBounds> square_;
    std::vector<Params> vertices_;
    bool reversed_ = false;
    std::string label_;
};

}  // namespace hvdp
