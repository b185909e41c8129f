#include "hvdp/hannay.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <vector>

#include "hvdp/errors.hpp"

namespace hvdp {

namespace {

using boost::math::quadrature::gauss_kronrod;

double root_in(const std::function<double(double)>& f, double a, double b, double fa, double fb) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2);
    const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    return 0.5 * (r.first + r.second);
}

// s-intervals on which eps(s) is monotone.
std::vector<std::pair<double, double>> monotone_pieces(const ParamLoop& loop) {
    constexpr int kSamples = 512;
    std::vector<std::pair<double, double>> out;
    const auto& bp = loop.breakpoints();
    auto de = [&](double s) { return loop.derivative(s).eps; };
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double a = bp[i], b = bp[i + 1];
        // Evaluate strictly inside the piece so one-sided derivatives stay on it.
        auto inner = [&](int j) { return a + (b - a) * (j + 0.5) / (kSamples + 1); };
        double start = a;
        double s_prev = inner(0), d_prev = de(s_prev);
        for (int j = 1; j <= kSamples; ++j) {
            const double s = inner(j), d = de(s);
            if ((d_prev < 0.0 && d > 0.0) || (d_prev > 0.0 && d < 0.0)) {
                const double r = root_in(de, s_prev, s, d_prev, d);
                out.emplace_back(start, r);
                start = r;
            }
            if (d != 0.0) {
                s_prev = s;
                d_prev = d;
            }
        }
        out.emplace_back(start, b);
    }
    return out;
}

std::vector<std::pair<double, double>> dense_polygon(const ParamLoop& loop, int per_piece) {
    std::vector<std::pair<double, double>> pts;
    const auto& bp = loop.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
        for (int j = 0; j < per_piece; ++j) {
            const Params p = loop.at(bp[i] + (bp[i + 1] - bp[i]) * j / per_piece);
            pts.emplace_back(p.omega, p.eps);
        }
    return pts;
}

double cross(std::pair<double, double> o, std::pair<double, double> a, std::pair<double, double> b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

bool on_segment(std::pair<double, double> p, std::pair<double, double> a, std::pair<double, double> b) {
    return std::min(a.first, b.first) <= p.first && p.first <= std::max(a.first, b.first) &&
           std::min(a.second, b.second) <= p.second && p.second <= std::max(a.second, b.second);
}

bool segments_meet(std::pair<double, double> p1, std::pair<double, double> p2,
                   std::pair<double, double> q1, std::pair<double, double> q2) {
    const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_segment(p1, q1, q2)) return true;
    if (d2 == 0 && on_segment(p2, q1, q2)) return true;
    if (d3 == 0 && on_segment(q1, p1, p2)) return true;
    if (d4 == 0 && on_segment(q2, p1, p2)) return true;
    return false;
}

}  // namespace

ConnectionModel vdp_connection() {
    return {[](const Params& p) { return connection(p); },
            [](const Params& p) { return connection_curl(p); }, "vdp: A = (-eps/(8 w^2), 0)"};
}

const char* to_string(IntegralMethod m) {
    switch (m) {
        case IntegralMethod::closed_form: return "closed_form";
        case IntegralMethod::line_quadrature: return "line_quadrature";
        case IntegralMethod::green_theorem: return "green_theorem";
    }
    return "unknown";
}

double square_closed_form(const SquareBounds& b) {
    return (b.eps_max - b.eps_min) / 8.0 * (1.0 / b.omega_min - 1.0 / b.omega_max);
}

LoopIntegralResult hannay_angle(const ParamLoop& loop, const ConnectionModel& conn, double abs_tol) {
    loop.validate();
    LoopIntegralResult res;
    res.method = IntegralMethod::line_quadrature;
    auto f = [&](double s) {
        const Params p = loop.at(s);
        const Params d = loop.derivative(s);
        const Connection A = conn.A(p);
        return A.A1 * d.omega + A.A2 * d.eps;
    };
    const auto& bp = loop.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        double err = 0.0;
        res.phi_H += gauss_kronrod<double, 61>::integrate(f, bp[i], bp[i + 1], 20, 1e-14, &err);
        res.error_estimate += err;
    }
    if (!(res.error_estimate <= abs_tol))
        throw ConvergenceError("line quadrature error estimate " + std::to_string(res.error_estimate) +
                               " exceeds tolerance");
    if (loop.square_bounds() && conn.name == vdp_connection().name) {
        const double cf = square_closed_form(*loop.square_bounds());
        res.closed_form = loop.reversed_orientation() ? -cf : cf;
    }
    return res;
}

double signed_area(const ParamLoop& loop, int samples_per_piece) {
    const auto pts = dense_polygon(loop, samples_per_piece);
    double a = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        const auto& q = pts[(i + 1) % pts.size()];
        a += p.first * q.second - q.first * p.second;
    }
    return 0.5 * a;
}

bool self_intersects(const ParamLoop& loop, int samples_per_piece) {
    const auto pts = dense_polygon(loop, samples_per_piece);
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // closing neighbours
            if (segments_meet(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) return true;
        }
    }
    return false;
}

LoopIntegralResult green_theorem_oracle(const ParamLoop& loop, const ConnectionModel& conn,
                                        double abs_tol) {
    loop.validate();
    if (self_intersects(loop)) throw InvalidArgument("Green's theorem oracle needs a simple loop");
    const double area = signed_area(loop);
    if (area == 0.0) throw InvalidArgument("loop encloses no area");
    const double orientation = area > 0.0 ? 1.0 : -1.0;

    const auto pieces = monotone_pieces(loop);
    std::vector<double> levels;
    for (const auto& [a, b] : pieces) {
        levels.push_back(loop.at(a).eps);
        levels.push_back(loop.at(b).eps);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end(),
                             [](double x, double y) { return std::abs(x - y) <= 1e-14; }),
                 levels.end());

    // eps at the ends of each monotone piece, with s = 1 read as s = 0 so the
    // crossing parity below is exact for the closed curve.
    std::vector<double> end_a, end_b;
    for (const auto& [a, b] : pieces) {
        end_a.push_back(loop.at(a >= 1.0 ? 0.0 : a).eps);
        end_b.push_back(loop.at(b >= 1.0 ? 0.0 : b).eps);
    }

    auto chord_integral = [&](double e) {
        std::vector<double> ws;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const double fa = end_a[i] - e, fb = end_b[i] - e;
            // Half-open crossing rule: count when the piece changes side of eps = e.
            if ((fa < 0.0) != (fb < 0.0)) {
                const auto [a, b] = pieces[i];
                const double s = root_in([&](double u) { return loop.at(u).eps - e; }, a, b, fa, fb);
                ws.push_back(loop.at(s).omega);
            }
        }
        if (ws.size() % 2 != 0) throw ConvergenceError("odd number of loop crossings at a level");
        std::sort(ws.begin(), ws.end());
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < ws.size(); k += 2) {
            auto g = [&](double w) { return conn.curl(Params{w, e}); };
            sum += gauss_kronrod<double, 31>::integrate(g, ws[k], ws[k + 1], 15, 1e-14);
        }
        return sum;
    };

    LoopIntegralResult res;
    res.method = IntegralMethod::green_theorem;
    boost::math::quadrature::tanh_sinh<double> ts;
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        double err = 0.0, l1 = 0.0;
        res.phi_H += ts.integrate(chord_integral, levels[k], levels[k + 1], 1e-13, &err, &l1);
        res.error_estimate += err;
    }
    res.phi_H *= orientation;
    if (!(res.error_estimate <= abs_tol))
        throw ConvergenceError("area quadrature error estimate " + std::to_string(res.error_estimate) +
                               " exceeds tolerance");
    return res;
}

}  // namespace hvdp
