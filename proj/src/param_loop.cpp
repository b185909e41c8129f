#include "hvdp/param_loop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "hvdp/errors.hpp"

namespace hvdp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(const char* f, double a, double b, double c, double d, double e = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d, e);
    return buf;
}

}  // namespace

const char* to_string(LoopKind k) {
    switch (k) {
        case LoopKind::square: return "square";
        case LoopKind::ellipse: return "ellipse";
        case LoopKind::polyline: return "polyline";
        case LoopKind::parametric: return "parametric";
    }
    return "unknown";
}

ParamLoop ParamLoop::polyline(std::vector<Params> v) {
    if (v.size() < 2) throw InvalidArgument("polyline loop needs at least two vertices");
    for (const Params& p : v)
        if (!std::isfinite(p.omega) || !std::isfinite(p.eps))
            throw InvalidArgument("polyline vertex is not finite");
    if (v.back().omega == v.front().omega && v.back().eps == v.front().eps) v.pop_back();
    if (v.size() < 2) throw InvalidArgument("polyline loop needs at least two distinct vertices");
    const std::size_t m = v.size();
    ParamLoop L;
    L.kind_ = LoopKind::polyline;
    L.vertices_ = v;
    L.breaks_.clear();
    for (std::size_t k = 0; k <= m; ++k) L.breaks_.push_back(static_cast<double>(k) / m);
    auto edge = [v, m](double s, double& u) {
        const double x = std::clamp(s, 0.0, 1.0) * m;
        std::size_t k = std::min(static_cast<std::size_t>(x), m - 1);
        u = x - static_cast<double>(k);
        return k;
    };
    L.curve_ = [v, m, edge](double s) {
        double u;
        const std::size_t k = edge(s, u);
        const Params& a = v[k];
        const Params& b = v[(k + 1) % m];
        if (u == 0.0) return a;
        if (u == 1.0) return b;
        return Params{a.omega + u * (b.omega - a.omega), a.eps + u * (b.eps - a.eps)};
    };
    L.derivative_ = [v, m, edge](double s) {
        double u;
        const std::size_t k = edge(s, u);
        const Params& a = v[k];
        const Params& b = v[(k + 1) % m];
        const double fm = static_cast<double>(m);
        return Params{fm * (b.omega - a.omega), fm * (b.eps - a.eps)};
    };
    L.label_ = "polyline with " + std::to_string(m) + " vertices";
    return L;
}

ParamLoop ParamLoop::square(double wmin, double wmax, double emin, double emax) {
    if (!(wmin > 0.0) || !(wmax > wmin) || !(emin >= 0.0) || !(emax > emin) || !std::isfinite(wmax) ||
        !std::isfinite(emax))
        throw InvalidArgument("square loop needs 0 < omega_min < omega_max and 0 <= eps_min < eps_max");
    ParamLoop L = polyline({{wmin, emin}, {wmax, emin}, {wmax, emax}, {wmin, emax}});
    L.kind_ = LoopKind::square;
    L.square_ = SquareBounds{wmin, wmax, emin, emax};
    L.label_ = fmt("square omega [%.17g, %.17g] eps [%.17g, %.17g]", wmin, wmax, emin, emax);
    return L;
}

ParamLoop ParamLoop::ellipse(double w0, double e0, double aw, double ae, double phase) {
    if (!std::isfinite(w0) || !std::isfinite(e0) || !std::isfinite(aw) || !std::isfinite(ae) ||
        !std::isfinite(phase))
        throw InvalidArgument("ellipse parameters must be finite");
    if (!(w0 - std::abs(aw) > 0.0)) throw InvalidArgument("ellipse must keep omega > 0");
    if (!(e0 - std::abs(ae) >= 0.0)) throw InvalidArgument("ellipse must keep eps >= 0");
    ParamLoop L;
    L.kind_ = LoopKind::ellipse;
    L.curve_ = [=](double s) {
        const double a = kTwoPi * s + phase;
        return Params{w0 + aw * std::cos(a), std::max(0.0, e0 + ae * std::sin(a))};
    };
    L.derivative_ = [=](double s) {
        const double a = kTwoPi * s + phase;
        return Params{-kTwoPi * aw * std::sin(a), kTwoPi * ae * std::cos(a)};
    };
    L.label_ = fmt("ellipse center (%.17g, %.17g) semi-axes (%.17g, %.17g) phase %.17g", w0, e0, aw, ae,
                   phase);
    return L;
}

ParamLoop ParamLoop::parametric(Curve curve, Curve derivative, std::vector<double> bps) {
    if (!curve || !derivative) throw InvalidArgument("parametric loop needs a curve and its derivative");
    std::sort(bps.begin(), bps.end());
    ParamLoop L;
    L.kind_ = LoopKind::parametric;
    L.curve_ = std::move(curve);
    L.derivative_ = std::move(derivative);
    L.breaks_ = {0.0};
    for (double b : bps) {
        if (!(b > 0.0 && b < 1.0)) throw InvalidArgument("breakpoints must lie strictly inside (0, 1)");
        if (b > L.breaks_.back()) L.breaks_.push_back(b);
    }
    L.breaks_.push_back(1.0);
    L.label_ = "parametric";
    return L;
}

ParamLoop ParamLoop::constant(const Params& p) {
    ParamLoop L = parametric([p](double) { return p; }, [](double) { return Params{0.0, 0.0}; });
    L.label_ = fmt("constant (%.17g, %.17g)", p.omega, p.eps, 0, 0);
    return L;
}

ParamLoop ParamLoop::reversed() const {
    ParamLoop L = *this;
    Curve c = curve_, d = derivative_;
    L.curve_ = [c](double s) { return c(1.0 - s); };
    L.derivative_ = [d](double s) {
        const Params q = d(1.0 - s);
        return Params{-q.omega, -q.eps};
    };
    L.breaks_.clear();
    for (auto it = breaks_.rbegin(); it != breaks_.rend(); ++it) L.breaks_.push_back(1.0 - *it);
    L.breaks_.front() = 0.0;
    L.breaks_.back() = 1.0;
    L.reversed_ = !reversed_;
    return L;
}

void ParamLoop::validate(int n_check) const {
    const Params a = at(0.0), b = at(1.0);
    if (std::hypot(a.omega - b.omega, a.eps - b.eps) > 1e-12)
        throw InvalidArgument("loop is not closed: |lambda(1) - lambda(0)| > 1e-12");
    auto check = [](const Params& p, double s) {
        if (!std::isfinite(p.omega) || !std::isfinite(p.eps) || !(p.omega > 0.0) || p.eps < 0.0)
            throw InvalidArgument("loop leaves omega > 0, eps >= 0 at s = " + std::to_string(s));
    };
    for (double s : breaks_) check(at(s), s);
    for (int i = 0; i <= n_check; ++i) {
        const double s = static_cast<double>(i) / n_check;
        check(at(s), s);
    }
}

double ParamLoop::min_omega() const {
    double m = INFINITY;
    constexpr int kSamples = 4096;
    for (int i = 0; i <= kSamples; ++i) m = std::min(m, at(static_cast<double>(i) / kSamples).omega);
    for (double s : breaks_) m = std::min(m, at(s).omega);
    return m;
}

std::string ParamLoop::describe() const {
    return label_ + (reversed_ ? " (reversed)" : "");
}

}  // namespace hvdp
