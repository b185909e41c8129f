#include "hvdp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "hvdp/errors.hpp"

namespace hvdp {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Ticks at 1, 2, 5 times a power of ten.
std::vector<double> nice_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (span / step <= 6.0) break;
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    return ticks;
}

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw InvalidArgument("plot series '" + s.label + "' has mismatched x/y");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (spec.log_x && !(s.x[i] > 0.0)) continue;
            const double xv = spec.log_x ? std::log10(s.x[i]) : s.x[i];
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) throw InvalidArgument("nothing to plot");
    if (xmax - xmin < 1e-12) xmin -= 0.5, xmax += 0.5;
    if (ymax - ymin < 1e-12 * std::max(1.0, std::abs(ymax))) {
        const double pad = std::max(1e-6, 0.05 * std::abs(ymax));
        ymin -= pad;
        ymax += pad;
    }
    const double ypad = 0.08 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double left = 80, right = 20, top = 40, bottom = 60;
    const double pw = spec.width - left - right, ph = spec.height - top - bottom;
    auto px = [&](double xv) { return left + (xv - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double yv) { return top + (ymax - yv) / (ymax - ymin) * ph; };

    std::string o;
    o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + num(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + escape(spec.title) + "</text>\n";
    o += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

    std::vector<double> xt;
    if (spec.log_x) {
        for (double d = std::floor(xmin); d <= std::ceil(xmax); d += 1.0)
            for (double m : {1.0, 2.0, 5.0}) {
                const double v = d + std::log10(m);
                if (v >= xmin - 1e-12 && v <= xmax + 1e-12) xt.push_back(v);
            }
    } else {
        xt = nice_ticks(xmin, xmax);
    }
    for (double v : xt) {
        const double X = px(v);
        o += "<line x1=\"" + num(X) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(X) + "\" y2=\"" +
             num(top + ph + 5) + "\" stroke=\"black\"/>\n";
        o += "<text x=\"" + num(X) + "\" y=\"" + num(top + ph + 20) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
             tick_label(spec.log_x ? std::pow(10.0, v) : v) + "</text>\n";
    }
    for (double v : nice_ticks(ymin, ymax)) {
        const double Y = py(v);
        o += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(Y) + "\" x2=\"" + num(left) + "\" y2=\"" + num(Y) +
             "\" stroke=\"black\"/>\n";
        o += "<text x=\"" + num(left - 8) + "\" y=\"" + num(Y + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(v) + "</text>\n";
    }
    o += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(spec.height - 15.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + escape(spec.x_label) +
         "</text>\n";
    o += "<text transform=\"translate(18," + num(top + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape(spec.y_label) + "</text>\n";

    double legend_y = top + 16;
    for (const auto& s : series) {
        std::string pts;
        std::vector<std::pair<double, double>> xy;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (spec.log_x && !(s.x[i] > 0.0)) continue;
            xy.emplace_back(px(spec.log_x ? std::log10(s.x[i]) : s.x[i]), py(s.y[i]));
        }
        const std::string dash = s.dashed ? " stroke-dasharray=\"6,4\"" : "";
        if (s.line && xy.size() > 1) {
            for (const auto& [X, Y] : xy) pts += num(X) + "," + num(Y) + " ";
            pts.pop_back();
            o += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"" +
                 dash + "/>\n";
        }
        if (s.markers)
            for (const auto& [X, Y] : xy)
                o += "<circle cx=\"" + num(X) + "\" cy=\"" + num(Y) + "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
        if (!s.label.empty()) {
            const double lx = left + pw - 170;
            o += "<line x1=\"" + num(lx) + "\" y1=\"" + num(legend_y - 4) + "\" x2=\"" + num(lx + 24) + "\" y2=\"" +
                 num(legend_y - 4) + "\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"" + dash + "/>\n";
            o += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(legend_y) +
                 "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(s.label) + "</text>\n";
            legend_y += 16;
        }
    }
    o += "</svg>\n";
    return o;
}

void write_svg(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    const std::string text = render_svg(spec, series);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace hvdp
