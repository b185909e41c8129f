#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "checks.hpp"
#include "hvdp/errors.hpp"
#include "hvdp/geophase.hpp"
#include "hvdp/hannay.hpp"
#include "hvdp/lie_series.hpp"
#include "hvdp/limit_cycle.hpp"
#include "hvdp/parallel.hpp"
#include "hvdp/resonance.hpp"
#include "hvdp/svg.hpp"
#include "hvdp/table.hpp"

namespace hvdp::cli {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// "a:b" -> {a, b}
std::pair<double, double> parse_range(const std::string& s) {
    const auto c = s.find(':');
    if (c == std::string::npos) throw InvalidArgument("expected a range lo:hi, got '" + s + "'");
    return {parse_double(s.substr(0, c)), parse_double(s.substr(c + 1))};
}

// "a,b" -> {a, b}
std::pair<double, double> parse_pair(const std::string& s) {
    const auto c = s.find(',');
    if (c == std::string::npos) throw InvalidArgument("expected a pair a,b, got '" + s + "'");
    return {parse_double(s.substr(0, c)), parse_double(s.substr(c + 1))};
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_double(item));
    return out;
}

unsigned env_threads() {
    const char* v = std::getenv("HANNAY_VDP_THREADS");
    if (!v || !*v) return 0;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 0) throw InvalidArgument("HANNAY_VDP_THREADS must be a non-negative integer");
    return static_cast<unsigned>(n);
}

// Requested threads capped by the environment; 0 means one per hardware thread.
unsigned effective_threads(unsigned requested) {
    const unsigned cap = resolve_threads(env_threads());
    return std::min(resolve_threads(requested), cap);
}

struct LoopOptions {
    std::string kind = "square";
    std::string omega_range = "0.6:0.8";
    std::string eps_range = "0.1:0.3";
    std::string center = "0.8,0.1";
    std::string axes = "0.2,0.1";
    double phase = 0.0;
    std::string vertices;
    bool reverse = false;

    void add(CLI::App* app) {
        app->add_option("--loop", kind, "square, ellipse or polyline")
            ->check(CLI::IsMember({"square", "ellipse", "polyline"}))
            ->capture_default_str();
        app->add_option("--omega", omega_range, "square: omega range lo:hi")->capture_default_str();
        app->add_option("--eps", eps_range, "square: eps range lo:hi")->capture_default_str();
        app->add_option("--center", center, "ellipse: center omega,eps")->capture_default_str();
        app->add_option("--axes", axes, "ellipse: semi-axes a_omega,a_eps")->capture_default_str();
        app->add_option("--phase", phase, "ellipse: start phase, rad")->capture_default_str();
        app->add_option("--vertices", vertices, "polyline: w,e;w,e;... (closed implicitly)");
        app->add_flag("--reverse", reverse, "traverse the loop clockwise");
    }

    ParamLoop build() const {
        ParamLoop loop;
        if (kind == "square") {
            const auto [w0, w1] = parse_range(omega_range);
            const auto [e0, e1] = parse_range(eps_range);
            loop = ParamLoop::square(w0, w1, e0, e1);
        } else if (kind == "ellipse") {
            const auto [w0, e0] = parse_pair(center);
            const auto [aw, ae] = parse_pair(axes);
            loop = ParamLoop::ellipse(w0, e0, aw, ae, phase);
        } else {
            std::vector<Params> v;
            std::stringstream ss(vertices);
            std::string item;
            while (std::getline(ss, item, ';'))
                if (!item.empty()) {
                    const auto [w, e] = parse_pair(item);
                    v.push_back({w, e});
                }
            loop = ParamLoop::polyline(std::move(v));
        }
        loop.validate();
        return reverse ? loop.reversed() : loop;
    }

    json echo() const {
        json j{{"loop", kind}};
        if (kind == "square") j["omega"] = omega_range, j["eps"] = eps_range;
        if (kind == "ellipse") j["center"] = center, j["axes"] = axes, j["phase"] = phase;
        if (kind == "polyline") j["vertices"] = vertices;
        j["reverse"] = reverse;
        return j;
    }
};

// Published loop values, where the loop is one of the two reference loops.
struct Reference {
    std::optional<double> hannay;
    std::optional<double> geometric;
};

Reference reference_for(const LoopOptions& lo) {
    Reference r;
    const double sign = lo.reverse ? -1.0 : 1.0;
    if (lo.kind == "square" && lo.omega_range == "0.6:0.8" && lo.eps_range == "0.1:0.3") {
        r.hannay = sign * checks::published::square_hannay;
        r.geometric = sign * checks::published::square_geometric;
    }
    if (lo.kind == "ellipse" && lo.center == "0.8,0.1" && lo.axes == "0.2,0.1" && lo.phase == 0.0) {
        r.hannay = sign * checks::published::ellipse_hannay;
        r.geometric = sign * checks::published::ellipse_geometric;
    }
    return r;
}

std::string compare_line(const char* what, double computed, double published) {
    return fmt("%s: computed %.8f published %.4g delta %+.3e", what, computed, published, computed - published);
}

struct SweepOptions {
    double tol = 1e-11;
    int n_s = 64;
    int n_theta = 512;
    double min_cycles = 50.0;
    std::string sense = "phase_plane";
    unsigned threads = 0;

    void add(CLI::App* app) {
        app->add_option("--tol", tol, "integrator rel/abs tolerance")->capture_default_str();
        app->add_option("--n-s", n_s, "frozen-cycle nodes along the loop")->capture_default_str();
        app->add_option("--n-theta", n_theta, "angle grid per frozen cycle")->capture_default_str();
        app->add_option("--min-cycles", min_cycles, "adiabaticity guard in periods")->capture_default_str();
        app->add_option("--sense", sense, "phase orientation: phase_plane or along_flow")
            ->check(CLI::IsMember({"phase_plane", "along_flow"}))
            ->capture_default_str();
        app->add_option("--threads", threads, "worker threads, 0 = auto (capped by HANNAY_VDP_THREADS)")
            ->capture_default_str();
    }

    SweepConfig config() const {
        SweepConfig c;
        c.integrator.rel_tol = c.integrator.abs_tol = tol;
        c.min_cycles = min_cycles;
        c.sense = sense == "along_flow" ? PhaseSense::along_flow : PhaseSense::phase_plane;
        return c;
    }

    json echo() const {
        return json{{"tol", tol}, {"n_s", n_s}, {"n_theta", n_theta}, {"min_cycles", min_cycles}, {"sense", sense}};
    }
};

void stamp(ResultTable& t, const std::string& command, const json& cfg) {
    t.provenance.push_back(std::string("hannay-vdp ") + HVDP_VERSION);
    t.provenance.push_back("command: " + command);
    t.provenance.push_back("config: " + cfg.dump());
    const LimitCycleConfig lc;
    t.provenance.push_back(fmt("series order %d; frozen-cycle tolerance %.0e; return tolerance %.0e",
                               SeriesOrder{}.value(), lc.integrator.rel_tol, lc.return_tol));
}

// Expands a JSON config into flags; flags already on the command line win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw InvalidArgument("config '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("config '" + path + "' must be a JSON object");
    if (args.empty() || args[0].rfind("-", 0) == 0) {
        if (!j.contains("command")) throw InvalidArgument("config has no \"command\" and none was given");
        args.insert(args.begin(), j["command"].get<std::string>());
    }
    auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "command") continue;
        std::string flag = "--" + key;
        std::replace(flag.begin() + 2, flag.end(), '_', '-');
        if (given(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
            args.push_back(flag);
            args.push_back(joined);
        } else {
            args.push_back(flag);
            args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    return args;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Van der Pol dual-Hamiltonian series, Hannay angle and geometric phase", "hannay-vdp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(HVDP_VERSION));
    std::string config_path;
    app.add_option("--config", config_path, "JSON file whose keys mirror the flags (flags win)");

    // freq
    Params fp{1.0, 0.0};
    int order = 4;
    bool do_measure = false;
    auto* freq = app.add_subcommand("freq", "series (and optionally measured) limit-cycle frequency");
    freq->add_option("--omega", fp.omega, "linear frequency")->capture_default_str();
    freq->add_option("--eps", fp.eps, "nonlinearity")->capture_default_str();
    freq->add_option("--order", order, "highest eps power kept (1..4)")->check(CLI::Range(1, 4))->capture_default_str();
    freq->add_flag("--measure", do_measure, "also settle and measure the cycle");

    // cycle
    Params cp{1.0, 0.1};
    int cycle_n = 512;
    std::string cycle_out;
    auto* cycle = app.add_subcommand("cycle", "measure a frozen limit cycle and export R, Omega, psi");
    cycle->add_option("--omega", cp.omega)->capture_default_str();
    cycle->add_option("--eps", cp.eps)->capture_default_str();
    cycle->add_option("--n-theta", cycle_n)->capture_default_str();
    cycle->add_option("--out", cycle_out, "CSV path for the tables");

    // hannay
    LoopOptions hl;
    bool green = false;
    auto* hannay = app.add_subcommand("hannay", "Hannay angle of a loop under A = (-eps/8w^2, 0)");
    hl.add(hannay);
    hannay->add_flag("--green", green, "also evaluate the area-integral cross-check");

    // geophase
    LoopOptions gl;
    SweepOptions gs;
    double g_cycles = 500.0;
    double g_T = 0.0;
    auto* geo = app.add_subcommand("geophase", "one adiabatic sweep: total, dynamic and geometric phase");
    gl.add(geo);
    gs.add(geo);
    geo->add_option("--cycles", g_cycles, "sweep duration as T w(0)/2pi")->capture_default_str();
    geo->add_option("--T", g_T, "sweep duration (overrides --cycles)");

    // fig1
    LoopOptions fl;
    SweepOptions fs;
    std::string f_cycles = "50,100,200,500,1000";
    std::string f_out = "fig1.csv";
    std::string f_svg;
    auto* fig1 = app.add_subcommand("fig1", "geometric phase vs sweep duration with the Hannay asymptote");
    fl.add(fig1);
    fs.add(fig1);
    fig1->add_option("--cycles", f_cycles, "comma-separated T w(0)/2pi values")->capture_default_str();
    fig1->add_option("--out", f_out, "CSV path")->capture_default_str();
    fig1->add_option("--svg", f_svg, "optional SVG plot path");

    // resonance
    CoupledParams rp{1.0, 1.0, 0.05};
    double r_horizon = 0.0;
    double r_a1 = 1.0, r_a2 = 1.0;
    std::string r_form = "auto";
    auto* res = app.add_subcommand("resonance", "coupled oscillators: full vs first-order averaged flow");
    res->add_option("--omega1", rp.omega1)->capture_default_str();
    res->add_option("--omega2", rp.omega2)->capture_default_str();
    res->add_option("--eps", rp.eps)->capture_default_str();
    res->add_option("--alpha1", r_a1)->capture_default_str();
    res->add_option("--alpha2", r_a2)->capture_default_str();
    res->add_option("--horizon", r_horizon, "integration time, default 1/eps");
    res->add_option("--form", r_form, "auto, resonant or nonresonant")
        ->check(CLI::IsMember({"auto", "resonant", "nonresonant"}))
        ->capture_default_str();
    res->add_flag("--quadratic-frequency", rp.quadratic_frequency, "use w^2 q^2/2 linear terms");

    // selftest
    bool full = false;
    std::string only;
    unsigned st_threads = 0;
    auto* self = app.add_subcommand("selftest", "run the invariant and acceptance checks");
    self->add_flag("--full", full, "include the two long adiabatic sweeps (criteria 4, 5)");
    self->add_option("--only", only, "comma-separated criterion ids");
    self->add_option("--threads", st_threads)->capture_default_str();

    if (raw_args.empty()) {
        err << app.help();
        return kExitUsage;
    }

    try {
        std::vector<std::string> args = merge_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << HVDP_VERSION << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }

    try {
        if (freq->parsed()) {
            validate(fp);
            const double s = limit_cycle_frequency(fp, SeriesOrder(order));
            out << fmt("series frequency (order %d): %.10f\n", order, s);
            if (do_measure) {
                const auto lc = measure(fp);
                out << fmt("measured frequency: %.10f\n", lc.frequency);
                out << fmt("delta measured - series: %+.3e\n", lc.frequency - s);
            }
        } else if (cycle->parsed()) {
            validate(cp);
            const auto lc = measure(cp, cycle_n);
            out << fmt("period %.12f\nfrequency %.12f\namplitude %.10f\nseries amplitude %.10f\n", lc.period,
                       lc.frequency, lc.amplitude, series_amplitude(cp));
            out << fmt("delta amplitude - 2: %+.3e\n", lc.amplitude - checks::published::amplitude);
            if (!cycle_out.empty()) {
                ResultTable t;
                stamp(t, "cycle", json{{"omega", cp.omega}, {"eps", cp.eps}, {"n_theta", cycle_n}});
                t.provenance.push_back(fmt("period %.17g frequency %.17g amplitude %.17g", lc.period, lc.frequency,
                                           lc.amplitude));
                t.columns = {"theta", "R", "Omega", "psi"};
                for (std::size_t i = 0; i < lc.theta_grid.size(); ++i)
                    t.add_row({lc.theta_grid[i], lc.R_table[i], lc.Omega_table[i], psi_of_theta(lc, lc.theta_grid[i])});
                write_csv(t, cycle_out);
                out << "wrote " << cycle_out << "\n";
            }
        } else if (hannay->parsed()) {
            const ParamLoop loop = hl.build();
            const auto r = hannay_angle(loop);
            out << "loop: " << loop.describe() << "\n";
            out << fmt("phi_H (line quadrature): %.10f  (error estimate %.1e)\n", r.phi_H, r.error_estimate);
            if (r.closed_form) out << fmt("phi_H (closed form): %.10f\n", *r.closed_form);
            if (green || hl.kind == "ellipse") {
                const auto g = green_theorem_oracle(loop);
                out << fmt("phi_H (area integral): %.10f  delta vs line %+.2e\n", g.phi_H, g.phi_H - r.phi_H);
            }
            if (const auto ref = reference_for(hl); ref.hannay) {
                out << compare_line("published Hannay angle", r.phi_H, *ref.hannay) << "\n";
                if (hl.kind == "ellipse")
                    out << "note: the published ellipse value disagrees with the quadrature beyond its rounding\n";
            }
        } else if (geo->parsed()) {
            const ParamLoop loop = gl.build();
            const auto grid = frozen_grid(loop, gs.n_s, gs.n_theta, {}, effective_threads(gs.threads));
            const double T = g_T > 0.0 ? g_T : duration_for_cycles(grid, g_cycles);
            const auto r = sweep(grid, T, gs.config());
            const double phi = hannay_angle(loop).phi_H;
            out << "loop: " << loop.describe() << "\n";
            out << fmt("T %.6f  cycles %.3f  sense %s\n", r.T, r.cycles, to_string(gs.config().sense));
            out << fmt("total phase    %.10f\ndynamic phase  %.10f\ngeometric phase %.10f\n", r.total_phase,
                       r.dynamic_phase, r.geometric_phase);
            out << fmt("winding %.0f  max|r-R| %.3e  steps %zu\n", r.winding, r.max_deviation, r.steps);
            out << fmt("phi_H %.10f  delta psi_G - phi_H %+.3e\n", phi, r.geometric_phase - phi);
            if (const auto ref = reference_for(gl); ref.geometric && gs.sense == "phase_plane")
                out << compare_line("published geometric phase", r.geometric_phase, *ref.geometric) << "\n";
        } else if (fig1->parsed()) {
            const std::vector<double> cycles = parse_list(f_cycles);
            if (cycles.empty()) throw InvalidArgument("--cycles needs at least one value");
            const ParamLoop loop = fl.build();
            const unsigned threads = effective_threads(fs.threads);
            const auto grid = frozen_grid(loop, fs.n_s, fs.n_theta, {}, threads);
            std::vector<double> Ts;
            for (double c : cycles) Ts.push_back(duration_for_cycles(grid, c));
            const auto rows = convergence_study(grid, Ts, fs.config(), threads);
            const double phi = hannay_angle(loop).phi_H;
            const auto ref = reference_for(fl);

            ResultTable t;
            json cfg = fl.echo();
            cfg.update(fs.echo());
            cfg["cycles"] = cycles;
            stamp(t, "fig1", cfg);
            t.provenance.push_back(fmt("frozen frequency at lambda(0) %.17g", grid.data().front().frequency));
            t.provenance.push_back(fmt("phi_H %.17g", phi));
            if (ref.hannay) t.provenance.push_back(fmt("published phi_H %.17g", *ref.hannay));
            if (ref.geometric) t.provenance.push_back(fmt("published psi_G limit %.17g", *ref.geometric));
            t.columns = {"cycles", "T", "psi_G", "total_phase", "dynamic_phase", "max_deviation", "phi_H", "ok"};
            bool all_ok = true;
            out << fmt("%10s %12s %14s %12s\n", "cycles", "T", "psi_G", "psi_G-phi_H");
            for (const auto& row : rows) {
                const double nan = std::nan("");
                const auto& r = row.result;
                t.add_row({row.cycles, row.T, row.ok ? r.geometric_phase : nan, row.ok ? r.total_phase : nan,
                           row.ok ? r.dynamic_phase : nan, row.ok ? r.max_deviation : nan, phi, row.ok ? 1.0 : 0.0});
                if (row.ok)
                    out << fmt("%10.1f %12.4f %14.8f %+12.3e\n", row.cycles, row.T, r.geometric_phase,
                               r.geometric_phase - phi);
                else
                    out << fmt("%10.1f %12.4f   failed: %s\n", row.cycles, row.T, row.error.c_str());
                all_ok = all_ok && row.ok;
            }
            out << fmt("phi_H (quadrature) %.10f\n", phi);
            const auto last = std::find_if(rows.rbegin(), rows.rend(), [](const auto& r) { return r.ok; });
            if (last != rows.rend()) {
                if (ref.geometric && fs.sense == "phase_plane")
                    out << compare_line("published psi_G limit", last->result.geometric_phase, *ref.geometric) << "\n";
                if (ref.hannay) out << compare_line("published Hannay angle", phi, *ref.hannay) << "\n";
            }
            write_csv(t, f_out);
            out << "wrote " << f_out << "\n";
            if (!f_svg.empty()) {
                PlotSeries pts{"psi_G", {}, {}, "#1f77b4"};
                for (const auto& row : rows)
                    if (row.ok) pts.x.push_back(row.cycles), pts.y.push_back(row.result.geometric_phase);
                PlotSeries asym{"phi_H", {}, {}, "#d62728", true, false};
                if (!pts.x.empty()) {
                    asym.x = {*std::min_element(pts.x.begin(), pts.x.end()), *std::max_element(pts.x.begin(), pts.x.end())};
                    asym.y = {phi, phi};
                }
                write_svg(f_svg, {"Geometric phase vs sweep duration (" + fl.kind + " loop)", "T w(0) / 2 pi", "psi_G", true},
                          {pts, asym});
                out << "wrote " << f_svg << "\n";
            }
            if (!all_ok) return kExitFailure;
        } else if (res->parsed()) {
            validate(rp);
            CompareConfig cc;
            cc.initial = {r_a1, r_a2, 0.0, 0.0};
            if (r_form != "auto") {
                cc.automatic_form = false;
                cc.form = r_form == "resonant" ? AveragedForm::resonant : AveragedForm::nonresonant;
            }
            const double horizon = r_horizon > 0.0 ? r_horizon : (rp.eps > 0.0 ? 1.0 / rp.eps : 100.0);
            const auto rep = compare(rp, horizon, cc);
            const bool near = near_resonance(r_a1, r_a2, rp);
            out << fmt("natural frequencies %.6f %.6f  near resonance: %s\n", rp.nu1(), rp.nu2(), near ? "yes" : "no");
            out << fmt("averaged form: %s  horizon %.4f\n",
                       rep.form == AveragedForm::resonant ? "resonant" : "nonresonant", horizon);
            out << fmt("sup |alpha full - averaged| %.4e\nsup phase deviation %.4e rad\nenergy drift %.2e\n",
                       rep.alpha_deviation, rep.phase_deviation, rep.energy_drift);
            const auto pred = nonresonant_prediction(r_a1, r_a2, rp);
            // Secular drift of the full system: least-squares slope of beta_i(t).
            auto slope = [&](int i) {
                double st = 0, sb = 0, stt = 0, stb = 0;
                const double n = static_cast<double>(rep.times.size());
                for (std::size_t k = 0; k < rep.times.size(); ++k) {
                    const double t = rep.times[k];
                    const double b = i == 1 ? rep.full[k].beta1 : rep.full[k].beta2;
                    st += t, sb += b, stt += t * t, stb += t * b;
                }
                return (n * stb - st * sb) / (n * stt - st * st);
            };
            out << fmt("secular beta rates: measured %.6e %.6e  K1 = a1 a2 prediction %.6e %.6e\n", slope(1), slope(2),
                       pred[0], pred[1]);
        } else if (self->parsed()) {
            std::vector<int> ids;
            if (!only.empty()) {
                for (double v : parse_list(only)) ids.push_back(static_cast<int>(v));
            } else {
                for (int i = 1; i <= checks::kCriteria; ++i)
                    if (full || (i != 4 && i != 5)) ids.push_back(i);
            }
            bool ok = true;
            for (int id : ids) {
                const auto c = checks::run(id, {effective_threads(st_threads)});
                out << checks::format(c);
                ok = ok && c.pass;
            }
            if (!ok) return kExitFailure;
        }
    } catch (const InvalidArgument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace hvdp::cli
