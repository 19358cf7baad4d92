// Copyright 2026 The hcft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: simulate, percolate, fit, calibrate, collapse.
//
// Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 fit failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hcft/config.hpp"
#include "hcft/errors.hpp"
#include "hcft/fit.hpp"
#include "json.hpp"

using namespace hcft;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitFit = 4;

void emit(const std::string &out, const std::string &text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + out);
    f << text;
    if (!f) throw IoError("error writing " + out);
}

void emit_result(const RunConfig &c, const ObservableSeries &s) {
    ResultFile f{c, s, {}};
    if (c.out.empty() || c.out == "-") {
        std::cout << format_result_file(f);
    } else {
        write_result_file(c.out, f);
    }
}

std::vector<double> grid_from(const std::string &spec, const std::string &what) {
    double lo = 0, hi = 0, step = 0;
    char tail = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &tail) != 3) {
        throw ConfigError(what + ": expected lo:hi:step, got '" + spec + "'");
    }
    return linear_grid(lo, hi, step);
}

std::pair<size_t, size_t> segment_from(const std::string &spec) {
    unsigned long a = 0, b = 0;
    char tail = 0;
    if (std::sscanf(spec.c_str(), "%lu:%lu%c", &a, &b, &tail) != 2) {
        throw ConfigError("ref-segment: expected a:b, got '" + spec + "'");
    }
    return {a, b};
}

json fit_row(const std::string &file, const FitResult &r) {
    auto finite = [](double x) -> json { return std::isfinite(x) ? json(x) : json(nullptr); };
    return {{"file", file},
            {"kind", r.kind},
            {"exponent", r.exponent},
            {"exponent_error", finite(r.exponent_error())},
            {"offset", r.offset},
            {"covariance", {{r.covariance[0][0], r.covariance[0][1]}, {r.covariance[1][0], r.covariance[1][1]}}},
            {"r_squared", r.r_squared},
            {"window", {finite(r.window_lo), finite(r.window_hi)}},
            {"n_points", r.n_points},
            {"chi2", r.chi2},
            {"weighted", r.weighted}};
}

json scan_json(const GridScan &g) {
    return {{"grid", g.grid},
            {"objective", g.objective},
            {"best", g.best},
            {"optimum", g.optimum},
            {"uncertainty", g.uncertainty},
            {"on_edge", g.on_edge}};
}

struct FitArgs {
    std::vector<std::string> files;
    std::string kind = "log_linear";
    FitOptions opts;
    int64_t t_min = 0;
    int64_t t_max = std::numeric_limits<int64_t>::max();
    std::string prefix = "bell";
    std::string out;
};

FitResult fit_points(const FitArgs &a, const std::vector<DataPoint> &pts, int64_t L, bool periodic) {
    if (a.kind == "log_linear") return fit_log_linear(pts, a.opts);
    if (a.kind == "power_law") return fit_power_law(pts, a.opts);
    if (a.kind == "eta_to_one") return fit_eta_to_one(pts, a.opts);
    if (a.kind == "bell_early") return fit_bell_early(pts, L, a.opts);
    if (a.kind == "bell_late") return fit_bell_late(pts, periodic ? DecayMode::periodic : DecayMode::open, a.opts);
    throw ConfigError("kind: unknown fit kind '" + a.kind + "'");
}

std::vector<DataPoint> extract(const FitArgs &a, const ObservableSeries &s) {
    if (a.kind == "log_linear") return xi_points(s, a.t_min, a.t_max);
    if (a.kind == "power_law" || a.kind == "eta_to_one") return eta_points(s, a.t_min, a.t_max);
    auto pts = tau_points(s, a.prefix, s.metadata.y_over_t);
    std::erase_if(pts, [&](const DataPoint &p) {
        double t = p.x * static_cast<double>(s.metadata.L) / s.metadata.y_over_t;
        return t < static_cast<double>(a.t_min) - 0.5 || t > static_cast<double>(a.t_max) + 0.5;
    });
    return pts;
}

void run_fit(const FitArgs &a) {
    std::vector<DataPoint> pooled;
    int64_t L = 0;
    bool periodic = false;
    std::string text;
    for (const auto &file : a.files) {
        auto f = read_result_file(file);
        L = f.series.metadata.L;
        periodic = is_periodic(series_layout(f.series.metadata.kind));
        auto pts = extract(a, f.series);
        pooled.insert(pooled.end(), pts.begin(), pts.end());
        text += fit_row(file, fit_points(a, pts, L, periodic)).dump() + "\n";
    }
    text += fit_row("pooled", fit_points(a, pooled, L, periodic)).dump() + "\n";
    emit(a.out, text);
}

struct CalibrateArgs {
    int64_t L = 64;
    int64_t T = 0;  // 0: L
    uint64_t n = 50;
    uint64_t seed = 1;
    size_t workers = 1;
    std::string p_grid = "0.150:0.170:0.002";
    std::string y_grid = "0.50:0.72:0.01";
    FitOptions opts;
    std::string out;
};

void run_calibrate(const CalibrateArgs &a) {
    const int64_t T = a.T > 0 ? a.T : a.L;
    auto p_grid = grid_from(a.p_grid, "p-grid");
    auto y_grid = grid_from(a.y_grid, "y-grid");
    RunConfig base;
    base.L = a.L;
    base.T = T;
    base.n = a.n;
    base.seed = a.seed;
    base.workers = a.workers;
    validate_config(base);

    std::vector<SteadyStateInput> steady;
    for (double p : p_grid) {
        auto layout = make_layout(LayoutKind::pbc_product, static_cast<size_t>(a.L), T, p);
        auto sched = preset_schedule("fig10a", LayoutKind::pbc_product, static_cast<size_t>(a.L), T);
        auto s = run_ensemble(layout, sched, {a.n, a.seed, a.workers, base.y_over_t});
        steady.push_back({p, xi_points(s)});
        std::cerr << "calibrate: p = " << p << " done\n";
    }
    const GridScan ps = scan_p(steady, a.opts);
    const double p_c = p_grid[ps.best];

    auto layout = make_layout(LayoutKind::pbc_bell, static_cast<size_t>(a.L), T, p_c);
    auto sched = preset_schedule("fig10b", LayoutKind::pbc_bell, static_cast<size_t>(a.L), T);
    auto bell = run_ensemble(layout, sched, {a.n, a.seed, a.workers, base.y_over_t});
    std::vector<BellTimeInput> bell_in;
    for (const auto &r : bell.records) bell_in.push_back({r.t, r.mean_nats, r.std_error});

    auto res = calibrate(steady, bell_in, a.L, y_grid, a.opts);
    json j{{"L", a.L},
           {"T", T},
           {"n", a.n},
           {"seed", a.seed},
           {"code_version", kCodeVersion},
           {"p_c", res.p_c},
           {"p_c_error", res.p_c_error},
           {"h", res.h},
           {"y_over_t", res.y_over_t},
           {"y_over_t_error", res.y_over_t_error},
           {"bell_p", p_c},
           {"flagged", res.flagged},
           {"p_scan", scan_json(res.p_scan)},
           {"y_scan", scan_json(res.y_scan)}};
    emit(a.out, j.dump(2) + "\n");
}

void add_run_flags(CLI::App *cmd, RunConfig &c) {
    cmd->add_option("--L", c.L, "chain length (even)");
    cmd->add_option("--T", c.T, "circuit depth");
    cmd->add_option("--p", c.p, "measurement or breaking probability");
    cmd->add_option("--n", c.n, "realizations");
    cmd->add_option("--seed", c.seed, "master seed");
    cmd->add_option("--workers", c.workers, "worker threads (default: HCFT_WORKERS or all cores)");
    cmd->add_option("--out", c.out, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"hybrid Clifford circuits and boundary CFT scaling"};
    app.require_subcommand(1);

    RunConfig sim;
    sim.workers = default_workers();
    std::string sim_layout = "fffa", sim_geometry = "automatic", sim_ref, replay;
    auto *simulate = app.add_subcommand("simulate", "run a circuit ensemble");
    add_run_flags(simulate, sim);
    simulate->add_option("--layout", sim_layout, "fffa|afaa|fafa|aaaa|pbc_product|pbc_bell|reference_qubits");
    simulate->add_option("--y-over-t", sim.y_over_t, "anisotropy factor for the collapse coordinates");
    simulate->add_option("--schedule", sim.schedule, "preset name or schedule file");
    simulate->add_option("--geometry", sim_geometry, "automatic|rectangle|strip|cylinder");
    simulate->add_option("--ref-segment", sim_ref, "a:b, chain sites paired with reference qubits");
    simulate->add_option("--replay", replay, "rerun the configuration echoed in a result file");

    RunConfig perc;
    perc.command = "percolate";
    perc.p = 0.5;
    perc.workers = default_workers();
    std::string perc_coloring = "top_bipartition", perc_wrap = "open";
    auto *percolate = app.add_subcommand("percolate", "minimal-cut ensemble on the percolation lattice");
    add_run_flags(percolate, perc);
    percolate->add_option("--coloring", perc_coloring, "top_bipartition|top_vs_bottom");
    percolate->add_option("--wrap", perc_wrap, "open|periodic");
    percolate->add_option("--depths,--schedule", perc.schedule, "default, every:<k> or a file of depths");

    FitArgs fa;
    auto *fit = app.add_subcommand("fit", "fit exponents from result files");
    fit->add_option("files", fa.files, "result files")->required();
    fit->add_option("--kind", fa.kind, "log_linear|power_law|eta_to_one|bell_early|bell_late");
    fit->add_option("--min-separation", fa.opts.min_separation);
    fit->add_option("--eta-min", fa.opts.eta_min);
    fit->add_option("--eta-max", fa.opts.eta_max);
    fit->add_option("--one-minus-eta-max", fa.opts.one_minus_eta_max);
    fit->add_option("--h-guess", fa.opts.h_guess);
    fit->add_option("--tau-min-early", fa.opts.tau_min_early);
    fit->add_option("--tau-max-early", fa.opts.tau_max_early);
    fit->add_option("--tau-min-late", fa.opts.tau_min_late);
    fit->add_option("--tau-max-late", fa.opts.tau_max_late);
    fit->add_flag("--two-term", fa.opts.two_term, "power law plus a linear term");
    fit->add_option("--t-min", fa.t_min);
    fit->add_option("--t-max", fa.t_max);
    fit->add_option("--prefix", fa.prefix, "segment prefix for the Bell fits");
    fit->add_option("--out", fa.out);

    CalibrateArgs ca;
    ca.workers = default_workers();
    auto *cal = app.add_subcommand("calibrate", "scan p and Y/T on periodic chains");
    cal->add_option("--L", ca.L);
    cal->add_option("--T", ca.T, "depth (default L)");
    cal->add_option("--n", ca.n);
    cal->add_option("--seed", ca.seed);
    cal->add_option("--workers", ca.workers);
    cal->add_option("--p-grid", ca.p_grid, "lo:hi:step");
    cal->add_option("--y-grid", ca.y_grid, "lo:hi:step");
    cal->add_option("--min-separation", ca.opts.min_separation);
    cal->add_option("--tau-max-early", ca.opts.tau_max_early);
    cal->add_option("--out", ca.out);

    std::string col_in, col_geometry = "automatic", col_out;
    double col_y = 0.61;
    auto *collapse = app.add_subcommand("collapse", "recompute collapse coordinates for a new Y/T");
    collapse->add_option("file", col_in)->required();
    collapse->add_option("--y-over-t", col_y);
    collapse->add_option("--geometry", col_geometry);
    collapse->add_option("--out", col_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (simulate->parsed()) {
            if (!replay.empty()) {
                std::string out = sim.out;
                size_t workers = sim.workers;
                sim = read_result_file(replay).config;
                sim.out = out;
                sim.workers = workers;
            } else {
                sim.layout = parse_layout(sim_layout);
                sim.geometry = parse_geometry(sim_geometry);
                if (!sim_ref.empty()) sim.ref_segment = segment_from(sim_ref);
            }
            emit_result(sim, execute_simulate(sim));
        } else if (percolate->parsed()) {
            if (perc_coloring == "top_bipartition") {
                perc.coloring = Coloring::top_bipartition;
            } else if (perc_coloring == "top_vs_bottom") {
                perc.coloring = Coloring::top_vs_bottom;
            } else {
                throw ConfigError("coloring: unknown value '" + perc_coloring + "'");
            }
            if (perc_wrap == "open") {
                perc.wrap = Wrap::open;
            } else if (perc_wrap == "periodic") {
                perc.wrap = Wrap::periodic;
            } else {
                throw ConfigError("wrap: unknown value '" + perc_wrap + "'");
            }
            emit_result(perc, execute_percolate(perc));
        } else if (fit->parsed()) {
            run_fit(fa);
        } else if (cal->parsed()) {
            run_calibrate(ca);
        } else if (collapse->parsed()) {
            auto f = read_result_file(col_in);
            f.config.geometry = parse_geometry(col_geometry);
            f.config.y_over_t = col_y;
            f.config.out = col_out;
            f.series = recompute_collapse(f.series, f.config.geometry, col_y);
            f.created.clear();
            emit_result(f.config, f.series);
        }
    } catch (const IoError &e) {
        std::cerr << "hcft: " << e.what() << "\n";
        return kExitIo;
    } catch (const FitError &e) {
        std::cerr << "hcft: fit failed: " << e.what() << "\n";
        return kExitFit;
    } catch (const std::invalid_argument &e) {
        // ConfigError, ScheduleError, GeometryError, InvalidSizeError
        std::cerr << "hcft: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DegenerateProbeError &e) {
        std::cerr << "hcft: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "hcft: internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
