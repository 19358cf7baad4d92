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


#include "hcft/fit.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "hcft/errors.hpp"
#include "hcft/harness.hpp"

namespace hcft {

namespace {

constexpr double kPi = std::numbers::pi;

bool all_weighted(const std::vector<DataPoint> &pts) {
    return !pts.empty() && std::all_of(pts.begin(), pts.end(), [](const DataPoint &p) { return p.sigma > 0.0; });
}

// Window bookkeeping on the natural abscissa.
void set_window(FitResult &r, const std::vector<double> &natural) {
    auto [lo, hi] = std::minmax_element(natural.begin(), natural.end());
    r.window_lo = *lo;
    r.window_hi = *hi;
}

// 3x3 symmetric inverse by cofactors; returns false if singular.
bool invert3(const double a[3][3], double out[3][3]) {
    double c00 = a[1][1] * a[2][2] - a[1][2] * a[2][1];
    double c01 = a[1][2] * a[2][0] - a[1][0] * a[2][2];
    double c02 = a[1][0] * a[2][1] - a[1][1] * a[2][0];
    double det = a[0][0] * c00 + a[0][1] * c01 + a[0][2] * c02;
    if (!(std::abs(det) > 0.0)) return false;
    out[0][0] = c00 / det;
    out[1][0] = c01 / det;
    out[2][0] = c02 / det;
    out[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
    out[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
    out[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
    out[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
    out[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
    out[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
    return true;
}

FitResult two_term_power_law(const std::vector<DataPoint> &pts) {
    const bool weighted = all_weighted(pts);
    auto w = [&](const DataPoint &p) { return weighted ? 1.0 / (p.sigma * p.sigma) : 1.0; };

    // For fixed a the model A eta^a + B eta is linear in (A, B).
    struct Linear {
        double A, B, ssr;
    };
    auto solve = [&](double a) {
        double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
        for (const auto &p : pts) {
            double f1 = std::pow(p.x, a), f2 = p.x, wi = w(p);
            s11 += wi * f1 * f1;
            s12 += wi * f1 * f2;
            s22 += wi * f2 * f2;
            t1 += wi * f1 * p.y;
            t2 += wi * f2 * p.y;
        }
        double det = s11 * s22 - s12 * s12;
        Linear out{0, 0, std::numeric_limits<double>::infinity()};
        if (!(std::abs(det) > 0.0)) return out;
        out.A = (t1 * s22 - t2 * s12) / det;
        out.B = (s11 * t2 - s12 * t1) / det;
        out.ssr = 0;
        for (const auto &p : pts) {
            double res = p.y - out.A * std::pow(p.x, a) - out.B * p.x;
            out.ssr += w(p) * res * res;
        }
        return out;
    };
    auto [a, ssr] = boost::math::tools::brent_find_minima([&](double x) { return solve(x).ssr; }, 0.02, 6.0, 52);
    Linear lin = solve(a);

    // Gauss-Newton covariance of (a, A, B).
    double M[3][3] = {{0}}, C[3][3];
    for (const auto &p : pts) {
        double ea = std::pow(p.x, a);
        double J[3] = {lin.A * ea * std::log(p.x), ea, p.x};
        for (int i = 0; i < 3; i++) {
            for (int j = 0; j < 3; j++) M[i][j] += w(p) * J[i] * J[j];
        }
    }
    FitResult r;
    r.exponent = a;
    r.offset = lin.A;
    r.chi2 = ssr;
    r.n_points = pts.size();
    r.weighted = weighted;
    double scale = pts.size() > 3 ? ssr / static_cast<double>(pts.size() - 3) : 0.0;
    if (invert3(M, C)) {
        r.covariance = {{{C[0][0] * scale, C[0][1] * scale}, {C[1][0] * scale, C[1][1] * scale}}};
    }
    double mean = 0, wsum = 0;
    for (const auto &p : pts) {
        mean += w(p) * p.y;
        wsum += w(p);
    }
    mean /= wsum;
    double sst = 0;
    for (const auto &p : pts) sst += w(p) * (p.y - mean) * (p.y - mean);
    r.r_squared = sst > 0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : 1.0;
    return r;
}

}  // namespace

double FitResult::exponent_error() const { return std::sqrt(std::max(covariance[0][0], 0.0)); }

FitResult fit_line(const std::vector<DataPoint> &pts) {
    if (pts.size() < 3) throw FitError("need at least 3 points, have " + std::to_string(pts.size()));
    const bool weighted = all_weighted(pts);
    double sw = 0, sx = 0, sy = 0;
    for (const auto &p : pts) {
        double w = weighted ? 1.0 / (p.sigma * p.sigma) : 1.0;
        sw += w;
        sx += w * p.x;
        sy += w * p.y;
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto &p : pts) {
        double w = weighted ? 1.0 / (p.sigma * p.sigma) : 1.0;
        sxx += w * (p.x - mx) * (p.x - mx);
        sxy += w * (p.x - mx) * (p.y - my);
        syy += w * (p.y - my) * (p.y - my);
    }
    double spread = 0;
    for (const auto &p : pts) spread = std::max(spread, std::abs(p.x - mx));
    if (!(sxx > 0.0) || spread <= 1e-12 * std::max(1.0, std::abs(mx))) throw FitError("no spread in the abscissa");

    FitResult r;
    r.exponent = sxy / sxx;
    r.offset = my - r.exponent * mx;
    r.n_points = pts.size();
    r.weighted = weighted;
    double ssr = 0;
    for (const auto &p : pts) {
        double w = weighted ? 1.0 / (p.sigma * p.sigma) : 1.0;
        double res = p.y - r.offset - r.exponent * p.x;
        ssr += w * res * res;
    }
    r.chi2 = ssr;
    r.r_squared = syy > 0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    const double s2 = ssr / static_cast<double>(pts.size() - 2);
    const double var_b = s2 / sxx;
    r.covariance[0][0] = var_b;
    r.covariance[0][1] = r.covariance[1][0] = -mx * var_b;
    r.covariance[1][1] = s2 / sw + mx * mx * var_b;
    return r;
}

FitResult fit_log_linear(const std::vector<DataPoint> &pts, const FitOptions &opts) {
    std::vector<DataPoint> use;
    std::vector<double> natural;
    for (const auto &p : pts) {
        if (!(p.x > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y)) continue;
        if (p.separation >= 0 && p.separation < opts.min_separation) continue;
        use.push_back({-std::log(p.x), p.y, p.sigma, p.separation});
        natural.push_back(p.x);
    }
    FitResult r = fit_line(use);
    r.kind = "log_linear";
    set_window(r, natural);
    return r;
}

FitResult fit_power_law(const std::vector<DataPoint> &pts, const FitOptions &opts) {
    const double eta_min = std::isnan(opts.eta_min) ? opts.eta_max / 10.0 : opts.eta_min;
    std::vector<DataPoint> raw, use;
    std::vector<double> natural;
    for (const auto &p : pts) {
        if (!(p.x >= eta_min && p.x < opts.eta_max) || !(p.x > 0.0) || !(p.y > 0.0)) continue;
        raw.push_back(p);
        use.push_back({std::log(p.x), std::log(p.y), p.sigma > 0 ? p.sigma / p.y : 0.0, p.separation});
        natural.push_back(p.x);
    }
    if (use.size() < 3) throw FitError("fewer than 3 positive points in the eta window");
    FitResult r;
    if (opts.two_term) {
        r = two_term_power_law(raw);
        r.kind = "power_law_two_term";
    } else {
        r = fit_line(use);
        r.kind = "power_law";
    }
    set_window(r, natural);
    return r;
}

FitResult fit_eta_to_one(const std::vector<DataPoint> &pts, const FitOptions &opts) {
    std::vector<DataPoint> use;
    std::vector<double> natural;
    for (const auto &p : pts) {
        double gap = 1.0 - p.x;
        if (!(gap > 0.0 && gap < opts.one_minus_eta_max) || !std::isfinite(p.y)) continue;
        use.push_back({-std::log(gap), p.y, p.sigma, p.separation});
        natural.push_back(p.x);
    }
    FitResult r = fit_line(use);
    r.kind = "eta_to_one";
    set_window(r, natural);
    return r;
}

FitResult fit_bell_early(const std::vector<DataPoint> &pts, int64_t L, const FitOptions &opts) {
    const double lo = std::isnan(opts.tau_min_early) ? opts.h_guess * kPi / static_cast<double>(L) : opts.tau_min_early;
    std::vector<DataPoint> use;
    std::vector<double> natural;
    for (const auto &p : pts) {
        if (!(p.x >= lo && p.x <= opts.tau_max_early) || !std::isfinite(p.y)) continue;
        use.push_back({kPi / p.x, p.y, p.sigma, p.separation});
        natural.push_back(p.x);
    }
    if (use.empty()) throw FitError("empty tau window for the early-time fit");
    FitResult r = fit_line(use);
    r.kind = "bell_early";
    set_window(r, natural);
    return r;
}

FitResult fit_bell_late(const std::vector<DataPoint> &pts, DecayMode mode, const FitOptions &opts) {
    std::vector<DataPoint> use;
    std::vector<double> natural;
    for (const auto &p : pts) {
        if (!(p.x > opts.tau_min_late && p.x <= opts.tau_max_late) || !(p.y > 0.0)) continue;
        use.push_back({p.x, std::log(p.y), p.sigma > 0 ? p.sigma / p.y : 0.0, p.separation});
        natural.push_back(p.x);
    }
    if (use.empty()) throw FitError("empty tau window for the late-time fit");
    FitResult line = fit_line(use);
    const double scale = (mode == DecayMode::open) ? kPi : 2.0 * kPi;
    FitResult r = line;
    r.kind = mode == DecayMode::open ? "bell_late_open" : "bell_late_periodic";
    r.exponent = -line.exponent / scale;
    r.covariance[0][0] = line.covariance[0][0] / (scale * scale);
    r.covariance[0][1] = r.covariance[1][0] = -line.covariance[0][1] / scale;
    set_window(r, natural);
    return r;
}

std::vector<DataPoint> xi_points(const ObservableSeries &s, int64_t t_min, int64_t t_max) {
    const LayoutKind kind = series_layout(s.metadata.kind);
    std::vector<DataPoint> out;
    for (const auto &r : s.records) {
        if (r.t < t_min || r.t > t_max || !(r.xi > 0.0) || !std::isfinite(r.xi)) continue;
        int64_t sep = -1;
        try {
            sep = probe_separation(kind, static_cast<size_t>(s.metadata.L), r.t, parse_probe(r.segment));
        } catch (const ScheduleError &) {
        }
        out.push_back({r.xi, r.mean_nats, r.std_error, sep});
    }
    return out;
}

std::vector<DataPoint> eta_points(const ObservableSeries &s, int64_t t_min, int64_t t_max) {
    std::vector<DataPoint> out;
    for (const auto &r : s.records) {
        if (r.t < t_min || r.t > t_max || r.segment.rfind("mi:", 0) != 0) continue;
        if (!(r.eta > 0.0 && r.eta < 1.0)) continue;
        out.push_back({r.eta, r.mean_nats, r.std_error, -1});
    }
    return out;
}

std::vector<DataPoint> tau_points(const ObservableSeries &s, const std::string &prefix, double y_over_t) {
    std::vector<DataPoint> out;
    for (const auto &r : s.records) {
        if (r.segment.rfind(prefix, 0) != 0) continue;
        double tau = y_over_t * static_cast<double>(r.t) / static_cast<double>(s.metadata.L);
        out.push_back({tau, r.mean_nats, r.std_error, -1});
    }
    return out;
}

namespace {

// Vertex and curvature of the parabola through three equally spaced points.
struct Parabola {
    double vertex;
    double curvature;  // second derivative
};

Parabola parabola(double x0, double step, double fm, double f0, double fp) {
    double second = (fp - 2.0 * f0 + fm) / (step * step);
    double first = (fp - fm) / (2.0 * step);
    double vertex = second != 0.0 ? x0 - first / second : x0;
    return {std::clamp(vertex, x0 - step, x0 + step), second};
}

void finish_scan(GridScan &g, bool maximize, const std::vector<double> &chi2) {
    const size_t n = g.grid.size();
    g.best = 0;
    for (size_t i = 1; i < n; i++) {
        bool better = maximize ? g.objective[i] > g.objective[g.best] : g.objective[i] < g.objective[g.best];
        if (better) g.best = i;
    }
    g.optimum = g.grid[g.best];
    g.on_edge = (g.best == 0 || g.best + 1 == n);
    const double step = n > 1 ? g.grid[1] - g.grid[0] : 0.0;
    g.uncertainty = step;
    if (g.on_edge || n < 3) return;
    const size_t b = g.best;
    g.optimum = parabola(g.grid[b], step, g.objective[b - 1], g.objective[b], g.objective[b + 1]).vertex;
    // Delta chi^2 = 1 around the minimum: chi^2 ~ chi2_min + c/2 (x - x0)^2
    auto pc = parabola(g.grid[b], step, chi2[b - 1], chi2[b], chi2[b + 1]);
    if (pc.curvature > 0.0) g.uncertainty = std::sqrt(2.0 / pc.curvature);
}

// Significance (c / sigma_c)^2 of the quadratic term in a weighted fit of
// S against -ln xi on the same points as fit_log_linear. Without per-point
// errors the covariance comes from the residual variance.
double curvature_significance(const std::vector<DataPoint> &pts, const FitOptions &opts) {
    std::vector<DataPoint> use;
    bool weighted = true;
    for (const auto &p : pts) {
        if (!(p.x > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y)) continue;
        if (p.separation >= 0 && p.separation < opts.min_separation) continue;
        use.push_back({-std::log(p.x), p.y, p.sigma, p.separation});
        weighted &= p.sigma > 0.0;
    }
    if (use.size() < 4) throw FitError("fewer than 4 points for the curvature test");
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    for (const auto &p : use) {
        const double w = weighted ? 1.0 / (p.sigma * p.sigma) : 1.0;
        const Eigen::Vector3d f(1.0, p.x, p.x * p.x);
        a += w * f * f.transpose();
        b += w * p.y * f;
    }
    Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
    if (!lu.isInvertible()) throw FitError("no spread in -ln xi for the curvature test");
    const Eigen::Vector3d coef = lu.solve(b);
    Eigen::Matrix3d cov = lu.inverse();
    if (!weighted) {
        double rss = 0;
        for (const auto &p : use) rss += std::pow(p.y - coef.dot(Eigen::Vector3d(1.0, p.x, p.x * p.x)), 2);
        cov *= rss / static_cast<double>(use.size() - 3);
    }
    if (!(cov(2, 2) > 0.0)) return 0.0;
    return coef(2) * coef(2) / cov(2, 2);
}

}  // namespace

GridScan scan_p(const std::vector<SteadyStateInput> &steady, const FitOptions &opts) {
    GridScan g;
    for (const auto &in : steady) {
        g.grid.push_back(in.p);
        g.objective.push_back(curvature_significance(in.points, opts));
    }
    for (size_t i = 1; i < g.grid.size(); i++) {
        if (!(g.grid[i] > g.grid[i - 1])) throw FitError("p grid must be increasing");
    }
    if (g.grid.empty()) throw FitError("empty p grid");
    finish_scan(g, false, g.objective);
    return g;
}

GridScan scan_y_over_t(const std::vector<BellTimeInput> &bell, int64_t L, double h, const std::vector<double> &grid,
                       const FitOptions &opts) {
    if (grid.empty()) throw FitError("empty Y/T grid");
    GridScan g;
    g.grid = grid;
    std::vector<double> chi2;
    const double lo = std::isnan(opts.tau_min_early) ? h * kPi / static_cast<double>(L) : opts.tau_min_early;
    for (double yt : grid) {
        // the window is fixed in t by the central grid value so every Y/T
        // sees the same points
        double yc = grid[grid.size() / 2];
        double sw = 0, swr = 0;
        std::vector<std::pair<double, double>> res;  // (residual before offset, weight)
        for (const auto &b : bell) {
            double tau_c = yc * static_cast<double>(b.t) / static_cast<double>(L);
            if (!(tau_c >= lo && tau_c <= opts.tau_max_early)) continue;
            double tau = yt * static_cast<double>(b.t) / static_cast<double>(L);
            double w = b.sigma > 0 ? 1.0 / (b.sigma * b.sigma) : 1.0;
            double d = b.s - h * kPi / tau;
            res.emplace_back(d, w);
            sw += w;
            swr += w * d;
        }
        if (res.size() < 2) throw FitError("fewer than 2 points in the early-time window");
        double c = swr / sw, total = 0;
        for (auto [d, w] : res) total += w * (d - c) * (d - c);
        g.objective.push_back(total);
        chi2.push_back(total);
    }
    finish_scan(g, false, chi2);
    return g;
}

CalibrationResult calibrate(const std::vector<SteadyStateInput> &steady, const std::vector<BellTimeInput> &bell,
                            int64_t L, const std::vector<double> &y_grid, const FitOptions &opts) {
    CalibrationResult out;
    out.p_scan = scan_p(steady, opts);
    out.h = fit_log_linear(steady[out.p_scan.best].points, opts).exponent;
    out.p_c = out.p_scan.optimum;
    out.p_c_error = out.p_scan.uncertainty;
    out.y_scan = scan_y_over_t(bell, L, out.h, y_grid, opts);
    out.y_over_t = out.y_scan.optimum;
    out.y_over_t_error = out.y_scan.uncertainty;
    out.flagged = out.p_scan.on_edge || out.y_scan.on_edge;
    return out;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) throw ConfigError("bad grid");
    std::vector<double> out;
    const auto n = static_cast<int64_t>(std::floor((hi - lo) / step + 1e-9));
    for (int64_t i = 0; i <= n; i++) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

}  // namespace hcft
