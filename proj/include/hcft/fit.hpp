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


// Exponent fits on ensemble series and the p_c / (Y/T) calibration scans.
// All entropies are in nats.

#ifndef HCFT_FIT_HPP
#define HCFT_FIT_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hcft/series.hpp"

namespace hcft {

struct DataPoint {
    double x = 0.0;      // xi, eta or tau
    double y = 0.0;      // entropy or mutual information
    double sigma = 0.0;  // standard error; <= 0 means unknown
    int64_t separation = -1;
};

struct FitResult {
    std::string kind;
    double exponent = 0.0;
    double offset = 0.0;
    std::array<std::array<double, 2>, 2> covariance{};  // (exponent, offset)
    double r_squared = 0.0;
    double window_lo = 0.0;  // range of the natural abscissa actually used
    double window_hi = 0.0;
    size_t n_points = 0;
    double chi2 = 0.0;  // weighted residual sum of squares
    bool weighted = false;

    double exponent_error() const;
};

struct FitOptions {
    int64_t min_separation = 4;
    double eta_min = std::numeric_limits<double>::quiet_NaN();  // NaN: eta_max / 10
    double eta_max = 0.1;
    double one_minus_eta_max = 0.1;
    double h_guess = 0.53;
    double tau_min_early = std::numeric_limits<double>::quiet_NaN();  // NaN: h_guess * pi / L
    double tau_max_early = 0.3;
    double tau_min_late = 1.0;
    double tau_max_late = std::numeric_limits<double>::infinity();
    bool two_term = false;
};

enum class DecayMode { open, periodic };

// y = offset + exponent * x by weighted least squares (weights 1/sigma^2
// when every point has sigma > 0). Covariance is scaled by the reduced
// chi^2. Throws FitError for fewer than 3 points or no spread in x.
FitResult fit_line(const std::vector<DataPoint> &pts);

// S against -ln xi for points with separation >= min_separation (points
// with unknown separation are kept).
FitResult fit_log_linear(const std::vector<DataPoint> &pts, const FitOptions &opts = {});
// ln I against ln eta on eta_min <= eta < eta_max (one decade by default);
// I <= 0 is dropped. With two_term set, I = A eta^a + B eta with offset = A.
FitResult fit_power_law(const std::vector<DataPoint> &pts, const FitOptions &opts = {});
// I against -ln(1 - eta) on 1 - eta < one_minus_eta_max.
FitResult fit_eta_to_one(const std::vector<DataPoint> &pts, const FitOptions &opts = {});
// S against pi / tau on [tau_min_early, tau_max_early].
FitResult fit_bell_early(const std::vector<DataPoint> &pts, int64_t L, const FitOptions &opts = {});
// -ln S against tau for tau > tau_min_late, divided by pi (open) or 2 pi
// (periodic).
FitResult fit_bell_late(const std::vector<DataPoint> &pts, DecayMode mode, const FitOptions &opts = {});

// Points from a series. xi_points keeps records with finite positive xi,
// eta_points mutual-information records with eta in (0, 1), and tau_points
// records whose segment starts with `prefix`. t_min / t_max restrict the
// probe time.
std::vector<DataPoint> xi_points(const ObservableSeries &s, int64_t t_min = 0,
                                 int64_t t_max = std::numeric_limits<int64_t>::max());
std::vector<DataPoint> eta_points(const ObservableSeries &s, int64_t t_min = 0,
                                  int64_t t_max = std::numeric_limits<int64_t>::max());
std::vector<DataPoint> tau_points(const ObservableSeries &s, const std::string &prefix, double y_over_t);

struct GridScan {
    std::vector<double> grid;
    std::vector<double> objective;
    size_t best = 0;
    double optimum = 0.0;
    double uncertainty = 0.0;
    bool on_edge = false;
};

struct CalibrationResult {
    GridScan p_scan;  // objective: (c / sigma_c)^2 of a quadratic term, minimized
    GridScan y_scan;  // objective: chi^2 of the early Bell curve, minimized
    double h = 0.0;   // slope of the two-point fit at p_c
    double p_c = 0.0;
    double p_c_error = 0.0;
    double y_over_t = 0.0;
    double y_over_t_error = 0.0;
    bool flagged = false;
};

struct SteadyStateInput {
    double p;
    std::vector<DataPoint> points;  // (xi, S) on a periodic chain
};

struct BellTimeInput {
    int64_t t;
    double s;
    double sigma;
};

// The vertex of a parabola through the best grid point and its neighbours
// refines the optimum; the uncertainty comes from the curvature of the
// chi^2 of each fit (Delta chi^2 = 1).
GridScan scan_p(const std::vector<SteadyStateInput> &steady, const FitOptions &opts = {});
// h is held fixed; only the additive constant is free at each Y/T.
GridScan scan_y_over_t(const std::vector<BellTimeInput> &bell, int64_t L, double h, const std::vector<double> &grid,
                       const FitOptions &opts = {});
CalibrationResult calibrate(const std::vector<SteadyStateInput> &steady, const std::vector<BellTimeInput> &bell,
                            int64_t L, const std::vector<double> &y_grid, const FitOptions &opts = {});

std::vector<double> linear_grid(double lo, double hi, double step);

}  // namespace hcft

#endif
