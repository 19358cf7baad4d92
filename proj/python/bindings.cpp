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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hcft/config.hpp"
#include "hcft/elliptic.hpp"
#include "hcft/entropy.hpp"
#include "hcft/errors.hpp"
#include "hcft/fit.hpp"
#include "hcft/harness.hpp"
#include "hcft/tableau.hpp"

namespace py = pybind11;
using namespace hcft;
using namespace py::literals;

namespace {

RunConfig make_config(const std::string &command, const std::string &layout, int64_t L, int64_t T, double p,
                      uint64_t n, uint64_t seed, size_t workers, const std::string &schedule, double y_over_t,
                      const std::string &geometry) {
    RunConfig c;
    c.command = command;
    c.layout = parse_layout(layout);
    c.L = L;
    c.T = T;
    c.p = p;
    c.n = n;
    c.seed = seed;
    c.workers = workers == 0 ? default_workers() : workers;
    c.schedule = schedule;
    c.y_over_t = y_over_t;
    c.geometry = parse_geometry(geometry);
    return c;
}

std::vector<DataPoint> points_from(const std::vector<double> &x, const std::vector<double> &y,
                                   const std::vector<double> &sigma, const std::vector<int64_t> &separation) {
    if (x.size() != y.size()) throw ConfigError("x and y differ in length");
    if (!sigma.empty() && sigma.size() != x.size()) throw ConfigError("sigma differs in length from x");
    if (!separation.empty() && separation.size() != x.size()) throw ConfigError("separation differs in length from x");
    std::vector<DataPoint> pts(x.size());
    for (size_t i = 0; i < x.size(); i++) {
        pts[i].x = x[i];
        pts[i].y = y[i];
        if (!sigma.empty()) pts[i].sigma = sigma[i];
        if (!separation.empty()) pts[i].separation = separation[i];
    }
    return pts;
}

}  // namespace

PYBIND11_MODULE(_hcft, m) {
    m.doc() = "hybrid Clifford circuits, boundary CFT collapse coordinates and exponent fits";
    m.attr("__version__") = kCodeVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ScheduleError>(m, "ScheduleError", PyExc_ValueError);
    py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
    py::register_exception<InvalidSizeError>(m, "InvalidSizeError", PyExc_ValueError);
    py::register_exception<DegenerateProbeError>(m, "DegenerateProbeError", PyExc_ArithmeticError);
    py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<SeriesRecord>(m, "SeriesRecord")
        .def_readonly("t", &SeriesRecord::t)
        .def_readonly("tau", &SeriesRecord::tau)
        .def_readonly("segment", &SeriesRecord::segment)
        .def_readonly("xi", &SeriesRecord::xi)
        .def_readonly("eta", &SeriesRecord::eta)
        .def_readonly("mean_nats", &SeriesRecord::mean_nats)
        .def_readonly("stderr", &SeriesRecord::std_error)
        .def_readonly("count", &SeriesRecord::count)
        .def_readonly("sum_bits", &SeriesRecord::sum_bits)
        .def_readonly("sum_sq_bits", &SeriesRecord::sum_sq_bits)
        .def("__repr__", [](const SeriesRecord &r) {
            return "<SeriesRecord t=" + std::to_string(r.t) + " " + r.segment + " " + std::to_string(r.mean_nats) +
                   ">";
        });

    py::class_<SeriesMetadata>(m, "SeriesMetadata")
        .def_readonly("kind", &SeriesMetadata::kind)
        .def_readonly("geometry", &SeriesMetadata::geometry)
        .def_readonly("L", &SeriesMetadata::L)
        .def_readonly("T", &SeriesMetadata::T)
        .def_readonly("p", &SeriesMetadata::p)
        .def_readonly("y_over_t", &SeriesMetadata::y_over_t)
        .def_readonly("master_seed", &SeriesMetadata::master_seed)
        .def_readonly("code_version", &SeriesMetadata::code_version)
        .def_readonly("n", &SeriesMetadata::n);

    py::class_<ObservableSeries>(m, "ObservableSeries")
        .def_readonly("metadata", &ObservableSeries::metadata)
        .def_readonly("records", &ObservableSeries::records)
        .def("__len__", [](const ObservableSeries &s) { return s.records.size(); })
        .def("data_block", [](const ObservableSeries &s) { return format_data_block(s); })
        .def("columns", [](const ObservableSeries &s) {
            py::dict d;
            std::vector<int64_t> t, count, sum_bits, sum_sq;
            std::vector<double> tau, xi, eta, mean, se;
            std::vector<std::string> seg;
            for (const auto &r : s.records) {
                t.push_back(r.t);
                tau.push_back(r.tau);
                seg.push_back(r.segment);
                xi.push_back(r.xi);
                eta.push_back(r.eta);
                mean.push_back(r.mean_nats);
                se.push_back(r.std_error);
                count.push_back(r.count);
                sum_bits.push_back(r.sum_bits);
                sum_sq.push_back(r.sum_sq_bits);
            }
            d["t"] = t;
            d["tau"] = tau;
            d["segment"] = seg;
            d["xi"] = xi;
            d["eta"] = eta;
            d["mean_nats"] = mean;
            d["stderr"] = se;
            d["count"] = count;
            d["sum_bits"] = sum_bits;
            d["sum_sq_bits"] = sum_sq;
            return d;
        });

    py::class_<ResultFile>(m, "ResultFile")
        .def_property_readonly("config", [](const ResultFile &f) { return config_to_json(f.config); })
        .def_readonly("series", &ResultFile::series)
        .def_readonly("created", &ResultFile::created);

    m.def(
        "simulate",
        [](const std::string &layout, int64_t L, int64_t T, double p, uint64_t n, uint64_t seed, size_t workers,
           const std::string &schedule, double y_over_t, const std::string &geometry,
           std::optional<std::pair<size_t, size_t>> ref_segment, const std::string &out) {
            RunConfig c = make_config("simulate", layout, L, T, p, n, seed, workers, schedule, y_over_t, geometry);
            c.ref_segment = ref_segment;
            c.out = out;
            ObservableSeries s;
            {
                py::gil_scoped_release release;
                s = execute_simulate(c);
                if (!out.empty()) write_result_file(out, {c, s, {}});
            }
            return s;
        },
        "layout"_a = "fffa", "L"_a = 16, "T"_a = 16, "p"_a = 0.16, "n"_a = 1, "seed"_a = 1, "workers"_a = 1,
        "schedule"_a = "default", "y_over_t"_a = 0.61, "geometry"_a = "automatic", "ref_segment"_a = py::none(),
        "out"_a = "", "Circuit ensemble; writes a result file when `out` is given. workers=0 uses every core.");

    m.def(
        "percolate",
        [](int64_t L, int64_t T, double p, uint64_t n, uint64_t seed, size_t workers, const std::string &coloring,
           const std::string &wrap, const std::string &depths, const std::string &out) {
            RunConfig c = make_config("percolate", "fffa", L, T, p, n, seed, workers, depths, 1.0, "automatic");
            if (coloring == "top_bipartition") {
                c.coloring = Coloring::top_bipartition;
            } else if (coloring == "top_vs_bottom") {
                c.coloring = Coloring::top_vs_bottom;
            } else {
                throw ConfigError("coloring: unknown value '" + coloring + "'");
            }
            if (wrap == "open") {
                c.wrap = Wrap::open;
            } else if (wrap == "periodic") {
                c.wrap = Wrap::periodic;
            } else {
                throw ConfigError("wrap: unknown value '" + wrap + "'");
            }
            c.out = out;
            ObservableSeries s;
            {
                py::gil_scoped_release release;
                s = execute_percolate(c);
                if (!out.empty()) write_result_file(out, {c, s, {}});
            }
            return s;
        },
        "L"_a = 16, "T"_a = 16, "p"_a = 0.5, "n"_a = 1, "seed"_a = 1, "workers"_a = 1,
        "coloring"_a = "top_bipartition", "wrap"_a = "open", "depths"_a = "default", "out"_a = "");

    m.def("read_result_file", &read_result_file, "path"_a);
    m.def(
        "recompute_collapse",
        [](const ObservableSeries &s, double y_over_t, const std::string &geometry) {
            return recompute_collapse(s, parse_geometry(geometry), y_over_t);
        },
        "series"_a, "y_over_t"_a, "geometry"_a = "automatic");
    m.def("preset_names", &preset_names);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("kind", &FitResult::kind)
        .def_readonly("exponent", &FitResult::exponent)
        .def_readonly("offset", &FitResult::offset)
        .def_readonly("covariance", &FitResult::covariance)
        .def_readonly("r_squared", &FitResult::r_squared)
        .def_readonly("window_lo", &FitResult::window_lo)
        .def_readonly("window_hi", &FitResult::window_hi)
        .def_readonly("n_points", &FitResult::n_points)
        .def_readonly("chi2", &FitResult::chi2)
        .def_property_readonly("exponent_error", &FitResult::exponent_error)
        .def("__repr__", [](const FitResult &r) {
            return "<FitResult " + r.kind + " exponent=" + std::to_string(r.exponent) +
                   " r2=" + std::to_string(r.r_squared) + ">";
        });

    m.def(
        "fit_line",
        [](const std::vector<double> &x, const std::vector<double> &y, const std::vector<double> &sigma) {
            return fit_line(points_from(x, y, sigma, {}));
        },
        "x"_a, "y"_a, "sigma"_a = std::vector<double>{});
    m.def(
        "fit_log_linear",
        [](const std::vector<double> &xi, const std::vector<double> &s, const std::vector<double> &sigma,
           const std::vector<int64_t> &separation, int64_t min_separation) {
            FitOptions o;
            o.min_separation = min_separation;
            return fit_log_linear(points_from(xi, s, sigma, separation), o);
        },
        "xi"_a, "s"_a, "sigma"_a = std::vector<double>{}, "separation"_a = std::vector<int64_t>{},
        "min_separation"_a = 4);
    m.def(
        "fit_power_law",
        [](const std::vector<double> &eta, const std::vector<double> &i, const std::vector<double> &sigma,
           double eta_min, double eta_max, bool two_term) {
            FitOptions o;
            o.eta_min = eta_min;
            o.eta_max = eta_max;
            o.two_term = two_term;
            return fit_power_law(points_from(eta, i, sigma, {}), o);
        },
        "eta"_a, "i"_a, "sigma"_a = std::vector<double>{}, "eta_min"_a = std::numeric_limits<double>::quiet_NaN(), "eta_max"_a = 0.1,
        "two_term"_a = false);
    m.def(
        "fit_series",
        [](const ObservableSeries &s, const std::string &kind) {
            if (kind == "log_linear") return fit_log_linear(xi_points(s));
            if (kind == "power_law") return fit_power_law(eta_points(s));
            if (kind == "eta_to_one") return fit_eta_to_one(eta_points(s));
            auto pts = tau_points(s, "bell", s.metadata.y_over_t);
            if (kind == "bell_early") return fit_bell_early(pts, s.metadata.L);
            if (kind == "bell_late") {
                bool pbc = is_periodic(series_layout(s.metadata.kind));
                return fit_bell_late(pts, pbc ? DecayMode::periodic : DecayMode::open);
            }
            throw ConfigError("kind: unknown fit kind '" + kind + "'");
        },
        "series"_a, "kind"_a = "log_linear");

    m.def("ellint_K", py::overload_cast<double>(&ellint_K), "m"_a);
    m.def("jacobi_sn", &jacobi_sn, "u"_a, "m"_a);
    m.def(
        "solve_m",
        [](double tau) {
            auto s = solve_m(tau);
            return py::dict("m"_a = s.param.m, "one_minus_m"_a = s.param.m1, "K"_a = s.K, "K1"_a = s.K1,
                            "precision_warning"_a = s.precision_warning);
        },
        "tau"_a);

    py::class_<StabilizerTableau>(m, "StabilizerTableau")
        .def_static("product_state", &new_product_state, "n"_a)
        .def_static("bell_pairs", &new_bell_pairs, "pairs"_a)
        .def_property_readonly("num_qubits", &StabilizerTableau::num_qubits)
        .def("entropy_bits",
             [](const StabilizerTableau &s, const std::vector<size_t> &qubits) {
                 for (size_t q : qubits) {
                     if (q >= s.num_qubits()) throw InvalidSizeError("qubit index out of range");
                 }
                 return entropy_subset(s, qubits).bits;
             },
             "qubits"_a)
        .def("is_valid", &StabilizerTableau::is_valid);
}
