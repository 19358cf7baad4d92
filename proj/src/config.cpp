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

#include "hcft/config.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "hcft/errors.hpp"
#include "json.hpp"

namespace hcft {

using nlohmann::json;

namespace {

constexpr const char *kCsvHeader = "t,tau,segment,xi,eta,mean_nats,stderr,count,sum_bits,sum_sq_bits";

std::string_view to_string(Coloring c) {
    return c == Coloring::top_bipartition ? "top_bipartition" : "top_vs_bottom";
}
std::string_view to_string(Wrap w) { return w == Wrap::open ? "open" : "periodic"; }

Coloring parse_coloring(const std::string &s) {
    if (s == "top_bipartition") return Coloring::top_bipartition;
    if (s == "top_vs_bottom") return Coloring::top_vs_bottom;
    throw ConfigError("coloring: unknown value '" + s + "'");
}
Wrap parse_wrap(const std::string &s) {
    if (s == "open") return Wrap::open;
    if (s == "periodic") return Wrap::periodic;
    throw ConfigError("wrap: unknown value '" + s + "'");
}

std::string trim(std::string_view s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    size_t b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

int64_t parse_int(const std::string &s, const std::string &what) {
    size_t used = 0;
    int64_t v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception &) {
        throw ConfigError(what + ": '" + s + "' is not an integer");
    }
    if (used != s.size()) throw ConfigError(what + ": '" + s + "' is not an integer");
    return v;
}

// "t", "a,b,c" or "a:b:step" (inclusive).
std::vector<int64_t> parse_times(const std::string &s, const std::string &what) {
    std::vector<int64_t> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
        if (parts.size() != 3) throw ConfigError(what + ": range needs a:b:step");
        int64_t a = parse_int(parts[0], what), b = parse_int(parts[1], what), step = parse_int(parts[2], what);
        if (step <= 0) throw ConfigError(what + ": step must be positive");
        for (int64_t t = a; t <= b; t += step) out.push_back(t);
        return out;
    }
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_int(part, what));
    return out;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading " + path);
    return ss.str();
}

std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string utc_now() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ProbeSpec top_arc(Observable kind, int64_t a, int64_t b) {
    return ProbeSpec{kind, {Arc{{Edge::top, a}, {Edge::top, b}}}};
}

ProbeSpec mi(Arc a, Arc b) { return ProbeSpec{Observable::mutual_information, {a, b}}; }

ProbeSpec bell_probe(LayoutKind kind, int64_t L) {
    if (injects_qubits(kind)) return ProbeSpec{Observable::bell_entropy, {Arc{{Edge::left, 0}, {Edge::right, 0}}}};
    return top_arc(Observable::bell_entropy, 0, L);
}

// T i / parts for i = first..parts, deduplicated.
std::vector<int64_t> fractions(int64_t T, int64_t parts, int64_t first = 1) {
    std::set<int64_t> s;
    for (int64_t i = first; i <= parts; i++) s.insert(T * i / parts);
    return {s.begin(), s.end()};
}

std::vector<int64_t> every(int64_t T, int64_t from = 0) {
    std::vector<int64_t> out;
    for (int64_t t = from; t <= T; t++) out.push_back(t);
    return out;
}

// 1, 2, 3, 4, 6, 8, 12, 16, ... up to `limit`.
std::vector<int64_t> sqrt2_ladder(int64_t limit) {
    std::vector<int64_t> out;
    for (int64_t p = 1; p <= limit; p *= 2) {
        out.push_back(p);
        if (p >= 2 && p + p / 2 <= limit) out.push_back(p + p / 2);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int64_t ejected_at(LayoutKind kind, int64_t t) {
    if (!injects_qubits(kind) || t < 1) return 0;
    return (t + 1) / 2 - 1;
}

ProbeSchedule afaa_schedule(LayoutKind kind, int64_t L, int64_t T) {
    ProbeSchedule s;
    for (int64_t t : fractions(T, 8)) {
        const int64_t E = ejected_at(kind, t);
        auto add = [&](Cut to) {
            s.probes.push_back({t, ProbeSpec{Observable::bipartite_entropy, {Arc{{Edge::left, 0}, to}}}});
        };
        for (int64_t m = 1; m <= E; m++) add({Edge::left, m});
        for (int64_t k = (E > 0 ? 0 : 1); k <= L; k++) add({Edge::top, k});
        for (int64_t m = E; m >= 1; m--) add({Edge::right, m});
    }
    return s;
}

}  // namespace

std::string config_to_json(const RunConfig &c) {
    json j;
    j["command"] = c.command;
    j["layout"] = std::string(to_string(c.layout));
    j["L"] = c.L;
    j["T"] = c.T;
    j["p"] = c.p;
    j["n"] = c.n;
    j["seed"] = c.seed;
    j["schedule"] = c.schedule;
    if (!c.schedule_text.empty()) j["schedule_text"] = c.schedule_text;
    j["geometry"] = std::string(to_string(c.geometry));
    j["y_over_t"] = c.y_over_t;
    j["out"] = c.out;
    if (c.ref_segment) {
        j["ref_segment"] = json::array({c.ref_segment->first, c.ref_segment->second});
    } else {
        j["ref_segment"] = nullptr;
    }
    j["coloring"] = std::string(to_string(c.coloring));
    j["wrap"] = std::string(to_string(c.wrap));
    return j.dump();
}

namespace {

RunConfig config_from(const json &j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    RunConfig c;
    auto field = [&](const char *name, auto &dst) {
        if (!j.contains(name) || j[name].is_null()) return;
        try {
            j[name].get_to(dst);
        } catch (const json::exception &) {
            throw ConfigError(std::string(name) + ": wrong type");
        }
    };
    std::string layout = std::string(to_string(c.layout)), geometry = "automatic";
    std::string coloring = "top_bipartition", wrap = "open";
    field("command", c.command);
    field("layout", layout);
    field("L", c.L);
    field("T", c.T);
    field("p", c.p);
    field("n", c.n);
    field("seed", c.seed);
    field("schedule", c.schedule);
    field("schedule_text", c.schedule_text);
    field("geometry", geometry);
    field("y_over_t", c.y_over_t);
    field("out", c.out);
    field("coloring", coloring);
    field("wrap", wrap);
    if (j.contains("ref_segment") && !j["ref_segment"].is_null()) {
        std::vector<size_t> seg;
        field("ref_segment", seg);
        if (seg.size() != 2) throw ConfigError("ref_segment: expected [a, b]");
        c.ref_segment = std::make_pair(seg[0], seg[1]);
    }
    try {
        c.layout = parse_layout(layout);
    } catch (const ConfigError &e) {
        throw ConfigError(std::string("layout: ") + e.what());
    }
    try {
        c.geometry = parse_geometry(geometry);
    } catch (const ConfigError &e) {
        throw ConfigError(std::string("geometry: ") + e.what());
    }
    c.coloring = parse_coloring(coloring);
    c.wrap = parse_wrap(wrap);
    return c;
}

}  // namespace

RunConfig config_from_json(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return config_from(j);
}

void validate_config(const RunConfig &c) {
    static const std::set<std::string> commands{"simulate", "percolate", "fit", "calibrate", "collapse"};
    if (!commands.count(c.command)) throw ConfigError("command: unknown value '" + c.command + "'");
    if (c.L < 2 || c.L % 2 != 0) throw ConfigError("L: must be even and at least 2");
    if (c.T < 0) throw ConfigError("T: must be nonnegative");
    if (!(c.p >= 0.0 && c.p <= 1.0)) throw ConfigError("p: must lie in [0, 1]");
    if (c.n == 0) throw ConfigError("n: at least one realization");
    if (c.workers == 0) throw ConfigError("workers: at least one");
    if (!(c.y_over_t > 0.0) || !std::isfinite(c.y_over_t)) throw ConfigError("y_over_t: must be positive");
}

std::vector<std::string> preset_names() {
    return {"default", "fig5a", "fig5b", "fig8b", "fig9", "fig10a", "fig10b", "refq", "afaa", "nonlocal"};
}

ProbeSchedule preset_schedule(const std::string &name, LayoutKind kind, size_t Lu, int64_t T) {
    const int64_t L = static_cast<int64_t>(Lu);
    const int64_t c = L / 2;
    auto bip_all = [&] {
        std::vector<ProbeSpec> v;
        for (int64_t k = 1; k < L; k++) v.push_back(top_arc(Observable::bipartite_entropy, 0, k));
        return v;
    };

    if (name == "default") {
        switch (kind) {
            case LayoutKind::fffa:
            case LayoutKind::pbc_product: return preset_schedule("fig5a", kind, Lu, T);
            case LayoutKind::afaa: return afaa_schedule(kind, L, T);
            case LayoutKind::fafa:
            case LayoutKind::pbc_bell:
            case LayoutKind::aaaa: return ProbeSchedule::grid(every(T), {bell_probe(kind, L)});
            case LayoutKind::reference_qubits: return preset_schedule("refq", kind, Lu, T);
        }
    }
    if (name == "fig5a") return ProbeSchedule::grid(fractions(T, 16), bip_all());
    if (name == "fig5b") {
        std::vector<ProbeSpec> v;
        auto ladder = sqrt2_ladder(c);
        for (int64_t k : ladder) {
            for (int64_t r : ladder) {
                const int64_t m = L - r;
                if (k < m) v.push_back(mi({{Edge::top, 0}, {Edge::top, k}}, {{Edge::top, m}, {Edge::top, L}}));
            }
        }
        return ProbeSchedule::grid(fractions(T, 8), v);
    }
    if (name == "fig8b" || name == "fig10b") return ProbeSchedule::grid(every(T), {bell_probe(kind, L)});
    if (name == "fig9") {
        std::vector<ProbeSpec> v;
        for (int64_t g : sqrt2_ladder(L - 6)) {
            if (g % 2 != 0) continue;
            const int64_t a = c - g / 2 - 2, b = c + g / 2;
            if (a < 1 || b + 2 > L - 1) continue;
            v.push_back(mi({{Edge::top, a}, {Edge::top, a + 2}}, {{Edge::top, b}, {Edge::top, b + 2}}));
        }
        std::vector<int64_t> shifts{0};
        for (int64_t s : sqrt2_ladder(c - 3)) shifts.push_back(s);
        for (int64_t s : shifts) {
            const int64_t b = c - 1 + s;
            if (b + 2 > L - 1) continue;
            v.push_back(mi({{Edge::top, c - 1}, {Edge::top, c + 1}}, {{Edge::bottom, b + 2}, {Edge::bottom, b}}));
        }
        return ProbeSchedule::grid(fractions(T, 4), v);
    }
    if (name == "fig10a") return ProbeSchedule::grid(fractions(T, 8, 4), bip_all());
    if (name == "refq") return ProbeSchedule::grid(every(T), {ProbeSpec{Observable::refq_entropy, {}}});
    if (name == "afaa") return afaa_schedule(kind, L, T);
    if (name == "nonlocal") {
        std::vector<ProbeSpec> v;
        for (int64_t x : sqrt2_ladder(L - 8)) {
            if (x < 2) continue;
            const int64_t a = c - x / 2 - 2, b = a + 2 + x;
            if (a < 1 || b + 2 > L - 1) continue;
            v.push_back(mi({{Edge::top, a}, {Edge::top, a + 2}}, {{Edge::top, b}, {Edge::top, b + 2}}));
        }
        return ProbeSchedule::grid(every(T, 1), v, Geometry::strip);
    }
    throw ConfigError("schedule: unknown preset '" + name + "'");
}

ProbeSchedule parse_schedule_text(const std::string &text, Geometry geometry) {
    ProbeSchedule s;
    s.geometry = geometry;
    std::stringstream in(text);
    size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        line_no++;
        const std::string where = "schedule line " + std::to_string(line_no);
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string times, probe, extra;
        fields >> times >> probe;
        if (probe.empty() || (fields >> extra)) throw ConfigError(where + ": expected '<times> <probe>'");
        ProbeSpec spec;
        try {
            spec = parse_probe(probe);
        } catch (const ScheduleError &e) {
            throw ConfigError(where + ": " + e.what());
        }
        for (int64_t t : parse_times(times, where)) s.probes.push_back({t, spec});
    }
    if (s.probes.empty()) throw ConfigError("schedule: no probes");
    return s;
}

ProbeSchedule resolve_schedule(RunConfig &c) {
    ProbeSchedule s;
    const auto names = preset_names();
    if (c.schedule_text.empty() && std::find(names.begin(), names.end(), c.schedule) != names.end()) {
        s = preset_schedule(c.schedule, c.layout, static_cast<size_t>(c.L), c.T);
    } else {
        if (c.schedule_text.empty()) c.schedule_text = read_file(c.schedule);
        s = parse_schedule_text(c.schedule_text, Geometry::automatic);
    }
    if (c.geometry != Geometry::automatic) s.geometry = c.geometry;
    return s;
}

std::vector<int64_t> resolve_depths(RunConfig &c) {
    if (c.schedule_text.empty()) {
        if (c.schedule == "default") {
            std::vector<int64_t> d;
            for (int64_t t = 0; t <= c.T; t += 2) d.push_back(t);
            return d;
        }
        if (c.schedule.rfind("every:", 0) == 0) {
            int64_t k = parse_int(c.schedule.substr(6), "schedule");
            if (k <= 0) throw ConfigError("schedule: step must be positive");
            std::vector<int64_t> d;
            for (int64_t t = 0; t <= c.T; t += k) d.push_back(t);
            return d;
        }
        c.schedule_text = read_file(c.schedule);
    }
    std::set<int64_t> depths;
    std::stringstream in(c.schedule_text);
    size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        line_no++;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "schedule line " + std::to_string(line_no);
        for (int64_t t : parse_times(line, where)) {
            if (t < 0 || t > c.T) throw ConfigError(where + ": depth " + std::to_string(t) + " outside [0, T]");
            depths.insert(t);
        }
    }
    if (depths.empty()) throw ConfigError("schedule: no depths");
    return {depths.begin(), depths.end()};
}

ObservableSeries execute_simulate(RunConfig &c) {
    validate_config(c);
    auto layout = make_layout(c.layout, static_cast<size_t>(c.L), c.T, c.p, c.ref_segment);
    auto schedule = resolve_schedule(c);
    EnsembleOptions opts{c.n, c.seed, c.workers, c.y_over_t};
    return run_ensemble(layout, schedule, opts);
}

ObservableSeries execute_percolate(RunConfig &c) {
    validate_config(c);
    auto depths = resolve_depths(c);
    EnsembleOptions opts{c.n, c.seed, c.workers, 1.0};
    return run_percolation_ensemble(static_cast<size_t>(c.L), depths, c.p, c.coloring, c.wrap, opts);
}

std::string format_data_block(const ObservableSeries &s) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto &r : s.records) {
        out += std::to_string(r.t) + ',' + fmt_double(r.tau) + ',' + r.segment + ',' + fmt_double(r.xi) + ',' +
               fmt_double(r.eta) + ',' + fmt_double(r.mean_nats) + ',' + fmt_double(r.std_error) + ',' +
               std::to_string(r.count) + ',' + std::to_string(r.sum_bits) + ',' + std::to_string(r.sum_sq_bits) +
               '\n';
    }
    return out;
}

std::string format_result_file(const ResultFile &f) {
    const auto &m = f.series.metadata;
    json h;
    h["config"] = json::parse(config_to_json(f.config));
    h["metadata"] = {{"kind", m.kind},   {"geometry", m.geometry}, {"L", m.L},
                     {"T", m.T},         {"p", m.p},               {"y_over_t", m.y_over_t},
                     {"master_seed", m.master_seed}, {"n", m.n}};
    h["code_version"] = m.code_version;
    h["created"] = f.created.empty() ? utc_now() : f.created;
    return "# " + h.dump() + "\n" + format_data_block(f.series);
}

void write_result_file(const std::string &path, const ResultFile &f) {
    namespace fs = std::filesystem;
    const std::string text = format_result_file(f);
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("error writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot move result into " + path + ": " + ec.message());
    }
}

ResultFile parse_result_file(const std::string &text, const std::string &origin) {
    std::stringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw IoError(origin + ": missing '# ' header line");
    ResultFile f;
    try {
        json h = json::parse(line.substr(2));
        f.config = config_from(h.at("config"));
        const json &m = h.at("metadata");
        auto &md = f.series.metadata;
        m.at("kind").get_to(md.kind);
        m.at("geometry").get_to(md.geometry);
        m.at("L").get_to(md.L);
        m.at("T").get_to(md.T);
        m.at("p").get_to(md.p);
        m.at("y_over_t").get_to(md.y_over_t);
        m.at("master_seed").get_to(md.master_seed);
        m.at("n").get_to(md.n);
        h.at("code_version").get_to(md.code_version);
        h.at("created").get_to(f.created);
    } catch (const json::exception &e) {
        throw IoError(origin + ":1: bad header: " + e.what());
    } catch (const ConfigError &e) {
        throw IoError(origin + ":1: bad config echo: " + e.what());
    }
    if (!std::getline(in, line) || line != kCsvHeader) throw IoError(origin + ":2: expected CSV header '" +
                                                                     std::string(kCsvHeader) + "'");
    size_t line_no = 2;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 10) throw IoError(where + ": expected 10 columns, got " + std::to_string(cells.size()));
        auto num = [&](const std::string &s) {
            char *end = nullptr;
            double v = std::strtod(s.c_str(), &end);
            if (s.empty() || *end != '\0') throw IoError(where + ": bad number '" + s + "'");
            return v;
        };
        auto integer = [&](const std::string &s) {
            try {
                return parse_int(s, "");
            } catch (const ConfigError &) {
                throw IoError(where + ": bad integer '" + s + "'");
            }
        };
        SeriesRecord r;
        r.t = integer(cells[0]);
        r.tau = num(cells[1]);
        r.segment = cells[2];
        r.xi = num(cells[3]);
        r.eta = num(cells[4]);
        r.mean_nats = num(cells[5]);
        r.std_error = num(cells[6]);
        r.count = integer(cells[7]);
        r.sum_bits = integer(cells[8]);
        r.sum_sq_bits = integer(cells[9]);
        f.series.records.push_back(std::move(r));
    }
    return f;
}

ResultFile read_result_file(const std::string &path) { return parse_result_file(read_file(path), path); }

ObservableSeries recompute_collapse(const ObservableSeries &s, Geometry geometry, double y_over_t) {
    ObservableSeries out = s;
    const LayoutKind kind = series_layout(s.metadata.kind);
    const size_t L = static_cast<size_t>(s.metadata.L);
    const Geometry resolved = geometry != Geometry::automatic
                                  ? geometry
                                  : (is_periodic(kind) ? Geometry::cylinder : Geometry::rectangle);
    out.metadata.geometry = std::string(to_string(resolved));
    out.metadata.y_over_t = y_over_t;
    for (auto &r : out.records) {
        ProbeSpec probe;
        try {
            probe = parse_probe(r.segment);
        } catch (const ScheduleError &e) {
            throw IoError("segment '" + r.segment + "': " + e.what());
        }
        r.tau = y_over_t * static_cast<double>(r.t) / static_cast<double>(L);
        auto cc = collapse_coordinates(kind, resolved, L, y_over_t, r.t, probe);
        r.xi = cc.xi;
        r.eta = cc.eta;
    }
    return out;
}

}  // namespace hcft
