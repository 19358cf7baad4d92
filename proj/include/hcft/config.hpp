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


// Run configuration, named probe schedules and the result-file format.
//
// A result file is one header line "# <json>" followed by CSV with columns
// t,tau,segment,xi,eta,mean_nats,stderr,count,sum_bits,sum_sq_bits. The
// header echoes the full configuration, so a run replays from its own
// output.

#ifndef HCFT_CONFIG_HPP
#define HCFT_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hcft/harness.hpp"
#include "hcft/percolation.hpp"
#include "hcft/series.hpp"

namespace hcft {

struct RunConfig {
    std::string command = "simulate";
    LayoutKind layout = LayoutKind::fffa;
    int64_t L = 16;
    int64_t T = 16;
    double p = 0.16;
    uint64_t n = 1;
    uint64_t seed = 1;
    size_t workers = 1;  // not echoed; results do not depend on it
    std::string schedule = "default";
    std::string schedule_text;  // contents when `schedule` names a file
    Geometry geometry = Geometry::automatic;
    double y_over_t = 0.61;
    std::string out;
    std::optional<std::pair<size_t, size_t>> ref_segment;
    Coloring coloring = Coloring::top_bipartition;
    Wrap wrap = Wrap::open;
};

std::string config_to_json(const RunConfig &c);
// Throws ConfigError naming the offending field.
RunConfig config_from_json(const std::string &text);

// Throws ConfigError naming the offending field.
void validate_config(const RunConfig &c);

// Preset names, or the text of a schedule file. Each schedule line reads
// "<times> <probe>" where times is "t", "a,b,c" or "a:b:step"; '#' starts a
// comment. Presets: default, fig5a, fig5b, fig8b, fig9, fig10a, fig10b,
// refq, afaa, nonlocal.
std::vector<std::string> preset_names();
ProbeSchedule preset_schedule(const std::string &name, LayoutKind kind, size_t L, int64_t T);
// Throws ConfigError "schedule line N: ..." on bad input.
ProbeSchedule parse_schedule_text(const std::string &text, Geometry geometry);
// Preset when the name is known; otherwise the file is read into
// c.schedule_text (if still empty) and parsed.
ProbeSchedule resolve_schedule(RunConfig &c);
// Depths for percolate: "default" (every 2 layers), "every:<k>", or a file
// of depth specifications in the schedule time syntax.
std::vector<int64_t> resolve_depths(RunConfig &c);

ObservableSeries execute_simulate(RunConfig &c);
ObservableSeries execute_percolate(RunConfig &c);

struct ResultFile {
    RunConfig config;
    ObservableSeries series;
    std::string created;  // UTC timestamp
};

// Writes to a temporary file next to `path` and renames it into place.
// Throws IoError.
void write_result_file(const std::string &path, const ResultFile &f);
std::string format_result_file(const ResultFile &f);
std::string format_data_block(const ObservableSeries &s);
// Throws IoError for unreadable files and malformed content.
ResultFile read_result_file(const std::string &path);
ResultFile parse_result_file(const std::string &text, const std::string &origin = "<memory>");

// Collapse coordinates of every record recomputed for a new Y/T.
ObservableSeries recompute_collapse(const ObservableSeries &s, Geometry geometry, double y_over_t);

}  // namespace hcft

#endif
