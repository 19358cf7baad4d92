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


// Hybrid Clifford circuits on a rectangle with the boundary conditions of
// the layout kinds below, probed at scheduled times.
//
// Boundary cuts are named by edge and index:
//   t<k>  top edge, x = -L/2 + k, y = Y, k in [0, L]
//   b<k>  bottom edge, x = -L/2 + k, y = 0
//   l<m>  left edge, x = -L/2, y = 2m (Y/T)
//   r<m>  right edge, x = L/2, y = 2m (Y/T)
// where Y = (Y/T) t at probe time t. A region is the run of qubits met going
// clockwise from one cut to another: up the left edge, along the top, down
// the right edge and back along the bottom. Side indices count ejected
// qubits, so l<m> exists once m qubits have left the chain on that side.
//
// Segment descriptors in output rows read
//   bip:<a>-<b>            entropy of a region anchored at a corner
//   seg:<a>-<b>            entropy of a region with two free endpoints
//   mi:<a>-<b>|<c>-<d>     mutual information of two regions
//   bell:<a>-<b>           entropy of the system against its environment
//   refq                   entropy of the reference qubits

#ifndef HCFT_HARNESS_HPP
#define HCFT_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hcft/percolation.hpp"
#include "hcft/series.hpp"
#include "hcft/tableau.hpp"

namespace hcft {

enum class LayoutKind { fffa, afaa, fafa, aaaa, pbc_product, pbc_bell, reference_qubits };

std::string_view to_string(LayoutKind kind);
// Throws ConfigError for unknown names.
LayoutKind parse_layout(std::string_view name);

bool is_periodic(LayoutKind kind);
bool has_environment(LayoutKind kind);
bool injects_qubits(LayoutKind kind);

struct BoundaryLayout {
    LayoutKind kind = LayoutKind::fffa;
    size_t L = 0;
    int64_t T = 0;
    double p = 0.0;
    // Chain sites [first, second) Bell-paired with reference qubits.
    std::optional<std::pair<size_t, size_t>> ref_segment;
};

// Throws GeometryError for odd or too small L, negative T, p outside [0, 1]
// or a bad reference segment.
BoundaryLayout make_layout(LayoutKind kind, size_t L, int64_t T, double p,
                           std::optional<std::pair<size_t, size_t>> ref_segment = std::nullopt);

enum class Edge { top, bottom, left, right };

struct Cut {
    Edge edge = Edge::top;
    int64_t index = 0;
    bool operator==(const Cut &) const = default;
};

struct Arc {
    Cut from;
    Cut to;
    bool operator==(const Arc &) const = default;
};

enum class Observable { bipartite_entropy, segment_entropy, mutual_information, bell_entropy, refq_entropy };

struct ProbeSpec {
    Observable kind = Observable::bipartite_entropy;
    std::vector<Arc> regions;  // two for mutual_information, none for refq_entropy

    std::string descriptor() const;
    bool operator==(const ProbeSpec &) const = default;
};

// Throws ScheduleError on malformed text.
ProbeSpec parse_probe(std::string_view descriptor);
std::string cut_name(const Cut &c);

struct ScheduledProbe {
    int64_t t = 0;
    ProbeSpec probe;
};

// How boundary points are mapped to the real line for the collapse
// coordinates: the rectangle map, the infinite strip of height Y, or the
// cylinder of circumference L. automatic picks the cylinder for periodic
// layouts and the rectangle otherwise.
enum class Geometry { automatic, rectangle, strip, cylinder };

std::string_view to_string(Geometry g);
Geometry parse_geometry(std::string_view name);

struct ProbeSchedule {
    std::vector<ScheduledProbe> probes;  // evaluated in order of t, then listing order
    Geometry geometry = Geometry::automatic;

    // Every probe at every time.
    static ProbeSchedule grid(const std::vector<int64_t> &times, const std::vector<ProbeSpec> &probes,
                              Geometry geometry = Geometry::automatic);
};

// Qubit bookkeeping of one realization. The clockwise ordering of boundary
// qubits is followed by the reference qubits.
class BoundaryRegistry {
   public:
    static constexpr size_t kEmpty = static_cast<size_t>(-1);

    std::vector<size_t> chain;   // chain position -> qubit, kEmpty before injection
    std::vector<size_t> left;    // ejected on the left, oldest first
    std::vector<size_t> right;   // ejected on the right, oldest first
    std::vector<std::pair<size_t, size_t>> environment;  // (column, qubit), columns increasing
    std::vector<size_t> refs;

    std::vector<size_t> ordering() const;
    size_t boundary_size() const;
    // Position of a cut in ordering(), or nullopt if it does not exist yet.
    std::optional<size_t> position(const Cut &c) const;
};

class CircuitRun {
   public:
    CircuitRun(const BoundaryLayout &layout, uint64_t seed);

    // Applies layer time()+1: injection at period starts, brickwork gates,
    // then the measurement sweep.
    void advance();

    int64_t time() const { return t_; }
    const BoundaryLayout &layout() const { return layout_; }
    const StabilizerTableau &state() const { return state_; }
    const BoundaryRegistry &registry() const { return reg_; }

    // Entropy of each probe in bits at the current time. Throws
    // ScheduleError for cuts that do not exist yet.
    std::vector<int64_t> evaluate(const std::vector<ProbeSpec> &probes) const;

   private:
    void measure_sweep();

    BoundaryLayout layout_;
    Wrap wrap_;
    Rng rng_;
    StabilizerTableau state_;
    BoundaryRegistry reg_;
    int64_t t_ = 0;
};

// Throws ScheduleError for times outside [0, T], side cuts that will not
// exist at their probe time, region counts that do not match the
// observable, or reference probes without reference qubits.
void validate_schedule(const BoundaryLayout &layout, const ProbeSchedule &schedule);

// Bits for each scheduled probe in schedule order.
std::vector<int64_t> run_realization(const BoundaryLayout &layout, const ProbeSchedule &schedule, uint64_t seed);

struct CollapseCoordinates {
    double xi;
    double eta;
};

// Conformal coordinates of a probe; NaN where they are undefined (t = 0,
// reference probes, points mapped to infinity).
CollapseCoordinates collapse_coordinates(LayoutKind kind, Geometry geometry, size_t L, double y_over_t, int64_t t,
                                         const ProbeSpec &probe);

struct EnsembleOptions {
    uint64_t n = 1;
    uint64_t master_seed = 0;
    size_t workers = 1;
    double y_over_t = 0.61;
};

// Realization i runs with seed split_seed(master_seed, i). Throws
// InvalidSizeError for n = 0.
ObservableSeries run_ensemble(const BoundaryLayout &layout, const ProbeSchedule &schedule,
                              const EnsembleOptions &opts);

// Reference qubits Bell-paired with chain sites [a, b); S of the reference
// set after every layer t = 0..T.
ObservableSeries run_reference_qubit_experiment(size_t L, int64_t T, double p, std::pair<size_t, size_t> segment,
                                                const EnsembleOptions &opts);

// Cut-cost analogue of run_ensemble on the percolation lattice at the given
// depths. top_bipartition records bip:t0-t<k> for k = 1..L-1 and
// top_vs_bottom records bell:t0-t<L>. Y/T is 1.
ObservableSeries run_percolation_ensemble(size_t L, const std::vector<int64_t> &depths, double p, Coloring coloring,
                                          Wrap wrap, const EnsembleOptions &opts);

// Layout whose collapse conventions a series follows; percolation series
// map to their circuit analogues. Throws ConfigError for unknown kinds.
LayoutKind series_layout(const std::string &kind);

// Lattice units from the free endpoint(s) of a probe to the nearest corner
// (bipartite) or between its endpoints (segment); -1 where not defined.
int64_t probe_separation(LayoutKind kind, size_t L, int64_t t, const ProbeSpec &probe);

}  // namespace hcft

#endif
