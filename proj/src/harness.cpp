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


#include "hcft/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "hcft/clifford.hpp"
#include "hcft/conformal.hpp"
#include "hcft/entropy.hpp"
#include "hcft/errors.hpp"
#include "hcft/rng.hpp"

namespace hcft {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::pair<LayoutKind, std::string_view> kLayoutNames[] = {
    {LayoutKind::fffa, "fffa"},
    {LayoutKind::afaa, "afaa"},
    {LayoutKind::fafa, "fafa"},
    {LayoutKind::aaaa, "aaaa"},
    {LayoutKind::pbc_product, "pbc_product"},
    {LayoutKind::pbc_bell, "pbc_bell"},
    {LayoutKind::reference_qubits, "reference_qubits"},
};

constexpr std::pair<Observable, std::string_view> kObservableTags[] = {
    {Observable::bipartite_entropy, "bip"},
    {Observable::segment_entropy, "seg"},
    {Observable::mutual_information, "mi"},
    {Observable::bell_entropy, "bell"},
    {Observable::refq_entropy, "refq"},
};

size_t expected_regions(Observable o) {
    switch (o) {
        case Observable::mutual_information:
            return 2;
        case Observable::refq_entropy:
            return 0;
        default:
            return 1;
    }
}

// Ejected qubits per side after layer t.
int64_t ejected_per_side(LayoutKind kind, int64_t t) {
    if (!injects_qubits(kind) || t <= 0) return 0;
    return (t + 1) / 2 - 1;
}

// Registry after construction, with qubit indices handed out in tableau
// order. CircuitRun builds the tableau alongside.
BoundaryRegistry initial_registry(const BoundaryLayout &layout) {
    BoundaryRegistry reg;
    const size_t L = layout.L;
    reg.chain.assign(L, BoundaryRegistry::kEmpty);
    switch (layout.kind) {
        case LayoutKind::fffa:
        case LayoutKind::pbc_product:
            for (size_t j = 0; j < L; j++) reg.chain[j] = j;
            break;
        case LayoutKind::fafa:
        case LayoutKind::pbc_bell:
            for (size_t j = 0; j < L; j++) {
                reg.chain[j] = j;
                reg.environment.emplace_back(j, L + j);
            }
            break;
        case LayoutKind::afaa:
            for (size_t j = 1; j + 1 < L; j++) reg.chain[j] = j - 1;
            break;
        case LayoutKind::aaaa:
            for (size_t j = 1; j + 1 < L; j++) {
                reg.chain[j] = j - 1;
                reg.environment.emplace_back(j, (L - 2) + (j - 1));
            }
            break;
        case LayoutKind::reference_qubits: {
            for (size_t j = 0; j < L; j++) reg.chain[j] = j;
            auto [a, b] = *layout.ref_segment;
            for (size_t j = a; j < b; j++) reg.refs.push_back(L + (j - a));
            break;
        }
    }
    return reg;
}

size_t initial_qubits(const BoundaryLayout &layout) {
    switch (layout.kind) {
        case LayoutKind::fffa:
        case LayoutKind::pbc_product:
            return layout.L;
        case LayoutKind::fafa:
        case LayoutKind::pbc_bell:
            return 2 * layout.L;
        case LayoutKind::afaa:
            return layout.L - 2;
        case LayoutKind::aaaa:
            return 2 * (layout.L - 2);
        case LayoutKind::reference_qubits:
            return layout.L + (layout.ref_segment->second - layout.ref_segment->first);
    }
    return 0;
}

// Period start: the edge qubits of the previous period leave the chain and
// two fresh ones take their place. Returns the indices to allocate.
std::pair<size_t, size_t> inject(BoundaryRegistry &reg, size_t next_index) {
    const size_t L = reg.chain.size();
    if (reg.chain[0] != BoundaryRegistry::kEmpty) {
        reg.left.push_back(reg.chain[0]);
        reg.right.push_back(reg.chain[L - 1]);
    }
    reg.chain[0] = next_index;
    reg.chain[L - 1] = next_index + 1;
    return {next_index, next_index + 1};
}

// Registry shape at time t; indices are placeholders.
BoundaryRegistry registry_at(const BoundaryLayout &layout, int64_t t) {
    BoundaryRegistry reg = initial_registry(layout);
    size_t next = initial_qubits(layout);
    if (injects_qubits(layout.kind)) {
        for (int64_t s = 1; s <= t; s += 2) {
            inject(reg, next);
            next += 2;
        }
    }
    return reg;
}

std::vector<std::pair<size_t, size_t>> arc_runs(const BoundaryRegistry &reg, const Arc &arc) {
    auto pa = reg.position(arc.from);
    auto pb = reg.position(arc.to);
    if (!pa) throw ScheduleError("cut " + cut_name(arc.from) + " does not exist at this time");
    if (!pb) throw ScheduleError("cut " + cut_name(arc.to) + " does not exist at this time");
    const size_t n = reg.boundary_size();
    if (*pa <= *pb) return {{*pa, *pb}};
    return {{*pa, n}, {0, *pb}};
}

Complex cut_point(const Cut &c, double L, double Y, double y_over_t) {
    const double half = L / 2.0;
    const double k = static_cast<double>(c.index);
    switch (c.edge) {
        case Edge::top:
            return {-half + k, Y};
        case Edge::bottom:
            return {-half + k, 0.0};
        case Edge::left:
            return {-half, std::min(2.0 * k * y_over_t, Y)};
        case Edge::right:
            return {half, std::min(2.0 * k * y_over_t, Y)};
    }
    return {};
}

bool is_corner(const Cut &c, size_t L) {
    if (c.edge == Edge::left || c.edge == Edge::right) return c.index == 0;
    return c.index == 0 || c.index == static_cast<int64_t>(L);
}

double chord(double dx, double L) { return std::abs(std::sin(std::numbers::pi * dx / L)); }

Geometry resolve(Geometry g, LayoutKind kind) {
    if (g != Geometry::automatic) return g;
    return is_periodic(kind) ? Geometry::cylinder : Geometry::rectangle;
}

}  // namespace

std::string_view to_string(LayoutKind kind) {
    for (auto [k, name] : kLayoutNames) {
        if (k == kind) return name;
    }
    return "?";
}

LayoutKind parse_layout(std::string_view name) {
    for (auto [k, n] : kLayoutNames) {
        if (n == name) return k;
    }
    throw ConfigError("unknown layout '" + std::string(name) + "'");
}

bool is_periodic(LayoutKind kind) { return kind == LayoutKind::pbc_product || kind == LayoutKind::pbc_bell; }

bool has_environment(LayoutKind kind) {
    return kind == LayoutKind::fafa || kind == LayoutKind::aaaa || kind == LayoutKind::pbc_bell;
}

bool injects_qubits(LayoutKind kind) { return kind == LayoutKind::afaa || kind == LayoutKind::aaaa; }

BoundaryLayout make_layout(LayoutKind kind, size_t L, int64_t T, double p,
                           std::optional<std::pair<size_t, size_t>> ref_segment) {
    if (L < 2 || L % 2 != 0) throw GeometryError("chain length must be even and at least 2");
    if (injects_qubits(kind) && L < 4) throw GeometryError("injected layouts need L >= 4");
    if (T < 0) throw GeometryError("depth must be nonnegative");
    if (!(p >= 0.0 && p <= 1.0)) throw GeometryError("measurement probability outside [0, 1]");
    if (kind == LayoutKind::reference_qubits) {
        if (!ref_segment) throw GeometryError("reference layout needs a segment");
        auto [a, b] = *ref_segment;
        if (a >= b || b > L) throw GeometryError("reference segment must be a nonempty part of the chain");
    } else if (ref_segment) {
        throw GeometryError("reference segment given for a layout without reference qubits");
    }
    return BoundaryLayout{kind, L, T, p, ref_segment};
}

std::string cut_name(const Cut &c) {
    constexpr char tags[] = {'t', 'b', 'l', 'r'};
    return tags[static_cast<int>(c.edge)] + std::to_string(c.index);
}

std::string ProbeSpec::descriptor() const {
    std::string out;
    for (auto [o, tag] : kObservableTags) {
        if (o == kind) out = tag;
    }
    for (size_t i = 0; i < regions.size(); i++) {
        out += (i == 0) ? ":" : "|";
        out += cut_name(regions[i].from) + "-" + cut_name(regions[i].to);
    }
    return out;
}

ProbeSpec parse_probe(std::string_view text) {
    ProbeSpec spec;
    auto colon = text.find(':');
    std::string_view tag = text.substr(0, colon);
    bool found = false;
    for (auto [o, t] : kObservableTags) {
        if (t == tag) {
            spec.kind = o;
            found = true;
        }
    }
    if (!found) throw ScheduleError("unknown probe kind in '" + std::string(text) + "'");

    auto parse_cut = [&](std::string_view s) {
        if (s.size() < 2) throw ScheduleError("bad cut '" + std::string(s) + "'");
        Cut c;
        switch (s[0]) {
            case 't': c.edge = Edge::top; break;
            case 'b': c.edge = Edge::bottom; break;
            case 'l': c.edge = Edge::left; break;
            case 'r': c.edge = Edge::right; break;
            default: throw ScheduleError("bad cut '" + std::string(s) + "'");
        }
        auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), c.index);
        if (ec != std::errc() || ptr != s.data() + s.size() || c.index < 0) {
            throw ScheduleError("bad cut '" + std::string(s) + "'");
        }
        return c;
    };

    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (true) {
            auto bar = rest.find('|');
            std::string_view part = rest.substr(0, bar);
            auto dash = part.find('-');
            if (dash == std::string_view::npos) throw ScheduleError("region needs two cuts: '" + std::string(part) + "'");
            spec.regions.push_back({parse_cut(part.substr(0, dash)), parse_cut(part.substr(dash + 1))});
            if (bar == std::string_view::npos) break;
            rest = rest.substr(bar + 1);
        }
    }
    if (spec.regions.size() != expected_regions(spec.kind)) {
        throw ScheduleError("wrong number of regions in '" + std::string(text) + "'");
    }
    return spec;
}

std::string_view to_string(Geometry g) {
    switch (g) {
        case Geometry::automatic: return "automatic";
        case Geometry::rectangle: return "rectangle";
        case Geometry::strip: return "strip";
        case Geometry::cylinder: return "cylinder";
    }
    return "?";
}

Geometry parse_geometry(std::string_view name) {
    for (Geometry g : {Geometry::automatic, Geometry::rectangle, Geometry::strip, Geometry::cylinder}) {
        if (to_string(g) == name) return g;
    }
    throw ConfigError("unknown geometry '" + std::string(name) + "'");
}

ProbeSchedule ProbeSchedule::grid(const std::vector<int64_t> &times, const std::vector<ProbeSpec> &probes,
                                  Geometry geometry) {
    ProbeSchedule s;
    s.geometry = geometry;
    for (int64_t t : times) {
        for (const auto &p : probes) s.probes.push_back({t, p});
    }
    return s;
}

std::vector<size_t> BoundaryRegistry::ordering() const {
    std::vector<size_t> out;
    out.reserve(boundary_size() + refs.size());
    out.insert(out.end(), left.begin(), left.end());
    for (size_t q : chain) {
        if (q != kEmpty) out.push_back(q);
    }
    out.insert(out.end(), right.rbegin(), right.rend());
    for (auto it = environment.rbegin(); it != environment.rend(); ++it) out.push_back(it->second);
    out.insert(out.end(), refs.begin(), refs.end());
    return out;
}

size_t BoundaryRegistry::boundary_size() const {
    size_t live = 0;
    for (size_t q : chain) live += (q != kEmpty);
    return left.size() + live + right.size() + environment.size();
}

std::optional<size_t> BoundaryRegistry::position(const Cut &c) const {
    const int64_t L = static_cast<int64_t>(chain.size());
    const size_t E = left.size();
    size_t live = 0;
    for (size_t q : chain) live += (q != kEmpty);
    if (c.index < 0) return std::nullopt;
    switch (c.edge) {
        case Edge::left:
            if (static_cast<size_t>(c.index) > E) return std::nullopt;
            return static_cast<size_t>(c.index);
        case Edge::right:
            if (static_cast<size_t>(c.index) > E) return std::nullopt;
            return E + live + (E - static_cast<size_t>(c.index));
        case Edge::top: {
            if (c.index > L) return std::nullopt;
            size_t before = 0;
            for (int64_t j = 0; j < c.index; j++) before += (chain[j] != kEmpty);
            return E + before;
        }
        case Edge::bottom: {
            if (environment.empty() || c.index > L) return std::nullopt;
            size_t at_or_after = 0;
            for (auto [col, q] : environment) at_or_after += (static_cast<int64_t>(col) >= c.index);
            return 2 * E + live + at_or_after;
        }
    }
    return std::nullopt;
}

CircuitRun::CircuitRun(const BoundaryLayout &layout, uint64_t seed)
    : layout_(layout),
      wrap_(is_periodic(layout.kind) ? Wrap::periodic : Wrap::open),
      rng_(seed),
      reg_(initial_registry(layout)) {
    const size_t n0 = initial_qubits(layout);
    const size_t extra = injects_qubits(layout.kind) ? static_cast<size_t>(layout.T + 1) : 0;
    switch (layout.kind) {
        case LayoutKind::fafa:
        case LayoutKind::pbc_bell:
            state_ = StabilizerTableau::bell_pairs(layout.L);
            break;
        case LayoutKind::aaaa:
            state_ = StabilizerTableau::bell_pairs(layout.L - 2, n0 + extra);
            break;
        case LayoutKind::reference_qubits: {
            state_ = StabilizerTableau::product_state(layout.L, n0);
            const auto h = CliffordGate::H();
            const auto cnot = CliffordGate::CNOT();
            auto [a, b] = *layout.ref_segment;
            for (size_t j = a; j < b; j++) {
                size_t r = state_.append_fresh_qubit();
                state_.apply(h, reg_.chain[j]);
                state_.apply(cnot, reg_.chain[j], r);
            }
            break;
        }
        default:
            state_ = StabilizerTableau::product_state(n0, n0 + extra);
            break;
    }
}

void CircuitRun::advance() {
    const int64_t t = ++t_;
    if (injects_qubits(layout_.kind) && t % 2 == 1) {
        size_t a = state_.append_fresh_qubit();
        state_.append_fresh_qubit();
        inject(reg_, a);
    }
    for (auto [a, b] : brickwork_pairs(layout_.L, t, wrap_)) {
        auto gate = sample_two_qubit_compiled(rng_);
        state_.apply_compiled2(gate, reg_.chain[a], reg_.chain[b]);
    }
    measure_sweep();
}

void CircuitRun::measure_sweep() {
    if (layout_.p <= 0.0) return;
    for (size_t q : reg_.chain) {
        if (q != BoundaryRegistry::kEmpty && uniform01(rng_) < layout_.p) state_.measure(q, Basis::Z, rng_);
    }
}

std::vector<int64_t> CircuitRun::evaluate(const std::vector<ProbeSpec> &probes) const {
    const std::vector<size_t> order = reg_.ordering();
    const size_t N = order.size();
    const size_t Nb = reg_.boundary_size();
    std::optional<ClippedTableau> clipped;

    auto mask_bits = [&](const std::vector<uint8_t> &mask) -> int64_t {
        size_t ones = 0, runs = 0, first = 0, zero_runs = 0, zfirst = 0;
        for (size_t i = 0; i < N; i++) {
            ones += mask[i];
            if (mask[i] && (i == 0 || !mask[i - 1])) {
                if (runs++ == 0) first = i;
            }
            if (!mask[i] && (i == 0 || mask[i - 1])) {
                if (zero_runs++ == 0) zfirst = i;
            }
        }
        if (ones == 0 || ones == N) return 0;
        if (runs == 1 || zero_runs == 1) {
            if (!clipped) clipped = clip_gauge(state_, order);
            if (runs == 1) return clipped->interval(first, first + ones).bits;
            return clipped->interval(zfirst, zfirst + (N - ones)).bits;
        }
        std::vector<size_t> qubits;
        for (size_t i = 0; i < N; i++) {
            if (mask[i]) qubits.push_back(order[i]);
        }
        return entropy_subset(state_, qubits).bits;
    };

    auto region_mask = [&](const Arc &arc, std::vector<uint8_t> &mask) {
        for (auto [a, b] : arc_runs(reg_, arc)) {
            for (size_t i = a; i < b; i++) {
                if (mask[i]) throw ScheduleError("regions overlap");
                mask[i] = 1;
            }
        }
    };

    std::vector<int64_t> out;
    out.reserve(probes.size());
    for (const auto &probe : probes) {
        if (probe.regions.size() != expected_regions(probe.kind)) {
            throw ScheduleError("wrong number of regions in " + probe.descriptor());
        }
        if (probe.kind == Observable::refq_entropy) {
            if (reg_.refs.empty()) throw ScheduleError("layout has no reference qubits");
            std::vector<uint8_t> mask(N, 0);
            for (size_t i = Nb; i < N; i++) mask[i] = 1;
            out.push_back(mask_bits(mask));
        } else if (probe.kind == Observable::mutual_information) {
            std::vector<uint8_t> ma(N, 0), mb(N, 0), both(N, 0);
            region_mask(probe.regions[0], ma);
            region_mask(probe.regions[1], mb);
            region_mask(probe.regions[0], both);
            region_mask(probe.regions[1], both);
            out.push_back(mask_bits(ma) + mask_bits(mb) - mask_bits(both));
        } else {
            std::vector<uint8_t> mask(N, 0);
            region_mask(probe.regions[0], mask);
            out.push_back(mask_bits(mask));
        }
    }
    return out;
}

void validate_schedule(const BoundaryLayout &layout, const ProbeSchedule &schedule) {
    std::map<int64_t, BoundaryRegistry> shapes;
    for (const auto &sp : schedule.probes) {
        if (sp.t < 0 || sp.t > layout.T) {
            throw ScheduleError("probe time " + std::to_string(sp.t) + " outside [0, " + std::to_string(layout.T) + "]");
        }
        const auto &probe = sp.probe;
        if (probe.regions.size() != expected_regions(probe.kind)) {
            throw ScheduleError("wrong number of regions in " + probe.descriptor());
        }
        if (probe.kind == Observable::refq_entropy && layout.kind != LayoutKind::reference_qubits) {
            throw ScheduleError("layout has no reference qubits");
        }
        auto it = shapes.find(sp.t);
        if (it == shapes.end()) it = shapes.emplace(sp.t, registry_at(layout, sp.t)).first;
        std::vector<uint8_t> mask(it->second.boundary_size(), 0);
        for (const auto &arc : probe.regions) {
            for (auto [a, b] : arc_runs(it->second, arc)) {
                for (size_t i = a; i < b; i++) {
                    if (mask[i]) throw ScheduleError("regions overlap in " + probe.descriptor());
                    mask[i] = 1;
                }
            }
        }
    }
}

std::vector<int64_t> run_realization(const BoundaryLayout &layout, const ProbeSchedule &schedule, uint64_t seed) {
    std::map<int64_t, std::vector<size_t>> by_time;
    for (size_t i = 0; i < schedule.probes.size(); i++) by_time[schedule.probes[i].t].push_back(i);
    if (!by_time.empty() && (by_time.begin()->first < 0 || by_time.rbegin()->first > layout.T)) {
        throw ScheduleError("probe time outside [0, T]");
    }

    CircuitRun run(layout, seed);
    std::vector<int64_t> out(schedule.probes.size(), 0);
    for (const auto &[t, idx] : by_time) {
        while (run.time() < t) run.advance();
        std::vector<ProbeSpec> probes;
        for (size_t i : idx) probes.push_back(schedule.probes[i].probe);
        auto bits = run.evaluate(probes);
        for (size_t k = 0; k < idx.size(); k++) out[idx[k]] = bits[k];
    }
    return out;
}

CollapseCoordinates collapse_coordinates(LayoutKind kind, Geometry geometry, size_t L, double y_over_t, int64_t t,
                                         const ProbeSpec &probe) {
    CollapseCoordinates out{kNaN, kNaN};
    if (probe.kind == Observable::refq_entropy) return out;
    const double Lf = static_cast<double>(L);
    const double Y = y_over_t * static_cast<double>(t);
    const auto &R = probe.regions;
    try {
        switch (resolve(geometry, kind)) {
            case Geometry::cylinder: {
                for (const auto &arc : R) {
                    if (arc.from.edge != Edge::top || arc.to.edge != Edge::top) return out;
                }
                auto x = [&](const Cut &c) { return static_cast<double>(c.index); };
                if (probe.kind == Observable::mutual_information) {
                    double a = x(R[0].from), b = x(R[0].to), c = x(R[1].from), d = x(R[1].to);
                    out.eta = chord(b - a, Lf) * chord(d - c, Lf) / (chord(c - a, Lf) * chord(d - b, Lf));
                } else if (probe.kind != Observable::bell_entropy) {
                    double dx = x(R[0].to) - x(R[0].from);
                    if (chord(dx, Lf) > 0.0) out.xi = pbc_xi_two_point(dx, Lf);
                }
                return out;
            }
            case Geometry::strip: {
                if (t <= 0) return out;
                auto img = [&](const Cut &c) {
                    auto v = strip_map(cut_point(c, Lf, Y, y_over_t), Y);
                    return std::pair{v.w.real(), std::abs(v.dw_dz)};
                };
                if (probe.kind == Observable::mutual_information) {
                    out.eta = cross_ratio_real(img(R[0].from).first, img(R[0].to).first, img(R[1].from).first,
                                               img(R[1].to).first);
                } else if (probe.kind == Observable::segment_entropy) {
                    auto [w5, d5] = img(R[0].from);
                    auto [w6, d6] = img(R[0].to);
                    out.xi = xi_two_point_real(w5, d5, w6, d6);
                }
                return out;
            }
            default:
                break;
        }
        if (t <= 0) return out;
        const ConformalFrame f = make_frame(Lf, Y);
        auto z = [&](const Cut &c) { return cut_point(c, Lf, Y, y_over_t); };
        switch (probe.kind) {
            case Observable::bipartite_entropy: {
                const Cut &free = is_corner(R[0].to, L) ? R[0].from : R[0].to;
                auto conv = injects_qubits(kind) ? CornerConvention::afaa : CornerConvention::fffa;
                out.xi = collapse_xi(conv, f, z(free));
                break;
            }
            case Observable::segment_entropy:
                out.xi = xi_two_point(f, z(R[0].from), z(R[0].to));
                break;
            case Observable::mutual_information:
                out.eta = cross_ratio(f, z(R[0].from), z(R[0].to), z(R[1].from), z(R[1].to));
                break;
            case Observable::bell_entropy: {
                const double half = Lf / 2.0;
                out.eta = cross_ratio(f, {-half, Y}, {-half, 0.0}, {half, 0.0}, {half, Y});
                break;
            }
            default:
                break;
        }
    } catch (const DegenerateProbeError &) {
        return {kNaN, kNaN};
    } catch (const GeometryError &) {
        return {kNaN, kNaN};
    }
    return out;
}

LayoutKind series_layout(const std::string &kind) {
    if (kind == "percolation_top_bipartition") return LayoutKind::fffa;
    if (kind == "percolation_top_bipartition_pbc") return LayoutKind::pbc_product;
    if (kind == "percolation_top_vs_bottom") return LayoutKind::fafa;
    if (kind == "percolation_top_vs_bottom_pbc") return LayoutKind::pbc_bell;
    return parse_layout(kind);
}

int64_t probe_separation(LayoutKind kind, size_t L, int64_t t, const ProbeSpec &probe) {
    if (probe.regions.size() != 1) return -1;
    const int64_t Li = static_cast<int64_t>(L);
    const int64_t E = ejected_per_side(kind, t);
    auto corner_distance = [&](const Cut &c) -> int64_t {
        switch (c.edge) {
            case Edge::top:
            case Edge::bottom:
                return std::min(c.index, Li - c.index);
            default:
                return std::min(c.index, E - c.index);
        }
    };
    const Arc &a = probe.regions[0];
    if (probe.kind == Observable::bipartite_entropy) {
        const Cut &free = is_corner(a.to, L) ? a.from : a.to;
        return corner_distance(free);
    }
    if (probe.kind == Observable::segment_entropy && a.from.edge == a.to.edge) {
        int64_t d = std::abs(a.to.index - a.from.index);
        if (is_periodic(kind)) d = std::min(d, Li - d);
        return d;
    }
    return -1;
}

ObservableSeries run_ensemble(const BoundaryLayout &layout, const ProbeSchedule &schedule,
                              const EnsembleOptions &opts) {
    if (opts.n == 0) throw InvalidSizeError("ensemble needs at least one realization");
    validate_schedule(layout, schedule);

    ObservableSeries out;
    auto &md = out.metadata;
    md.kind = std::string(to_string(layout.kind));
    md.geometry = std::string(to_string(resolve(schedule.geometry, layout.kind)));
    md.L = static_cast<int64_t>(layout.L);
    md.T = layout.T;
    md.p = layout.p;
    md.y_over_t = opts.y_over_t;
    md.master_seed = opts.master_seed;
    md.n = static_cast<int64_t>(opts.n);

    auto sums = run_realizations(opts.n, opts.workers, schedule.probes.size(), [&](uint64_t i) {
        return run_realization(layout, schedule, split_seed(opts.master_seed, i));
    });

    for (size_t k = 0; k < schedule.probes.size(); k++) {
        const auto &sp = schedule.probes[k];
        SeriesRecord r;
        r.t = sp.t;
        r.tau = opts.y_over_t * static_cast<double>(sp.t) / static_cast<double>(layout.L);
        r.segment = sp.probe.descriptor();
        auto cc = collapse_coordinates(layout.kind, schedule.geometry, layout.L, opts.y_over_t, sp.t, sp.probe);
        r.xi = cc.xi;
        r.eta = cc.eta;
        r.count = sums.count;
        r.sum_bits = sums.sum[k];
        r.sum_sq_bits = sums.sum_sq[k];
        finalize_record(r);
        out.records.push_back(std::move(r));
    }
    return out;
}

ObservableSeries run_reference_qubit_experiment(size_t L, int64_t T, double p, std::pair<size_t, size_t> segment,
                                                const EnsembleOptions &opts) {
    auto layout = make_layout(LayoutKind::reference_qubits, L, T, p, segment);
    std::vector<int64_t> times;
    for (int64_t t = 0; t <= T; t++) times.push_back(t);
    ProbeSpec refq;
    refq.kind = Observable::refq_entropy;
    return run_ensemble(layout, ProbeSchedule::grid(times, {refq}), opts);
}

ObservableSeries run_percolation_ensemble(size_t L, const std::vector<int64_t> &depths, double p, Coloring coloring,
                                          Wrap wrap, const EnsembleOptions &opts) {
    if (opts.n == 0) throw InvalidSizeError("ensemble needs at least one realization");
    if (depths.empty()) throw InvalidSizeError("no depths given");
    const int64_t max_depth = *std::max_element(depths.begin(), depths.end());
    if (*std::min_element(depths.begin(), depths.end()) < 0) throw GeometryError("negative depth");
    if (L < 2 || L % 2 != 0) throw GeometryError("brickwork lattice needs an even, nonzero width");

    const bool bip = coloring == Coloring::top_bipartition;
    const bool open = wrap == Wrap::open;
    const LayoutKind analog = bip ? (open ? LayoutKind::fffa : LayoutKind::pbc_product)
                                  : (open ? LayoutKind::fafa : LayoutKind::pbc_bell);
    const int64_t Li = static_cast<int64_t>(L);
    std::vector<ScheduledProbe> probes;
    for (int64_t d : depths) {
        if (bip) {
            for (int64_t k = 1; k < Li; k++) {
                probes.push_back({d, ProbeSpec{Observable::bipartite_entropy, {Arc{{Edge::top, 0}, {Edge::top, k}}}}});
            }
        } else {
            probes.push_back({d, ProbeSpec{Observable::bell_entropy, {Arc{{Edge::top, 0}, {Edge::top, Li}}}}});
        }
    }

    auto sums = run_realizations(opts.n, opts.workers, probes.size(), [&](uint64_t i) {
        auto inst = build_instance(L, max_depth, p, coloring, wrap, split_seed(opts.master_seed, i));
        std::vector<int64_t> bits;
        bits.reserve(probes.size());
        for (int64_t d : depths) {
            auto sub = inst.truncated(d);
            if (bip) {
                if (open) {
                    auto prof = top_bipartition_profile(sub);
                    bits.insert(bits.end(), prof.begin() + 1, prof.end() - 1);
                } else {
                    for (size_t k = 1; k < L; k++) bits.push_back(min_cut(sub, k).cost);
                }
            } else {
                bits.push_back(open && d > 0 ? top_vs_bottom_dual(sub) : min_cut(sub).cost);
            }
        }
        return bits;
    });

    ObservableSeries out;
    auto &md = out.metadata;
    md.kind = std::string("percolation_") + (bip ? "top_bipartition" : "top_vs_bottom") + (open ? "" : "_pbc");
    md.geometry = std::string(to_string(open ? Geometry::rectangle : Geometry::cylinder));
    md.L = Li;
    md.T = max_depth;
    md.p = p;
    md.y_over_t = 1.0;
    md.master_seed = opts.master_seed;
    md.n = static_cast<int64_t>(opts.n);
    for (size_t k = 0; k < probes.size(); k++) {
        SeriesRecord r;
        r.t = probes[k].t;
        r.tau = static_cast<double>(r.t) / static_cast<double>(L);
        r.segment = probes[k].probe.descriptor();
        auto cc = collapse_coordinates(analog, Geometry::automatic, L, 1.0, r.t, probes[k].probe);
        r.xi = cc.xi;
        r.eta = cc.eta;
        r.count = sums.count;
        r.sum_bits = sums.sum[k];
        r.sum_sq_bits = sums.sum_sq[k];
        finalize_record(r);
        out.records.push_back(std::move(r));
    }
    return out;
}

}  // namespace hcft
