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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <set>

#include "hcft/conformal.hpp"
#include "hcft/entropy.hpp"
#include "hcft/errors.hpp"
#include "hcft/harness.hpp"
#include "hcft/rng.hpp"

using namespace hcft;

namespace {

ProbeSpec bip(int64_t k) { return parse_probe("bip:t0-t" + std::to_string(k)); }

std::vector<int64_t> range(int64_t a, int64_t b, int64_t step = 1) {
    std::vector<int64_t> v;
    for (int64_t x = a; x <= b; x += step) v.push_back(x);
    return v;
}

constexpr LayoutKind kAllKinds[] = {LayoutKind::fffa,        LayoutKind::afaa,     LayoutKind::fafa,
                                    LayoutKind::aaaa,        LayoutKind::pbc_product, LayoutKind::pbc_bell,
                                    LayoutKind::reference_qubits};

BoundaryLayout layout_for(LayoutKind kind, size_t L, int64_t T, double p) {
    if (kind == LayoutKind::reference_qubits) return make_layout(kind, L, T, p, std::pair<size_t, size_t>{L / 4, L / 2});
    return make_layout(kind, L, T, p);
}

// A few probes valid for any layout at t >= 1.
std::vector<ProbeSpec> generic_probes(LayoutKind kind, size_t L) {
    std::vector<ProbeSpec> out = {bip(L / 2), parse_probe("seg:t1-t5"),
                                  parse_probe("mi:t0-t2|t" + std::to_string(L - 3) + "-t" + std::to_string(L)),
                                  parse_probe("bell:t0-t" + std::to_string(L))};
    if (kind == LayoutKind::reference_qubits) out.push_back(parse_probe("refq"));
    return out;
}

}  // namespace

TEST(Harness, probe_descriptors_round_trip) {
    for (const char *text : {"bip:t0-t5", "seg:l2-r0", "mi:t0-t3|t9-t16", "bell:t0-t64", "refq", "seg:b12-b3"}) {
        EXPECT_EQ(parse_probe(text).descriptor(), text);
    }
    for (const char *bad : {"foo:t0-t1", "bip:t0", "bip:x0-t1", "mi:t0-t1", "bip:t0-t1|t2-t3", "refq:t0-t1",
                            "seg:t-1-t3", "bip:t0-t1a"}) {
        EXPECT_THROW(parse_probe(bad), ScheduleError) << bad;
    }
}

TEST(Harness, layout_validation) {
    EXPECT_THROW(make_layout(LayoutKind::fffa, 7, 4, 0.1), GeometryError);
    EXPECT_THROW(make_layout(LayoutKind::afaa, 2, 4, 0.1), GeometryError);
    EXPECT_THROW(make_layout(LayoutKind::fffa, 8, -1, 0.1), GeometryError);
    EXPECT_THROW(make_layout(LayoutKind::fffa, 8, 4, 1.5), GeometryError);
    EXPECT_THROW(make_layout(LayoutKind::reference_qubits, 8, 4, 0.1), GeometryError);
    EXPECT_THROW(make_layout(LayoutKind::reference_qubits, 8, 4, 0.1, std::pair<size_t, size_t>{3, 3}), GeometryError);
    EXPECT_THROW(make_layout(LayoutKind::fffa, 8, 4, 0.1, std::pair<size_t, size_t>{0, 2}), GeometryError);
    EXPECT_EQ(parse_layout("pbc_bell"), LayoutKind::pbc_bell);
    EXPECT_THROW(parse_layout("ffff"), ConfigError);
}

TEST(Harness, full_measurement_leaves_product_state) {
    auto layout = make_layout(LayoutKind::fffa, 16, 12, 1.0);
    std::vector<ProbeSpec> probes;
    for (int64_t k = 0; k <= 16; k++) probes.push_back(bip(k));
    probes.push_back(parse_probe("mi:t0-t4|t9-t16"));
    auto s = ProbeSchedule::grid(range(1, 12), probes);
    for (uint64_t seed = 0; seed < 5; seed++) {
        for (int64_t b : run_realization(layout, s, seed)) EXPECT_EQ(b, 0);
    }
}

TEST(Harness, unitaries_alone_never_purify) {
    for (auto kind : {LayoutKind::fafa, LayoutKind::pbc_bell}) {
        auto layout = make_layout(kind, 12, 20, 0.0);
        auto s = ProbeSchedule::grid(range(0, 20), {parse_probe("bell:t0-t12")});
        auto series = run_ensemble(layout, s, {.n = 3, .master_seed = 4, .workers = 1});
        for (const auto &r : series.records) {
            EXPECT_EQ(r.sum_bits, 3 * 12);
            EXPECT_DOUBLE_EQ(r.mean_nats, 12 * kLn2);
            EXPECT_EQ(r.std_error, 0.0);
        }
    }
}

TEST(Harness, full_chain_of_pure_layout_is_pure) {
    auto layout = make_layout(LayoutKind::fffa, 20, 30, 0.16);
    auto s = ProbeSchedule::grid(range(0, 30), {bip(20), bip(0)});
    for (uint64_t seed = 0; seed < 10; seed++) {
        for (int64_t b : run_realization(layout, s, seed)) EXPECT_EQ(b, 0);
    }
}

TEST(Harness, reference_qubits) {
    std::pair<size_t, size_t> A{6, 10};
    auto unitary = run_reference_qubit_experiment(16, 24, 0.0, A, {.n = 4, .master_seed = 1, .workers = 1});
    ASSERT_EQ(unitary.records.size(), 25u);
    for (const auto &r : unitary.records) EXPECT_EQ(r.sum_bits, 4 * 4);
    auto shallow = run_reference_qubit_experiment(16, 0, 0.3, A, {.n = 2, .master_seed = 1, .workers = 1});
    EXPECT_EQ(shallow.records.at(0).sum_bits, 2 * 4);
    EXPECT_EQ(shallow.records.at(0).segment, "refq");
    // measurements purify eventually
    auto purified = run_reference_qubit_experiment(16, 200, 0.5, A, {.n = 4, .master_seed = 2, .workers = 1});
    EXPECT_EQ(purified.records.back().sum_bits, 0);
}

TEST(Harness, registry_covers_every_qubit_once) {
    for (auto kind : kAllKinds) {
        auto layout = layout_for(kind, 12, 9, 0.2);
        CircuitRun run(layout, 7);
        for (int64_t t = 0; t <= 9; t++) {
            if (t > 0) run.advance();
            auto order = run.registry().ordering();
            std::set<size_t> seen(order.begin(), order.end());
            EXPECT_EQ(seen.size(), order.size());
            size_t expect = run.state().num_qubits();
            EXPECT_EQ(order.size(), expect) << to_string(kind) << " t=" << t;
            EXPECT_EQ(*seen.rbegin(), expect - 1);
        }
    }
}

TEST(Harness, injected_layouts_grow_by_two_per_period) {
    for (int64_t T : {0, 2, 8, 20}) {
        auto afaa = make_layout(LayoutKind::afaa, 10, T, 0.16);
        CircuitRun a(afaa, 3);
        for (int64_t t = 0; t < T; t++) a.advance();
        EXPECT_EQ(a.state().num_qubits(), static_cast<size_t>(10 - 2 + T));
        EXPECT_EQ(a.registry().left.size(), static_cast<size_t>(std::max<int64_t>(0, T / 2 - 1)));

        auto aaaa = make_layout(LayoutKind::aaaa, 10, T, 0.16);
        CircuitRun b(aaaa, 3);
        for (int64_t t = 0; t < T; t++) b.advance();
        EXPECT_EQ(b.state().num_qubits(), static_cast<size_t>(2 * (10 - 2) + T));
    }
}

TEST(Harness, environment_is_never_touched) {
    // With p = 0 each environment qubit stays maximally entangled with the
    // chain, so any environment region has entropy equal to its size.
    auto layout = make_layout(LayoutKind::aaaa, 12, 16, 0.0);
    CircuitRun run(layout, 5);
    for (int t = 0; t < 16; t++) run.advance();
    auto bits = run.evaluate({parse_probe("seg:b9-b2"), parse_probe("seg:b11-b1")});
    EXPECT_EQ(bits[0], 7);
    EXPECT_EQ(bits[1], 10);
}

TEST(Harness, region_entropy_matches_rank_route) {
    Rng rng(31);
    for (auto kind : kAllKinds) {
        auto layout = layout_for(kind, 14, 13, 0.16);
        CircuitRun run(layout, rng());
        for (int t = 0; t < 13; t++) run.advance();
        const auto &reg = run.registry();
        const auto order = reg.ordering();
        const size_t Nb = reg.boundary_size();
        const int64_t E = static_cast<int64_t>(reg.left.size());
        std::vector<Cut> cuts;
        for (int64_t k = 0; k <= 14; k++) cuts.push_back({Edge::top, k});
        for (int64_t m = 0; m <= E; m++) cuts.push_back({Edge::left, m}), cuts.push_back({Edge::right, m});
        if (has_environment(kind)) {
            for (int64_t k = 1; k <= 13; k++) cuts.push_back({Edge::bottom, k});
        }
        for (int trial = 0; trial < 60; trial++) {
            Cut a = cuts[uniform_below(rng, cuts.size())], b = cuts[uniform_below(rng, cuts.size())];
            size_t pa = *reg.position(a), pb = *reg.position(b);
            std::vector<size_t> qubits;
            if (pa <= pb) {
                for (size_t i = pa; i < pb; i++) qubits.push_back(order[i]);
            } else {
                for (size_t i = pa; i < Nb; i++) qubits.push_back(order[i]);
                for (size_t i = 0; i < pb; i++) qubits.push_back(order[i]);
            }
            ProbeSpec probe{Observable::segment_entropy, {Arc{a, b}}};
            EXPECT_EQ(run.evaluate({probe})[0], entropy_subset(run.state(), qubits).bits)
                << to_string(kind) << " " << probe.descriptor();
        }
        // mutual information of two disjoint top regions, through the rank route
        ProbeSpec mi = parse_probe("mi:t1-t4|t8-t12");
        std::vector<size_t> A, B, AB;
        for (int64_t j = 1; j < 4; j++) A.push_back(reg.chain[j]);
        for (int64_t j = 8; j < 12; j++) B.push_back(reg.chain[j]);
        EXPECT_EQ(run.evaluate({mi})[0], mutual_information_bits(run.state(), A, B).bits) << to_string(kind);
    }
}

TEST(Harness, complement_symmetry_in_pure_layouts) {
    Rng rng(8);
    for (auto kind : {LayoutKind::fffa, LayoutKind::afaa, LayoutKind::pbc_product}) {
        auto layout = make_layout(kind, 16, 24, 0.16);
        CircuitRun run(layout, rng());
        for (int t = 0; t < 24; t++) {
            run.advance();
            const int64_t E = static_cast<int64_t>(run.registry().left.size());
            for (int64_t k = 0; k <= 16; k++) {
                std::string a = injects_qubits(kind) ? "l0" : "t0";
                std::string b = injects_qubits(kind) ? "r0" : "t16";
                auto bits = run.evaluate({parse_probe("seg:" + a + "-t" + std::to_string(k)),
                                          parse_probe("seg:t" + std::to_string(k) + "-" + b)});
                EXPECT_EQ(bits[0], bits[1]);
            }
            for (int64_t m = 0; m <= E; m++) {
                auto bits = run.evaluate({parse_probe("seg:l0-l" + std::to_string(m)),
                                          parse_probe("seg:l" + std::to_string(m) + "-l0")});
                EXPECT_EQ(bits[0], bits[1]);
            }
        }
    }
}

TEST(Harness, fafa_system_and_environment_mirror) {
    // Without measurements the circuit at odd depth reads the same in both
    // time directions, so mirror segments of system and environment agree
    // in ensemble mean.
    auto layout = make_layout(LayoutKind::fafa, 16, 25, 0.0);
    std::vector<ProbeSpec> probes = {parse_probe("seg:t2-t9"), parse_probe("seg:b9-b2"), parse_probe("seg:t0-t5"),
                                     parse_probe("seg:b5-b0")};
    auto s = ProbeSchedule::grid({1, 3, 5, 25}, probes);
    auto series = run_ensemble(layout, s, {.n = 1500, .master_seed = 17, .workers = 1});
    for (size_t k = 0; k < series.records.size(); k += 2) {
        const auto &a = series.records[k], &b = series.records[k + 1];
        double se = std::hypot(a.std_error, b.std_error);
        EXPECT_LE(std::abs(a.mean_nats - b.mean_nats), 3 * se + 1e-12) << a.segment << " t=" << a.t;
    }
}

TEST(Harness, schedule_errors) {
    auto afaa = make_layout(LayoutKind::afaa, 12, 10, 0.2);
    // at t = 4 one qubit per side has been ejected
    EXPECT_NO_THROW(validate_schedule(afaa, ProbeSchedule::grid({4}, {parse_probe("bip:l0-l1")})));
    EXPECT_THROW(validate_schedule(afaa, ProbeSchedule::grid({4}, {parse_probe("bip:l0-l2")})), ScheduleError);
    EXPECT_THROW(validate_schedule(afaa, ProbeSchedule::grid({2}, {parse_probe("bip:r1-t3")})), ScheduleError);
    EXPECT_THROW(run_realization(afaa, ProbeSchedule::grid({2}, {parse_probe("bip:l0-l1")}), 1), ScheduleError);
    EXPECT_THROW(validate_schedule(afaa, ProbeSchedule::grid({11}, {bip(3)})), ScheduleError);
    EXPECT_THROW(validate_schedule(afaa, ProbeSchedule::grid({4}, {parse_probe("seg:b0-b3")})), ScheduleError);
    EXPECT_THROW(validate_schedule(afaa, ProbeSchedule::grid({4}, {parse_probe("refq")})), ScheduleError);
    EXPECT_THROW(validate_schedule(afaa, ProbeSchedule::grid({4}, {parse_probe("mi:t0-t5|t3-t8")})), ScheduleError);
    auto fffa = make_layout(LayoutKind::fffa, 12, 10, 0.2);
    EXPECT_THROW(run_ensemble(fffa, ProbeSchedule::grid({4}, {bip(3)}), {.n = 0}), InvalidSizeError);
}

TEST(Harness, single_realization_ensemble) {
    auto layout = make_layout(LayoutKind::fffa, 16, 10, 0.16);
    auto s = ProbeSchedule::grid({5, 10}, {bip(8), bip(3)});
    auto series = run_ensemble(layout, s, {.n = 1, .master_seed = 99, .workers = 1});
    auto bits = run_realization(layout, s, split_seed(99, 0));
    for (size_t k = 0; k < bits.size(); k++) {
        EXPECT_EQ(series.records[k].count, 1);
        EXPECT_EQ(series.records[k].std_error, 0.0);
        EXPECT_DOUBLE_EQ(series.records[k].mean_nats, bits[k] * kLn2);
    }
}

TEST(Harness, worker_count_does_not_change_results) {
    for (auto kind : kAllKinds) {
        auto layout = layout_for(kind, 12, 8, 0.16);
        auto s = ProbeSchedule::grid({1, 4, 8}, generic_probes(kind, 12));
        auto one = run_ensemble(layout, s, {.n = 24, .master_seed = 5, .workers = 1});
        auto many = run_ensemble(layout, s, {.n = 24, .master_seed = 5, .workers = 8});
        ASSERT_EQ(one.records.size(), many.records.size());
        for (size_t k = 0; k < one.records.size(); k++) {
            EXPECT_EQ(one.records[k].sum_bits, many.records[k].sum_bits);
            EXPECT_EQ(one.records[k].sum_sq_bits, many.records[k].sum_sq_bits);
            EXPECT_EQ(std::memcmp(&one.records[k].mean_nats, &many.records[k].mean_nats, sizeof(double)), 0);
        }
    }
}

TEST(Harness, collapse_coordinates) {
    const double yt = 0.61;
    auto f = make_frame(32.0, yt * 20);
    auto c = collapse_coordinates(LayoutKind::fffa, Geometry::automatic, 32, yt, 20, bip(5));
    EXPECT_DOUBLE_EQ(c.xi, collapse_xi(CornerConvention::fffa, f, {-16.0 + 5, yt * 20}));
    EXPECT_TRUE(std::isnan(c.eta));
    auto right = collapse_coordinates(LayoutKind::fffa, Geometry::automatic, 32, yt, 20, parse_probe("bip:t27-t32"));
    EXPECT_NEAR(right.xi, c.xi, 1e-12 * c.xi);

    auto side = collapse_coordinates(LayoutKind::afaa, Geometry::automatic, 32, yt, 20, parse_probe("bip:l0-l3"));
    EXPECT_DOUBLE_EQ(side.xi, collapse_xi(CornerConvention::afaa, f, {-16.0, yt * 6}));

    auto mi = collapse_coordinates(LayoutKind::fffa, Geometry::automatic, 32, yt, 20, parse_probe("mi:t0-t5|t20-t32"));
    EXPECT_GT(mi.eta, 0.0);
    EXPECT_LT(mi.eta, 1.0);

    auto pbc = collapse_coordinates(LayoutKind::pbc_product, Geometry::automatic, 32, yt, 20, bip(8));
    EXPECT_DOUBLE_EQ(pbc.xi, pbc_xi_two_point(8.0, 32.0));
    EXPECT_TRUE(std::isnan(collapse_coordinates(LayoutKind::fffa, Geometry::automatic, 32, yt, 0, bip(8)).xi));
    EXPECT_TRUE(std::isnan(collapse_coordinates(LayoutKind::reference_qubits, Geometry::automatic, 32, yt, 5,
                                                parse_probe("refq")).xi));

    // strip: two intervals of two sites at distance r on the top edge
    const double Y = yt * 4;
    auto strip = collapse_coordinates(LayoutKind::aaaa, Geometry::strip, 64, yt, 4, parse_probe("mi:t10-t12|t20-t22"));
    double expect = std::pow(std::sinh(std::numbers::pi / Y), 2) / std::pow(std::sinh(std::numbers::pi / Y * 5.0), 2);
    EXPECT_NEAR(strip.eta, expect, 1e-12 * expect);
}

TEST(Harness, probe_separation) {
    EXPECT_EQ(probe_separation(LayoutKind::fffa, 32, 10, bip(3)), 3);
    EXPECT_EQ(probe_separation(LayoutKind::fffa, 32, 10, bip(30)), 2);
    EXPECT_EQ(probe_separation(LayoutKind::pbc_product, 32, 10, parse_probe("seg:t28-t2")), 6);
    EXPECT_EQ(probe_separation(LayoutKind::afaa, 32, 10, parse_probe("bip:l0-l1")), 1);
    EXPECT_EQ(probe_separation(LayoutKind::fffa, 32, 10, parse_probe("mi:t0-t3|t5-t9")), -1);
}

TEST(Harness, percolation_ensemble_shape) {
    auto full = run_percolation_ensemble(8, {0, 3, 6}, 0.0, Coloring::top_vs_bottom, Wrap::open,
                                         {.n = 3, .master_seed = 2, .workers = 1});
    ASSERT_EQ(full.records.size(), 3u);
    for (const auto &r : full.records) {
        EXPECT_EQ(r.segment, "bell:t0-t8");
        EXPECT_EQ(r.sum_bits, 3 * 8);
    }
    auto bip = run_percolation_ensemble(8, {4}, 0.5, Coloring::top_bipartition, Wrap::open,
                                        {.n = 10, .master_seed = 2, .workers = 1});
    ASSERT_EQ(bip.records.size(), 7u);
    EXPECT_EQ(bip.records[2].segment, "bip:t0-t3");
    EXPECT_EQ(bip.metadata.y_over_t, 1.0);
    auto bip8 = run_percolation_ensemble(8, {4}, 0.5, Coloring::top_bipartition, Wrap::open,
                                         {.n = 10, .master_seed = 2, .workers = 8});
    for (size_t k = 0; k < 7; k++) EXPECT_EQ(bip.records[k].sum_sq_bits, bip8.records[k].sum_sq_bits);
    auto pbc = run_percolation_ensemble(8, {4}, 0.5, Coloring::top_bipartition, Wrap::periodic,
                                        {.n = 4, .master_seed = 2, .workers = 1});
    EXPECT_DOUBLE_EQ(pbc.records[1].xi, pbc_xi_two_point(2.0, 8.0));
}
