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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "hcft/config.hpp"
#include "hcft/errors.hpp"
#include "hcft/rng.hpp"

using namespace hcft;
namespace fs = std::filesystem;

namespace {

RunConfig minimal() {
    RunConfig c;
    c.layout = LayoutKind::fffa;
    c.L = 16;
    c.T = 16;
    c.p = 0.16;
    c.n = 4;
    c.seed = 1;
    return c;
}

fs::path scratch(const std::string &name) {
    fs::path dir = fs::temp_directory_path() / ("hcft_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0 || (std::isnan(a) && std::isnan(b)); }

}  // namespace

TEST(Config, json_round_trip) {
    RunConfig c = minimal();
    c.layout = LayoutKind::reference_qubits;
    c.ref_segment = std::make_pair<size_t, size_t>(3, 9);
    c.schedule = "mine.txt";
    c.schedule_text = "0:4:2 refq\n";
    c.geometry = Geometry::strip;
    c.y_over_t = 0.5 + 1e-17;
    c.p = 0.1;
    c.seed = 0xFFFFFFFFFFFFFFFFull;
    c.coloring = Coloring::top_vs_bottom;
    c.wrap = Wrap::periodic;
    RunConfig back = config_from_json(config_to_json(c));
    EXPECT_EQ(back.layout, c.layout);
    EXPECT_EQ(back.ref_segment, c.ref_segment);
    EXPECT_EQ(back.schedule, c.schedule);
    EXPECT_EQ(back.schedule_text, c.schedule_text);
    EXPECT_EQ(back.geometry, c.geometry);
    EXPECT_EQ(back.y_over_t, c.y_over_t);
    EXPECT_EQ(back.p, c.p);
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_EQ(back.coloring, c.coloring);
    EXPECT_EQ(back.wrap, c.wrap);
    EXPECT_EQ(config_to_json(back), config_to_json(c));
    EXPECT_EQ(config_to_json(c).find("workers"), std::string::npos);
}

TEST(Config, json_errors_name_the_field) {
    auto message = [](const std::string &text) {
        try {
            config_from_json(text);
        } catch (const ConfigError &e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_NE(message(R"({"L": "wide"})").find("L"), std::string::npos);
    EXPECT_NE(message(R"({"layout": "ffff"})").find("layout"), std::string::npos);
    EXPECT_NE(message(R"({"ref_segment": [1]})").find("ref_segment"), std::string::npos);
    EXPECT_NE(message(R"({"wrap": "twisted"})").find("wrap"), std::string::npos);
    EXPECT_THROW(config_from_json("{"), ConfigError);
    EXPECT_THROW(config_from_json("[]"), ConfigError);
}

TEST(Config, validation) {
    EXPECT_NO_THROW(validate_config(minimal()));
    auto bad = [](auto mutate) {
        RunConfig c = minimal();
        mutate(c);
        EXPECT_THROW(validate_config(c), ConfigError);
    };
    bad([](RunConfig &c) { c.L = 15; });
    bad([](RunConfig &c) { c.T = -1; });
    bad([](RunConfig &c) { c.p = 1.5; });
    bad([](RunConfig &c) { c.n = 0; });
    bad([](RunConfig &c) { c.workers = 0; });
    bad([](RunConfig &c) { c.y_over_t = 0.0; });
    bad([](RunConfig &c) { c.command = "plot"; });
}

TEST(Config, schedule_text) {
    auto s = parse_schedule_text("# comment\n\n4 bip:t0-t3\n0:6:3 seg:t2-t5  # trailing\n1,5 mi:t0-t1|t4-t6\n",
                                 Geometry::strip);
    ASSERT_EQ(s.probes.size(), 6u);
    EXPECT_EQ(s.geometry, Geometry::strip);
    EXPECT_EQ(s.probes[0].t, 4);
    EXPECT_EQ(s.probes[3].t, 6);
    EXPECT_EQ(s.probes[3].probe.descriptor(), "seg:t2-t5");
    EXPECT_EQ(s.probes[5].t, 5);

    auto line_of = [](const std::string &text) {
        try {
            parse_schedule_text(text, Geometry::automatic);
        } catch (const ConfigError &e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_EQ(line_of("4 bip:t0-t3\n\n5 bip:t0-x\n").rfind("schedule line 3", 0), 0u);
    EXPECT_EQ(line_of("x bip:t0-t3\n").rfind("schedule line 1", 0), 0u);
    EXPECT_EQ(line_of("4\n").rfind("schedule line 1", 0), 0u);
    EXPECT_EQ(line_of("1:4:0 refq\n").rfind("schedule line 1", 0), 0u);
    EXPECT_EQ(line_of("2 refq extra\n").rfind("schedule line 1", 0), 0u);
    EXPECT_THROW(parse_schedule_text("# nothing\n", Geometry::automatic), ConfigError);
}

TEST(Config, presets_fit_their_layouts) {
    const std::vector<std::pair<std::string, LayoutKind>> cases = {
        {"fig5a", LayoutKind::fffa},       {"fig5b", LayoutKind::fffa},     {"fig8b", LayoutKind::fafa},
        {"fig9", LayoutKind::aaaa},        {"fig10a", LayoutKind::pbc_product}, {"fig10b", LayoutKind::pbc_bell},
        {"afaa", LayoutKind::afaa},        {"nonlocal", LayoutKind::aaaa},  {"fig8b", LayoutKind::aaaa},
    };
    for (size_t L : {16u, 32u, 64u}) {
        for (int64_t T : {8, 33, 64}) {
            for (const auto &[name, kind] : cases) {
                auto s = preset_schedule(name, kind, L, T);
                EXPECT_FALSE(s.probes.empty()) << name << " " << L << " " << T;
                EXPECT_NO_THROW(validate_schedule(make_layout(kind, L, T, 0.16), s)) << name << " " << L << " " << T;
            }
            for (LayoutKind kind : {LayoutKind::fffa, LayoutKind::afaa, LayoutKind::fafa, LayoutKind::aaaa,
                                    LayoutKind::pbc_product, LayoutKind::pbc_bell}) {
                auto s = preset_schedule("default", kind, L, T);
                EXPECT_NO_THROW(validate_schedule(make_layout(kind, L, T, 0.16), s)) << to_string(kind);
            }
            auto ref = make_layout(LayoutKind::reference_qubits, L, T, 0.16, std::pair<size_t, size_t>{2, 6});
            EXPECT_NO_THROW(validate_schedule(ref, preset_schedule("default", ref.kind, L, T)));
        }
    }
    EXPECT_EQ(preset_schedule("nonlocal", LayoutKind::aaaa, 64, 8).geometry, Geometry::strip);
    EXPECT_THROW(preset_schedule("fig99", LayoutKind::fffa, 16, 16), ConfigError);
}

TEST(Config, geometry_override_applies_to_presets) {
    RunConfig c = minimal();
    c.geometry = Geometry::strip;
    EXPECT_EQ(resolve_schedule(c).geometry, Geometry::strip);
    c.schedule = scratch("missing_schedule.txt").string();
    EXPECT_THROW(resolve_schedule(c), IoError);
}

TEST(Config, depths) {
    RunConfig c = minimal();
    c.T = 7;
    EXPECT_EQ(resolve_depths(c), (std::vector<int64_t>{0, 2, 4, 6}));
    c.schedule = "every:3";
    EXPECT_EQ(resolve_depths(c), (std::vector<int64_t>{0, 3, 6}));
    c.schedule = "every:0";
    EXPECT_THROW(resolve_depths(c), ConfigError);
    c.schedule = "file";
    c.schedule_text = "5\n1:3:1 # low\n";
    EXPECT_EQ(resolve_depths(c), (std::vector<int64_t>{1, 2, 3, 5}));
    c.schedule_text = "9\n";
    EXPECT_THROW(resolve_depths(c), ConfigError);
}

TEST(ResultFile, format_parse_round_trip) {
    RunConfig c = minimal();
    auto s = execute_simulate(c);
    ResultFile f{c, s, "2026-01-01T00:00:00Z"};
    auto back = parse_result_file(format_result_file(f));
    EXPECT_EQ(back.created, f.created);
    EXPECT_EQ(back.series.metadata.kind, "fffa");
    EXPECT_EQ(back.series.metadata.n, 4);
    EXPECT_EQ(back.series.metadata.y_over_t, 0.61);
    ASSERT_EQ(back.series.records.size(), s.records.size());
    for (size_t i = 0; i < s.records.size(); i++) {
        const auto &a = s.records[i], &b = back.series.records[i];
        EXPECT_EQ(a.t, b.t);
        EXPECT_EQ(a.segment, b.segment);
        EXPECT_TRUE(same_bits(a.tau, b.tau));
        EXPECT_TRUE(same_bits(a.xi, b.xi));
        EXPECT_TRUE(same_bits(a.eta, b.eta));
        EXPECT_TRUE(same_bits(a.mean_nats, b.mean_nats));
        EXPECT_TRUE(same_bits(a.std_error, b.std_error));
        EXPECT_EQ(a.sum_bits, b.sum_bits);
        EXPECT_EQ(a.sum_sq_bits, b.sum_sq_bits);
    }
    EXPECT_EQ(format_data_block(back.series), format_data_block(s));
}

TEST(ResultFile, malformed_input) {
    RunConfig c = minimal();
    auto text = format_result_file({c, execute_simulate(c), "x"});
    auto where = [](const std::string &t) {
        try {
            parse_result_file(t, "f.csv");
        } catch (const IoError &e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_EQ(where("t,tau\n").rfind("f.csv", 0), 0u);
    EXPECT_EQ(where("# {\"config\": 3}\n").rfind("f.csv:1", 0), 0u);
    auto nl = text.find('\n');
    EXPECT_EQ(where(text.substr(0, nl + 1) + "t,tau\n").rfind("f.csv:2", 0), 0u);
    auto bad_row = text + "3,0.1,bip:t0-t1,1,nan,0,0,4\n";
    EXPECT_NE(where(bad_row).find("expected 10 columns"), std::string::npos);
    auto bad_num = text + "3,zero,bip:t0-t1,1,nan,0,0,4,0,0\n";
    EXPECT_NE(where(bad_num).find("bad number"), std::string::npos);
    EXPECT_THROW(read_result_file(scratch("absent.csv").string()), IoError);
}

TEST(ResultFile, replay_is_bit_identical) {
    RunConfig c = minimal();
    c.out = scratch("replay.csv").string();
    auto s = execute_simulate(c);
    write_result_file(c.out, {c, s, {}});
    auto f = read_result_file(c.out);
    RunConfig again = f.config;
    auto s2 = execute_simulate(again);
    EXPECT_EQ(format_data_block(s2), format_data_block(s));
    EXPECT_EQ(format_data_block(f.series), format_data_block(s));
}

TEST(ResultFile, replay_carries_schedule_text) {
    auto path = scratch("sched.txt");
    {
        std::ofstream(path) << "2:8:2 bip:t0-t5\n4 mi:t0-t2|t10-t16\n";
    }
    RunConfig c = minimal();
    c.schedule = path.string();
    auto s = execute_simulate(c);
    EXPECT_EQ(s.records.size(), 5u);
    auto f = parse_result_file(format_result_file({c, s, {}}));
    fs::remove(path);
    RunConfig again = f.config;
    EXPECT_EQ(format_data_block(execute_simulate(again)), format_data_block(s));
}

TEST(ResultFile, workers_do_not_change_data) {
    for (LayoutKind kind : {LayoutKind::fffa, LayoutKind::aaaa, LayoutKind::pbc_bell}) {
        RunConfig c = minimal();
        c.layout = kind;
        c.n = 12;
        c.workers = 1;
        auto one = format_data_block(execute_simulate(c));
        c.workers = 8;
        EXPECT_EQ(format_data_block(execute_simulate(c)), one) << to_string(kind);
    }
    RunConfig c = minimal();
    c.command = "percolate";
    c.p = 0.5;
    c.n = 12;
    c.coloring = Coloring::top_vs_bottom;
    c.workers = 1;
    auto one = format_data_block(execute_percolate(c));
    c.workers = 8;
    EXPECT_EQ(format_data_block(execute_percolate(c)), one);
}

TEST(ResultFile, collapse_recompute_matches_fresh_run) {
    RunConfig c = minimal();
    c.layout = LayoutKind::aaaa;
    c.schedule = "fig9";
    c.T = 12;
    auto s = execute_simulate(c);
    EXPECT_EQ(format_data_block(recompute_collapse(s, Geometry::automatic, 0.61)), format_data_block(s));
    RunConfig d = c;
    d.y_over_t = 0.7;
    d.geometry = Geometry::strip;
    EXPECT_EQ(format_data_block(recompute_collapse(s, Geometry::strip, 0.7)), format_data_block(execute_simulate(d)));

    RunConfig p = minimal();
    p.command = "percolate";
    p.p = 0.5;
    for (Wrap w : {Wrap::open, Wrap::periodic}) {
        p.wrap = w;
        auto ps = execute_percolate(p);
        EXPECT_EQ(format_data_block(recompute_collapse(ps, Geometry::automatic, 1.0)), format_data_block(ps));
    }
}

TEST(ResultFile, atomic_write) {
    auto path = scratch("atomic.csv");
    RunConfig c = minimal();
    auto s = execute_simulate(c);
    write_result_file(path.string(), {c, s, "first"});
    write_result_file(path.string(), {c, s, "second"});
    EXPECT_EQ(read_result_file(path.string()).created, "second");

    // The rename onto a non-empty directory fails; nothing is left behind.
    auto dir = scratch("occupied");
    fs::create_directories(dir / "inner");
    EXPECT_THROW(write_result_file(dir.string(), {c, s, "x"}), IoError);
    for (const auto &e : fs::directory_iterator(dir.parent_path())) {
        EXPECT_EQ(e.path().filename().string().find(".tmp."), std::string::npos) << e.path();
    }
    EXPECT_THROW(write_result_file((dir / "no" / "such" / "f.csv").string(), {c, s, "x"}), IoError);
    EXPECT_EQ(read_result_file(path.string()).created, "second");
    fs::remove_all(dir.parent_path());
}

TEST(Seeds, streams_are_uncorrelated) {
    constexpr size_t kDraws = 10000;
    auto draws = [&](uint64_t master, uint64_t i) {
        Rng rng = make_stream(master, i);
        std::vector<double> v(kDraws);
        for (auto &x : v) x = uniform01(rng);
        return v;
    };
    auto corr = [](const std::vector<double> &a, const std::vector<double> &b) {
        double ma = 0, mb = 0;
        for (size_t k = 0; k < a.size(); k++) {
            ma += a[k];
            mb += b[k];
        }
        ma /= a.size();
        mb /= b.size();
        double sab = 0, saa = 0, sbb = 0;
        for (size_t k = 0; k < a.size(); k++) {
            sab += (a[k] - ma) * (b[k] - mb);
            saa += (a[k] - ma) * (a[k] - ma);
            sbb += (b[k] - mb) * (b[k] - mb);
        }
        return sab / std::sqrt(saa * sbb);
    };
    std::vector<std::vector<double>> streams;
    for (uint64_t i = 0; i < 12; i++) streams.push_back(draws(7, i));
    for (uint64_t m = 0; m < 4; m++) streams.push_back(draws(m, 0));
    for (size_t a = 0; a < streams.size(); a++) {
        for (size_t b = a + 1; b < streams.size(); b++) EXPECT_LT(std::abs(corr(streams[a], streams[b])), 0.05);
    }
    EXPECT_NE(split_seed(1, 0), split_seed(0, 1));
}
