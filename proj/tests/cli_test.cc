// Copyright 2026 The Afshar Simulator Authors
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


#include "commands.h"

#include <unistd.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

#include "afshar/remnant.h"
#include "config.h"
#include "csv.h"

using namespace afshar;
using namespace afshar::cli;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "afshar");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path fresh_dir(std::string_view name) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("afshar_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" + std::string(name));
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path write_file(const std::filesystem::path &dir, std::string_view name, std::string_view text) {
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST(config, defaults_and_comments) {
    auto cfg = parse_config(
        "# geometry\n"
        "slit_width = 30e-6   # meters\n"
        "\n"
        "  n_wires=4\n"
        "seed = 12\n");
    ASSERT_EQ(cfg.geometry.slit_width, 30e-6);
    ASSERT_EQ(cfg.geometry.n_wires, 4);
    ASSERT_EQ(cfg.seed, 12u);
    ASSERT_EQ(cfg.n_samples, 16384u);
    ASSERT_NEAR(cfg.geometry.z_lens_to_detectors, cfg.geometry.conjugate_image_distance(), 1e-15);
}

TEST(config, detector_distance_follows_imaging_condition) {
    auto cfg = parse_config("z_slits_to_grid = 1.0\nz_grid_to_lens = 0.5\nfocal_length = 0.5\n");
    ASSERT_NEAR(cfg.geometry.z_lens_to_detectors, 0.75, 1e-12);
}

TEST(config, rejects_bad_input) {
    ASSERT_THROW(parse_config("colour = blue\n"), ConfigError);
    ASSERT_THROW(parse_config("slit_width = 1e-6\nslit_width = 2e-6\n"), ConfigError);
    ASSERT_THROW(parse_config("slit_width = wide\n"), ConfigError);
    ASSERT_THROW(parse_config("slit_width\n"), ConfigError);
    ASSERT_THROW(parse_config("n_samples = 1000\n"), ConfigError);
    ASSERT_THROW(parse_config("n_wires = 3\n"), ConfigError);
    ASSERT_THROW(parse_config("z_lens_to_detectors = 2.0\n"), ConfigError);
    ASSERT_THROW(parse_config("focal_length = 5\n"), ConfigError);
    ASSERT_THROW(load_config("/definitely/not/here.cfg"), ConfigError);
}

TEST(csv, shortest_round_trip) {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0, 650e-9}) {
        auto text = format_double(v);
        ASSERT_EQ(std::stod(text), v) << text;
    }
    ASSERT_EQ(format_double(0.1), "0.1");
    ASSERT_EQ(format_double(1.0), "1");
}

TEST(csv, writer_checks_columns) {
    CsvWriter w({"a", "b"});
    w.cell(1.5).cell("x").end_row();
    ASSERT_EQ(w.text(), "a,b\n1.5,x\n");
    w.cell(1.0);
    ASSERT_THROW(w.end_row(), std::logic_error);
    ASSERT_THROW(w.cell("a,b"), std::logic_error);
}

TEST(cli, simulate_both_in_keeps_power) {
    auto dir = fresh_dir("both_in");
    auto r = invoke({"simulate", "--scenario", "both", "--grid", "in", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto powers = read_csv(dir / "powers.csv");
    ASSERT_EQ(powers.header,
              (std::vector<std::string>{"scenario", "grid", "power_incident", "power_after_grid", "power_at_detectors",
                                        "power_window_U", "power_window_L"}));
    ASSERT_EQ(powers.rows.size(), 1u);
    ASSERT_EQ(powers.rows[0][0], "both");
    ASSERT_EQ(powers.rows[0][1], "in");
    ASSERT_GE(powers.number(0, "power_at_detectors") / powers.number(0, "power_incident"), 0.99);
    ASSERT_TRUE(std::filesystem::exists(dir / "minima.csv"));
}

TEST(cli, simulate_upper_out_lands_in_window_U) {
    auto dir = fresh_dir("upper_out");
    auto r = invoke({"simulate", "--scenario", "upper", "--grid", "out", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto powers = read_csv(dir / "powers.csv");
    ASSERT_GE(powers.number(0, "power_window_U") / powers.number(0, "power_at_detectors"), 0.99);
    auto sigma1 = read_csv(dir / "sigma1.csv");
    auto sigma2 = read_csv(dir / "sigma2.csv");
    ASSERT_EQ(sigma1.header, (std::vector<std::string>{"x_m", "intensity"}));
    ASSERT_EQ(sigma2.header, (std::vector<std::string>{"x_m", "intensity"}));
    ASSERT_EQ(sigma1.rows.size(), 16384u);
    // Full precision: the window power is recoverable from sigma2.csv.
    Grid grid = default_apparatus_grid();
    std::vector<double> i2;
    for (std::size_t i = 0; i < sigma2.rows.size(); ++i) {
        ASSERT_EQ(sigma2.number(i, "x_m"), grid.coordinate(i));
        i2.push_back(sigma2.number(i, "intensity"));
    }
    ASSERT_EQ(window_power(i2, grid, image_window_upper(AfsharGeometry{})), powers.number(0, "power_window_U"));
}

TEST(cli, missing_config_leaves_nothing) {
    auto dir = fresh_dir("missing");
    auto r = invoke({"simulate", "--config", (dir / "nope.cfg").string(), "--out", dir.string()});
    ASSERT_EQ(r.code, 2);
    ASSERT_FALSE(std::filesystem::exists(dir));
}

TEST(cli, guard_failure_exits_3_and_names_stage) {
    auto dir = fresh_dir("guard");
    auto cfg = write_file(dir / "in", "hard.cfg", "edge_softening = 0\n");
    auto out = dir / "out";
    auto r = invoke({"simulate", "--config", cfg.string(), "--out", out.string()});
    ASSERT_EQ(r.code, 3);
    ASSERT_NE(r.err.find("slits"), std::string::npos) << r.err;
    ASSERT_FALSE(std::filesystem::exists(out));
}

TEST(cli, usage_errors_exit_2) {
    ASSERT_EQ(invoke({}).code, 2);
    ASSERT_EQ(invoke({"simulate", "--scenario", "left"}).code, 2);
    ASSERT_EQ(invoke({"duality", "--probe", "1;0"}).code, 2);
    ASSERT_EQ(invoke({"remnant", "--samples", "10", "--out", fresh_dir("noseed").string()}).code, 2);
    ASSERT_EQ(invoke({"report", "--out", fresh_dir("empty").string()}).code, 2);
    ASSERT_EQ(invoke({"--help"}).code, 0);
}

TEST(cli, duality_which_way_probe) {
    auto dir = fresh_dir("probe");
    auto r = invoke({"duality", "--probe", "1,0", "--detectors", "0", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto vk = read_csv(dir / "vk.csv");
    ASSERT_EQ(vk.header, (std::vector<std::string>{"model", "a_or_V_source", "V", "K", "V2K2"}));
    ASSERT_EQ(vk.rows[0][0], "probe");
    ASSERT_EQ(vk.rows[0][2], "0");
    ASSERT_EQ(vk.rows[0][3], "1");
    ASSERT_EQ(vk.rows[0][4], "1");
}

TEST(cli, duality_random_detectors_and_ladder) {
    auto dir = fresh_dir("duality");
    auto r = invoke({"duality", "--bin-ladder", "12", "--seed", "5", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto vk = read_csv(dir / "vk.csv");
    std::size_t random_rows = 0;
    for (std::size_t i = 0; i < vk.rows.size(); ++i) {
        if (vk.rows[i][0] == "random_detector") {
            ++random_rows;
            ASSERT_NEAR(vk.number(i, "V2K2"), 1.0, 1e-12);
        }
    }
    ASSERT_EQ(random_rows, 1000u);
    auto bins = read_csv(dir / "visibility_bins.csv");
    ASSERT_EQ(bins.header, (std::vector<std::string>{"bin_width_m", "V"}));
    ASSERT_EQ(bins.rows.size(), 12u);
    for (std::size_t i = 1; i < bins.rows.size(); ++i) {
        ASSERT_LE(bins.number(i, "V"), bins.number(i - 1, "V"));
    }
    ASSERT_LT(bins.number(11, "V"), 0.01);
}

TEST(cli, duality_pattern_input) {
    auto dir = fresh_dir("pattern");
    CsvWriter w({"x_m", "intensity"});
    for (int i = 0; i < 256; ++i) {
        double x = (i - 128) * 1e-6;
        w.cell(x).cell(1.0 + 0.5 * std::cos(2 * std::numbers::pi * x / 32e-6)).end_row();
    }
    auto path = write_file(dir, "pattern.csv", w.text());
    auto r = invoke({"duality", "--pattern", path.string(), "--detectors", "0", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto vk = read_csv(dir / "vk.csv");
    auto last = vk.rows.size() - 1;
    ASSERT_EQ(vk.rows[last][0], "pattern_bound");
    ASSERT_NEAR(vk.number(last, "V"), 0.5, 1e-12);
    ASSERT_TRUE(std::filesystem::exists(dir / "pattern_bins.csv"));
}

TEST(cli, remnant_completeness_and_direction) {
    auto dir = fresh_dir("remnant");
    auto r = invoke({"remnant", "--direction", "1,0", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_NE(r.out.find("completeness residue"), std::string::npos);
    ASSERT_NE(r.out.find(kUnconditionedPatternNote), std::string::npos);
    auto table = read_csv(dir / "remnant.csv");
    ASSERT_EQ(table.header,
              (std::vector<std::string>{"x_m", "total", "post_vU", "post_vL", "post_plus", "post_minus"}));
    std::map<std::string, double> summary;
    auto s = read_csv(dir / "remnant_summary.csv");
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        summary[s.rows[i][0]] = s.number(i, "value");
    }
    ASSERT_LT(summary["completeness_residue_which_slit"], 1e-12);
    ASSERT_LT(summary["completeness_residue_fringe"], 1e-12);
    ASSERT_LT(summary["completeness_residue_direction"], 1e-12);

    // The (1, 0) column is the normalized |a_x|^2.
    AfsharGeometry g;
    Grid grid = default_apparatus_grid();
    auto state = build_remnant(field_at_grid_plane(g, grid, SlitSelection::kUpperOnly),
                               field_at_grid_plane(g, grid, SlitSelection::kLowerOnly));
    double norm = 0;
    for (auto a : state.amps_upper()) {
        norm += std::norm(a);
    }
    auto d = read_csv(dir / "remnant_direction.csv");
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        ASSERT_NEAR(d.number(i, "post_direction"), std::norm(state.amps_upper()[i]) / norm, 1e-15);
    }
}

TEST(cli, seeded_sampling_is_reproducible) {
    auto a = fresh_dir("seed_a");
    auto b = fresh_dir("seed_b");
    ASSERT_EQ(invoke({"remnant", "--seed", "42", "--samples", "500", "--out", a.string()}).code, 0);
    ASSERT_EQ(invoke({"remnant", "--seed", "42", "--samples", "500", "--out", b.string()}).code, 0);
    auto sa = slurp(a / "samples.csv");
    ASSERT_EQ(sa, slurp(b / "samples.csv"));
    ASSERT_EQ(read_csv(a / "samples.csv").rows.size(), 500u);
    auto c = fresh_dir("seed_c");
    ASSERT_EQ(invoke({"remnant", "--seed", "43", "--samples", "500", "--out", c.string()}).code, 0);
    ASSERT_NE(sa, slurp(c / "samples.csv"));
}

TEST(cli, config_file_drives_geometry) {
    auto dir = fresh_dir("config");
    auto cfg = write_file(dir, "run.cfg",
                          "wire_width = 80e-6\n"
                          "n_wires = 4\n"
                          "out_dir = " + (dir / "results").string() + "\n");
    auto r = invoke({"simulate", "--config", cfg.string(), "--grid", "in", "--scenario", "both"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto minima = read_csv(dir / "results" / "minima.csv");
    ASSERT_EQ(minima.rows.size(), 4u);
}

TEST(cli, report_recomputes_verdicts) {
    auto dir = fresh_dir("report");
    auto d = dir.string();
    ASSERT_EQ(invoke({"simulate", "--out", d}).code, 0);
    ASSERT_EQ(invoke({"duality", "--out", d}).code, 0);
    ASSERT_EQ(invoke({"remnant", "--out", d}).code, 0);
    auto r = invoke({"report", "--out", d});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
    ASSERT_EQ(r.out.find("SKIP"), std::string::npos) << r.out;
    ASSERT_NE(r.out.find(kUnconditionedPatternNote), std::string::npos);
    ASSERT_EQ(slurp(dir / "report.txt") + "wrote 1 file(s) to " + d + "\n", r.out);

    // Tampering with a CSV flips the matching verdict.
    auto bins = slurp(dir / "visibility_bins.csv");
    auto pos = bins.rfind('\n', bins.size() - 2);
    write_file(dir, "visibility_bins.csv", bins.substr(0, pos + 1) + "1,0.5\n");
    auto tampered = invoke({"report", "--out", d});
    ASSERT_NE(tampered.out.find("FAIL  coarse-bin ladder"), std::string::npos) << tampered.out;
}
