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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "afshar/duality.h"

namespace afshar::cli {

const char *const kUnconditionedPatternNote =
    "note: with orthonormal vibrational modes the unconditioned detection pattern p(x) = |a_x|^2 + |b_x|^2 "
    "carries no interference fringes; fringes appear only in the post-selected fringe/antifringe patterns. "
    "A fully articulated interference pattern recorded without post-selection would need non-orthogonal "
    "vibrational states or a different amplitude assignment, which this model does not assume.";

namespace {

std::string scenario_suffix(const Scenario &s) {
    return std::string(to_string(s.slits)) + "_" + std::string(to_string(s.grid));
}

std::string profile_csv(const Grid &grid, const std::vector<double> &values) {
    CsvWriter csv({"x_m", "intensity"});
    for (std::size_t i = 0; i < values.size(); ++i) {
        csv.cell(grid.coordinate(i)).cell(values[i]).end_row();
    }
    return csv.text();
}

std::string fixed(double v, int digits = 6) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

ComplexField random_smooth_field(const Grid &grid, double wavelength, long max_bin, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<Complex> spectrum(grid.size());
    for (long m = -max_bin; m <= max_bin; ++m) {
        Complex c(normal(rng), normal(rng));
        spectrum[static_cast<std::size_t>((m + static_cast<long>(grid.size())) % static_cast<long>(grid.size()))] = c;
    }
    std::vector<Complex> u(grid.size());
    double n = static_cast<double>(grid.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        Complex acc;
        for (long m = -max_bin; m <= max_bin; ++m) {
            std::size_t j = static_cast<std::size_t>((m + static_cast<long>(grid.size())) % static_cast<long>(grid.size()));
            acc += spectrum[j] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) * static_cast<double>(i) / n);
        }
        u[i] = acc;
    }
    return ComplexField(grid, std::move(u), wavelength);
}

double max_deviation(const ComplexField &a, const ComplexField &b) {
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return worst / scale;
}

// Propagation self-checks recorded alongside every simulation.
std::string engine_checks() {
    const double lambda = 0.5e-6;
    Grid grid(1024, 2e-6);
    auto u = random_smooth_field(grid, lambda, 100, 20260101);
    double conservation = std::abs(total_power(propagate(u, 0.031)) / total_power(u) - 1.0);
    double composition = max_deviation(propagate(propagate(u, 0.012), 0.019), propagate(u, 0.031));
    double inversion = max_deviation(propagate(propagate(u, 0.031), -0.031), u);

    double w0 = 20e-6;
    double z = 5e-3;
    std::vector<Complex> g(grid.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x = grid.coordinate(i);
        g[i] = std::exp(-x * x / (w0 * w0));
    }
    auto out = intensity(propagate(ComplexField(grid, g, lambda), z));
    double m0 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        double x = grid.coordinate(i);
        m0 += out[i];
        m2 += out[i] * x * x;
    }
    double z_r = std::numbers::pi * w0 * w0 / lambda;
    double expected = w0 * std::sqrt(1.0 + (z / z_r) * (z / z_r));
    double width_error = std::abs(2.0 * std::sqrt(m2 / m0) / expected - 1.0);

    CsvWriter csv({"check", "value", "limit"});
    csv.cell("power_conservation").cell(conservation).cell(1e-10).end_row();
    csv.cell("composition").cell(composition).cell(1e-10).end_row();
    csv.cell("inversion").cell(inversion).cell(1e-10).end_row();
    csv.cell("gaussian_width").cell(width_error).cell(0.01).end_row();
    return csv.text();
}

std::pair<double, double> normalized_pair(double a, double b, std::string_view what) {
    double n = std::hypot(a, b);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ConfigError(std::string(what) + ": pair must be nonzero and finite");
    }
    if (std::abs(n - 1.0) <= 1e-15) {
        return {a, b};
    }
    return {a / n, b / n};
}

std::string pair_label(double a, double b) {
    return format_double(a) + ";" + format_double(b);
}

}  // namespace

CommandResult simulate(const Config &config, const SimulateOptions &options) {
    const AfsharGeometry &geometry = config.geometry;
    Grid grid = config.grid();
    std::vector<SlitSelection> slit_list = options.slits
                                               ? std::vector<SlitSelection>{*options.slits}
                                               : std::vector<SlitSelection>{SlitSelection::kBoth, SlitSelection::kUpperOnly,
                                                                            SlitSelection::kLowerOnly};
    std::vector<GridPlacement> grid_list = options.grid ? std::vector<GridPlacement>{*options.grid}
                                                        : std::vector<GridPlacement>{GridPlacement::kOut, GridPlacement::kIn};
    bool single = slit_list.size() == 1 && grid_list.size() == 1;
    bool needs_wires = std::find(grid_list.begin(), grid_list.end(), GridPlacement::kIn) != grid_list.end();

    std::vector<double> minima;
    if (needs_wires) {
        minima = fringe_minima(geometry, grid);
    }

    CommandResult result;
    std::ostringstream text;
    CsvWriter powers({"scenario", "grid", "power_incident", "power_after_grid", "power_at_detectors", "power_window_U",
                      "power_window_L"});
    for (auto slits : slit_list) {
        for (auto placement : grid_list) {
            Scenario scenario{slits, placement};
            auto rec = run_scenario(geometry, grid, scenario,
                                    placement == GridPlacement::kIn ? minima : std::vector<double>{});
            powers.cell(to_string(slits))
                .cell(to_string(placement))
                .cell(rec.power_incident)
                .cell(rec.power_after_grid)
                .cell(rec.power_at_detectors)
                .cell(rec.power_window_U)
                .cell(rec.power_window_L)
                .end_row();
            std::string suffix = single ? "" : "_" + scenario_suffix(scenario);
            result.files.add("sigma1" + suffix + ".csv", profile_csv(grid, rec.intensity_sigma1));
            result.files.add("sigma2" + suffix + ".csv", profile_csv(grid, rec.intensity_sigma2));
            text << to_string(slits) << "/" << to_string(placement) << ": detector power "
                 << fixed(rec.power_at_detectors / rec.power_incident) << " of incident, window U "
                 << fixed(rec.power_window_U / rec.power_at_detectors) << ", window L "
                 << fixed(rec.power_window_L / rec.power_at_detectors) << "\n";
        }
    }
    result.files.add("powers.csv", powers.text());

    CsvWriter apparatus({"key", "value"});
    auto kv = [&](std::string_view key, double value) { apparatus.cell(key).cell(value).end_row(); };
    kv("wavelength", geometry.wavelength);
    kv("slit_width", geometry.slit_width);
    kv("slit_separation", geometry.slit_separation);
    kv("z_slits_to_grid", geometry.z_slits_to_grid);
    kv("z_grid_to_lens", geometry.z_grid_to_lens);
    kv("focal_length", geometry.focal_length);
    kv("z_lens_to_detectors", geometry.z_lens_to_detectors);
    kv("wire_width", geometry.wire_width);
    kv("n_wires", geometry.n_wires);
    kv("edge_softening", geometry.edge_softening);
    kv("n_samples", static_cast<double>(grid.size()));
    kv("spacing", grid.spacing());
    kv("fringe_spacing", geometry.fringe_spacing());
    kv("magnification", geometry.magnification());
    if (needs_wires) {
        kv("fill_factor", build_wire_grid(geometry, grid, minima).fill_factor);
    }
    result.files.add("apparatus.csv", apparatus.text());

    if (needs_wires) {
        CsvWriter csv({"index", "x_m", "analytic_x_m"});
        double period = geometry.fringe_spacing();
        int half = geometry.n_wires / 2;
        for (std::size_t i = 0; i < minima.size(); ++i) {
            double analytic = (static_cast<double>(static_cast<int>(i) - half) + 0.5) * period;
            csv.cell(i).cell(minima[i]).cell(analytic).end_row();
        }
        result.files.add("minima.csv", csv.text());
    }
    result.files.add("engine.csv", engine_checks());
    result.text = text.str();
    return result;
}

CommandResult duality(const Config &config, const DualityOptions &options) {
    std::vector<std::pair<double, double>> probes;
    if (options.probes.empty()) {
        // 101 real pairs on the quarter circle from (1, 0) to (1, 1)/sqrt(2).
        for (int k = 0; k <= 100; ++k) {
            double t = k * std::numbers::pi / 400.0;
            probes.push_back(k == 100 ? std::pair{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}
                                     : std::pair{std::cos(t), std::sin(t)});
        }
    } else {
        for (auto [a, b] : options.probes) {
            probes.push_back(normalized_pair(a, b, "--probe"));
        }
    }

    CommandResult result;
    std::ostringstream text;
    CsvWriter vk({"model", "a_or_V_source", "V", "K", "V2K2"});
    auto row = [&](std::string_view model, std::string_view source, const VKPair &p) {
        vk.cell(model).cell(source).cell(p.V).cell(p.K).cell(duality_check(p)).end_row();
    };
    for (auto [a, b] : probes) {
        std::string label = pair_label(a, b);
        auto probe = vk_from_probe(ProbeAmplitudes(a, b));
        auto detector = rotation_detector(a, b);
        row("probe", label, probe);
        row("rotation_detector", label, vk_from_detector(detector));
        row("rotation_detector_overlap", label, vk_from_detector_overlap(detector));
        if (!options.probes.empty()) {
            text << "probe a=" << fixed(a) << " b=" << fixed(b) << ": V=" << fixed(probe.V) << " K=" << fixed(probe.K)
                 << "\n";
        }
    }
    if (options.probes.empty()) {
        text << probes.size() << " probe pairs from (1, 0) to (1, 1)/sqrt(2) with matching rotation detectors\n";
    }
    std::mt19937_64 rng(options.seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < options.detectors; ++i) {
        auto model = random_detector(rng);
        auto p = vk_from_detector(model);
        auto q = vk_from_detector_overlap(model);
        std::string label = "haar_" + std::to_string(i);
        row("random_detector", label, p);
        row("random_detector_overlap", label, q);
        worst = std::max({worst, std::abs(duality_check(p) - 1.0), std::abs(duality_check(q) - 1.0)});
    }
    if (options.detectors > 0) {
        text << options.detectors << " random detectors: max |V^2 + K^2 - 1| = " << worst << "\n";
    }

    Grid grid = config.grid();
    std::vector<LadderRung> ladder;
    try {
        ladder = cosine_visibility_ladder(grid, kLadderSamplesPerPeriod, options.ladder_rungs);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("--bin-ladder: ") + e.what());
    }
    CsvWriter bins({"bin_width_m", "V"});
    for (const auto &rung : ladder) {
        bins.cell(rung.bin_width).cell(rung.visibility).end_row();
    }
    text << "cosine ladder (" << ladder.size() << " rungs): V from " << fixed(ladder.front().visibility) << " to "
         << fixed(ladder.back().visibility) << "\n";
    result.files.add("visibility_bins.csv", bins.text());

    if (options.pattern) {
        auto table = read_csv(*options.pattern);
        std::size_t n = table.rows.size();
        if (n < 8 || (n & (n - 1)) != 0) {
            throw ConfigError("--pattern: sample count must be a power of two (at least 8)");
        }
        std::vector<double> x(n);
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = table.number(i, "x_m");
            values[i] = table.number(i, "intensity");
        }
        double dx = (x[n - 1] - x[0]) / static_cast<double>(n - 1);
        if (!(dx > 0.0)) {
            throw ConfigError("--pattern: x_m must increase");
        }
        for (std::size_t i = 1; i < n; ++i) {
            if (std::abs(x[i] - x[i - 1] - dx) > 1e-6 * dx) {
                throw ConfigError("--pattern: x_m must be uniformly spaced");
            }
        }
        Grid pgrid(n, dx, x[n / 2]);
        Interval all{x.front(), x.back()};
        auto fine = visibility_from_pattern(values, pgrid, dx, all);
        VKPair bound{fine.visibility, std::sqrt(std::max(0.0, 1.0 - fine.visibility * fine.visibility))};
        row("pattern_bound", options.pattern->filename().string(), bound);
        CsvWriter pbins({"bin_width_m", "V"});
        for (std::size_t b = 1; b <= n / 4; b *= 2) {
            auto est = visibility_from_pattern(values, pgrid, static_cast<double>(b) * dx, all);
            pbins.cell(static_cast<double>(b) * dx).cell(est.visibility).end_row();
        }
        result.files.add("pattern_bins.csv", pbins.text());
        text << "pattern " << options.pattern->filename().string() << ": fine visibility " << fixed(fine.visibility)
             << "\n";
    }
    result.files.add("vk.csv", vk.text());
    result.text = text.str();
    return result;
}

CommandResult remnant(const Config &config, const RemnantOptions &options) {
    const AfsharGeometry &geometry = config.geometry;
    Grid grid = config.grid();
    auto phi_upper = field_at_grid_plane(geometry, grid, SlitSelection::kUpperOnly);
    auto phi_lower = field_at_grid_plane(geometry, grid, SlitSelection::kLowerOnly);
    auto state = build_remnant(phi_upper, phi_lower);

    auto total = total_pattern(state);
    auto up = postselect(state, VibrationalDirection::upper());
    auto low = postselect(state, VibrationalDirection::lower());
    auto plus = postselect(state, VibrationalDirection::plus());
    auto minus = postselect(state, VibrationalDirection::minus());

    CommandResult result;
    CsvWriter csv({"x_m", "total", "post_vU", "post_vL", "post_plus", "post_minus"});
    for (std::size_t i = 0; i < total.size(); ++i) {
        csv.cell(grid.coordinate(i))
            .cell(total[i])
            .cell(up.pattern[i])
            .cell(low.pattern[i])
            .cell(plus.pattern[i])
            .cell(minus.pattern[i])
            .end_row();
    }
    result.files.add("remnant.csv", csv.text());

    double which_residue = completeness_residue(state, VibrationalDirection::upper());
    double fringe_residue = completeness_residue(state, VibrationalDirection::plus());
    double period = geometry.fringe_spacing();
    // Two central periods: wide enough for a full fringe, narrow enough that
    // the single-slit envelope barely changes.
    Interval central{-period, period};
    double v_total = visibility_from_pattern(total, grid, grid.spacing(), central).visibility;
    double v_plus = visibility_from_pattern(plus.pattern, grid, grid.spacing(), central).visibility;
    double v_minus = visibility_from_pattern(minus.pattern, grid, grid.spacing(), central).visibility;

    CsvWriter summary({"key", "value"});
    auto kv = [&](std::string_view key, double value) { summary.cell(key).cell(value).end_row(); };
    kv("P_vU", up.probability);
    kv("P_vL", low.probability);
    kv("P_plus", plus.probability);
    kv("P_minus", minus.probability);
    kv("completeness_residue_which_slit", which_residue);
    kv("completeness_residue_fringe", fringe_residue);
    kv("visibility_total", v_total);
    kv("visibility_plus", v_plus);
    kv("visibility_minus", v_minus);
    kv("fringe_spacing", period);

    std::ostringstream text;
    text << "completeness residue max|P p1 + P p2 - total|: which-slit " << which_residue << ", fringe/antifringe "
         << fringe_residue << "\n";
    text << "visibility over the two central fringe periods: total " << fixed(v_total) << ", fringe " << fixed(v_plus)
         << ", antifringe " << fixed(v_minus) << "\n";

    if (options.direction) {
        auto [alpha, beta] = normalized_pair(options.direction->first, options.direction->second, "--direction");
        VibrationalDirection dir(alpha, beta);
        auto chosen = postselect(state, dir);
        auto other = postselect(state, dir.orthogonal());
        CsvWriter dcsv({"x_m", "post_direction", "post_orthogonal"});
        for (std::size_t i = 0; i < total.size(); ++i) {
            dcsv.cell(grid.coordinate(i)).cell(chosen.pattern[i]).cell(other.pattern[i]).end_row();
        }
        result.files.add("remnant_direction.csv", dcsv.text());
        double residue = completeness_residue(state, dir);
        kv("direction_alpha", alpha);
        kv("direction_beta", beta);
        kv("P_direction", chosen.probability);
        kv("P_orthogonal", other.probability);
        kv("completeness_residue_direction", residue);
        text << "direction (" << fixed(alpha) << ", " << fixed(beta) << "): P = " << fixed(chosen.probability)
             << ", completeness residue " << residue << "\n";
    }
    result.files.add("remnant_summary.csv", summary.text());

    if (options.seed) {
        auto dir = VibrationalDirection::plus();
        if (options.direction) {
            auto [alpha, beta] = normalized_pair(options.direction->first, options.direction->second, "--direction");
            dir = VibrationalDirection(alpha, beta);
        }
        auto draws = sample_detections(state, dir, options.samples, *options.seed);
        CsvWriter scsv({"index", "x_m", "outcome"});
        for (std::size_t i = 0; i < draws.size(); ++i) {
            scsv.cell(i).cell(draws[i].x).cell(draws[i].outcome).end_row();
        }
        result.files.add("samples.csv", scsv.text());
        text << draws.size() << " seeded detections written\n";
    }

    auto steps = qubit_analogy(options.qubit_sequence);
    CsvWriter qcsv({"step", "axis", "p_plus", "p_minus"});
    text << "spin-1/2 from x=+1:";
    for (std::size_t i = 0; i < steps.size(); ++i) {
        std::string_view axis = steps[i].axis == SpinAxis::kX ? "x" : "z";
        qcsv.cell(i).cell(axis).cell(steps[i].p_plus).cell(steps[i].p_minus).end_row();
        text << " " << axis << "(+:" << steps[i].p_plus << ")";
    }
    text << "\n";
    result.files.add("qubit.csv", qcsv.text());
    text << kUnconditionedPatternNote << "\n";
    result.text = text.str();
    return result;
}

namespace {

enum class Status { kPass, kFail, kSkip };

struct Verdict {
    std::string name;
    Status status = Status::kSkip;
    std::string detail;
};

std::optional<CsvTable> maybe_table(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path)) {
        return std::nullopt;
    }
    return read_csv(path);
}

std::map<std::string, double> key_values(const CsvTable &table) {
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        out[table.rows[i][table.column("key")]] = table.number(i, "value");
    }
    return out;
}

std::optional<std::pair<double, double>> parse_label(const std::string &label) {
    auto semi = label.find(';');
    if (semi == std::string::npos) {
        return std::nullopt;
    }
    return std::pair{parse_double(label.substr(0, semi), "a"), parse_double(label.substr(semi + 1), "b")};
}

struct Profile {
    std::vector<double> x;
    std::vector<double> values;
};

std::optional<Profile> read_profile(const std::filesystem::path &path, std::string_view column) {
    auto table = maybe_table(path);
    if (!table) {
        return std::nullopt;
    }
    Profile p;
    for (std::size_t i = 0; i < table->rows.size(); ++i) {
        p.x.push_back(table->number(i, "x_m"));
        p.values.push_back(table->number(i, column));
    }
    return p;
}

Grid grid_of(const Profile &p) {
    std::size_t n = p.x.size();
    if (n < 2) {
        throw ConfigError("profile has fewer than two samples");
    }
    return Grid(n, (p.x[n - 1] - p.x[0]) / static_cast<double>(n - 1), p.x[n / 2]);
}

std::string sci(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

Verdict check(std::string name, bool ok, std::string detail) {
    return {std::move(name), ok ? Status::kPass : Status::kFail, std::move(detail)};
}

Verdict skip(std::string name, std::string why) {
    return {std::move(name), Status::kSkip, std::move(why)};
}

}  // namespace

CommandResult report(const std::filesystem::path &dir) {
    std::vector<Verdict> verdicts;
    auto vk = maybe_table(dir / "vk.csv");
    auto powers = maybe_table(dir / "powers.csv");
    auto apparatus = maybe_table(dir / "apparatus.csv");
    auto minima = maybe_table(dir / "minima.csv");
    auto bins = maybe_table(dir / "visibility_bins.csv");
    auto summary = maybe_table(dir / "remnant_summary.csv");
    auto qubit = maybe_table(dir / "qubit.csv");
    auto engine = maybe_table(dir / "engine.csv");
    if (!vk && !powers && !summary) {
        throw ConfigError("no simulator output found in '" + dir.string() + "'");
    }
    std::ostringstream body;

    // Duality tables.
    if (vk) {
        std::size_t col_model = vk->column("model");
        std::size_t col_source = vk->column("a_or_V_source");
        std::size_t random_count = 0;
        double worst = 0.0;
        std::map<std::string, VKPair> probe_rows;
        std::map<std::string, VKPair> rotation_rows;
        for (std::size_t i = 0; i < vk->rows.size(); ++i) {
            const auto &model = vk->rows[i][col_model];
            VKPair p{vk->number(i, "V"), vk->number(i, "K")};
            if (model == "random_detector") {
                ++random_count;
                worst = std::max(worst, std::abs(p.V * p.V + p.K * p.K - 1.0));
            } else if (model == "probe") {
                probe_rows[vk->rows[i][col_source]] = p;
            } else if (model == "rotation_detector") {
                rotation_rows[vk->rows[i][col_source]] = p;
            }
        }
        body << "duality: " << random_count << " random detectors, max |V^2 + K^2 - 1| = " << sci(worst) << "\n";
        verdicts.push_back(random_count >= 1000
                               ? check("duality identity", worst < 1e-12, "max deviation " + sci(worst))
                               : skip("duality identity", "fewer than 1000 random detectors in vk.csv"));

        std::optional<VKPair> which_way;
        std::optional<VKPair> balanced;
        double h = std::numbers::sqrt2 / 2;
        for (const auto &[label, p] : probe_rows) {
            auto ab = parse_label(label);
            if (!ab) {
                continue;
            }
            if (ab->first == 1.0 && ab->second == 0.0) {
                which_way = p;
            }
            if (std::abs(ab->first - h) <= 1e-15 && std::abs(ab->second - h) <= 1e-15) {
                balanced = p;
            }
        }
        if (which_way && balanced) {
            double err = std::max({std::abs(which_way->V), std::abs(which_way->K - 1.0), std::abs(balanced->V - 1.0),
                                   std::abs(balanced->K)});
            body << "probe (1,0): V=" << which_way->V << " K=" << which_way->K << "; probe (1,1)/sqrt2: V=" << balanced->V
                 << " K=" << balanced->K << "\n";
            verdicts.push_back(check("probe endpoints", err <= 1e-12, "max error " + sci(err)));
        } else {
            verdicts.push_back(skip("probe endpoints", "vk.csv lacks the (1,0) or (1,1)/sqrt2 probe"));
        }

        std::size_t pairs = 0;
        double diff = 0.0;
        for (const auto &[label, p] : probe_rows) {
            auto it = rotation_rows.find(label);
            if (it == rotation_rows.end()) {
                continue;
            }
            ++pairs;
            diff = std::max({diff, std::abs(p.V - it->second.V), std::abs(p.K - it->second.K)});
        }
        body << "probe vs rotation detector: " << pairs << " pairs, max difference " << sci(diff) << "\n";
        verdicts.push_back(pairs >= 100 ? check("probe/detector equivalence", diff <= 1e-12, "max difference " + sci(diff))
                                        : skip("probe/detector equivalence", "fewer than 100 probe pairs"));
    } else {
        verdicts.push_back(skip("duality identity", "vk.csv missing"));
        verdicts.push_back(skip("probe endpoints", "vk.csv missing"));
        verdicts.push_back(skip("probe/detector equivalence", "vk.csv missing"));
    }

    // Apparatus power table.
    std::map<std::string, std::map<std::string, double>> rows;
    if (powers) {
        for (std::size_t i = 0; i < powers->rows.size(); ++i) {
            std::string key = powers->rows[i][powers->column("scenario")] + "/" + powers->rows[i][powers->column("grid")];
            for (const char *c : {"power_incident", "power_after_grid", "power_at_detectors", "power_window_U",
                                  "power_window_L"}) {
                rows[key][c] = powers->number(i, c);
            }
        }
        body << "scenario      incident        after grid      detectors       window U        window L\n";
        for (const auto &[key, r] : rows) {
            body << key;
            for (std::size_t pad = key.size(); pad < 14; ++pad) {
                body << ' ';
            }
            for (const char *c : {"power_incident", "power_after_grid", "power_at_detectors", "power_window_U",
                                  "power_window_L"}) {
                body << sci(r.at(c)) << "       ";
            }
            body << "\n";
        }
    }
    auto have = [&](std::initializer_list<const char *> keys) {
        return std::all_of(keys.begin(), keys.end(), [&](const char *k) { return rows.count(k) > 0; });
    };
    std::map<std::string, double> app;
    if (apparatus) {
        app = key_values(*apparatus);
    }
    if (have({"both/in", "both/out", "upper/in", "upper/out", "lower/in", "lower/out"}) && app.count("fill_factor")) {
        double ratio = rows["both/in"]["power_at_detectors"] / rows["both/out"]["power_at_detectors"];
        double phi = app["fill_factor"];
        double worst_rel = 0.0;
        for (const char *s : {"upper", "lower"}) {
            double loss = 1.0 - rows[std::string(s) + "/in"]["power_at_detectors"] /
                                    rows[std::string(s) + "/out"]["power_at_detectors"];
            worst_rel = std::max(worst_rel, std::abs(loss / phi - 1.0));
        }
        body << "grid transparency: both-slit detector power ratio (in/out) " << fixed(ratio, 8)
             << ", fill factor " << fixed(phi) << ", worst single-slit loss/fill deviation " << fixed(worst_rel) << "\n";
        verdicts.push_back(check("grid transparency", ratio >= 0.99 && worst_rel <= 0.2,
                                 "ratio " + fixed(ratio, 8) + ", single-slit loss deviation " + fixed(worst_rel)));
    } else {
        verdicts.push_back(skip("grid transparency", "needs all six scenarios in powers.csv and fill_factor"));
    }
    if (have({"upper/out", "lower/out"})) {
        auto &u = rows["upper/out"];
        auto &l = rows["lower/out"];
        double fu = u["power_window_U"] / u["power_at_detectors"];
        double fl = l["power_window_L"] / l["power_at_detectors"];
        double du = std::abs(u["power_window_U"] - u["power_window_L"]) / (u["power_window_U"] + u["power_window_L"]);
        double dl = std::abs(l["power_window_U"] - l["power_window_L"]) / (l["power_window_U"] + l["power_window_L"]);
        body << "which-slit: upper in window U " << fixed(fu) << " (discrimination " << fixed(du) << "), lower in window L "
             << fixed(fl) << " (discrimination " << fixed(dl) << ")\n";
        verdicts.push_back(check("which-slit discrimination", std::min(fu, fl) >= 0.99 && std::min(du, dl) >= 0.98,
                                 "window fractions " + fixed(fu) + "/" + fixed(fl) + ", discrimination " + fixed(du) +
                                     "/" + fixed(dl)));
    } else {
        verdicts.push_back(skip("which-slit discrimination", "needs upper/out and lower/out in powers.csv"));
    }

    // Fringes at sigma1.
    std::optional<Profile> sigma1 = read_profile(dir / "sigma1_both_out.csv", "intensity");
    if (!sigma1 && rows.size() == 1 && rows.count("both/out")) {
        sigma1 = read_profile(dir / "sigma1.csv", "intensity");
    }
    if (sigma1 && minima && app.count("fringe_spacing")) {
        double period = app["fringe_spacing"];
        Grid grid = grid_of(*sigma1);
        double v = visibility_from_pattern(sigma1->values, grid, grid.spacing(), Interval{-3 * period, 3 * period})
                       .visibility;
        double worst = 0.0;
        for (std::size_t i = 0; i < minima->rows.size(); ++i) {
            double analytic = minima->number(i, "analytic_x_m");
            worst = std::max(worst, std::abs(minima->number(i, "x_m") - analytic) / std::abs(analytic));
        }
        body << "sigma1 fringes: visibility " << fixed(v, 8) << " over the central 6 fringes, minima within "
             << sci(worst) << " of (m + 1/2) lambda L / d\n";
        verdicts.push_back(check("fringe fidelity", v >= 0.99 && worst <= 0.005,
                                 "visibility " + fixed(v, 8) + ", minima deviation " + sci(worst)));
    } else {
        verdicts.push_back(skip("fringe fidelity", "needs the both/out sigma1 profile, minima.csv and apparatus.csv"));
    }

    // Coarse-bin ladder.
    if (bins && bins->rows.size() >= 2) {
        bool monotone = true;
        body << "bin ladder (bin width m, V):";
        for (std::size_t i = 0; i < bins->rows.size(); ++i) {
            body << " (" << sci(bins->number(i, "bin_width_m")) << ", " << fixed(bins->number(i, "V")) << ")";
            if (i > 0 && bins->number(i, "V") > bins->number(i - 1, "V")) {
                monotone = false;
            }
        }
        body << "\n";
        double last = bins->number(bins->rows.size() - 1, "V");
        verdicts.push_back(check("coarse-bin ladder", monotone && last < 0.01,
                                 std::string(monotone ? "non-increasing" : "increases somewhere") +
                                     ", V at the widest bin " + sci(last)));
    } else {
        verdicts.push_back(skip("coarse-bin ladder", "visibility_bins.csv missing"));
    }

    // Remnant post-selection.
    auto remnant_table = maybe_table(dir / "remnant.csv");
    if (remnant_table && summary) {
        auto kv = key_values(*summary);
        const auto &t = *remnant_table;
        double which = 0.0;
        double fringe = 0.0;
        std::vector<double> post_upper;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            double total = t.number(i, "total");
            which = std::max(which, std::abs(kv["P_vU"] * t.number(i, "post_vU") + kv["P_vL"] * t.number(i, "post_vL") -
                                             total));
            fringe = std::max(fringe, std::abs(kv["P_plus"] * t.number(i, "post_plus") +
                                               kv["P_minus"] * t.number(i, "post_minus") - total));
            post_upper.push_back(t.number(i, "post_vU"));
        }
        std::string detail = "residues " + sci(which) + " / " + sci(fringe);
        bool ok = which < 1e-12 && fringe < 1e-12;
        body << "remnant completeness: which-slit " << sci(which) << ", fringe/antifringe " << sci(fringe) << "\n";
        body << "remnant visibility: total " << fixed(kv["visibility_total"]) << ", fringe " << fixed(kv["visibility_plus"])
             << ", antifringe " << fixed(kv["visibility_minus"]) << "\n";
        auto single = read_profile(dir / "sigma1_upper_out.csv", "intensity");
        if (single && single->values.size() == post_upper.size()) {
            double sum = 0.0;
            for (double v : single->values) {
                sum += v;
            }
            double marginal = 0.0;
            for (std::size_t i = 0; i < post_upper.size(); ++i) {
                marginal = std::max(marginal, std::abs(post_upper[i] - single->values[i] / sum));
            }
            body << "post-selected v_U against the normalized upper-slit pattern: max difference " << sci(marginal) << "\n";
            detail += ", marginal " + sci(marginal);
            ok = ok && marginal < 1e-12;
        }
        verdicts.push_back(check("remnant completeness", ok, detail));
    } else {
        verdicts.push_back(skip("remnant completeness", "remnant.csv or remnant_summary.csv missing"));
    }

    // Propagation engine.
    if (engine) {
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; i < engine->rows.size(); ++i) {
            double value = engine->number(i, "value");
            double limit = engine->number(i, "limit");
            ok = ok && value <= limit;
            detail += (i ? ", " : "") + engine->rows[i][engine->column("check")] + " " + sci(value);
        }
        body << "propagation checks: " << detail << "\n";
        verdicts.push_back(check("propagation engine", ok, detail));
    } else {
        verdicts.push_back(skip("propagation engine", "engine.csv missing"));
    }

    // Spin analogy.
    if (qubit && qubit->rows.size() == 3 && qubit->rows[0][qubit->column("axis")] == "x" &&
        qubit->rows[1][qubit->column("axis")] == "z" && qubit->rows[2][qubit->column("axis")] == "x") {
        std::vector<double> p_plus;
        for (std::size_t i = 0; i < 3; ++i) {
            p_plus.push_back(qubit->number(i, "p_plus"));
        }
        body << "spin-1/2 [x, z, x] from x=+1: p(+) = " << p_plus[0] << ", " << p_plus[1] << ", " << p_plus[2] << "\n";
        verdicts.push_back(check("qubit analogy", p_plus[0] == 1.0 && p_plus[1] == 0.5 && p_plus[2] == 0.5,
                                 "p(+) = " + format_double(p_plus[0]) + ", " + format_double(p_plus[1]) + ", " +
                                     format_double(p_plus[2])));
    } else {
        verdicts.push_back(skip("qubit analogy", "qubit.csv missing or not the [x, z, x] sequence"));
    }

    std::ostringstream text;
    text << "afshar report\n\n" << body.str() << "\n";
    std::size_t failed = 0;
    for (const auto &v : verdicts) {
        const char *tag = v.status == Status::kPass ? "PASS" : v.status == Status::kFail ? "FAIL" : "SKIP";
        failed += v.status == Status::kFail;
        text << tag << "  " << v.name << ": " << v.detail << "\n";
    }
    text << "\n" << kUnconditionedPatternNote << "\n";
    text << (failed ? std::to_string(failed) + " verdict(s) failed\n" : "no failed verdicts\n");

    CommandResult result;
    result.text = text.str();
    result.files.add("report.txt", result.text);
    return result;
}

namespace {

std::pair<double, double> parse_pair(const std::string &text, std::string_view what) {
    auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw ConfigError(std::string(what) + ": expected 'a,b', got '" + text + "'");
    }
    return {parse_double(text.substr(0, comma), what), parse_double(text.substr(comma + 1), what)};
}

std::vector<SpinAxis> parse_sequence(const std::string &text) {
    std::vector<SpinAxis> out;
    for (char c : text) {
        if (c == 'x' || c == 'X') {
            out.push_back(SpinAxis::kX);
        } else if (c == 'z' || c == 'Z') {
            out.push_back(SpinAxis::kZ);
        } else {
            throw ConfigError("--sequence: use the letters x and z");
        }
    }
    if (out.empty()) {
        throw ConfigError("--sequence: empty");
    }
    return out;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Two-slit, wire-grid and lens simulator with which-way and post-selection analyses", "afshar"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "Configuration file (key = value)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Random seed");

    auto *sim = app.add_subcommand("simulate", "Run apparatus scenarios and write intensity profiles and powers");
    std::string scenario;
    std::string grid;
    sim->add_option("--scenario", scenario, "Slits open (default: all)")->check(CLI::IsMember({"both", "upper", "lower"}));
    sim->add_option("--grid", grid, "Wire grid placement (default: both)")->check(CLI::IsMember({"in", "out"}));

    auto *dual = app.add_subcommand("duality", "Visibility / which-way tables and the coarse-bin ladder");
    std::vector<std::string> probes;
    std::size_t detectors = 1000;
    std::size_t rungs = 9;
    std::string pattern;
    dual->add_option("--probe", probes, "Probe amplitudes a,b (repeatable)")->take_first()->allow_extra_args(false);
    dual->add_option("--detectors", detectors, "Number of random detector models");
    dual->add_option("--bin-ladder", rungs, "Number of rungs in the coarse-bin ladder");
    dual->add_option("--pattern", pattern, "Pattern CSV (x_m,intensity) to analyse");

    auto *rem = app.add_subcommand("remnant", "Post-selected detection patterns of the remnant state");
    std::string direction;
    std::optional<std::size_t> samples;
    std::string sequence = "xzx";
    rem->add_option("--direction", direction, "Post-selection direction alpha,beta");
    rem->add_option("--samples", samples, "Seeded detections to draw (needs --seed)");
    rem->add_option("--sequence", sequence, "Spin measurement axes, e.g. xzx");

    app.add_subcommand("report", "Recompute every verdict from the CSVs in --out");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        std::filesystem::path dir;
        CommandResult result;
        if (app.got_subcommand("report")) {
            std::optional<Config> cfg;
            if (!config_path.empty()) {
                cfg = load_config(config_path);
            }
            dir = !out_dir.empty() ? std::filesystem::path(out_dir)
                                   : cfg && cfg->out_dir ? *cfg->out_dir : std::filesystem::path("afshar_out");
            result = report(dir);
        } else {
            Config cfg = config_path.empty() ? parse_config("") : load_config(config_path);
            dir = !out_dir.empty() ? std::filesystem::path(out_dir)
                                   : cfg.out_dir ? *cfg.out_dir : std::filesystem::path("afshar_out");
            auto run_seed = seed ? seed : cfg.seed;
            if (app.got_subcommand("simulate")) {
                SimulateOptions o;
                if (!scenario.empty()) {
                    o.slits = scenario == "both"    ? SlitSelection::kBoth
                              : scenario == "upper" ? SlitSelection::kUpperOnly
                                                    : SlitSelection::kLowerOnly;
                }
                if (!grid.empty()) {
                    o.grid = grid == "in" ? GridPlacement::kIn : GridPlacement::kOut;
                }
                result = simulate(cfg, o);
            } else if (app.got_subcommand("duality")) {
                DualityOptions o;
                for (const auto &p : probes) {
                    o.probes.push_back(parse_pair(p, "--probe"));
                }
                o.detectors = detectors;
                o.ladder_rungs = rungs;
                o.seed = run_seed.value_or(1);
                if (!pattern.empty()) {
                    o.pattern = pattern;
                }
                result = duality(cfg, o);
            } else {
                RemnantOptions o;
                if (!direction.empty()) {
                    o.direction = parse_pair(direction, "--direction");
                }
                o.seed = run_seed;
                o.samples = samples.value_or(cfg.samples);
                if (samples && !run_seed) {
                    throw ConfigError("--samples needs a seed (--seed or seed in the config)");
                }
                o.qubit_sequence = parse_sequence(sequence);
                result = remnant(cfg, o);
            }
        }
        result.files.commit(dir);
        out << result.text;
        out << "wrote " << result.files.files().size() << " file(s) to " << dir.string() << "\n";
        return kExitOk;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BandLimitError &e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace afshar::cli
