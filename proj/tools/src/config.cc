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


#include "config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace afshar::cli {
namespace {

std::string_view trim(std::string_view s) {
    const char *ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(value)) {
        throw ConfigError(std::string(what) + ": expected a finite number, got '" + std::string(text) + "'");
    }
    return value;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view what) {
    text = trim(text);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(std::string(what) + ": expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return value;
}

Config parse_config(std::string_view text) {
    Config cfg;
    AfsharGeometry &g = cfg.geometry;
    bool detector_distance_given = false;

    using Setter = std::function<void(std::string_view, std::string_view)>;
    auto real = [](double &slot) -> Setter {
        return [&slot](std::string_view v, std::string_view key) { slot = parse_double(v, key); };
    };
    std::map<std::string, Setter, std::less<>> setters{
        {"wavelength", real(g.wavelength)},
        {"slit_width", real(g.slit_width)},
        {"slit_separation", real(g.slit_separation)},
        {"z_slits_to_grid", real(g.z_slits_to_grid)},
        {"z_grid_to_lens", real(g.z_grid_to_lens)},
        {"focal_length", real(g.focal_length)},
        {"z_lens_to_detectors",
         [&](std::string_view v, std::string_view key) {
             g.z_lens_to_detectors = parse_double(v, key);
             detector_distance_given = true;
         }},
        {"wire_width", real(g.wire_width)},
        {"edge_softening", real(g.edge_softening)},
        {"spacing", real(cfg.spacing)},
        {"n_wires",
         [&](std::string_view v, std::string_view key) {
             auto n = parse_unsigned(v, key);
             if (n > 1000) {
                 throw ConfigError("n_wires: too many wires");
             }
             g.n_wires = static_cast<int>(n);
         }},
        {"n_samples", [&](std::string_view v, std::string_view key) { cfg.n_samples = parse_unsigned(v, key); }},
        {"samples", [&](std::string_view v, std::string_view key) { cfg.samples = parse_unsigned(v, key); }},
        {"seed", [&](std::string_view v, std::string_view key) { cfg.seed = parse_unsigned(v, key); }},
        {"out_dir",
         [&](std::string_view v, std::string_view) {
             if (v.empty()) {
                 throw ConfigError("out_dir: empty path");
             }
             cfg.out_dir = std::filesystem::path(std::string(v));
         }},
    };

    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
        if (!seen.insert(std::string(key)).second) {
            throw ConfigError("config line " + std::to_string(line_no) + ": repeated key '" + std::string(key) + "'");
        }
        it->second(value, key);
    }

    if (!detector_distance_given) {
        double s = g.object_distance();
        if (!(s > g.focal_length)) {
            throw ConfigError("config: the lens cannot form a real image (object distance must exceed focal_length)");
        }
        g.z_lens_to_detectors = g.conjugate_image_distance();
    }
    try {
        g.validate();
        (void)cfg.grid();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

Config load_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace afshar::cli
