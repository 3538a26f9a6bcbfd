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


#ifndef AFSHAR_TOOLS_CONFIG_H
#define AFSHAR_TOOLS_CONFIG_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "afshar/apparatus.h"

namespace afshar::cli {

/// Bad configuration or command-line input (exit code 2).
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct Config {
    AfsharGeometry geometry;
    std::size_t n_samples = 16384;
    double spacing = 6e-6;
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    std::size_t samples = 1000;

    Grid grid() const {
        return Grid(n_samples, spacing);
    }
};

/// Parses flat `key = value` text. `#` starts a comment; lengths are in
/// meters. When z_lens_to_detectors is absent it is set from the imaging
/// condition. Throws ConfigError on unknown or repeated keys, malformed
/// numbers, or an invalid geometry.
Config parse_config(std::string_view text);

/// Reads and parses a config file; a missing file is a ConfigError.
Config load_config(const std::filesystem::path &path);

double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_unsigned(std::string_view text, std::string_view what);

}  // namespace afshar::cli

#endif  // AFSHAR_TOOLS_CONFIG_H
