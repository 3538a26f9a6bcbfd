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


#ifndef AFSHAR_TOOLS_COMMANDS_H
#define AFSHAR_TOOLS_COMMANDS_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "afshar/apparatus.h"
#include "afshar/remnant.h"
#include "config.h"
#include "csv.h"

namespace afshar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Samples per fringe period of the ideal cosine used for the bin ladder.
inline constexpr std::size_t kLadderSamplesPerPeriod = 240;

struct SimulateOptions {
    /// Unset means every value.
    std::optional<SlitSelection> slits;
    std::optional<GridPlacement> grid;
};

struct DualityOptions {
    /// (a, b) pairs; normalized before use. Empty selects a default sweep.
    std::vector<std::pair<double, double>> probes;
    std::size_t detectors = 1000;
    std::size_t ladder_rungs = 9;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> pattern;
};

struct RemnantOptions {
    std::optional<std::pair<double, double>> direction;
    std::optional<std::uint64_t> seed;
    std::size_t samples = 1000;
    std::vector<SpinAxis> qubit_sequence{SpinAxis::kX, SpinAxis::kZ, SpinAxis::kX};
};

struct CommandResult {
    OutputSet files;
    /// Human-readable summary printed on success.
    std::string text;
};

CommandResult simulate(const Config &config, const SimulateOptions &options);
CommandResult duality(const Config &config, const DualityOptions &options);
CommandResult remnant(const Config &config, const RemnantOptions &options);
/// Reads the CSVs in `dir` and recomputes every verdict from them.
CommandResult report(const std::filesystem::path &dir);

/// Explanation emitted with every remnant run and in the report.
extern const char *const kUnconditionedPatternNote;

/// Full command-line entry point. Writes files only on success.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace afshar::cli

#endif  // AFSHAR_TOOLS_COMMANDS_H
