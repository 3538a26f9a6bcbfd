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


#include <benchmark/benchmark.h>

#include "afshar/apparatus.h"
#include "afshar/remnant.h"

using namespace afshar;

static void BM_fringe_minima(benchmark::State &state) {
    AfsharGeometry g;
    Grid grid = default_apparatus_grid();
    for (auto _ : state) {
        benchmark::DoNotOptimize(fringe_minima(g, grid));
    }
}
BENCHMARK(BM_fringe_minima)->Unit(benchmark::kMillisecond);

static void BM_run_scenario(benchmark::State &state) {
    AfsharGeometry g;
    Grid grid = default_apparatus_grid();
    auto minima = fringe_minima(g, grid);
    Scenario s{SlitSelection::kBoth, state.range(0) ? GridPlacement::kIn : GridPlacement::kOut};
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_scenario(g, grid, s, state.range(0) ? minima : std::vector<double>{}));
    }
}
BENCHMARK(BM_run_scenario)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_postselect(benchmark::State &state) {
    AfsharGeometry g;
    Grid grid = default_apparatus_grid();
    auto remnant = build_remnant(field_at_grid_plane(g, grid, SlitSelection::kUpperOnly),
                                 field_at_grid_plane(g, grid, SlitSelection::kLowerOnly));
    for (auto _ : state) {
        benchmark::DoNotOptimize(postselect(remnant, VibrationalDirection::plus()));
    }
}
BENCHMARK(BM_postselect);
