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

#ifndef AFSHAR_APPARATUS_H
#define AFSHAR_APPARATUS_H

#include <string_view>
#include <vector>

#include "afshar/wavefield.h"

namespace afshar {

/// Physical layout of the two-slit / wire-grid / lens setup. Lengths in meters.
///
/// The upper slit is centered at +slit_separation/2. Plane sigma1 (the wire
/// grid) sits z_slits_to_grid behind the slits; the lens follows after
/// z_grid_to_lens and images the slit plane onto sigma2.
struct AfsharGeometry {
    double wavelength = 650e-9;
    double slit_width = 30e-6;
    double slit_separation = 200e-6;
    double z_slits_to_grid = 1.5;
    double z_grid_to_lens = 0.1;
    double focal_length = 0.8;
    double z_lens_to_detectors = 1.6;
    double wire_width = 100e-6;
    int n_wires = 6;
    /// Gaussian edge blur (std. dev.) applied to slit and wire edges so that
    /// the masks stay inside the sampling band.
    double edge_softening = 9e-6;

    /// Fringe period lambda * L / d at sigma1.
    double fringe_spacing() const;
    /// Object distance from the slits to the lens.
    double object_distance() const {
        return z_slits_to_grid + z_grid_to_lens;
    }
    /// Image distance that satisfies 1/s + 1/s' = 1/f for the current layout.
    double conjugate_image_distance() const;
    /// Lateral magnification s'/s (the image is inverted).
    double magnification() const;

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

enum class SlitSelection { kBoth, kUpperOnly, kLowerOnly };
enum class GridPlacement { kIn, kOut };

struct Scenario {
    SlitSelection slits = SlitSelection::kBoth;
    GridPlacement grid = GridPlacement::kOut;

    bool operator==(const Scenario &) const = default;
};

std::string_view to_string(SlitSelection slits);
std::string_view to_string(GridPlacement grid);

struct SimulationRecord {
    Scenario scenario;
    /// Power arriving at sigma1, before the wire grid.
    double power_incident = 0.0;
    double power_after_grid = 0.0;
    double power_at_detectors = 0.0;
    double power_window_U = 0.0;
    double power_window_L = 0.0;
    /// Intensity arriving at sigma1 (before the grid).
    std::vector<double> intensity_sigma1;
    std::vector<double> intensity_sigma2;
    /// Wire centers used for the grid (empty when the grid is out).
    std::vector<double> minima_positions;
    Interval window_U;
    Interval window_L;
};

/// Default sampling for apparatus runs: 2^14 samples at 6 um.
Grid default_apparatus_grid();

/// Slit-plane field: unit plane wave through the selected (softened) slits.
ComplexField slit_source(const AfsharGeometry &geometry, const Grid &grid, SlitSelection slits);

/// Field arriving at sigma1 from the selected slits. The slit-plane and
/// sigma1 fields both pass check_band_limit.
ComplexField field_at_grid_plane(const AfsharGeometry &geometry, const Grid &grid, SlitSelection slits);

/// Positions of the n_wires both-slit intensity minima at sigma1 nearest the
/// axis, each refined from the analytic seed (m + 1/2) lambda L / d by
/// golden-section search on the interpolated simulated intensity. Throws
/// std::runtime_error when a minimum is not resolvable on the grid or is
/// shallower than kMinimumDepth relative to its brighter neighbouring maximum.
std::vector<double> fringe_minima(const AfsharGeometry &geometry, const Grid &grid);

inline constexpr double kMinimumDepth = 1e-4;

struct WireGrid {
    Mask mask;
    /// n_wires * wire_width / illuminated.width().
    double fill_factor = 0.0;
    /// Outermost wires extended by one fringe spacing on each side.
    Interval illuminated;
};

/// Wires of width geometry.wire_width centered on `minima`. Intensity
/// transmission is 1 - (softened rect) inside each wire.
WireGrid build_wire_grid(const AfsharGeometry &geometry, const Grid &grid, const std::vector<double> &minima);

/// Runs slits -> sigma1 -> [grid] -> lens -> sigma2 and records the power
/// bookkeeping. Every intermediate field passes check_band_limit; failures
/// throw BandLimitError naming the stage.
SimulationRecord run_scenario(const AfsharGeometry &geometry, const Grid &grid, const Scenario &scenario);

/// Same as above with precomputed wire positions (skips the minima search).
SimulationRecord run_scenario(const AfsharGeometry &geometry, const Grid &grid, const Scenario &scenario,
                              const std::vector<double> &minima);

/// Image windows at sigma2: half-width M d / 2 around -M (+/- d/2).
Interval image_window_upper(const AfsharGeometry &geometry);
Interval image_window_lower(const AfsharGeometry &geometry);

/// Power collected by a window. A sample lying exactly on the window
/// boundary at x = 0 (the shared edge of the two image windows) counts
/// half toward each window.
double window_power(std::span<const double> intensity, const Grid &grid, const Interval &window);

/// |P_U - P_L| / (P_U + P_L).
double discrimination(const SimulationRecord &record);

}  // namespace afshar

#endif  // AFSHAR_APPARATUS_H
