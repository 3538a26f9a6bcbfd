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

#include "afshar/apparatus.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace afshar {
namespace {

constexpr double kImagingTolerance = 1e-9;

// Golden-section search for a minimum of f on [lo, hi].
double golden_section_minimize(const std::function<double(double)> &f, double lo, double hi, double tolerance) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> slit_profile(const AfsharGeometry &g, const Grid &grid, double center) {
    return soft_rect(grid, center - g.slit_width / 2, center + g.slit_width / 2, g.edge_softening);
}

}  // namespace

double AfsharGeometry::fringe_spacing() const {
    return wavelength * z_slits_to_grid / slit_separation;
}

double AfsharGeometry::conjugate_image_distance() const {
    return 1.0 / (1.0 / focal_length - 1.0 / object_distance());
}

double AfsharGeometry::magnification() const {
    return z_lens_to_detectors / object_distance();
}

void AfsharGeometry::validate() const {
    auto positive = [](double v, const char *name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string("AfsharGeometry: ") + name + " must be positive");
        }
    };
    positive(wavelength, "wavelength");
    positive(slit_width, "slit_width");
    positive(slit_separation, "slit_separation");
    positive(z_slits_to_grid, "z_slits_to_grid");
    positive(z_grid_to_lens, "z_grid_to_lens");
    positive(focal_length, "focal_length");
    positive(z_lens_to_detectors, "z_lens_to_detectors");
    positive(wire_width, "wire_width");
    if (!(edge_softening >= 0.0) || !std::isfinite(edge_softening)) {
        throw std::invalid_argument("AfsharGeometry: edge_softening must be non-negative");
    }
    if (n_wires < 0 || n_wires % 2 != 0) {
        throw std::invalid_argument("AfsharGeometry: n_wires must be a non-negative even number (wires come in +/- pairs)");
    }
    if (!(slit_separation > slit_width)) {
        throw std::invalid_argument("AfsharGeometry: slit_separation must exceed slit_width");
    }
    if (!(wire_width < fringe_spacing())) {
        throw std::invalid_argument("AfsharGeometry: wire_width must be below the sigma1 fringe spacing");
    }
    double lhs = 1.0 / object_distance() + 1.0 / z_lens_to_detectors;
    double rhs = 1.0 / focal_length;
    if (std::abs(lhs - rhs) > kImagingTolerance * rhs) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "AfsharGeometry: lens does not image the slit plane onto sigma2 (z_lens_to_detectors should be "
            << conjugate_image_distance() << " m)";
        throw std::invalid_argument(msg.str());
    }
}

std::string_view to_string(SlitSelection slits) {
    switch (slits) {
        case SlitSelection::kBoth:
            return "both";
        case SlitSelection::kUpperOnly:
            return "upper";
        case SlitSelection::kLowerOnly:
            return "lower";
    }
    return "?";
}

std::string_view to_string(GridPlacement grid) {
    return grid == GridPlacement::kIn ? "in" : "out";
}

Grid default_apparatus_grid() {
    return Grid(std::size_t{1} << 14, 6e-6);
}

ComplexField slit_source(const AfsharGeometry &geometry, const Grid &grid, SlitSelection slits) {
    std::vector<double> amplitude(grid.size(), 0.0);
    auto add = [&](double center) {
        auto s = slit_profile(geometry, grid, center);
        for (std::size_t i = 0; i < s.size(); ++i) {
            amplitude[i] += s[i];
        }
    };
    if (slits != SlitSelection::kLowerOnly) {
        add(+geometry.slit_separation / 2);
    }
    if (slits != SlitSelection::kUpperOnly) {
        add(-geometry.slit_separation / 2);
    }
    Mask mask = Mask::from_amplitude(grid, amplitude);
    return apply_mask(make_plane_wave(grid, geometry.wavelength, 0.0), mask);
}

ComplexField field_at_grid_plane(const AfsharGeometry &geometry, const Grid &grid, SlitSelection slits) {
    ComplexField source = slit_source(geometry, grid, slits);
    check_band_limit(source, "slits");
    ComplexField field = propagate(source, geometry.z_slits_to_grid);
    check_band_limit(field, "sigma1");
    return field;
}

std::vector<double> fringe_minima(const AfsharGeometry &geometry, const Grid &grid) {
    geometry.validate();
    std::vector<double> minima;
    if (geometry.n_wires == 0) {
        return minima;
    }
    ComplexField sigma1 = field_at_grid_plane(geometry, grid, SlitSelection::kBoth);
    SpectralInterpolator interp(sigma1);
    auto I = [&](double x) { return interp.intensity(x); };
    auto negI = [&](double x) { return -interp.intensity(x); };

    double period = geometry.fringe_spacing();
    double tolerance = 1e-9 * period;
    int half = geometry.n_wires / 2;
    for (int m = -half; m < half; ++m) {
        double seed = (m + 0.5) * period;
        if (seed - period < grid.first() || seed + period > grid.last()) {
            throw std::runtime_error("fringe_minima: fewer than n_wires minima fit inside the grid");
        }
        double x = golden_section_minimize(I, seed - period / 4, seed + period / 4, tolerance);
        if (std::abs(x - seed) > 0.24 * period) {
            throw std::runtime_error("fringe_minima: no interior minimum near seed " + std::to_string(seed));
        }
        double right = -negI(golden_section_minimize(negI, x + period / 4, x + 3 * period / 4, tolerance));
        double left = -negI(golden_section_minimize(negI, x - 3 * period / 4, x - period / 4, tolerance));
        double neighbour = std::max(left, right);
        if (!(neighbour > 0.0) || !(I(x) < kMinimumDepth * neighbour)) {
            std::ostringstream msg;
            msg << "fringe_minima: minimum at " << x << " m is not resolvable (I_min/I_max = " << I(x) / neighbour
                << ")";
            throw std::runtime_error(msg.str());
        }
        minima.push_back(x);
    }
    std::sort(minima.begin(), minima.end());
    return minima;
}

WireGrid build_wire_grid(const AfsharGeometry &geometry, const Grid &grid, const std::vector<double> &minima) {
    std::vector<double> centers = minima;
    std::sort(centers.begin(), centers.end());
    for (std::size_t i = 1; i < centers.size(); ++i) {
        if (centers[i] - centers[i - 1] < geometry.wire_width) {
            throw std::invalid_argument("build_wire_grid: wires overlap");
        }
    }
    std::vector<double> blocked(grid.size(), 0.0);
    for (double c : centers) {
        auto s = soft_rect(grid, c - geometry.wire_width / 2, c + geometry.wire_width / 2, geometry.edge_softening);
        for (std::size_t i = 0; i < s.size(); ++i) {
            blocked[i] += s[i];
        }
    }
    std::vector<double> transmitted(grid.size());
    for (std::size_t i = 0; i < transmitted.size(); ++i) {
        transmitted[i] = 1.0 - blocked[i];
    }
    WireGrid out{Mask::from_intensity(grid, transmitted), 0.0, Interval{}};
    if (!centers.empty()) {
        double period = geometry.fringe_spacing();
        out.illuminated = Interval{centers.front() - period, centers.back() + period};
        out.fill_factor = static_cast<double>(centers.size()) * geometry.wire_width / out.illuminated.width();
    }
    return out;
}

Interval image_window_upper(const AfsharGeometry &geometry) {
    double m = geometry.magnification();
    double center = -m * geometry.slit_separation / 2;
    double half = m * geometry.slit_separation / 2;
    return Interval{center - half, center + half};
}

Interval image_window_lower(const AfsharGeometry &geometry) {
    double m = geometry.magnification();
    double center = m * geometry.slit_separation / 2;
    double half = m * geometry.slit_separation / 2;
    return Interval{center - half, center + half};
}

double window_power(std::span<const double> intensity, const Grid &grid, const Interval &window) {
    double sum = 0.0;
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        double x = grid.coordinate(i);
        if (!window.contains(x)) {
            continue;
        }
        bool on_axis_edge = x == 0.0 && (window.lo == 0.0 || window.hi == 0.0);
        sum += on_axis_edge ? 0.5 * intensity[i] : intensity[i];
    }
    return sum * grid.spacing();
}

SimulationRecord run_scenario(const AfsharGeometry &geometry, const Grid &grid, const Scenario &scenario) {
    std::vector<double> minima;
    if (scenario.grid == GridPlacement::kIn) {
        minima = fringe_minima(geometry, grid);
    }
    return run_scenario(geometry, grid, scenario, minima);
}

SimulationRecord run_scenario(const AfsharGeometry &geometry, const Grid &grid, const Scenario &scenario,
                              const std::vector<double> &minima) {
    geometry.validate();
    SimulationRecord record;
    record.scenario = scenario;

    ComplexField field = slit_source(geometry, grid, scenario.slits);
    check_band_limit(field, "slits");

    field = propagate(field, geometry.z_slits_to_grid);
    check_band_limit(field, "sigma1");
    record.power_incident = total_power(field);
    record.intensity_sigma1 = intensity(field);

    if (scenario.grid == GridPlacement::kIn) {
        WireGrid wires = build_wire_grid(geometry, grid, minima);
        field = apply_mask(field, wires.mask);
        check_band_limit(field, "wire grid");
        record.minima_positions = minima;
    }
    record.power_after_grid = total_power(field);

    field = propagate(field, geometry.z_grid_to_lens);
    check_band_limit(field, "lens input");
    field = thin_lens(field, geometry.focal_length);
    check_band_limit(field, "lens output");
    field = propagate(field, geometry.z_lens_to_detectors);
    check_band_limit(field, "sigma2");

    record.power_at_detectors = total_power(field);
    record.intensity_sigma2 = intensity(field);
    record.window_U = image_window_upper(geometry);
    record.window_L = image_window_lower(geometry);
    record.power_window_U = window_power(record.intensity_sigma2, grid, record.window_U);
    record.power_window_L = window_power(record.intensity_sigma2, grid, record.window_L);
    return record;
}

double discrimination(const SimulationRecord &record) {
    double sum = record.power_window_U + record.power_window_L;
    if (!(record.power_at_detectors > 0.0) || !(sum > 0.0)) {
        throw std::domain_error("discrimination: no power reached the detector windows");
    }
    return std::abs(record.power_window_U - record.power_window_L) / sum;
}

}  // namespace afshar
