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

#include "afshar/wavefield.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fft.h"

namespace afshar {
namespace {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

void require_finite(const ComplexField &field, const char *op) {
    for (const auto &u : field.amplitudes()) {
        if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) {
            throw std::domain_error(std::string(op) + ": field contains non-finite amplitudes");
        }
    }
}

// Angular wavenumber of DFT bin k on `grid`.
double bin_wavenumber(std::size_t k, const Grid &grid) {
    return 2.0 * std::numbers::pi * static_cast<double>(detail::frequency_index(k, grid.size())) / grid.extent();
}

}  // namespace

BandLimitError::BandLimitError(std::string stage, const std::string &detail)
    : std::runtime_error("band-limit guard failed at stage '" + stage + "': " + detail), stage_(std::move(stage)) {
}

Grid::Grid(std::size_t n_samples, double spacing, double center)
    : n_samples_(n_samples), spacing_(spacing), center_(center) {
    if (!is_power_of_two(n_samples)) {
        throw std::invalid_argument("Grid: n_samples must be a power of two, got " + std::to_string(n_samples));
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw std::invalid_argument("Grid: spacing must be positive and finite");
    }
    if (!std::isfinite(center)) {
        throw std::invalid_argument("Grid: center must be finite");
    }
}

std::vector<double> Grid::coordinates() const {
    std::vector<double> xs(n_samples_);
    for (std::size_t i = 0; i < n_samples_; ++i) {
        xs[i] = coordinate(i);
    }
    return xs;
}

ComplexField::ComplexField(Grid grid, std::vector<Complex> amplitudes, double wavelength)
    : grid_(grid), amplitudes_(std::move(amplitudes)), wavelength_(wavelength) {
    if (amplitudes_.size() != grid_.size()) {
        throw std::invalid_argument("ComplexField: amplitude count does not match grid size");
    }
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw std::invalid_argument("ComplexField: wavelength must be positive and finite");
    }
}

ComplexField ComplexField::zeros(const Grid &grid, double wavelength) {
    return ComplexField(grid, std::vector<Complex>(grid.size()), wavelength);
}

double ComplexField::wavenumber() const {
    return 2.0 * std::numbers::pi / wavelength_;
}

bool ComplexField::compatible_with(const ComplexField &other) const {
    return grid_ == other.grid_ && wavelength_ == other.wavelength_;
}

ComplexField operator+(const ComplexField &lhs, const ComplexField &rhs) {
    if (!lhs.compatible_with(rhs)) {
        throw std::invalid_argument("ComplexField +: grid or wavelength mismatch");
    }
    std::vector<Complex> sum(lhs.size());
    for (std::size_t i = 0; i < sum.size(); ++i) {
        sum[i] = lhs.amplitudes_[i] + rhs.amplitudes_[i];
    }
    return ComplexField(lhs.grid_, std::move(sum), lhs.wavelength_);
}

ComplexField operator*(Complex scale, const ComplexField &field) {
    std::vector<Complex> out(field.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = scale * field.amplitudes_[i];
    }
    return ComplexField(field.grid_, std::move(out), field.wavelength_);
}

Mask::Mask(Grid grid, std::vector<Complex> transmission) : grid_(grid), transmission_(std::move(transmission)) {
    if (transmission_.size() != grid_.size()) {
        throw std::invalid_argument("Mask: transmission count does not match grid size");
    }
    for (const auto &t : transmission_) {
        if (!(std::abs(t) <= 1.0 + 1e-12)) {
            throw std::invalid_argument("Mask: |t| must not exceed 1 (passive element)");
        }
    }
}

Mask Mask::ones(const Grid &grid) {
    return Mask(grid, std::vector<Complex>(grid.size(), Complex(1.0, 0.0)));
}

Mask Mask::zeros(const Grid &grid) {
    return Mask(grid, std::vector<Complex>(grid.size()));
}

Mask Mask::from_amplitude(const Grid &grid, std::span<const double> amplitude) {
    std::vector<Complex> t(amplitude.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = std::clamp(amplitude[i], 0.0, 1.0);
    }
    return Mask(grid, std::move(t));
}

Mask Mask::from_intensity(const Grid &grid, std::span<const double> intensity_transmission) {
    std::vector<Complex> t(intensity_transmission.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = std::sqrt(std::clamp(intensity_transmission[i], 0.0, 1.0));
    }
    return Mask(grid, std::move(t));
}

std::vector<double> soft_rect(const Grid &grid, double lo, double hi, double softening) {
    if (!(hi >= lo)) {
        throw std::invalid_argument("soft_rect: hi must not be below lo");
    }
    if (!(softening >= 0.0)) {
        throw std::invalid_argument("soft_rect: softening must be non-negative");
    }
    std::vector<double> out(grid.size());
    double dx = grid.spacing();
    if (softening == 0.0) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            double x = grid.coordinate(i);
            double overlap = std::min(hi, x + 0.5 * dx) - std::max(lo, x - 0.5 * dx);
            out[i] = std::clamp(overlap / dx, 0.0, 1.0);
        }
        return out;
    }
    double scale = 1.0 / (std::numbers::sqrt2 * softening);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double x = grid.coordinate(i);
        out[i] = std::clamp(0.5 * (std::erf((x - lo) * scale) - std::erf((x - hi) * scale)), 0.0, 1.0);
    }
    return out;
}

ComplexField make_plane_wave(const Grid &grid, double wavelength, double tilt_angle) {
    if (!(wavelength > 0.0)) {
        throw std::invalid_argument("make_plane_wave: wavelength must be positive");
    }
    double kx = 2.0 * std::numbers::pi / wavelength * std::sin(tilt_angle);
    double nyquist = std::numbers::pi / grid.spacing();
    if (!(std::abs(kx) < nyquist)) {
        std::ostringstream msg;
        msg << "make_plane_wave: transverse wavenumber " << kx << " rad/m aliases (Nyquist " << nyquist << " rad/m)";
        throw std::domain_error(msg.str());
    }
    std::vector<Complex> u(grid.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = std::polar(1.0, kx * grid.coordinate(i));
    }
    return ComplexField(grid, std::move(u), wavelength);
}

ComplexField propagate(const ComplexField &field, double distance) {
    require_finite(field, "propagate");
    if (!std::isfinite(distance)) {
        throw std::domain_error("propagate: distance must be finite");
    }
    if (distance == 0.0) {
        return field;
    }
    const Grid &grid = field.grid();
    double k = field.wavenumber();
    std::vector<Complex> spectrum =
        detail::fft_forward(std::vector<Complex>(field.amplitudes().begin(), field.amplitudes().end()));
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        double kx = bin_wavenumber(j, grid);
        double kz2 = k * k - kx * kx;
        // kz - k written to avoid cancellation; the carrier exp(i k z) is dropped.
        double phase = -distance * kx * kx / (k + std::sqrt(kz2));
        spectrum[j] = kz2 > 0.0 ? spectrum[j] * std::polar(1.0, phase) : Complex(0.0, 0.0);
    }
    return ComplexField(grid, detail::fft_inverse(spectrum), field.wavelength());
}

ComplexField apply_mask(const ComplexField &field, const Mask &mask) {
    if (!(field.grid() == mask.grid())) {
        throw std::invalid_argument("apply_mask: mask grid does not match field grid");
    }
    std::vector<Complex> out(field.size());
    auto t = mask.transmission();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = field[i] * t[i];
    }
    return ComplexField(field.grid(), std::move(out), field.wavelength());
}

ComplexField thin_lens(const ComplexField &field, double focal_length) {
    if (focal_length == 0.0 || std::isnan(focal_length)) {
        throw std::invalid_argument("thin_lens: focal length must be non-zero");
    }
    const Grid &grid = field.grid();
    double x_max = std::max(std::abs(grid.first()), std::abs(grid.last()));
    double curvature = std::numbers::pi / (field.wavelength() * focal_length);
    if (std::abs(curvature * x_max * x_max) < 1e-15) {
        return field;
    }
    std::vector<Complex> out(field.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double x = grid.coordinate(i);
        out[i] = field[i] * std::polar(1.0, -curvature * x * x);
    }
    return ComplexField(grid, std::move(out), field.wavelength());
}

std::vector<double> intensity(const ComplexField &field) {
    std::vector<double> out(field.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::norm(field[i]);
    }
    return out;
}

PowerReading total_power(const ComplexField &field, std::optional<Interval> window) {
    const Grid &grid = field.grid();
    if (!window) {
        return {total_power(field), false};
    }
    double half = 0.5 * grid.spacing();
    if (!(window->lo <= window->hi) || window->lo < grid.first() - half || window->hi > grid.last() + half) {
        throw std::invalid_argument("total_power: window must be an ordered interval inside the grid");
    }
    PowerReading reading;
    std::size_t count = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (window->contains(grid.coordinate(i))) {
            sum += std::norm(field[i]);
            ++count;
        }
    }
    reading.power = sum * grid.spacing();
    reading.empty_window = count == 0;
    return reading;
}

double total_power(const ComplexField &field) {
    double sum = 0.0;
    for (const auto &u : field.amplitudes()) {
        sum += std::norm(u);
    }
    return sum * field.grid().spacing();
}

SpectrumReport analyze_spectrum(const ComplexField &field) {
    std::size_t n = field.size();
    auto spectrum = detail::fft_forward(std::vector<Complex>(field.amplitudes().begin(), field.amplitudes().end()));

    // Energy per |frequency| index 0..n/2, in cycles per sample = index / n.
    std::vector<double> by_frequency(n / 2 + 1, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double e = std::norm(spectrum[k]);
        by_frequency[static_cast<std::size_t>(std::labs(detail::frequency_index(k, n)))] += e;
        total += e;
    }

    SpectrumReport report;
    if (!(total > 0.0)) {
        report.samples_per_finest_fringe = std::numeric_limits<double>::infinity();
        return report;
    }

    double nyquist_index = static_cast<double>(n) / 2.0;
    double outer = 0.0;
    for (std::size_t m = 0; m < by_frequency.size(); ++m) {
        if (static_cast<double>(m) >= (1.0 - kOuterBandWidth) * nyquist_index) {
            outer += by_frequency[m];
        }
    }
    report.outer_band_fraction = outer / total;

    // Smallest frequency index above which no more than the tail fraction lies.
    double tail = 0.0;
    std::size_t band_edge = 0;
    for (std::size_t m = by_frequency.size(); m-- > 0;) {
        tail += by_frequency[m];
        if (tail > kBandwidthTailFraction * total) {
            band_edge = m;
            break;
        }
    }
    report.samples_per_finest_fringe = band_edge == 0 ? std::numeric_limits<double>::infinity()
                                                      : static_cast<double>(n) / static_cast<double>(band_edge);
    return report;
}

void check_band_limit(const ComplexField &field, std::string_view stage) {
    for (const auto &u : field.amplitudes()) {
        if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) {
            throw BandLimitError(std::string(stage), "field contains non-finite amplitudes");
        }
    }
    SpectrumReport report = analyze_spectrum(field);
    if (!(report.outer_band_fraction < kMaxOuterBandFraction)) {
        std::ostringstream msg;
        msg << "spectral energy fraction " << report.outer_band_fraction << " in the outer "
            << kOuterBandWidth * 100 << "% of the Nyquist band exceeds " << kMaxOuterBandFraction;
        throw BandLimitError(std::string(stage), msg.str());
    }
    if (!(report.samples_per_finest_fringe >= kMinSamplesPerFringe)) {
        std::ostringstream msg;
        msg << "finest significant fringe has " << report.samples_per_finest_fringe << " samples per period (need >= "
            << kMinSamplesPerFringe << ")";
        throw BandLimitError(std::string(stage), msg.str());
    }
}

SpectralInterpolator::SpectralInterpolator(const ComplexField &field)
    : grid_(field.grid()),
      spectrum_(detail::fft_forward(std::vector<Complex>(field.amplitudes().begin(), field.amplitudes().end()))) {
}

Complex SpectralInterpolator::amplitude(double x) const {
    std::size_t n = spectrum_.size();
    double t = (x - grid_.first()) / grid_.spacing();
    double step = 2.0 * std::numbers::pi * t / static_cast<double>(n);
    Complex sum(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        long f = detail::frequency_index(k, n);
        if (k == n / 2) {
            // Nyquist bin: split evenly between +/- frequencies.
            sum += spectrum_[k] * std::cos(step * static_cast<double>(n / 2));
        } else {
            sum += spectrum_[k] * std::polar(1.0, step * static_cast<double>(f));
        }
    }
    return sum / static_cast<double>(n);
}

}  // namespace afshar
