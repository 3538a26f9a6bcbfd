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

#ifndef AFSHAR_WAVEFIELD_H
#define AFSHAR_WAVEFIELD_H

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace afshar {

using Complex = std::complex<double>;

/// Raised when a field carries enough energy near the sampling Nyquist limit
/// that spectral propagation would alias. `stage()` names the pipeline step.
class BandLimitError : public std::runtime_error {
   public:
    BandLimitError(std::string stage, const std::string &detail);
    const std::string &stage() const noexcept {
        return stage_;
    }

   private:
    std::string stage_;
};

/// Closed coordinate interval [lo, hi], in meters.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const {
        return hi - lo;
    }
    bool contains(double x) const {
        return lo <= x && x <= hi;
    }
    bool operator==(const Interval &) const = default;
};

/// Uniform 1D transverse sampling. Sample i sits at
/// center + (i - n/2) * spacing, so for centered grids x = 0 is sample n/2.
class Grid {
   public:
    /// Throws std::invalid_argument unless n_samples is a power of two and
    /// spacing is positive and finite.
    Grid(std::size_t n_samples, double spacing, double center = 0.0);

    std::size_t size() const {
        return n_samples_;
    }
    double spacing() const {
        return spacing_;
    }
    double center() const {
        return center_;
    }
    double extent() const {
        return static_cast<double>(n_samples_) * spacing_;
    }
    double coordinate(std::size_t i) const {
        return center_ + (static_cast<double>(i) - static_cast<double>(n_samples_ / 2)) * spacing_;
    }
    double first() const {
        return coordinate(0);
    }
    double last() const {
        return coordinate(n_samples_ - 1);
    }
    std::vector<double> coordinates() const;

    /// Index whose reflection through the center sample is `i`. Exact on the
    /// periodic grid: sample 0 maps to itself.
    std::size_t mirror_index(std::size_t i) const {
        return (n_samples_ - i) % n_samples_;
    }

    bool operator==(const Grid &) const = default;

   private:
    std::size_t n_samples_;
    double spacing_;
    double center_;
};

/// Monochromatic scalar field sampled on a Grid.
class ComplexField {
   public:
    ComplexField(Grid grid, std::vector<Complex> amplitudes, double wavelength);

    static ComplexField zeros(const Grid &grid, double wavelength);

    const Grid &grid() const {
        return grid_;
    }
    double wavelength() const {
        return wavelength_;
    }
    double wavenumber() const;
    std::size_t size() const {
        return amplitudes_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    const Complex &operator[](std::size_t i) const {
        return amplitudes_[i];
    }

    /// Same grid and wavelength.
    bool compatible_with(const ComplexField &other) const;

    friend ComplexField operator+(const ComplexField &lhs, const ComplexField &rhs);
    friend ComplexField operator*(Complex scale, const ComplexField &field);

   private:
    Grid grid_;
    std::vector<Complex> amplitudes_;
    double wavelength_;
};

/// Passive amplitude mask, |t_i| <= 1.
class Mask {
   public:
    Mask(Grid grid, std::vector<Complex> transmission);

    static Mask ones(const Grid &grid);
    static Mask zeros(const Grid &grid);
    /// Amplitude transmission taken directly from a real profile in [0, 1].
    static Mask from_amplitude(const Grid &grid, std::span<const double> amplitude);
    /// Amplitude transmission sqrt(T) for an intensity transmission T in [0, 1].
    static Mask from_intensity(const Grid &grid, std::span<const double> intensity_transmission);

    const Grid &grid() const {
        return grid_;
    }
    std::span<const Complex> transmission() const {
        return transmission_;
    }

   private:
    Grid grid_;
    std::vector<Complex> transmission_;
};

/// Rectangle [lo, hi] sampled on `grid` with edges blurred by a Gaussian of
/// standard deviation `softening`. The sampled values sum to (hi - lo) / spacing
/// (to aliasing accuracy) for any softening. softening == 0 gives the
/// fraction of each sample cell covered by the rectangle.
std::vector<double> soft_rect(const Grid &grid, double lo, double hi, double softening);

ComplexField make_plane_wave(const Grid &grid, double wavelength, double tilt_angle);

/// Angular-spectrum propagation by `distance` (negative back-propagates).
/// Evanescent components are discarded. The phase is taken relative to the
/// on-axis carrier exp(i k z), which would only add a global phase and
/// costs precision over long distances.
ComplexField propagate(const ComplexField &field, double distance);

ComplexField apply_mask(const ComplexField &field, const Mask &mask);

/// Multiplies by exp(-i pi x^2 / (lambda f)).
ComplexField thin_lens(const ComplexField &field, double focal_length);

std::vector<double> intensity(const ComplexField &field);

struct PowerReading {
    double power = 0.0;
    /// True when the requested window contained no samples.
    bool empty_window = false;
};

/// Riemann-sum power, sum |u|^2 * spacing, optionally restricted to a window.
PowerReading total_power(const ComplexField &field, std::optional<Interval> window);
double total_power(const ComplexField &field);

/// Spectral occupancy summary used by the band-limit guard.
struct SpectrumReport {
    /// Fraction of spectral energy in the outer 5% of the Nyquist band.
    double outer_band_fraction = 0.0;
    /// Sampling frequency divided by the bandwidth holding all but
    /// kBandwidthTailFraction of the energy; "samples per finest fringe".
    double samples_per_finest_fringe = 0.0;
};

inline constexpr double kOuterBandWidth = 0.05;
inline constexpr double kMaxOuterBandFraction = 1e-6;
inline constexpr double kMinSamplesPerFringe = 4.0;
inline constexpr double kBandwidthTailFraction = 1e-4;

SpectrumReport analyze_spectrum(const ComplexField &field);

/// Throws BandLimitError naming `stage` when the field fails the guard.
void check_band_limit(const ComplexField &field, std::string_view stage);

/// Trigonometric interpolation of a sampled field at arbitrary x, exact for
/// fields band-limited to the grid (treats the grid as one period).
class SpectralInterpolator {
   public:
    explicit SpectralInterpolator(const ComplexField &field);

    Complex amplitude(double x) const;
    double intensity(double x) const {
        return std::norm(amplitude(x));
    }

   private:
    Grid grid_;
    std::vector<Complex> spectrum_;
};

}  // namespace afshar

#endif  // AFSHAR_WAVEFIELD_H
