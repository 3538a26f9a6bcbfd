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


// Helpers shared by the unit tests. Nothing here is used by the library.

#ifndef AFSHAR_TEST_SUPPORT_H
#define AFSHAR_TEST_SUPPORT_H

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "afshar/wavefield.h"

namespace afshar::testing {

// Random field whose spectrum is confined to |bin| <= max_bin.
inline ComplexField random_bandlimited_field(const Grid &grid, double wavelength, std::size_t max_bin,
                                             std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    std::size_t n = grid.size();
    std::vector<Complex> u(n);
    for (long m = -static_cast<long>(max_bin); m <= static_cast<long>(max_bin); ++m) {
        Complex c(normal(rng), normal(rng));
        for (std::size_t i = 0; i < n; ++i) {
            double phase = 2.0 * std::numbers::pi * static_cast<double>(m) * static_cast<double>(i) /
                           static_cast<double>(n);
            u[i] += c * std::polar(1.0, phase);
        }
    }
    return ComplexField(grid, std::move(u), wavelength);
}

// Angular-spectrum propagation by a direct O(N^2) DFT. Independent of the
// library's FFT path. Phases are relative to the on-axis carrier.
inline std::vector<Complex> direct_dft_propagate(const ComplexField &field, double z) {
    std::size_t n = field.size();
    double dx = field.grid().spacing();
    double k = 2.0 * std::numbers::pi / field.wavelength();
    std::vector<Complex> spectrum(n);
    for (std::size_t j = 0; j < n; ++j) {
        Complex acc;
        for (std::size_t i = 0; i < n; ++i) {
            acc += field[i] * std::polar(1.0, -2.0 * std::numbers::pi * double(j * i % n) / double(n));
        }
        long m = j < n / 2 ? long(j) : long(j) - long(n);
        double kx = 2.0 * std::numbers::pi * double(m) / (double(n) * dx);
        double kz2 = k * k - kx * kx;
        spectrum[j] = kz2 > 0 ? acc * std::polar(1.0, z * (std::sqrt(kz2) - k)) : Complex{};
    }
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc;
        for (std::size_t j = 0; j < n; ++j) {
            acc += spectrum[j] * std::polar(1.0, 2.0 * std::numbers::pi * double(j * i % n) / double(n));
        }
        out[i] = acc / double(n);
    }
    return out;
}

inline double max_abs_diff(const ComplexField &a, const ComplexField &b) {
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

inline double max_abs(const ComplexField &a) {
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i]));
    }
    return worst;
}

}  // namespace afshar::testing

#endif  // AFSHAR_TEST_SUPPORT_H
