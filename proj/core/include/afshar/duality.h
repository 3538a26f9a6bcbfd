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

#ifndef AFSHAR_DUALITY_H
#define AFSHAR_DUALITY_H

#include <Eigen/Dense>
#include <random>
#include <span>
#include <vector>

#include "afshar/wavefield.h"

namespace afshar {

using Vector2c = Eigen::Vector2cd;
using Matrix2c = Eigen::Matrix2cd;

/// Photon-probe amplitudes: `a` scatters into the detector belonging to the
/// path taken, `b` into the other one. |a|^2 + |b|^2 = 1.
class ProbeAmplitudes {
   public:
    ProbeAmplitudes(Complex a, Complex b);

    Complex a() const {
        return a_;
    }
    Complex b() const {
        return b_;
    }

   private:
    Complex a_;
    Complex b_;
};

/// Which-way detector: initial state d and the path-conditioned unitaries.
class DetectorModel {
   public:
    /// Throws std::invalid_argument unless ||d|| = 1 and both matrices are
    /// unitary, entrywise to kUnitaryTolerance.
    DetectorModel(Vector2c d, Matrix2c u_plus, Matrix2c u_minus);

    const Vector2c &initial_state() const {
        return d_;
    }
    const Matrix2c &u_plus() const {
        return u_plus_;
    }
    const Matrix2c &u_minus() const {
        return u_minus_;
    }

   private:
    Vector2c d_;
    Matrix2c u_plus_;
    Matrix2c u_minus_;
};

inline constexpr double kUnitaryTolerance = 1e-12;

struct VKPair {
    double V = 0.0;
    double K = 0.0;
};

/// |a phi1 + b phi2|^2 + |a phi2 + b phi1|^2 at every sample.
std::vector<double> feynman_pattern(const ComplexField &phi1, const ComplexField &phi2, const ProbeAmplitudes &probe);

/// V = |2ab|, K = sqrt(1 - V^2).
VKPair vk_from_probe(const ProbeAmplitudes &probe);

/// V = |<d| U- U+^dagger |d>|, K = sqrt(1 - V^2).
VKPair vk_from_detector(const DetectorModel &model);

/// Overlap convention V = |<U- d | U+ d>|, exposed for comparison with
/// vk_from_detector.
VKPair vk_from_detector_overlap(const DetectorModel &model);

/// Real-rotation detector: d = (1, 1)/sqrt(2), U+ rotates d onto (a, b) and
/// U- rotates d onto (b, a). Requires a^2 + b^2 = 1.
DetectorModel rotation_detector(double a, double b);

/// Haar-random pure detector model.
DetectorModel random_detector(std::mt19937_64 &rng);

/// Haar-random 2x2 unitary.
Matrix2c random_unitary(std::mt19937_64 &rng);

/// V^2 + K^2.
double duality_check(const VKPair &pair);

struct VisibilityEstimate {
    double visibility = 0.0;
    std::size_t bins = 0;
    /// All bins had zero mean intensity; visibility reported as 0.
    bool zero_intensity = false;
};

/// Fringe visibility (max - min) / (max + min) of bin-averaged intensity.
/// Bin boundaries sit at region.lo + anchor_offset + k * bin_width; only bins
/// lying entirely inside `region` are used. A sample belongs to the bin whose
/// half-open [start, start + bin_width) contains it. bin_width equal to the
/// grid spacing reproduces the per-sample estimator.
VisibilityEstimate visibility_from_pattern(std::span<const double> intensity, const Grid &grid, double bin_width,
                                           const Interval &region, double anchor_offset = 0.0);

struct LadderRung {
    double bin_width = 0.0;
    double visibility = 0.0;
};

/// Ideal fringe pattern 1 + cos(2 pi x / period) sampled on `grid`.
std::vector<double> cosine_pattern(const Grid &grid, double period);

/// Coarse-binning ladder for a cosine pattern of `samples_per_period` (even)
/// samples. Candidate widths are the divisors of the half period plus the
/// full period; `rungs` of them are picked evenly from the finest (one
/// sample) to one period. Bins are aligned so one bin is centered on a fringe
/// maximum. Returned in increasing bin width.
std::vector<LadderRung> cosine_visibility_ladder(const Grid &grid, std::size_t samples_per_period, std::size_t rungs);

}  // namespace afshar

#endif  // AFSHAR_DUALITY_H
