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

#include "afshar/duality.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace afshar {
namespace {

constexpr double kNormTolerance = 1e-12;

bool is_unitary(const Matrix2c &u) {
    Matrix2c residual = u.adjoint() * u - Matrix2c::Identity();
    return residual.cwiseAbs().maxCoeff() <= kUnitaryTolerance;
}

Matrix2c rotation(double angle) {
    Matrix2c r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

VKPair from_overlap(Complex overlap) {
    double v = std::min(1.0, std::abs(overlap));
    double k = std::sqrt(std::clamp(1.0 - v * v, 0.0, 1.0));
    return {v, std::clamp(k, 0.0, 1.0)};
}

Complex complex_normal(std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    double re = normal(rng);
    double im = normal(rng);
    return {re, im};
}

}  // namespace

ProbeAmplitudes::ProbeAmplitudes(Complex a, Complex b) : a_(a), b_(b) {
    double norm = std::norm(a) + std::norm(b);
    if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
        throw std::invalid_argument("ProbeAmplitudes: |a|^2 + |b|^2 must equal 1");
    }
}

DetectorModel::DetectorModel(Vector2c d, Matrix2c u_plus, Matrix2c u_minus)
    : d_(std::move(d)), u_plus_(std::move(u_plus)), u_minus_(std::move(u_minus)) {
    if (!(std::abs(d_.norm() - 1.0) <= kNormTolerance)) {
        throw std::invalid_argument("DetectorModel: initial detector state must be normalized");
    }
    if (!is_unitary(u_plus_) || !is_unitary(u_minus_)) {
        throw std::invalid_argument("DetectorModel: path operators must be unitary");
    }
}

std::vector<double> feynman_pattern(const ComplexField &phi1, const ComplexField &phi2, const ProbeAmplitudes &probe) {
    if (!phi1.compatible_with(phi2)) {
        throw std::invalid_argument("feynman_pattern: fields must share grid and wavelength");
    }
    std::vector<double> out(phi1.size());
    Complex a = probe.a();
    Complex b = probe.b();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::norm(a * phi1[i] + b * phi2[i]) + std::norm(a * phi2[i] + b * phi1[i]);
    }
    return out;
}

VKPair vk_from_probe(const ProbeAmplitudes &probe) {
    return from_overlap(2.0 * probe.a() * probe.b());
}

VKPair vk_from_detector(const DetectorModel &model) {
    const Vector2c &d = model.initial_state();
    Complex overlap = d.dot(model.u_minus() * model.u_plus().adjoint() * d);
    return from_overlap(overlap);
}

VKPair vk_from_detector_overlap(const DetectorModel &model) {
    const Vector2c &d = model.initial_state();
    Vector2c minus = model.u_minus() * d;
    Vector2c plus = model.u_plus() * d;
    return from_overlap(minus.dot(plus));
}

DetectorModel rotation_detector(double a, double b) {
    if (!(std::abs(a * a + b * b - 1.0) <= kNormTolerance)) {
        throw std::invalid_argument("rotation_detector: a^2 + b^2 must equal 1");
    }
    Vector2c d(std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2);
    double to_ab = std::atan2(b, a) - std::numbers::pi / 4;
    double to_ba = std::atan2(a, b) - std::numbers::pi / 4;
    return DetectorModel(d, rotation(to_ab), rotation(to_ba));
}

Matrix2c random_unitary(std::mt19937_64 &rng) {
    Matrix2c z;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            z(r, c) = complex_normal(rng);
        }
    }
    Eigen::HouseholderQR<Matrix2c> qr(z);
    Matrix2c q = qr.householderQ();
    Matrix2c r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase freedom of QR so Q is Haar distributed.
    for (int c = 0; c < 2; ++c) {
        Complex diag = r(c, c);
        double mag = std::abs(diag);
        if (mag > 0.0) {
            q.col(c) *= diag / mag;
        }
    }
    return q;
}

DetectorModel random_detector(std::mt19937_64 &rng) {
    Vector2c d(complex_normal(rng), complex_normal(rng));
    d.normalize();
    Matrix2c u_plus = random_unitary(rng);
    Matrix2c u_minus = random_unitary(rng);
    return DetectorModel(d, u_plus, u_minus);
}

double duality_check(const VKPair &pair) {
    return pair.V * pair.V + pair.K * pair.K;
}

VisibilityEstimate visibility_from_pattern(std::span<const double> intensity, const Grid &grid, double bin_width,
                                           const Interval &region, double anchor_offset) {
    if (intensity.size() != grid.size()) {
        throw std::invalid_argument("visibility_from_pattern: intensity length does not match grid");
    }
    if (!(bin_width >= grid.spacing() * (1.0 - 1e-12))) {
        throw std::invalid_argument("visibility_from_pattern: bin_width must be at least the grid spacing");
    }
    double half = 0.5 * grid.spacing();
    if (!(region.lo <= region.hi) || region.lo < grid.first() - half || region.hi > grid.last() + half) {
        throw std::invalid_argument("visibility_from_pattern: region must lie inside the grid");
    }

    const double eps = 1e-9;
    double start = region.lo + anchor_offset;
    // Bin k covers [start + k w, start + (k+1) w); keep those inside region.
    auto first_bin = static_cast<long>(std::ceil((region.lo - start) / bin_width - eps));
    auto last_bin = static_cast<long>(std::floor((region.hi - start) / bin_width + eps)) - 1;
    if (last_bin - first_bin + 1 < 2) {
        throw std::invalid_argument("visibility_from_pattern: region holds fewer than two bins");
    }
    std::size_t n_bins = static_cast<std::size_t>(last_bin - first_bin + 1);
    std::vector<double> sums(n_bins, 0.0);
    std::vector<std::size_t> counts(n_bins, 0);
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        double x = grid.coordinate(i);
        if (!region.contains(x)) {
            continue;
        }
        auto k = static_cast<long>(std::floor((x - start) / bin_width + eps));
        if (k < first_bin || k > last_bin) {
            continue;
        }
        auto slot = static_cast<std::size_t>(k - first_bin);
        sums[slot] += intensity[i];
        counts[slot] += 1;
    }

    VisibilityEstimate est;
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < n_bins; ++b) {
        if (counts[b] == 0) {
            continue;
        }
        double mean = sums[b] / static_cast<double>(counts[b]);
        hi = std::max(hi, mean);
        lo = std::min(lo, mean);
        ++est.bins;
    }
    if (est.bins < 2) {
        throw std::invalid_argument("visibility_from_pattern: fewer than two populated bins");
    }
    if (!(hi + lo > 0.0)) {
        est.zero_intensity = true;
        est.visibility = 0.0;
        return est;
    }
    est.visibility = std::clamp((hi - lo) / (hi + lo), 0.0, 1.0);
    return est;
}

std::vector<double> cosine_pattern(const Grid &grid, double period) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = 1.0 + std::cos(2.0 * std::numbers::pi * grid.coordinate(i) / period);
    }
    return out;
}

std::vector<LadderRung> cosine_visibility_ladder(const Grid &grid, std::size_t samples_per_period, std::size_t rungs) {
    if (samples_per_period < 2 || samples_per_period % 2 != 0) {
        throw std::invalid_argument("cosine_visibility_ladder: samples_per_period must be even and at least 2");
    }
    // Widths that tile the half period put bin centers on both maxima and
    // minima; the full period closes the ladder.
    std::vector<std::size_t> divisors;
    for (std::size_t b = 1; b <= samples_per_period / 2; ++b) {
        if ((samples_per_period / 2) % b == 0) {
            divisors.push_back(b);
        }
    }
    divisors.push_back(samples_per_period);
    if (rungs < 2 || rungs > divisors.size()) {
        throw std::invalid_argument("cosine_visibility_ladder: rung count must be between 2 and " +
                                    std::to_string(divisors.size()));
    }

    double period = static_cast<double>(samples_per_period) * grid.spacing();
    double first_max = std::ceil(grid.first() / period) * period;
    auto periods = static_cast<long>(std::floor((grid.last() - first_max) / period + 1e-9));
    if (periods < 3) {
        throw std::invalid_argument("cosine_visibility_ladder: grid holds fewer than three periods");
    }
    Interval region{first_max, first_max + static_cast<double>(periods) * period};
    auto pattern = cosine_pattern(grid, period);

    std::vector<LadderRung> ladder;
    for (std::size_t j = 0; j < rungs; ++j) {
        std::size_t pick = (j * (divisors.size() - 1) + (rungs - 1) / 2) / (rungs - 1);
        double width = static_cast<double>(divisors[pick]) * grid.spacing();
        if (!ladder.empty() && ladder.back().bin_width == width) {
            continue;
        }
        auto est = visibility_from_pattern(pattern, grid, width, region, width / 2);
        ladder.push_back({width, est.visibility});
    }
    return ladder;
}

}  // namespace afshar
