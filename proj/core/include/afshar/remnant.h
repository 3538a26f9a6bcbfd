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

#ifndef AFSHAR_REMNANT_H
#define AFSHAR_REMNANT_H

#include <cstdint>
#include <span>
#include <vector>

#include "afshar/wavefield.h"

namespace afshar {

/// Joint particle/detector state after the particle reaches the screen:
///
///   sum_x |x> (a_x |phi_x>|v_U> + b_x |phi_x>|v_L>)
///
/// with orthonormal vibrational modes v_U, v_L and
/// sum_x (|a_x|^2 + |b_x|^2) = 1.
class RemnantState {
   public:
    RemnantState(std::vector<double> sites, std::vector<Complex> amps_upper, std::vector<Complex> amps_lower);

    std::size_t size() const {
        return sites_.size();
    }
    std::span<const double> sites() const {
        return sites_;
    }
    std::span<const Complex> amps_upper() const {
        return amps_upper_;
    }
    std::span<const Complex> amps_lower() const {
        return amps_lower_;
    }

   private:
    std::vector<double> sites_;
    std::vector<Complex> amps_upper_;
    std::vector<Complex> amps_lower_;
};

inline constexpr double kStateNormTolerance = 1e-12;

/// Vibrational-mode superposition left in the detector element that fired.
struct CollapsedSite {
    double x = 0.0;
    Complex c_upper;
    Complex c_lower;
};

struct Detection {
    double probability = 0.0;
    CollapsedSite collapsed;
};

/// Post-selection direction alpha |v_U> + beta |v_L>.
class VibrationalDirection {
   public:
    VibrationalDirection(Complex alpha, Complex beta);

    static VibrationalDirection upper() {
        return {1.0, 0.0};
    }
    static VibrationalDirection lower() {
        return {0.0, 1.0};
    }
    /// (|v_U> + |v_L>) / sqrt(2): selects the fringe pattern.
    static VibrationalDirection plus();
    /// (|v_U> - |v_L>) / sqrt(2): selects the antifringe pattern.
    static VibrationalDirection minus();

    Complex alpha() const {
        return alpha_;
    }
    Complex beta() const {
        return beta_;
    }
    /// The orthogonal complement (-conj(beta), conj(alpha)).
    VibrationalDirection orthogonal() const;

   private:
    Complex alpha_;
    Complex beta_;
};

struct PostSelection {
    double probability = 0.0;
    /// Site weights normalized to sum to 1.
    std::vector<double> pattern;
};

/// Builds the state from the two slit fields, each weighted by 1/sqrt(2)
/// and then jointly normalized over the sites (the grid samples).
RemnantState build_remnant(const ComplexField &phi_upper, const ComplexField &phi_lower);

/// p(x) = |a_x|^2 + |b_x|^2.
std::vector<double> total_pattern(const RemnantState &state);

/// Born probability of a detection at site `index` and the normalized
/// remnant superposition it leaves behind. Throws std::domain_error when the
/// site has zero probability.
Detection detect(const RemnantState &state, std::size_t index);

/// Conditions on the vibrational outcome `direction`:
/// w_x = |conj(alpha) a_x + conj(beta) b_x|^2.
PostSelection postselect(const RemnantState &state, const VibrationalDirection &direction);

/// Largest pointwise |P1 p1 + P2 p2 - total| over an orthonormal pair.
double completeness_residue(const RemnantState &state, const VibrationalDirection &direction);

struct RemnantSample {
    std::size_t site = 0;
    double x = 0.0;
    /// 0 for `direction`, 1 for its orthogonal complement.
    int outcome = 0;
};

/// Seeded Monte-Carlo run: draws detection sites from total_pattern, then a
/// vibrational outcome in {direction, direction.orthogonal()} from the
/// collapsed remnant. Deterministic for a given seed.
std::vector<RemnantSample> sample_detections(const RemnantState &state, const VibrationalDirection &direction,
                                             std::size_t count, std::uint64_t seed);

enum class SpinAxis { kX, kZ };

struct MeasurementStep {
    SpinAxis axis = SpinAxis::kX;
    double p_plus = 0.0;
    double p_minus = 0.0;
    /// Outcome the state collapsed onto (+1 or -1).
    int outcome = 0;
};

/// Spin-1/2 prepared in the x = +1 eigenstate and measured projectively
/// along each axis in turn. After each step the state collapses onto
/// `outcomes[i]` when given, otherwise onto +1 (or -1 if +1 is impossible).
std::vector<MeasurementStep> qubit_analogy(std::span<const SpinAxis> sequence, std::span<const int> outcomes = {});

}  // namespace afshar

#endif  // AFSHAR_REMNANT_H
