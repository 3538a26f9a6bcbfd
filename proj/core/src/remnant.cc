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

#include "afshar/remnant.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace afshar {
namespace {

double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Spinors are kept unnormalized with small-integer entries so that the
// Born ratios below come out exact in floating point.
using Spinor = std::array<Complex, 2>;

Spinor eigenstate(SpinAxis axis, int sign) {
    if (axis == SpinAxis::kZ) {
        return sign > 0 ? Spinor{1.0, 0.0} : Spinor{0.0, 1.0};
    }
    return sign > 0 ? Spinor{1.0, 1.0} : Spinor{1.0, -1.0};
}

double born(const Spinor &e, const Spinor &psi) {
    double e_norm = std::norm(e[0]) + std::norm(e[1]);
    double psi_norm = std::norm(psi[0]) + std::norm(psi[1]);
    return std::norm(std::conj(e[0]) * psi[0] + std::conj(e[1]) * psi[1]) / (e_norm * psi_norm);
}

}  // namespace

RemnantState::RemnantState(std::vector<double> sites, std::vector<Complex> amps_upper, std::vector<Complex> amps_lower)
    : sites_(std::move(sites)), amps_upper_(std::move(amps_upper)), amps_lower_(std::move(amps_lower)) {
    if (sites_.size() != amps_upper_.size() || sites_.size() != amps_lower_.size()) {
        throw std::invalid_argument("RemnantState: site and amplitude sequences differ in length");
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        norm += std::norm(amps_upper_[i]) + std::norm(amps_lower_[i]);
    }
    if (!(std::abs(norm - 1.0) <= kStateNormTolerance)) {
        throw std::invalid_argument("RemnantState: state is not normalized");
    }
}

VibrationalDirection::VibrationalDirection(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta) {
    if (!(std::abs(std::norm(alpha) + std::norm(beta) - 1.0) <= kStateNormTolerance)) {
        throw std::invalid_argument("VibrationalDirection: |alpha|^2 + |beta|^2 must equal 1");
    }
}

VibrationalDirection VibrationalDirection::plus() {
    const double h = std::numbers::sqrt2 / 2;
    return {h, h};
}

VibrationalDirection VibrationalDirection::minus() {
    const double h = std::numbers::sqrt2 / 2;
    return {h, -h};
}

VibrationalDirection VibrationalDirection::orthogonal() const {
    return {-std::conj(beta_), std::conj(alpha_)};
}

RemnantState build_remnant(const ComplexField &phi_upper, const ComplexField &phi_lower) {
    if (!phi_upper.compatible_with(phi_lower)) {
        throw std::invalid_argument("build_remnant: slit fields must share grid and wavelength");
    }
    const double h = std::numbers::sqrt2 / 2;
    std::size_t n = phi_upper.size();
    std::vector<Complex> a(n);
    std::vector<Complex> b(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = h * phi_upper[i];
        b[i] = h * phi_lower[i];
        norm += std::norm(a[i]) + std::norm(b[i]);
    }
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::domain_error("build_remnant: joint norm of the slit fields is zero");
    }
    double scale = 1.0 / std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] *= scale;
        b[i] *= scale;
    }
    return RemnantState(phi_upper.grid().coordinates(), std::move(a), std::move(b));
}

std::vector<double> total_pattern(const RemnantState &state) {
    std::vector<double> p(state.size());
    auto a = state.amps_upper();
    auto b = state.amps_lower();
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::norm(a[i]) + std::norm(b[i]);
    }
    return p;
}

Detection detect(const RemnantState &state, std::size_t index) {
    if (index >= state.size()) {
        throw std::out_of_range("detect: site index out of range");
    }
    Complex a = state.amps_upper()[index];
    Complex b = state.amps_lower()[index];
    double p = std::norm(a) + std::norm(b);
    if (!(p > 0.0)) {
        throw std::domain_error("detect: zero detection probability at this site");
    }
    double scale = 1.0 / std::sqrt(p);
    return {p, CollapsedSite{state.sites()[index], a * scale, b * scale}};
}

PostSelection postselect(const RemnantState &state, const VibrationalDirection &direction) {
    Complex ca = std::conj(direction.alpha());
    Complex cb = std::conj(direction.beta());
    auto a = state.amps_upper();
    auto b = state.amps_lower();
    PostSelection out;
    out.pattern.resize(state.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < out.pattern.size(); ++i) {
        out.pattern[i] = std::norm(ca * a[i] + cb * b[i]);
        sum += out.pattern[i];
    }
    if (!(sum >= 1e-300)) {
        throw std::domain_error("postselect: the requested vibrational outcome has zero probability");
    }
    for (auto &w : out.pattern) {
        w /= sum;
    }
    out.probability = sum;
    return out;
}

double completeness_residue(const RemnantState &state, const VibrationalDirection &direction) {
    auto first = postselect(state, direction);
    auto second = postselect(state, direction.orthogonal());
    auto total = total_pattern(state);
    double worst = 0.0;
    for (std::size_t i = 0; i < total.size(); ++i) {
        double recombined = first.probability * first.pattern[i] + second.probability * second.pattern[i];
        worst = std::max(worst, std::abs(recombined - total[i]));
    }
    return worst;
}

std::vector<RemnantSample> sample_detections(const RemnantState &state, const VibrationalDirection &direction,
                                             std::size_t count, std::uint64_t seed) {
    auto p = total_pattern(state);
    std::vector<double> cumulative(p.size());
    double running = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        running += p[i];
        cumulative[i] = running;
    }
    std::mt19937_64 rng(seed);
    Complex ca = std::conj(direction.alpha());
    Complex cb = std::conj(direction.beta());
    std::vector<RemnantSample> samples;
    samples.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        double u = uniform01(rng) * running;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        std::size_t site = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), p.size() - 1);
        while (p[site] == 0.0 && site > 0) {
            --site;
        }
        Detection hit = detect(state, site);
        double p_dir = std::norm(ca * hit.collapsed.c_upper + cb * hit.collapsed.c_lower);
        int outcome = uniform01(rng) < p_dir ? 0 : 1;
        samples.push_back({site, hit.collapsed.x, outcome});
    }
    return samples;
}

std::vector<MeasurementStep> qubit_analogy(std::span<const SpinAxis> sequence, std::span<const int> outcomes) {
    if (sequence.empty()) {
        throw std::invalid_argument("qubit_analogy: measurement sequence is empty");
    }
    if (!outcomes.empty() && outcomes.size() != sequence.size()) {
        throw std::invalid_argument("qubit_analogy: outcome list must match the sequence length");
    }
    Spinor psi = eigenstate(SpinAxis::kX, +1);
    std::vector<MeasurementStep> steps;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        MeasurementStep step;
        step.axis = sequence[i];
        step.p_plus = born(eigenstate(step.axis, +1), psi);
        step.p_minus = born(eigenstate(step.axis, -1), psi);
        if (!outcomes.empty()) {
            step.outcome = outcomes[i];
            if (step.outcome != 1 && step.outcome != -1) {
                throw std::invalid_argument("qubit_analogy: outcomes must be +1 or -1");
            }
            if ((step.outcome > 0 ? step.p_plus : step.p_minus) <= 0.0) {
                throw std::domain_error("qubit_analogy: requested outcome has zero probability");
            }
        } else {
            step.outcome = step.p_plus > 0.0 ? 1 : -1;
        }
        psi = eigenstate(step.axis, step.outcome);
        steps.push_back(step);
    }
    return steps;
}

}  // namespace afshar
