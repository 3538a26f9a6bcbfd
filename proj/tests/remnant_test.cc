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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "afshar/apparatus.h"
#include "afshar/duality.h"

using namespace afshar;

namespace {

struct SlitFields {
    ComplexField upper;
    ComplexField lower;
};

const SlitFields &sigma1_fields() {
    static const SlitFields fields = [] {
        AfsharGeometry g;
        Grid grid = default_apparatus_grid();
        return SlitFields{field_at_grid_plane(g, grid, SlitSelection::kUpperOnly),
                          field_at_grid_plane(g, grid, SlitSelection::kLowerOnly)};
    }();
    return fields;
}

RemnantState random_state(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> normal;
    std::vector<double> sites(n);
    std::vector<Complex> a(n), b(n);
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sites[i] = static_cast<double>(i);
        a[i] = Complex(normal(rng), normal(rng));
        b[i] = Complex(normal(rng), normal(rng));
        norm += std::norm(a[i]) + std::norm(b[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        a[i] /= std::sqrt(norm);
        b[i] /= std::sqrt(norm);
    }
    return RemnantState(sites, a, b);
}

}  // namespace

TEST(remnant_state, validates) {
    ASSERT_THROW(RemnantState({0.0, 1.0}, {1.0, 0.0}, {0.0}), std::invalid_argument);
    ASSERT_THROW(RemnantState({0.0}, {1.0}, {1.0}), std::invalid_argument);
    ASSERT_NO_THROW(RemnantState({0.0, 1.0}, {0.6, 0.0}, {0.0, Complex(0, 0.8)}));
}

TEST(vibrational_direction, orthogonal_complement) {
    VibrationalDirection d(Complex(0.6, 0.0), Complex(0.0, 0.8));
    auto o = d.orthogonal();
    Complex overlap = std::conj(d.alpha()) * o.alpha() + std::conj(d.beta()) * o.beta();
    ASSERT_NEAR(std::abs(overlap), 0.0, 1e-15);
    ASSERT_THROW(VibrationalDirection(1.0, 1.0), std::invalid_argument);
}

TEST(build_remnant, normalizes_and_rejects_dark_fields) {
    auto state = build_remnant(sigma1_fields().upper, sigma1_fields().lower);
    double sum = 0;
    for (double p : total_pattern(state)) {
        sum += p;
    }
    ASSERT_NEAR(sum, 1.0, 1e-12);
    auto dark = ComplexField::zeros(sigma1_fields().upper.grid(), 650e-9);
    ASSERT_THROW(build_remnant(dark, dark), std::domain_error);
}

TEST(postselect, which_slit_reproduces_single_slit_marginal) {
    const auto &f = sigma1_fields();
    auto state = build_remnant(f.upper, f.lower);
    auto iu = intensity(f.upper);
    auto il = intensity(f.lower);
    double su = 0, sl = 0;
    for (std::size_t i = 0; i < iu.size(); ++i) {
        su += iu[i];
        sl += il[i];
    }
    auto up = postselect(state, VibrationalDirection::upper());
    auto low = postselect(state, VibrationalDirection::lower());
    for (std::size_t i = 0; i < iu.size(); ++i) {
        ASSERT_NEAR(up.pattern[i], iu[i] / su, 1e-12);
        ASSERT_NEAR(low.pattern[i], il[i] / sl, 1e-12);
    }
    ASSERT_NEAR(up.probability + low.probability, 1.0, 1e-12);
    // Mirror-symmetric slits share the detections evenly.
    ASSERT_NEAR(up.probability, 0.5, 1e-9);
}

TEST(postselect, fringe_and_antifringe) {
    const auto &f = sigma1_fields();
    auto state = build_remnant(f.upper, f.lower);
    auto plus = postselect(state, VibrationalDirection::plus());
    auto minus = postselect(state, VibrationalDirection::minus());
    auto total = total_pattern(state);
    auto both = intensity(f.upper + f.lower);
    double s = 0;
    for (double v : both) {
        s += v;
    }
    for (std::size_t i = 0; i < total.size(); ++i) {
        ASSERT_NEAR(plus.probability * plus.pattern[i] + minus.probability * minus.pattern[i], total[i], 1e-12);
        ASSERT_NEAR(plus.pattern[i], both[i] / s, 1e-12);
    }

    // The conditional patterns carry the fringes; the unconditioned one does not.
    const Grid &grid = f.upper.grid();
    double period = AfsharGeometry{}.fringe_spacing();
    Interval central{-3 * period, 3 * period};
    ASSERT_GE(visibility_from_pattern(plus.pattern, grid, grid.spacing(), central).visibility, 0.99);
    ASSERT_GE(visibility_from_pattern(minus.pattern, grid, grid.spacing(), central).visibility, 0.99);
    // Over a single period near the axis the total is flat to the envelope.
    Interval one{-period / 2, period / 2};
    ASSERT_LT(visibility_from_pattern(total, grid, grid.spacing(), one).visibility, 0.1);
}

TEST(completeness, random_states_and_directions) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 50; ++trial) {
        auto state = random_state(rng, 64);
        Complex a(normal(rng), normal(rng)), b(normal(rng), normal(rng));
        double n = std::sqrt(std::norm(a) + std::norm(b));
        VibrationalDirection dir(a / n, b / n);
        ASSERT_LT(completeness_residue(state, dir), 1e-12);
    }
}

TEST(completeness, default_fields) {
    const auto &f = sigma1_fields();
    auto state = build_remnant(f.upper, f.lower);
    ASSERT_LT(completeness_residue(state, VibrationalDirection::upper()), 1e-12);
    ASSERT_LT(completeness_residue(state, VibrationalDirection::plus()), 1e-12);
}

TEST(postselect, impossible_outcome) {
    RemnantState only_upper({0.0, 1.0}, {0.6, 0.8}, {0.0, 0.0});
    ASSERT_THROW(postselect(only_upper, VibrationalDirection::lower()), std::domain_error);
}

TEST(detect, collapses_to_site) {
    RemnantState s({-1.0, 1.0}, {0.6, 0.0}, {Complex(0, 0.6), 0.529150262212918});
    auto hit = detect(s, 0);
    ASSERT_NEAR(hit.probability, 0.72, 1e-15);
    ASSERT_EQ(hit.collapsed.x, -1.0);
    ASSERT_NEAR(std::norm(hit.collapsed.c_upper) + std::norm(hit.collapsed.c_lower), 1.0, 1e-15);
    ASSERT_NEAR(std::abs(hit.collapsed.c_upper - std::sqrt(0.5)), 0.0, 1e-15);
    ASSERT_THROW(detect(s, 2), std::out_of_range);
    RemnantState dark_site({0.0, 1.0}, {1.0, 0.0}, {0.0, 0.0});
    ASSERT_THROW(detect(dark_site, 1), std::domain_error);
}

TEST(sample_detections, deterministic_and_consistent) {
    std::mt19937_64 rng(22);
    auto state = random_state(rng, 16);
    auto dir = VibrationalDirection::plus();
    auto first = sample_detections(state, dir, 20000, 99);
    auto second = sample_detections(state, dir, 20000, 99);
    ASSERT_EQ(first.size(), second.size());
    std::size_t kept = 0;
    for (std::size_t i = 0; i < first.size(); ++i) {
        ASSERT_EQ(first[i].site, second[i].site);
        ASSERT_EQ(first[i].outcome, second[i].outcome);
        kept += first[i].outcome == 0;
    }
    // The outcome frequency follows the post-selection probability.
    double p = postselect(state, dir).probability;
    double sigma = std::sqrt(p * (1 - p) / 20000.0);
    ASSERT_NEAR(static_cast<double>(kept) / 20000.0, p, 5 * sigma);
    auto other = sample_detections(state, dir, 200, 100);
    bool differs = false;
    for (std::size_t i = 0; i < other.size(); ++i) {
        differs |= other[i].site != first[i].site;
    }
    ASSERT_TRUE(differs);
}

TEST(qubit_analogy, x_z_x_sequence) {
    std::vector<SpinAxis> seq{SpinAxis::kX, SpinAxis::kZ, SpinAxis::kX};
    auto steps = qubit_analogy(seq);
    ASSERT_EQ(steps.size(), 3u);
    ASSERT_EQ(steps[0].p_plus, 1.0);
    ASSERT_EQ(steps[0].p_minus, 0.0);
    ASSERT_EQ(steps[1].p_plus, 0.5);
    ASSERT_EQ(steps[1].p_minus, 0.5);
    ASSERT_EQ(steps[2].p_plus, 0.5);
    ASSERT_EQ(steps[2].p_minus, 0.5);
    ASSERT_EQ(steps[1].outcome, 1);
}

TEST(qubit_analogy, forced_outcomes) {
    std::vector<SpinAxis> seq{SpinAxis::kZ, SpinAxis::kZ, SpinAxis::kX};
    std::vector<int> outcomes{-1, -1, 1};
    auto steps = qubit_analogy(seq, outcomes);
    ASSERT_EQ(steps[1].p_minus, 1.0);
    ASSERT_EQ(steps[2].p_plus, 0.5);
    std::vector<int> impossible{-1, 1, 1};
    ASSERT_THROW(qubit_analogy(seq, impossible), std::domain_error);
    std::vector<int> bad{0, 1, 1};
    ASSERT_THROW(qubit_analogy(seq, bad), std::invalid_argument);
    ASSERT_THROW(qubit_analogy({}), std::invalid_argument);
}
