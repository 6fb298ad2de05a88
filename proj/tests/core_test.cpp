// Copyright 2026 The gmc-interferometer Authors
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

#include "gmc/core.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "gmc/amplitude_engine.hpp"
#include "test_support.hpp"

using namespace gmc;

namespace {

constexpr Amplitude I{0.0, 1.0};
const double kH = 1.0 / std::sqrt(2.0);

std::vector<Amplitude> act(const DeviceOp &op, std::vector<Amplitude> v) {
    const auto full = embed(op, v.size());
    return apply(full, BranchAmplitude::from(std::move(v))).amplitudes;
}

void expect_near(const std::vector<Amplitude> &got, const std::vector<Amplitude> &want, double tol = 1e-12) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_LT(std::abs(got[i] - want[i]), tol) << "component " << i << ": " << got[i] << " vs " << want[i];
    }
}

}  // namespace

TEST(Core, CrossIsIdentity) {
    expect_near(act(cross(), {1.0, 0.0}), {1.0, 0.0});
    expect_near(act(cross(), {0.0, 1.0}), {0.0, 1.0});
    expect_near(act(cross(), {0.6, 0.8 * I}), {0.6, 0.8 * I});
    EXPECT_EQ(cross().matrix, ComplexMatrix::identity(2));
}

TEST(Core, ReflectorRotatesWithPhaseI) {
    expect_near(act(reflector(), {1.0, 0.0}), {0.0, I});
    expect_near(act(reflector(), {0.0, 1.0}), {I, 0.0});
    const auto r = reflector().matrix;
    EXPECT_LT((r * r).max_abs_diff(ComplexMatrix(2, 2, {-1.0, 0.0, 0.0, -1.0})), 1e-15);
}

TEST(Core, BeamSplitter) {
    expect_near(act(beam_splitter(kH), {1.0, 0.0}), {kH, I * kH});
    EXPECT_LT(beam_splitter(1.0).matrix.max_abs_diff(ComplexMatrix::identity(2)), 1e-15);
    const auto h = beam_splitter(kH).matrix;
    EXPECT_LT((h * h).max_abs_diff(reflector().matrix), 1e-12);
    EXPECT_THROW(beam_splitter(-0.01), std::domain_error);
    EXPECT_THROW(beam_splitter(1.01), std::domain_error);
    EXPECT_THROW(beam_splitter(std::nan("")), std::domain_error);
}

TEST(Core, HRHIsMinusIdentity) {
    const auto h = beam_splitter(kH).matrix;
    const auto hrh = h * reflector().matrix * h;
    EXPECT_LT(hrh.max_abs_diff(ComplexMatrix(2, 2, {-1.0, 0.0, 0.0, -1.0})), 1e-12);
}

TEST(Core, Phase) {
    EXPECT_LT(embed(phase(0.0), 2).max_abs_diff(ComplexMatrix::identity(2)), 1e-15);
    expect_near(act(phase(std::numbers::pi), {kH, kH}), {kH, -kH});
    const auto full = embed(phase(0.3), 2);
    EXPECT_LT(full.max_abs_diff(ComplexMatrix(2, 2, {1.0, 0.0, 0.0, std::polar(1.0, 0.3)})), 1e-15);
    EXPECT_THROW(phase(INFINITY), std::domain_error);
    EXPECT_THROW(phase(std::nan("")), std::domain_error);
}

TEST(Core, BuiltInDevicesAreUnitary) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        EXPECT_LT(unitarity_defect(beam_splitter(unit(rng))), 1e-9);
        EXPECT_LT(unitarity_defect(phase(10.0 * unit(rng))), 1e-9);
    }
    EXPECT_LT(unitarity_defect(cross()), 1e-9);
    EXPECT_LT(unitarity_defect(reflector()), 1e-9);
}

TEST(Core, CustomNeedNotBeUnitary) {
    const auto proj = custom(ComplexMatrix(2, 2, {1.0, 0.0, 0.0, 0.0}), {0, 1});
    EXPECT_GT(unitarity_defect(proj), 0.5);
    const Apparatus a(2, ProbabilityState::basis(2, 0), {proj});
    ASSERT_EQ(validation_warnings(a).size(), 1u);
    const Apparatus fine(2, ProbabilityState::basis(2, 0), {custom(reflector().matrix, {1, 0})});
    EXPECT_TRUE(validation_warnings(fine).empty());
    EXPECT_THROW(custom(ComplexMatrix(2, 2), {0}), std::invalid_argument);
    EXPECT_THROW(custom(ComplexMatrix(2, 2), {1, 1}), std::invalid_argument);
}

TEST(Core, Embed) {
    EXPECT_EQ(embed(cross(), 3), ComplexMatrix::identity(3));
    expect_near(act(reflector(0, 1), {0.0, 0.0, 0.6}), {0.0, 0.0, 0.6});
    expect_near(act(reflector(1, 2), {0.0, 1.0, 0.0}), {0.0, 0.0, I});
    EXPECT_THROW(embed(reflector(1, 2), 2), std::invalid_argument);
    DeviceOp dup = cross();
    dup.target_modes = {1, 1};
    EXPECT_THROW(embed(dup, 3), std::invalid_argument);
    EXPECT_THROW(cross(0, 0), std::invalid_argument);
}

TEST(Core, ProbabilityStateValidation) {
    EXPECT_THROW(ProbabilityState({}), std::invalid_argument);
    EXPECT_THROW(ProbabilityState({1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(ProbabilityState({Amplitude{NAN, 0.0}}), std::invalid_argument);
    EXPECT_NO_THROW(ProbabilityState({0.6, 0.8 * I}));
    EXPECT_EQ(ProbabilityState::basis(3, 2).basis_index(), 2);
    EXPECT_EQ(ProbabilityState({0.6, 0.8}).basis_index(), -1);
    EXPECT_EQ(ProbabilityState({I, 0.0}).basis_index(), -1);
}

TEST(Core, DetectorBankCanonicalAndValidated) {
    const DetectorBank bank({{"B", {1}}, {"A", {2, 0}}});
    ASSERT_EQ(bank.detectors().size(), 2u);
    EXPECT_EQ(bank.detectors()[0].label, "A");
    EXPECT_EQ(bank.detectors()[0].modes, (std::vector<std::size_t>{0, 2}));
    EXPECT_THROW(DetectorBank({{"A", {0}}, {"A", {1}}}), std::invalid_argument);
    EXPECT_THROW(DetectorBank({{"A", {0}}, {"B", {0}}}), std::invalid_argument);
    EXPECT_THROW(DetectorBank(std::vector<Detector>{{"UNDETECTED", {0}}}), std::invalid_argument);
    EXPECT_THROW(DetectorBank(std::vector<Detector>{{"A", {}}}), std::invalid_argument);
}

TEST(Core, ApparatusValidation) {
    const auto src = ProbabilityState::basis(2, 0);
    EXPECT_THROW(Apparatus(3, src, {}), std::invalid_argument);
    EXPECT_THROW(Apparatus(2, src, {reflector(1, 2)}), std::invalid_argument);
    EXPECT_THROW(Apparatus(2, src, {DetectorBank(std::vector<Detector>{{"D", {2}}})}), std::invalid_argument);
    const Apparatus a(2, src, {reflector(), DetectorBank(std::vector<Detector>{{"Z", {0}}}), DetectorBank(std::vector<Detector>{{"A", {1}}})});
    EXPECT_EQ(a.detector_labels(), (std::vector<std::string>{"A", "Z"}));
    EXPECT_EQ(Apparatus::ordering_time(0), 1u);
}

TEST(Core, Tensor) {
    const auto e0 = ProbabilityState::basis(2, 0);
    const auto e1 = ProbabilityState::basis(2, 1);
    EXPECT_EQ(tensor(e0, e0), ProbabilityState::basis(4, 0));
    const auto t = tensor(ProbabilityState({kH, I * kH}), e1);
    expect_near({t.amplitudes().begin(), t.amplitudes().end()}, {0.0, kH, 0.0, I * kH});

    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        const auto a = test_support::random_state(rng, 2);
        const auto b = test_support::random_state(rng, 3);
        const auto c = test_support::random_state(rng, 2);
        EXPECT_NEAR(squared_norm(tensor(a, b).amplitudes()), 1.0, 1e-12);
        const auto left = tensor(tensor(a, b), c);
        const auto right = tensor(a, tensor(b, c));
        for (std::size_t i = 0; i < left.size(); ++i) {
            EXPECT_LT(std::abs(left[i] - right[i]), 1e-12);
        }
    }
}

TEST(Core, IsProduct) {
    EXPECT_FALSE(is_product(ProbabilityState({0.0, kH, kH, 0.0}), {{2, 2}}));
    EXPECT_TRUE(is_product(ProbabilityState::basis(4, 0), {{2, 2}}));
    EXPECT_THROW(is_product(ProbabilityState::basis(4, 0), {{2, 3}}), std::invalid_argument);
    EXPECT_THROW(is_product(ProbabilityState::basis(4, 0), {{4}}), std::invalid_argument);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < 300; ++k) {
        const std::size_t d1 = 2 + k % 3;
        const std::size_t d2 = 2 + (k / 3) % 3;
        const auto prod = tensor(test_support::random_state(rng, d1), test_support::random_state(rng, d2));
        EXPECT_TRUE(is_product(prod, {{d1, d2}}));
        // Global phase leaves the verdict alone, for product and entangled inputs.
        const Amplitude g = std::polar(1.0, angle(rng));
        std::vector<Amplitude> rotated(prod.amplitudes().begin(), prod.amplitudes().end());
        for (auto &x : rotated) {
            x *= g;
        }
        EXPECT_TRUE(is_product(ProbabilityState(rotated), {{d1, d2}}));
        EXPECT_FALSE(is_product(ProbabilityState({0.0, kH * g, kH * g, 0.0}), {{2, 2}}));
    }
}
