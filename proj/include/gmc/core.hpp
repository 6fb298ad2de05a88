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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gmc {

using Amplitude = std::complex<double>;

/// Absolute tolerance for complex comparisons and normalization checks.
inline constexpr double kTolerance = 1e-9;

/// Dense row-major complex matrix. Entry (i, j) is the amplitude for a
/// particle entering in mode i to leave in mode j, so applying the matrix to
/// a state computes out[j] = sum_i m(i, j) * in[i].
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Amplitude> row_major);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Amplitude &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Amplitude &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<const Amplitude> data() const { return data_; }

    ComplexMatrix adjoint() const;

    /// Largest entrywise magnitude of (this - other).
    double max_abs_diff(const ComplexMatrix &other) const;

    bool operator==(const ComplexMatrix &) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Amplitude> data_;
};

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);

double squared_norm(std::span<const Amplitude> amps);

/// Normalized amplitude vector over labeled modes.
class ProbabilityState {
  public:
    /// Throws std::invalid_argument if empty, non-finite or not normalized.
    explicit ProbabilityState(std::vector<Amplitude> amplitudes);

    /// The classical state in which the particle occupies `mode` for certain.
    static ProbabilityState basis(std::size_t n_modes, std::size_t mode);

    std::size_t size() const { return amplitudes_.size(); }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    const Amplitude &operator[](std::size_t i) const { return amplitudes_[i]; }

    /// Index of the occupied mode if this is a basis state (one entry exactly
    /// 1, the rest exactly 0), otherwise -1.
    long basis_index() const;

    bool operator==(const ProbabilityState &) const = default;

  private:
    std::vector<Amplitude> amplitudes_;
};

/// Unnormalized intermediate vector carried along one branch of outcomes.
struct BranchAmplitude {
    std::vector<Amplitude> amplitudes;
    double weight = 0.0;

    static BranchAmplitude from(std::vector<Amplitude> amps);
    static BranchAmplitude from(const ProbabilityState &state);
};

/// Observable values r_i, one per mode.
struct Observable {
    std::vector<double> values;
};

enum class DeviceKind { Cross, Reflector, BeamSplitter, Phase, Custom };

const char *to_string(DeviceKind kind);

struct DeviceOp {
    DeviceKind kind = DeviceKind::Cross;
    /// Transmission amplitude t for BeamSplitter, phi for Phase, unused otherwise.
    double parameter = 0.0;
    ComplexMatrix matrix;
    std::vector<std::size_t> target_modes;

    bool operator==(const DeviceOp &) const = default;
};

DeviceOp cross(std::size_t a = 0, std::size_t b = 1);
DeviceOp reflector(std::size_t a = 0, std::size_t b = 1);
/// Throws std::domain_error unless 0 <= t <= 1.
DeviceOp beam_splitter(double t, std::size_t a = 0, std::size_t b = 1);
/// Multiplies the amplitude of `mode` by e^{i phi}. On the default modes this
/// is diag(1, e^{i phi}). Throws std::domain_error for non-finite phi.
DeviceOp phase(double phi, std::size_t mode = 1);
/// Arbitrary k x k operator over k distinct modes. Unitarity is not required.
DeviceOp custom(ComplexMatrix matrix, std::vector<std::size_t> target_modes);

/// ||U^dagger U - I||_max for the op's own matrix.
double unitarity_defect(const DeviceOp &op);

/// Full n x n operator: op's matrix on its target modes, identity elsewhere.
/// Throws std::invalid_argument on out-of-range or duplicate targets.
ComplexMatrix embed(const DeviceOp &op, std::size_t n_modes);

struct Detector {
    std::string label;
    std::vector<std::size_t> modes;  // sorted

    bool operator==(const Detector &) const = default;
};

/// One projective, absorptive measurement event. Detectors are kept sorted by
/// label; labels are unique and mode sets pairwise disjoint.
class DetectorBank {
  public:
    DetectorBank() = default;
    explicit DetectorBank(std::vector<Detector> detectors);

    const std::vector<Detector> &detectors() const { return detectors_; }
    bool operator==(const DetectorBank &) const = default;

  private:
    std::vector<Detector> detectors_;
};

/// Reserved outcome for probability never absorbed by a detector.
inline constexpr const char *kUndetected = "UNDETECTED";

using Stage = std::variant<DeviceOp, DetectorBank>;

/// Ordered stage list over n modes. Stage k (0-based) has ordering time k+1.
class Apparatus {
  public:
    /// Validates mode ranges, source dimension and every device/bank.
    Apparatus(std::size_t n_modes, ProbabilityState source, std::vector<Stage> stages);

    std::size_t n_modes() const { return n_modes_; }
    const ProbabilityState &source() const { return source_; }
    const std::vector<Stage> &stages() const { return stages_; }

    static std::size_t ordering_time(std::size_t stage_index) { return stage_index + 1; }

    /// All detector labels across banks, sorted and deduplicated.
    std::vector<std::string> detector_labels() const;

    bool operator==(const Apparatus &) const = default;

  private:
    std::size_t n_modes_;
    ProbabilityState source_;
    std::vector<Stage> stages_;
};

/// Non-fatal findings, e.g. custom devices that are far from unitary.
std::vector<std::string> validation_warnings(const Apparatus &apparatus);

struct TensorSplit {
    std::vector<std::size_t> factor_dims;
};

/// Row-major tensor product: result[i * dim(b) + j] = a[i] * b[j].
ProbabilityState tensor(const ProbabilityState &a, const ProbabilityState &b);

/// True iff the d1 x d2 coefficient matrix has rank 1, i.e. every 2x2 minor
/// vanishes within kTolerance. Throws on a split that does not match.
bool is_product(const ProbabilityState &s, const TensorSplit &split);

}  // namespace gmc
