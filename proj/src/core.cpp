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

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gmc {

namespace {

constexpr Amplitude kI{0.0, 1.0};

void check_targets(const std::vector<std::size_t> &targets, std::size_t n_modes) {
    std::set<std::size_t> seen;
    for (auto m : targets) {
        if (m >= n_modes) {
            throw std::invalid_argument("target mode " + std::to_string(m) + " out of range for " +
                                        std::to_string(n_modes) + " modes");
        }
        if (!seen.insert(m).second) {
            throw std::invalid_argument("duplicate target mode " + std::to_string(m));
        }
    }
}

DeviceOp two_mode(DeviceKind kind, double parameter, std::vector<Amplitude> entries, std::size_t a,
                  std::size_t b) {
    if (a == b) {
        throw std::invalid_argument("two-mode device needs distinct modes");
    }
    return DeviceOp{kind, parameter, ComplexMatrix(2, 2, std::move(entries)), {a, b}};
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Amplitude> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("matrix data size does not match shape");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            m(j, i) = std::conj((*this)(i, j));
        }
    }
    return m;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("matrix shape mismatch");
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k) {
        worst = std::max(worst, std::abs(data_[k] - other.data_[k]));
    }
    return worst;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matrix product shape mismatch");
    }
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Amplitude aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

double squared_norm(std::span<const Amplitude> amps) {
    double sum = 0.0;
    for (const auto &a : amps) {
        sum += std::norm(a);
    }
    return sum;
}

ProbabilityState::ProbabilityState(std::vector<Amplitude> amplitudes)
    : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) {
        throw std::invalid_argument("probability state needs at least one mode");
    }
    for (const auto &a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("probability state has a non-finite amplitude");
        }
    }
    const double norm = squared_norm(amplitudes_);
    if (std::abs(norm - 1.0) > kTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "probability state is not normalized (squared norm " << norm << ")";
        throw std::invalid_argument(msg.str());
    }
}

ProbabilityState ProbabilityState::basis(std::size_t n_modes, std::size_t mode) {
    if (mode >= n_modes) {
        throw std::invalid_argument("basis mode out of range");
    }
    std::vector<Amplitude> amps(n_modes);
    amps[mode] = 1.0;
    return ProbabilityState(std::move(amps));
}

long ProbabilityState::basis_index() const {
    long found = -1;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const Amplitude &a = amplitudes_[i];
        if (a == Amplitude{1.0, 0.0} && found < 0) {
            found = static_cast<long>(i);
        } else if (a != Amplitude{0.0, 0.0}) {
            return -1;
        }
    }
    return found;
}

BranchAmplitude BranchAmplitude::from(std::vector<Amplitude> amps) {
    const double w = squared_norm(amps);
    return BranchAmplitude{std::move(amps), w};
}

BranchAmplitude BranchAmplitude::from(const ProbabilityState &state) {
    return from(std::vector<Amplitude>(state.amplitudes().begin(), state.amplitudes().end()));
}

const char *to_string(DeviceKind kind) {
    switch (kind) {
    case DeviceKind::Cross:
        return "CROSS";
    case DeviceKind::Reflector:
        return "REFLECTOR";
    case DeviceKind::BeamSplitter:
        return "BEAMSPLITTER";
    case DeviceKind::Phase:
        return "PHASE";
    case DeviceKind::Custom:
        return "CUSTOM";
    }
    return "?";
}

DeviceOp cross(std::size_t a, std::size_t b) {
    return two_mode(DeviceKind::Cross, 0.0, {1.0, 0.0, 0.0, 1.0}, a, b);
}

DeviceOp reflector(std::size_t a, std::size_t b) {
    return two_mode(DeviceKind::Reflector, 0.0, {0.0, kI, kI, 0.0}, a, b);
}

DeviceOp beam_splitter(double t, std::size_t a, std::size_t b) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::domain_error("beam splitter transmission must lie in [0, 1]");
    }
    const double r = std::sqrt((1.0 - t) * (1.0 + t));
    return two_mode(DeviceKind::BeamSplitter, t, {t, kI * r, kI * r, t}, a, b);
}

DeviceOp phase(double phi, std::size_t mode) {
    if (!std::isfinite(phi)) {
        throw std::domain_error("phase must be finite");
    }
    return DeviceOp{DeviceKind::Phase, phi, ComplexMatrix(1, 1, {std::polar(1.0, phi)}), {mode}};
}

DeviceOp custom(ComplexMatrix matrix, std::vector<std::size_t> target_modes) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != target_modes.size() || target_modes.empty()) {
        throw std::invalid_argument("custom operator must be k x k over k target modes");
    }
    for (const auto &a : matrix.data()) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("custom operator has a non-finite entry");
        }
    }
    check_targets(target_modes, std::numeric_limits<std::size_t>::max());
    return DeviceOp{DeviceKind::Custom, 0.0, std::move(matrix), std::move(target_modes)};
}

double unitarity_defect(const DeviceOp &op) {
    const auto product = op.matrix.adjoint() * op.matrix;
    return product.max_abs_diff(ComplexMatrix::identity(op.matrix.rows()));
}

ComplexMatrix embed(const DeviceOp &op, std::size_t n_modes) {
    check_targets(op.target_modes, n_modes);
    if (op.matrix.rows() != op.target_modes.size() || op.matrix.cols() != op.target_modes.size()) {
        throw std::invalid_argument("device matrix does not match its target modes");
    }
    auto full = ComplexMatrix::identity(n_modes);
    const auto &t = op.target_modes;
    for (std::size_t a = 0; a < t.size(); ++a) {
        for (std::size_t b = 0; b < t.size(); ++b) {
            full(t[a], t[b]) = op.matrix(a, b);
        }
    }
    return full;
}

DetectorBank::DetectorBank(std::vector<Detector> detectors) : detectors_(std::move(detectors)) {
    std::set<std::size_t> used;
    for (auto &d : detectors_) {
        if (d.label.empty()) {
            throw std::invalid_argument("detector label must not be empty");
        }
        if (d.label == kUndetected) {
            throw std::invalid_argument("detector label UNDETECTED is reserved");
        }
        if (d.modes.empty()) {
            throw std::invalid_argument("detector '" + d.label + "' has no modes");
        }
        std::sort(d.modes.begin(), d.modes.end());
        for (auto m : d.modes) {
            if (!used.insert(m).second) {
                throw std::invalid_argument("mode " + std::to_string(m) +
                                            " is watched by two detectors in one bank");
            }
        }
    }
    std::sort(detectors_.begin(), detectors_.end(),
              [](const Detector &x, const Detector &y) { return x.label < y.label; });
    for (std::size_t k = 1; k < detectors_.size(); ++k) {
        if (detectors_[k].label == detectors_[k - 1].label) {
            throw std::invalid_argument("duplicate detector label '" + detectors_[k].label + "'");
        }
    }
}

Apparatus::Apparatus(std::size_t n_modes, ProbabilityState source, std::vector<Stage> stages)
    : n_modes_(n_modes), source_(std::move(source)), stages_(std::move(stages)) {
    if (n_modes_ == 0) {
        throw std::invalid_argument("apparatus needs at least one mode");
    }
    if (source_.size() != n_modes_) {
        throw std::invalid_argument("source dimension does not match mode count");
    }
    for (const auto &stage : stages_) {
        if (const auto *op = std::get_if<DeviceOp>(&stage)) {
            embed(*op, n_modes_);
        } else {
            for (const auto &d : std::get<DetectorBank>(stage).detectors()) {
                for (auto m : d.modes) {
                    if (m >= n_modes_) {
                        throw std::invalid_argument("detector '" + d.label + "' watches mode " +
                                                    std::to_string(m) + " out of range");
                    }
                }
            }
        }
    }
}

std::vector<std::string> Apparatus::detector_labels() const {
    std::set<std::string> labels;
    for (const auto &stage : stages_) {
        if (const auto *bank = std::get_if<DetectorBank>(&stage)) {
            for (const auto &d : bank->detectors()) {
                labels.insert(d.label);
            }
        }
    }
    return {labels.begin(), labels.end()};
}

std::vector<std::string> validation_warnings(const Apparatus &apparatus) {
    std::vector<std::string> warnings;
    const auto &stages = apparatus.stages();
    for (std::size_t k = 0; k < stages.size(); ++k) {
        const auto *op = std::get_if<DeviceOp>(&stages[k]);
        if (op == nullptr || op->kind != DeviceKind::Custom) {
            continue;
        }
        const double defect = unitarity_defect(*op);
        if (defect > 1e-6) {
            std::ostringstream msg;
            msg << "stage " << Apparatus::ordering_time(k)
                << ": custom operator is not unitary (max |U^dagger U - I| = " << defect << ")";
            warnings.push_back(msg.str());
        }
    }
    return warnings;
}

ProbabilityState tensor(const ProbabilityState &a, const ProbabilityState &b) {
    std::vector<Amplitude> out;
    out.reserve(a.size() * b.size());
    for (const auto &x : a.amplitudes()) {
        for (const auto &y : b.amplitudes()) {
            out.push_back(x * y);
        }
    }
    return ProbabilityState(std::move(out));
}

bool is_product(const ProbabilityState &s, const TensorSplit &split) {
    if (split.factor_dims.size() != 2 || split.factor_dims[0] == 0 || split.factor_dims[1] == 0 ||
        split.factor_dims[0] * split.factor_dims[1] != s.size()) {
        throw std::invalid_argument("split must have two factors whose product is the state dimension");
    }
    const std::size_t rows = split.factor_dims[0];
    const std::size_t cols = split.factor_dims[1];
    auto at = [&](std::size_t i, std::size_t j) { return s[i * cols + j]; };
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = i + 1; k < rows; ++k) {
            for (std::size_t j = 0; j < cols; ++j) {
                for (std::size_t l = j + 1; l < cols; ++l) {
                    if (std::abs(at(i, j) * at(k, l) - at(i, l) * at(k, j)) > kTolerance) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

}  // namespace gmc
