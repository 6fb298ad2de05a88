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

#include "gmc/amplitude_engine.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>

namespace gmc {

double OutcomeDistribution::probability(const std::string &label) const {
    auto it = entries_.find(label);
    return it == entries_.end() ? 0.0 : it->second;
}

double OutcomeDistribution::total() const {
    double sum = 0.0;
    for (const auto &[label, p] : entries_) {
        sum += p;
    }
    return sum;
}

std::vector<std::size_t> BranchTree::leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (nodes[k].is_leaf()) {
            out.push_back(k);
        }
    }
    return out;
}

BranchAmplitude apply(const ComplexMatrix &op, const BranchAmplitude &s) {
    const std::size_t n = s.amplitudes.size();
    if (op.rows() != n || op.cols() != n) {
        throw std::invalid_argument("operator dimension " + std::to_string(op.rows()) + "x" +
                                    std::to_string(op.cols()) + " does not match state dimension " +
                                    std::to_string(n));
    }
    std::vector<Amplitude> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Amplitude psi = s.amplitudes[i];
        if (psi == Amplitude{}) {
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            out[j] += op(i, j) * psi;
        }
    }
    return BranchAmplitude::from(std::move(out));
}

std::vector<double> born(const ProbabilityState &s) {
    std::vector<double> p;
    p.reserve(s.size());
    for (const auto &a : s.amplitudes()) {
        p.push_back(std::norm(a));
    }
    return p;
}

double expectation(const Observable &obs, const ProbabilityState &s) {
    if (obs.values.size() != s.size()) {
        throw std::invalid_argument("observable has " + std::to_string(obs.values.size()) +
                                    " values for a state of dimension " + std::to_string(s.size()));
    }
    double avg = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        avg += obs.values[i] * std::norm(s[i]);
    }
    return avg;
}

Enumeration enumerate_outcomes(const Apparatus &a) {
    Enumeration result;
    for (const auto &label : a.detector_labels()) {
        result.distribution.add(label, 0.0);
    }
    auto &nodes = result.tree.nodes;
    nodes.push_back(BranchNode{0, BranchAmplitude::from(a.source()), -1, "", "", 0.0, false});

    std::size_t current = 0;
    double lost = 0.0;
    bool alive = true;
    const auto &stages = a.stages();
    for (std::size_t k = 0; k < stages.size() && alive; ++k) {
        const std::size_t time = Apparatus::ordering_time(k);
        const BranchAmplitude here = nodes[current].branch;
        if (const auto *op = std::get_if<DeviceOp>(&stages[k])) {
            BranchAmplitude next = apply(embed(*op, a.n_modes()), here);
            const double delta = here.weight - next.weight;
            if (delta < -kTolerance) {
                throw std::domain_error("stage " + std::to_string(time) +
                                        " increases total probability");
            }
            const bool loss = delta > 1e-12;
            if (loss) {
                lost += delta;
            }
            nodes.push_back(BranchNode{time, std::move(next), static_cast<long>(current), "device", "",
                                       0.0, loss});
            current = nodes.size() - 1;
        } else {
            BranchAmplitude residual = here;
            for (const auto &det : std::get<DetectorBank>(stages[k]).detectors()) {
                std::vector<Amplitude> hit(a.n_modes());
                for (auto m : det.modes) {
                    hit[m] = here.amplitudes[m];
                    residual.amplitudes[m] = 0.0;
                }
                BranchAmplitude leaf = BranchAmplitude::from(std::move(hit));
                const double p = leaf.weight;
                result.distribution.add(det.label, p);
                nodes.push_back(BranchNode{time, std::move(leaf), static_cast<long>(current), det.label,
                                           det.label, p, false});
            }
            residual = BranchAmplitude::from(std::move(residual.amplitudes));
            nodes.push_back(BranchNode{time, std::move(residual), static_cast<long>(current), "continue",
                                       "", 0.0, false});
            current = nodes.size() - 1;
        }
        if (nodes[current].branch.weight < kPruneWeight) {
            lost += nodes[current].branch.weight;
            alive = false;
        }
    }

    const double undetected = (alive ? nodes[current].branch.weight : 0.0) + lost;
    BranchAmplitude tail = alive ? nodes[current].branch : BranchAmplitude::from(std::vector<Amplitude>(a.n_modes()));
    nodes.push_back(BranchNode{Apparatus::ordering_time(stages.size()), std::move(tail),
                               static_cast<long>(current), "continue", kUndetected, undetected, lost > 0.0});
    result.distribution.add(kUndetected, undetected);
    return result;
}

OutcomeDistribution conditional_distribution(const ProbabilityState &s, const TensorSplit &split,
                                             std::size_t measured_factor, std::size_t outcome) {
    if (split.factor_dims.size() != 2 || split.factor_dims[0] * split.factor_dims[1] != s.size()) {
        throw std::invalid_argument("split must have two factors whose product is the state dimension");
    }
    if (measured_factor > 1) {
        throw std::invalid_argument("measured factor must be 0 or 1");
    }
    const std::size_t d0 = split.factor_dims[0];
    const std::size_t d1 = split.factor_dims[1];
    if (outcome >= split.factor_dims[measured_factor]) {
        throw std::invalid_argument("outcome index out of range for the measured factor");
    }
    const std::size_t other_dim = measured_factor == 0 ? d1 : d0;
    std::vector<double> weights(other_dim);
    for (std::size_t k = 0; k < other_dim; ++k) {
        const std::size_t idx = measured_factor == 0 ? outcome * d1 + k : k * d1 + outcome;
        weights[k] = std::norm(s[idx]);
    }
    double marginal = 0.0;
    for (double w : weights) {
        marginal += w;
    }
    if (marginal <= 1e-12) {
        throw std::domain_error("conditioning on an outcome with zero probability");
    }
    OutcomeDistribution out;
    for (std::size_t k = 0; k < other_dim; ++k) {
        out.add(std::to_string(k), weights[k] / marginal);
    }
    return out;
}

namespace {

std::vector<ComplexMatrix> device_operators(const Apparatus &a) {
    std::vector<ComplexMatrix> ops;
    for (const auto &stage : a.stages()) {
        const auto *op = std::get_if<DeviceOp>(&stage);
        if (op == nullptr) {
            throw std::invalid_argument("apparatus contains a Detect stage");
        }
        ops.push_back(embed(*op, a.n_modes()));
    }
    return ops;
}

}  // namespace

ComplexMatrix transfer_matrix(const Apparatus &a) {
    auto total = ComplexMatrix::identity(a.n_modes());
    for (const auto &op : device_operators(a)) {
        total = total * op;
    }
    return total;
}

Amplitude path_sum_amplitude(const Apparatus &a, std::size_t final_mode) {
    const auto ops = device_operators(a);
    const long start = a.source().basis_index();
    if (start < 0) {
        throw std::invalid_argument("path sum needs a basis-state source");
    }
    if (final_mode >= a.n_modes()) {
        throw std::invalid_argument("final mode out of range");
    }
    const std::size_t n = a.n_modes();
    const std::size_t stages = ops.size();
    // Intermediate modes m_1 .. m_{stages-1} as a base-n counter; the last mode is pinned.
    std::vector<std::size_t> path(stages, 0);
    if (stages == 0) {
        return static_cast<std::size_t>(start) == final_mode ? Amplitude{1.0, 0.0} : Amplitude{};
    }
    path.back() = final_mode;
    Amplitude sum{};
    while (true) {
        Amplitude product{1.0, 0.0};
        std::size_t from = static_cast<std::size_t>(start);
        for (std::size_t s = 0; s < stages; ++s) {
            product *= ops[s](from, path[s]);
            from = path[s];
        }
        sum += product;

        std::size_t digit = 0;
        while (digit + 1 < stages && ++path[digit] == n) {
            path[digit++] = 0;
        }
        if (digit + 1 == stages) {
            break;
        }
    }
    return sum;
}

}  // namespace gmc
