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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gmc/core.hpp"

namespace gmc {

/// Exact probability per outcome label. Iteration order is sorted by label.
class OutcomeDistribution {
  public:
    OutcomeDistribution() = default;
    explicit OutcomeDistribution(std::map<std::string, double> entries) : entries_(std::move(entries)) {}

    const std::map<std::string, double> &entries() const { return entries_; }
    /// Probability of `label`, 0 if absent.
    double probability(const std::string &label) const;
    double total() const;
    void add(const std::string &label, double p) { entries_[label] += p; }

  private:
    std::map<std::string, double> entries_;
};

/// One node of the outcome tree. Interior nodes follow the residual
/// (not yet detected) branch stage by stage; leaves are terminal outcomes.
struct BranchNode {
    std::size_t ordering_time = 0;
    BranchAmplitude branch;
    long parent = -1;
    /// Outcome taken from the parent: a detector label, "continue" past a
    /// bank, or "device" for a device stage. Empty for the root.
    std::string edge;
    /// Terminal label for leaves; empty for interior nodes.
    std::string outcome;
    double leaf_probability = 0.0;
    /// Set when a device stage lost norm on the way into this node.
    bool norm_loss = false;

    bool is_leaf() const { return !outcome.empty(); }
};

struct BranchTree {
    std::vector<BranchNode> nodes;

    std::vector<std::size_t> leaves() const;
};

struct Enumeration {
    OutcomeDistribution distribution;
    BranchTree tree;
};

/// Residual branches lighter than this are dropped and folded into UNDETECTED.
inline constexpr double kPruneWeight = 1e-15;

/// out[j] = sum_i op(i, j) * in[i]; weight recomputed.
BranchAmplitude apply(const ComplexMatrix &op, const BranchAmplitude &s);

/// |psi_i|^2 per mode.
std::vector<double> born(const ProbabilityState &s);

/// sum_i r_i |psi_i|^2.
double expectation(const Observable &obs, const ProbabilityState &s);

/// Exact outcome distribution and branch tree. The source is propagated as
/// one unnormalized branch; each detector of a bank emits a leaf with the
/// weight on its modes, and the residual continues with those modes zeroed.
/// Whatever is left at the end, plus any norm lost inside devices, is
/// reported as UNDETECTED. Every detector label appears in the result.
/// Throws std::domain_error if a device increases total probability.
Enumeration enumerate_outcomes(const Apparatus &a);

/// Born probabilities of the unmeasured factor of a two-factor state after
/// observing basis `outcome` on factor `measured_factor`. Labels are the
/// decimal basis indices of the remaining factor. Throws std::domain_error
/// if the outcome has marginal probability <= 1e-12.
OutcomeDistribution conditional_distribution(const ProbabilityState &s, const TensorSplit &split,
                                             std::size_t measured_factor, std::size_t outcome);

/// Composite operator of a Detect-free apparatus, in application order.
ComplexMatrix transfer_matrix(const Apparatus &a);

/// Amplitude at `final_mode` obtained by summing, over every classical
/// sequence of modes through the stages, the product of per-stage matrix
/// elements. Requires a basis-state source and no Detect stages.
Amplitude path_sum_amplitude(const Apparatus &a, std::size_t final_mode);

}  // namespace gmc
