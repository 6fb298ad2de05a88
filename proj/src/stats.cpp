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

#include "gmc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace gmc::stats {

ChiSquare chi_square(const std::map<std::string, std::uint64_t> &observed,
                     const std::map<std::string, double> &expected, std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("chi-square needs n > 0");
    }
    double total = 0.0;
    for (const auto &[label, p] : expected) {
        total += p;
    }
    if (std::abs(total - 1.0) > kTolerance) {
        throw std::invalid_argument("expected probabilities do not sum to 1");
    }
    ChiSquare out;
    int categories = 0;
    const double nd = static_cast<double>(n);
    for (const auto &[label, p] : expected) {
        if (p < kImpossible) {
            continue;
        }
        ++categories;
        auto it = observed.find(label);
        const double count = it == observed.end() ? 0.0 : static_cast<double>(it->second);
        const double mean = nd * p;
        out.statistic += (count - mean) * (count - mean) / mean;
    }
    if (categories == 0) {
        throw std::invalid_argument("chi-square has no categories");
    }
    out.dof = categories - 1;
    return out;
}

double chi_square_p_value(double statistic, int dof) {
    if (!(statistic >= 0.0)) {
        throw std::invalid_argument("chi-square statistic must be non-negative");
    }
    if (dof < 0) {
        throw std::invalid_argument("degrees of freedom must be non-negative");
    }
    if (dof == 0) {
        return statistic <= 1e-12 ? 1.0 : 0.0;
    }
    if (statistic == 0.0) {
        return 1.0;
    }
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

Verdict compare(const EnsembleReport &report, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    if (report.n_trials == 0) {
        throw std::invalid_argument("report has zero trials");
    }
    Verdict v;
    const auto chi = chi_square(report.counts, report.predicted.entries(), report.n_trials);
    v.chi_square = chi.statistic;
    v.dof = chi.dof;
    v.p_value = chi_square_p_value(chi.statistic, chi.dof);

    std::set<std::string> labels;
    for (const auto &[label, p] : report.predicted.entries()) {
        labels.insert(label);
    }
    for (const auto &[label, c] : report.counts) {
        labels.insert(label);
    }
    const double nd = static_cast<double>(report.n_trials);
    bool within = true;
    for (const auto &label : labels) {
        OutcomeCheck check;
        auto it = report.counts.find(label);
        check.frequency = it == report.counts.end() ? 0.0 : static_cast<double>(it->second) / nd;
        check.predicted = report.predicted.probability(label);
        const double p = std::clamp(check.predicted, 0.0, 1.0);
        const double sigma = std::sqrt(p * (1.0 - p) / nd);
        const double gap = std::abs(check.frequency - check.predicted);
        if (sigma > 0.0) {
            check.sigma_distance = gap / sigma;
        } else {
            // Outcomes predicted impossible (or certain) must match exactly.
            check.sigma_distance = gap <= kImpossible ? 0.0 : std::numeric_limits<double>::infinity();
        }
        within = within && check.sigma_distance <= kMaxSigmaDistance;
        v.per_outcome.emplace(label, check);
    }
    v.pass = v.p_value > alpha && within;
    return v;
}

}  // namespace gmc::stats
