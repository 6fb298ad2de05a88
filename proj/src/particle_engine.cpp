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

#include "gmc/particle_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "gmc/random.hpp"
#include "gmc/stats.hpp"

namespace gmc {

namespace {

using CompiledStage = std::variant<ComplexMatrix, const DetectorBank *>;

std::vector<CompiledStage> compile(const Apparatus &a) {
    std::vector<CompiledStage> out;
    out.reserve(a.stages().size());
    for (const auto &stage : a.stages()) {
        if (const auto *op = std::get_if<DeviceOp>(&stage)) {
            out.emplace_back(embed(*op, a.n_modes()));
        } else {
            out.emplace_back(&std::get<DetectorBank>(stage));
        }
    }
    return out;
}

void scale(std::vector<Amplitude> &v, double weight) {
    const double s = 1.0 / std::sqrt(weight);
    for (auto &x : v) {
        x *= s;
    }
}

TrialRecord run_trial(const Apparatus &a, const std::vector<CompiledStage> &stages, std::uint64_t seed,
                      std::uint64_t trial_index) {
    TrialRecord record;
    record.trial_index = trial_index;
    std::vector<Amplitude> psi(a.source().amplitudes().begin(), a.source().amplitudes().end());
    std::size_t bank_index = 0;

    for (std::size_t k = 0; k < stages.size(); ++k) {
        const std::size_t time = Apparatus::ordering_time(k);
        if (const auto *op = std::get_if<ComplexMatrix>(&stages[k])) {
            BranchAmplitude next = apply(*op, BranchAmplitude{std::move(psi), 1.0});
            if (next.weight > 1.0 + kTolerance) {
                throw std::domain_error("stage " + std::to_string(time) + " increases total probability");
            }
            const double loss = 1.0 - next.weight;
            if (loss > kForcedTolerance) {
                if (next.weight < kForcedTolerance ||
                    uniform_variate(seed, trial_index, kLossSlotBase + k) < loss) {
                    record.terminal_outcome = kUndetected;
                    return record;
                }
            }
            psi = std::move(next.amplitudes);
            if (next.weight != 1.0) {
                scale(psi, next.weight);
            }
            continue;
        }

        const auto &detectors = std::get<const DetectorBank *>(stages[k])->detectors();
        std::vector<double> p(detectors.size());
        std::vector<Amplitude> residual = psi;
        for (std::size_t d = 0; d < detectors.size(); ++d) {
            for (auto m : detectors[d].modes) {
                p[d] += std::norm(psi[m]);
                residual[m] = 0.0;
            }
        }
        const double cont = squared_norm(residual);

        // Index detectors.size() means "continue".
        std::size_t choice = detectors.size();
        bool forced = cont >= 1.0 - kForcedTolerance;
        for (std::size_t d = 0; d < detectors.size() && !forced; ++d) {
            if (p[d] >= 1.0 - kForcedTolerance) {
                choice = d;
                forced = true;
            }
        }
        if (!forced) {
            const bool can_continue = cont >= kForcedTolerance;
            double total = can_continue ? cont : 0.0;
            for (double x : p) {
                total += x;
            }
            const double u = uniform_variate(seed, trial_index, bank_index) * total;
            double cumulative = 0.0;
            std::size_t last_nonzero = 0;
            choice = can_continue ? detectors.size() : detectors.size() + 1;
            for (std::size_t d = 0; d < detectors.size(); ++d) {
                if (p[d] <= 0.0) {
                    continue;
                }
                last_nonzero = d;
                cumulative += p[d];
                if (u < cumulative) {
                    choice = d;
                    break;
                }
            }
            if (choice == detectors.size() + 1) {
                choice = last_nonzero;
            }
        }

        if (choice < detectors.size()) {
            record.events.push_back(TrialEvent{time, DetectorFired{detectors[choice].label}});
            record.terminal_outcome = detectors[choice].label;
            return record;
        }
        record.events.push_back(TrialEvent{time, PassedBank{bank_index}});
        psi = std::move(residual);
        scale(psi, cont);
        ++bank_index;
    }
    record.terminal_outcome = kUndetected;
    return record;
}

}  // namespace

TrialRecord sample_trial(const Apparatus &a, std::uint64_t seed, std::uint64_t trial_index) {
    return run_trial(a, compile(a), seed, trial_index);
}

EnsembleReport run_ensemble(const Apparatus &a, std::uint64_t n_trials, std::uint64_t seed, unsigned threads) {
    if (n_trials == 0) {
        throw std::invalid_argument("ensemble needs at least one trial");
    }
    const auto stages = compile(a);
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, (n_trials + 4095) / 4096));

    std::vector<std::map<std::string, std::uint64_t>> partial(threads);
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    const std::uint64_t begin = n_trials * w / threads;
                    const std::uint64_t end = n_trials * (w + 1) / threads;
                    for (std::uint64_t t = begin; t < end; ++t) {
                        ++partial[w][run_trial(a, stages, seed, t).terminal_outcome];
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    EnsembleReport report;
    report.n_trials = n_trials;
    report.seed = seed;
    report.predicted = enumerate_outcomes(a).distribution;
    for (const auto &[label, p] : report.predicted.entries()) {
        report.counts[label] = 0;
    }
    for (const auto &counts : partial) {
        for (const auto &[label, c] : counts) {
            report.counts[label] += c;
        }
    }
    for (const auto &[label, c] : report.counts) {
        report.frequencies[label] = static_cast<double>(c) / static_cast<double>(n_trials);
    }
    const auto chi = stats::chi_square(report.counts, report.predicted.entries(), n_trials);
    report.chi_square = chi.statistic;
    report.dof = chi.dof;
    return report;
}

double ensemble_expectation(const EnsembleReport &report, const std::map<std::string, double> &values) {
    double avg = 0.0;
    for (const auto &[label, count] : report.counts) {
        if (count == 0) {
            continue;
        }
        auto it = values.find(label);
        if (it == values.end()) {
            throw std::invalid_argument("no observable value for outcome '" + label + "'");
        }
        avg += it->second * report.frequencies.at(label);
    }
    return avg;
}

}  // namespace gmc
