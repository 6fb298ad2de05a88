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

#include "gmc/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmc/amplitude_engine.hpp"
#include "gmc/builtins.hpp"
#include "gmc/dsl.hpp"
#include "gmc/format.hpp"
#include "gmc/particle_engine.hpp"
#include "gmc/stats.hpp"

namespace gmc::cli {

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Input {
    dsl::ExperimentDoc doc;
    std::string source_name;
};

Input load(const RunConfig &config, std::ostream &err) {
    if (config.builtin.empty() == config.file.empty()) {
        throw ConfigError("exactly one of --builtin or --file is required");
    }
    if (!config.builtin.empty()) {
        try {
            return {builtin(config.builtin), config.builtin};
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
    }
    std::ifstream in(config.file, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read '" + config.file + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    Input input{dsl::parse(text.str()), config.file};
    for (const auto &w : validation_warnings(input.doc.apparatus)) {
        err << config.file << ": warning: " << w << "\n";
    }
    return input;
}

// Exact-zero UNDETECTED is noise for closed apparatus.
bool visible(const std::string &label, double p) { return label != kUndetected || p > stats::kImpossible; }

std::string distribution_json(const OutcomeDistribution &d) {
    std::string s = "{";
    for (const auto &[label, p] : d.entries()) {
        if (!visible(label, p)) {
            continue;
        }
        s += (s.size() > 1 ? ", " : "") + json_quote(label) + ": " + format_json_real(p);
    }
    return s + "}";
}

template <typename Fn>
int guarded(const RunConfig &config, std::ostream &err, Fn &&body) {
    try {
        return body(load(config, err));
    } catch (const dsl::ParseError &e) {
        err << e.render(config.file.empty() ? config.builtin : config.file);
        return kFailure;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return kBadConfig;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kBadConfig;
    }
}

void emit_report(const EnsembleReport &r, Format format, std::ostream &out) {
    if (format == Format::Csv) {
        out << "outcome,count,frequency,predicted\n";
        for (const auto &[label, c] : r.counts) {
            const double p = r.predicted.probability(label);
            if (c == 0 && !visible(label, p)) {
                continue;
            }
            out << label << "," << c << "," << format_json_real(r.frequencies.at(label)) << ","
                << format_json_real(p) << "\n";
        }
        return;
    }
    std::string counts = "{";
    std::string freqs = "{";
    for (const auto &[label, c] : r.counts) {
        if (c == 0 && !visible(label, r.predicted.probability(label))) {
            continue;
        }
        const char *sep = counts.size() > 1 ? ", " : "";
        counts += sep + json_quote(label) + ": " + std::to_string(c);
        freqs += sep + json_quote(label) + ": " + format_json_real(r.frequencies.at(label));
    }
    out << "{\"chi_square\": " << format_json_real(r.chi_square) << ", \"counts\": " << counts
        << "}, \"dof\": " << r.dof << ", \"frequencies\": " << freqs << "}, \"n_trials\": " << r.n_trials
        << ", \"predicted\": " << distribution_json(r.predicted) << ", \"seed\": " << r.seed << "}\n";
}

OutcomeDistribution read_prediction(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read prediction file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("prediction file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("prediction file must hold an object of label -> probability");
    }
    OutcomeDistribution d;
    for (const auto &[label, value] : j.items()) {
        if (!value.is_number()) {
            throw ConfigError("prediction for '" + label + "' is not a number");
        }
        const double p = value.get<double>();
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("prediction for '" + label + "' is outside [0, 1]");
        }
        d.add(label, p);
    }
    if (std::abs(d.total() - 1.0) > kTolerance) {
        throw ConfigError("prediction probabilities do not sum to 1");
    }
    return d;
}

}  // namespace

int cmd_run(const RunConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(config, err, [&](const Input &input) {
        if (config.emit_dsl) {
            out << dsl::serialize(input.doc);
            return kOk;
        }
        if (config.engine == Engine::Analytic) {
            const auto dist = enumerate_outcomes(input.doc.apparatus).distribution;
            if (config.format == Format::Csv) {
                out << "outcome,probability\n";
                for (const auto &[label, p] : dist.entries()) {
                    if (visible(label, p)) {
                        out << label << "," << format_json_real(p) << "\n";
                    }
                }
            } else {
                out << distribution_json(dist) << "\n";
            }
            return kOk;
        }
        if (config.trials < 1) {
            throw ConfigError("--trials must be at least 1");
        }
        emit_report(run_ensemble(input.doc.apparatus, config.trials, config.seed), config.format, out);
        return kOk;
    });
}

int cmd_compare(const RunConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(config, err, [&](const Input &input) {
        if (config.trials < 1) {
            throw ConfigError("--trials must be at least 1");
        }
        if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
            throw ConfigError("--alpha must lie in (0, 1)");
        }
        std::optional<OutcomeDistribution> prediction;
        if (!config.prediction.empty()) {
            prediction = read_prediction(config.prediction);
        }
        EnsembleReport report = run_ensemble(input.doc.apparatus, config.trials, config.seed);
        if (prediction) {
            report.predicted = *prediction;
        }
        const auto verdict = stats::compare(report, config.alpha);

        if (config.format == Format::Csv) {
            out << "outcome,frequency,predicted,sigma_distance\n";
            for (const auto &[label, c] : verdict.per_outcome) {
                if (!visible(label, c.predicted) && c.frequency == 0.0) {
                    continue;
                }
                out << label << "," << format_json_real(c.frequency) << "," << format_json_real(c.predicted)
                    << "," << format_json_real(c.sigma_distance) << "\n";
            }
        } else {
            std::string per = "{";
            for (const auto &[label, c] : verdict.per_outcome) {
                if (!visible(label, c.predicted) && c.frequency == 0.0) {
                    continue;
                }
                per += (per.size() > 1 ? ", " : "") + json_quote(label) +
                       ": {\"frequency\": " + format_json_real(c.frequency) +
                       ", \"predicted\": " + format_json_real(c.predicted) +
                       ", \"sigma_distance\": " + format_json_real(c.sigma_distance) + "}";
            }
            out << "{\"alpha\": " << format_json_real(config.alpha)
                << ", \"chi_square\": " << format_json_real(verdict.chi_square) << ", \"dof\": " << verdict.dof
                << ", \"n_trials\": " << report.n_trials << ", \"p_value\": " << format_json_real(verdict.p_value)
                << ", \"pass\": " << (verdict.pass ? "true" : "false") << ", \"per_outcome\": " << per
                << "}, \"seed\": " << report.seed << "}\n";
        }
        err << input.source_name << ": " << (verdict.pass ? "PASS" : "FAIL") << " (chi2 " << verdict.chi_square
            << ", dof " << verdict.dof << ", p " << verdict.p_value << ")\n";
        return verdict.pass ? kOk : kFailure;
    });
}

int cmd_scan_phase(const RunConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(config, err, [&](const Input &input) {
        const Apparatus &base = input.doc.apparatus;
        const auto &stages = base.stages();
        if (config.points < 2) {
            throw ConfigError("--points must be at least 2");
        }
        if (config.stage < 1 || config.stage > stages.size() + 1) {
            throw ConfigError("--stage must lie in [1, " + std::to_string(stages.size() + 1) + "]");
        }
        const std::size_t at = config.stage - 1;
        const auto *existing = at < stages.size() ? std::get_if<DeviceOp>(&stages[at]) : nullptr;
        const bool reuse = existing != nullptr && existing->kind == DeviceKind::Phase;
        const std::size_t mode = reuse ? existing->target_modes[0] : 1;
        if (mode >= base.n_modes()) {
            throw ConfigError("cannot insert a PHASE on mode 1 of a single-mode apparatus");
        }

        std::vector<std::pair<double, OutcomeDistribution>> rows;
        for (std::size_t k = 0; k < config.points; ++k) {
            const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(config.points);
            std::vector<Stage> scanned = stages;
            if (reuse) {
                scanned[at] = phase(phi, mode);
            } else {
                scanned.insert(scanned.begin() + static_cast<std::ptrdiff_t>(at), phase(phi, mode));
            }
            const Apparatus a(base.n_modes(), base.source(), std::move(scanned));
            rows.emplace_back(phi, enumerate_outcomes(a).distribution);
        }

        if (config.format == Format::Csv) {
            out << "phi,outcome,probability\n";
            for (const auto &[phi, d] : rows) {
                for (const auto &[label, p] : d.entries()) {
                    if (visible(label, p)) {
                        out << format_json_real(phi) << "," << label << "," << format_json_real(p) << "\n";
                    }
                }
            }
        } else {
            out << "{\"points\": [";
            for (std::size_t k = 0; k < rows.size(); ++k) {
                out << (k ? ", " : "") << "{\"distribution\": " << distribution_json(rows[k].second)
                    << ", \"phi\": " << format_json_real(rows[k].first) << "}";
            }
            out << "], \"stage\": " << config.stage << "}\n";
        }
        return kOk;
    });
}

int main(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Interferometer simulator: exact amplitude engine and trial-by-trial particle engine"};
    app.require_subcommand(1);
    RunConfig config;
    std::string engine = "analytic";
    std::string format = "json";

    auto add_input = [&](CLI::App *cmd) {
        auto *b = cmd->add_option("--builtin", config.builtin, "Builtin experiment")
                      ->check(CLI::IsMember(builtin_names()));
        auto *f = cmd->add_option("--file", config.file, "Experiment description (.gmc)");
        b->excludes(f);
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    };

    auto *run = app.add_subcommand("run", "Evaluate one experiment");
    add_input(run);
    run->add_option("--engine", engine, "analytic or sample")->check(CLI::IsMember({"analytic", "sample"}));
    run->add_option("--trials", config.trials, "Number of sampled trials");
    run->add_option("--seed", config.seed, "64-bit seed");
    run->add_flag("--emit-dsl", config.emit_dsl, "Print the canonical experiment text and exit");

    auto *compare = app.add_subcommand("compare", "Check sampled frequencies against the exact distribution");
    add_input(compare);
    compare->add_option("--trials", config.trials, "Number of sampled trials");
    compare->add_option("--seed", config.seed, "64-bit seed");
    compare->add_option("--alpha", config.alpha, "Significance level");
    compare->add_option("--prediction", config.prediction, "Reference distribution (JSON) replacing the exact one");

    auto *scan = app.add_subcommand("scan", "Phase scan at one stage position");
    add_input(scan);
    scan->add_option("--stage", config.stage, "1-based stage position")->required();
    scan->add_option("--points", config.points, "Number of phases in [0, 2 pi)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadConfig;
    }
    config.engine = engine == "sample" ? Engine::Sample : Engine::Analytic;
    config.format = format == "csv" ? Format::Csv : Format::Json;

    if (run->parsed()) {
        return cmd_run(config, out, err);
    }
    if (compare->parsed()) {
        return cmd_compare(config, out, err);
    }
    return cmd_scan_phase(config, out, err);
}

}  // namespace gmc::cli
