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

#include "gmc/dsl.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "gmc/format.hpp"

namespace gmc::dsl {

ParseError::ParseError(std::size_t line, std::size_t column, std::string message, std::string snippet)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line), column_(column), message_(std::move(message)), snippet_(std::move(snippet)) {}

std::string ParseError::render(std::string_view source_name) const {
    std::ostringstream out;
    out << source_name << ":" << line_ << ":" << column_ << ": error: " << message_ << "\n"
        << "  " << snippet_ << "\n"
        << "  " << std::string(column_ > 0 ? column_ - 1 : 0, ' ') << "^\n";
    return out.str();
}

bool is_identifier(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    if (!alpha(s[0])) {
        return false;
    }
    for (char c : s.substr(1)) {
        if (!alpha(c) && !(c >= '0' && c <= '9') && c != '-') {
            return false;
        }
    }
    return true;
}

namespace {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

struct Line {
    std::size_t number;
    std::string_view text;  // without '\r' and '\n'
    std::vector<Token> tokens;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view raw = text.substr(pos, end - pos);
        if (!raw.empty() && raw.back() == '\r') {
            raw.remove_suffix(1);
        }
        Line line{++number, raw, {}};
        std::string_view body = raw.substr(0, raw.find('#'));
        std::size_t i = 0;
        while (i < body.size()) {
            if (body[i] == ' ' || body[i] == '\t') {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < body.size() && body[j] != ' ' && body[j] != '\t') {
                ++j;
            }
            line.tokens.push_back(Token{body.substr(i, j - i), i + 1});
            i = j;
        }
        lines.push_back(std::move(line));
        if (end == text.size()) {
            break;
        }
        pos = end + 1;
    }
    return lines;
}

class LineParser {
  public:
    explicit LineParser(const Line &line) : line_(line) {}

    [[noreturn]] void fail(const Token &tok, const std::string &message) const {
        throw ParseError(line_.number, tok.column, message, std::string(line_.text));
    }
    [[noreturn]] void fail_at(std::size_t column, const std::string &message) const {
        throw ParseError(line_.number, column, message, std::string(line_.text));
    }

    const Token &keyword() const { return line_.tokens[0]; }
    bool done() const { return next_ >= line_.tokens.size(); }
    const Token *peek() const { return done() ? nullptr : &line_.tokens[next_]; }

    const Token &take(const char *what) {
        if (done()) {
            // Point just past the last token.
            const Token &last = line_.tokens.back();
            fail_at(last.column + last.text.size(), std::string("expected ") + what);
        }
        return line_.tokens[next_++];
    }

    void finish() const {
        if (!done()) {
            fail(line_.tokens[next_], "unexpected token '" + std::string(line_.tokens[next_].text) + "'");
        }
    }

    std::size_t integer(const Token &tok, std::string_view text) const {
        std::size_t value = 0;
        const char *first = text.data();
        const char *last = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (text.empty() || ec != std::errc() || ptr != last) {
            fail(tok, "malformed integer '" + std::string(text) + "'");
        }
        return value;
    }

    double real(const Token &tok, std::string_view text) const {
        double value = 0.0;
        const char *first = text.data();
        const char *last = text.data() + text.size();
        if (!text.empty() && *first == '+') {
            ++first;
        }
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
            fail(tok, "malformed number '" + std::string(text) + "'");
        }
        return value;
    }

    std::size_t mode(std::size_t n_modes) {
        const Token &tok = take("mode index");
        const std::size_t m = integer(tok, tok.text);
        check_mode(tok, m, n_modes);
        return m;
    }

    void check_mode(const Token &tok, std::size_t m, std::size_t n_modes) const {
        if (m >= n_modes) {
            fail(tok, "mode index " + std::to_string(m) + " out of range (modes " + std::to_string(n_modes) + ")");
        }
    }

    std::pair<std::size_t, std::size_t> mode_pair(std::size_t n_modes) {
        const std::size_t a = mode(n_modes);
        const std::size_t second = next_;
        const std::size_t b = mode(n_modes);
        if (a == b) {
            fail(line_.tokens[second], "device modes must be distinct");
        }
        return {a, b};
    }

    double keyed_real(const Token &tok, std::string_view key) const {
        if (tok.text.substr(0, key.size()) != key) {
            fail(tok, "expected '" + std::string(key) + "FLOAT'");
        }
        return real(tok, tok.text.substr(key.size()));
    }

    Amplitude complex_literal() {
        const Token &tok = take("complex literal (re,im)");
        std::string_view t = tok.text;
        const std::size_t comma = t.find(',');
        if (t.size() < 5 || t.front() != '(' || t.back() != ')' || comma == std::string_view::npos ||
            t.find(',', comma + 1) != std::string_view::npos) {
            fail(tok, "malformed complex literal '" + std::string(t) + "', expected (re,im)");
        }
        const double re = real(tok, t.substr(1, comma - 1));
        const double im = real(tok, t.substr(comma + 1, t.size() - comma - 2));
        return {re, im};
    }

  private:
    const Line &line_;
    std::size_t next_ = 1;
};

bool is_stage_keyword(std::string_view k) {
    return k == "H" || k == "R" || k == "X" || k == "PHASE" || k == "OP" || k == "DETECT";
}

Stage parse_stage(LineParser &p, std::size_t n_modes) {
    const std::string_view kw = p.keyword().text;
    if (kw == "H") {
        auto [a, b] = p.mode_pair(n_modes);
        double t = kDefaultTransmission;
        if (const Token *tok = p.peek()) {
            t = p.keyed_real(*tok, "t=");
            if (!(t >= 0.0 && t <= 1.0)) {
                p.fail(*tok, "transmission t must lie in [0, 1]");
            }
            p.take("t=");
        }
        p.finish();
        return beam_splitter(t, a, b);
    }
    if (kw == "R" || kw == "X") {
        auto [a, b] = p.mode_pair(n_modes);
        p.finish();
        return kw == "R" ? reflector(a, b) : cross(a, b);
    }
    if (kw == "PHASE") {
        const std::size_t m = p.mode(n_modes);
        const Token &tok = p.take("phi=FLOAT");
        const double phi = p.keyed_real(tok, "phi=");
        p.finish();
        return phase(phi, m);
    }
    if (kw == "OP") {
        auto [a, b] = p.mode_pair(n_modes);
        std::vector<Amplitude> entries;
        for (int k = 0; k < 4; ++k) {
            entries.push_back(p.complex_literal());
        }
        p.finish();
        return custom(ComplexMatrix(2, 2, std::move(entries)), {a, b});
    }
    // DETECT
    std::vector<Detector> detectors;
    std::set<std::string> labels;
    std::set<std::size_t> watched;
    if (p.done()) {
        p.take("detector LABEL@MODE");
    }
    while (const Token *tok = p.peek()) {
        p.take("detector");
        const std::size_t at = tok->text.find('@');
        if (at == std::string_view::npos) {
            p.fail(*tok, "expected LABEL@MODE, got '" + std::string(tok->text) + "'");
        }
        const std::string label(tok->text.substr(0, at));
        if (!is_identifier(label)) {
            p.fail(*tok, "invalid detector label '" + label + "'");
        }
        if (label == kUndetected) {
            p.fail(*tok, "detector label UNDETECTED is reserved");
        }
        if (!labels.insert(label).second) {
            p.fail(*tok, "duplicate detector label '" + label + "' in bank");
        }
        Detector det{label, {}};
        std::string_view rest = tok->text.substr(at + 1);
        std::size_t offset = at + 1;
        while (true) {
            const std::size_t comma = rest.find(',');
            const std::string_view piece = rest.substr(0, comma);
            const Token part{piece, tok->column + offset};
            const std::size_t m = p.integer(part, piece);
            p.check_mode(part, m, n_modes);
            if (!watched.insert(m).second) {
                p.fail(part, "mode " + std::to_string(m) + " is already watched in this bank");
            }
            det.modes.push_back(m);
            if (comma == std::string_view::npos) {
                break;
            }
            rest = rest.substr(comma + 1);
            offset += comma + 1;
        }
        detectors.push_back(std::move(det));
    }
    return DetectorBank(std::move(detectors));
}

}  // namespace

ExperimentDoc parse(std::string_view text) {
    const auto lines = split_lines(text);
    std::optional<std::string> name;
    std::optional<std::size_t> n_modes;
    std::optional<ProbabilityState> source;
    std::vector<Stage> stages;

    for (const auto &line : lines) {
        if (line.tokens.empty()) {
            continue;
        }
        LineParser p(line);
        const Token &kw = p.keyword();
        if (kw.text == "experiment") {
            if (name) {
                p.fail(kw, "duplicate 'experiment' statement");
            }
            const Token &tok = p.take("experiment name");
            if (!is_identifier(tok.text)) {
                p.fail(tok, "invalid experiment name '" + std::string(tok.text) + "'");
            }
            p.finish();
            name = std::string(tok.text);
        } else if (kw.text == "modes") {
            if (!name) {
                p.fail(kw, "expected 'experiment' statement first");
            }
            if (n_modes) {
                p.fail(kw, "duplicate 'modes' statement");
            }
            const Token &tok = p.take("mode count");
            const std::size_t n = p.integer(tok, tok.text);
            if (n == 0 || n > kMaxModes) {
                p.fail(tok, "mode count must lie in [1, " + std::to_string(kMaxModes) + "]");
            }
            p.finish();
            n_modes = n;
        } else if (kw.text == "source") {
            if (!n_modes) {
                p.fail(kw, name ? "expected 'modes' before 'source'" : "expected 'experiment' statement first");
            }
            if (source) {
                p.fail(kw, "duplicate 'source' statement");
            }
            const Token &kind = p.take("'mode' or 'amps'");
            if (kind.text == "mode") {
                const std::size_t m = p.mode(*n_modes);
                p.finish();
                source = ProbabilityState::basis(*n_modes, m);
            } else if (kind.text == "amps") {
                std::vector<Amplitude> amps;
                for (std::size_t k = 0; k < *n_modes; ++k) {
                    amps.push_back(p.complex_literal());
                }
                p.finish();
                const double norm = squared_norm(amps);
                if (std::abs(norm - 1.0) > kSourceNormTolerance) {
                    p.fail(kind, "source amplitudes are not normalized (squared norm " + format_real(norm) + ")");
                }
                if (std::abs(norm - 1.0) > kTolerance) {
                    const double s = 1.0 / std::sqrt(norm);
                    for (auto &a : amps) {
                        a *= s;
                    }
                }
                source = ProbabilityState(std::move(amps));
            } else {
                p.fail(kind, "expected 'mode' or 'amps', got '" + std::string(kind.text) + "'");
            }
        } else if (is_stage_keyword(kw.text)) {
            if (!source) {
                p.fail(kw, name && n_modes ? "expected 'source' before stages"
                                           : "expected 'experiment', 'modes' and 'source' before stages");
            }
            stages.push_back(parse_stage(p, *n_modes));
        } else {
            p.fail(kw, "unknown keyword '" + std::string(kw.text) + "'");
        }
    }

    if (!name || !n_modes || !source) {
        const char *missing = !name ? "experiment" : !n_modes ? "modes" : "source";
        const Line *last = &lines.front();
        for (const auto &line : lines) {
            if (!line.text.empty()) {
                last = &line;
            }
        }
        throw ParseError(last->number, 1, std::string("missing '") + missing + "' statement",
                         std::string(last->text));
    }
    return ExperimentDoc{*name, Apparatus(*n_modes, std::move(*source), std::move(stages))};
}

namespace {

std::string complex_text(const Amplitude &a) {
    return "(" + format_real(a.real()) + "," + format_real(a.imag()) + ")";
}

}  // namespace

std::string serialize(const ExperimentDoc &doc) {
    const Apparatus &a = doc.apparatus;
    std::ostringstream out;
    out << "experiment " << doc.name << "\n";
    out << "modes " << a.n_modes() << "\n";
    if (const long m = a.source().basis_index(); m >= 0) {
        out << "source mode " << m << "\n";
    } else {
        out << "source amps";
        for (const auto &amp : a.source().amplitudes()) {
            out << " " << complex_text(amp);
        }
        out << "\n";
    }
    for (const auto &stage : a.stages()) {
        if (const auto *bank = std::get_if<DetectorBank>(&stage)) {
            out << "DETECT";
            for (const auto &d : bank->detectors()) {
                out << " " << d.label << "@";
                for (std::size_t k = 0; k < d.modes.size(); ++k) {
                    out << (k ? "," : "") << d.modes[k];
                }
            }
            out << "\n";
            continue;
        }
        const auto &op = std::get<DeviceOp>(stage);
        const auto &t = op.target_modes;
        switch (op.kind) {
        case DeviceKind::BeamSplitter:
            out << "H " << t[0] << " " << t[1];
            if (op.parameter != kDefaultTransmission) {
                out << " t=" << format_real(op.parameter);
            }
            break;
        case DeviceKind::Reflector:
            out << "R " << t[0] << " " << t[1];
            break;
        case DeviceKind::Cross:
            out << "X " << t[0] << " " << t[1];
            break;
        case DeviceKind::Phase:
            out << "PHASE " << t[0] << " phi=" << format_real(op.parameter);
            break;
        case DeviceKind::Custom:
            if (t.size() != 2) {
                throw std::invalid_argument("only 2x2 custom operators can be written as OP");
            }
            out << "OP " << t[0] << " " << t[1];
            for (const auto &entry : op.matrix.data()) {
                out << " " << complex_text(entry);
            }
            break;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace gmc::dsl
