// Copyright 2026 The dqec Authors
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


#include "dqec/circuit.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace dqec {

namespace {

constexpr std::array<std::pair<GateType, const char *>, 13> GATE_NAMES{{
    {GateType::R, "R"},
    {GateType::H, "H"},
    {GateType::CX, "CX"},
    {GateType::M, "M"},
    {GateType::MR, "MR"},
    {GateType::X_ERROR, "X_ERROR"},
    {GateType::Z_ERROR, "Z_ERROR"},
    {GateType::DEPOLARIZE1, "DEPOLARIZE1"},
    {GateType::DEPOLARIZE2, "DEPOLARIZE2"},
    {GateType::TICK, "TICK"},
    {GateType::DETECTOR, "DETECTOR"},
    {GateType::OBSERVABLE_INCLUDE, "OBSERVABLE_INCLUDE"},
    {GateType::REPEAT, "REPEAT"},
}};

bool uses_records(GateType g) {
    return g == GateType::DETECTOR || g == GateType::OBSERVABLE_INCLUDE;
}

uint64_t count_measurements(const std::vector<Instruction> &ops) {
    uint64_t n = 0;
    for (const auto &op : ops) {
        if (op.gate == GateType::M || op.gate == GateType::MR) {
            n += op.targets.size();
        } else if (op.gate == GateType::REPEAT) {
            n += op.repetitions * count_measurements(op.body);
        }
    }
    return n;
}

uint64_t count_gate(const std::vector<Instruction> &ops, GateType g) {
    uint64_t n = 0;
    for (const auto &op : ops) {
        if (op.gate == g) {
            n++;
        } else if (op.gate == GateType::REPEAT) {
            n += op.repetitions * count_gate(op.body, g);
        }
    }
    return n;
}

void flatten_into(const std::vector<Instruction> &ops, std::vector<Instruction> &out) {
    for (const auto &op : ops) {
        if (op.gate == GateType::REPEAT) {
            for (uint64_t k = 0; k < op.repetitions; k++) {
                flatten_into(op.body, out);
            }
        } else {
            out.push_back(op);
        }
    }
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void emit_block(const std::vector<Instruction> &ops, int indent, std::string &out) {
    std::string pad(indent, ' ');
    for (const auto &op : ops) {
        out += pad;
        out += gate_name(op.gate);
        if (op.gate == GateType::REPEAT) {
            out += " " + std::to_string(op.repetitions) + " {\n";
            emit_block(op.body, indent + 4, out);
            out += pad + "}\n";
            continue;
        }
        if (!op.args.empty()) {
            out += "(";
            for (size_t k = 0; k < op.args.size(); k++) {
                if (k) {
                    out += ", ";
                }
                out += format_number(op.args[k]);
            }
            out += ")";
        }
        for (auto t : op.targets) {
            out += " ";
            if (uses_records(op.gate)) {
                out += "rec[" + std::to_string(t) + "]";
            } else {
                out += std::to_string(t);
            }
        }
        out += "\n";
    }
}

[[noreturn]] void fail(size_t line, const std::string &msg) {
    throw circuit_parse_error("line " + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view s, size_t line) {
    s = trim(s);
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail(line, "bad number '" + std::string(s) + "'");
    }
    return v;
}

int64_t parse_int(std::string_view s, size_t line) {
    s = trim(s);
    int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail(line, "bad integer '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            i++;
        }
        size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
            j++;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

struct Parser {
    std::vector<std::string_view> lines;
    size_t pos = 0;
    Circuit circuit;

    std::vector<Instruction> block(bool nested) {
        std::vector<Instruction> ops;
        while (pos < lines.size()) {
            size_t line_no = pos + 1;
            auto line = lines[pos++];
            auto hash = line.find('#');
            if (hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            line = trim(line);
            if (line.empty()) {
                continue;
            }
            if (line == "}") {
                if (!nested) {
                    fail(line_no, "unmatched '}'");
                }
                return ops;
            }
            size_t name_end = 0;
            while (name_end < line.size() && (std::isalnum((unsigned char)line[name_end]) || line[name_end] == '_')) {
                name_end++;
            }
            auto name = line.substr(0, name_end);
            auto rest = line.substr(name_end);
            std::vector<double> args;
            if (!rest.empty() && rest.front() == '(') {
                auto close = rest.find(')');
                if (close == std::string_view::npos) {
                    fail(line_no, "missing ')'");
                }
                auto inner = rest.substr(1, close - 1);
                size_t start = 0;
                while (start <= inner.size()) {
                    auto comma = inner.find(',', start);
                    auto piece = inner.substr(start, comma == std::string_view::npos ? inner.npos : comma - start);
                    if (!trim(piece).empty() || comma != std::string_view::npos) {
                        args.push_back(parse_double(piece, line_no));
                    }
                    if (comma == std::string_view::npos) {
                        break;
                    }
                    start = comma + 1;
                }
                rest = rest.substr(close + 1);
            }
            auto words = split_ws(rest);
            if (name == "QUBIT_COORDS") {
                if (args.size() != 2 || words.size() != 1) {
                    fail(line_no, "QUBIT_COORDS takes two coordinates and one qubit");
                }
                auto q = parse_int(words[0], line_no);
                if (q < 0) {
                    fail(line_no, "negative qubit id");
                }
                if ((size_t)q >= circuit.qubit_coords.size()) {
                    circuit.qubit_coords.resize(q + 1, Coord{INT32_MIN, INT32_MIN});
                }
                circuit.qubit_coords[q] = Coord{(int)args[0], (int)args[1]};
                continue;
            }
            const GateType *gate = nullptr;
            for (const auto &entry : GATE_NAMES) {
                if (name == entry.second) {
                    gate = &entry.first;
                }
            }
            if (!gate) {
                fail(line_no, "unknown instruction '" + std::string(name) + "'");
            }
            Instruction op;
            op.gate = *gate;
            op.args = args;
            if (op.gate == GateType::REPEAT) {
                if (words.size() != 2 || words[1] != "{") {
                    fail(line_no, "expected 'REPEAT n {'");
                }
                op.repetitions = (uint64_t)parse_int(words[0], line_no);
                op.body = block(true);
                ops.push_back(std::move(op));
                continue;
            }
            for (auto w : words) {
                if (uses_records(op.gate)) {
                    if (w.size() < 6 || w.substr(0, 4) != "rec[" || w.back() != ']') {
                        fail(line_no, "expected rec[-k] target");
                    }
                    auto k = parse_int(w.substr(4, w.size() - 5), line_no);
                    if (k >= 0) {
                        fail(line_no, "record offsets must be negative");
                    }
                    op.targets.push_back(k);
                } else {
                    auto q = parse_int(w, line_no);
                    if (q < 0) {
                        fail(line_no, "negative qubit id");
                    }
                    op.targets.push_back(q);
                }
            }
            if (op.gate == GateType::CX && op.targets.size() % 2) {
                fail(line_no, "CX needs an even number of targets");
            }
            if (op.gate == GateType::DEPOLARIZE2 && op.targets.size() % 2) {
                fail(line_no, "DEPOLARIZE2 needs an even number of targets");
            }
            ops.push_back(std::move(op));
        }
        if (nested) {
            fail(lines.size(), "unterminated REPEAT block");
        }
        return ops;
    }
};

}  // namespace

const char *gate_name(GateType g) {
    for (const auto &entry : GATE_NAMES) {
        if (entry.first == g) {
            return entry.second;
        }
    }
    return "?";
}

size_t Circuit::num_qubits() const {
    size_t n = qubit_coords.size();
    for (const auto &op : flattened().instructions) {
        if (!uses_records(op.gate)) {
            for (auto t : op.targets) {
                n = std::max(n, (size_t)t + 1);
            }
        }
    }
    return n;
}

uint64_t Circuit::num_measurements() const {
    return count_measurements(instructions);
}

uint64_t Circuit::num_detectors() const {
    return count_gate(instructions, GateType::DETECTOR);
}

uint64_t Circuit::num_observables() const {
    auto flat = flattened();
    int64_t best = -1;
    for (const auto &op : flat.instructions) {
        if (op.gate == GateType::OBSERVABLE_INCLUDE) {
            best = std::max<int64_t>(best, op.args.empty() ? 0 : (int64_t)op.args[0]);
        }
    }
    return (uint64_t)(best + 1);
}

Circuit Circuit::flattened() const {
    Circuit out;
    out.qubit_coords = qubit_coords;
    flatten_into(instructions, out.instructions);
    return out;
}

std::optional<uint32_t> Circuit::qubit_at(Coord c) const {
    for (uint32_t q = 0; q < qubit_coords.size(); q++) {
        if (qubit_coords[q] == c) {
            return q;
        }
    }
    return std::nullopt;
}

NoiseModel NoiseModel::uniform(double p) {
    NoiseModel n;
    n.p = p;
    return n;
}

double NoiseModel::two_qubit(Coord a) const {
    auto it = overrides.find(a);
    return it == overrides.end() ? p : it->second;
}

double NoiseModel::two_qubit(Coord a, Coord b) const {
    return std::max(two_qubit(a), two_qubit(b));
}

double NoiseModel::one_qubit(Coord a) const {
    return 0.8 * two_qubit(a);
}

double NoiseModel::readout(Coord a) const {
    return two_qubit(a) * 8.0 / 15.0;
}

void NoiseModel::validate() const {
    auto check = [](double v, const char *what) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw invalid_parameter(std::string(what) + " must lie in [0, 1].");
        }
    };
    check(p, "Noise strength p");
    check(idle, "Idle noise");
    for (const auto &[site, v] : overrides) {
        check(v, ("Override at " + site.str()).c_str());
    }
}

std::string emit_text(const Circuit &circuit) {
    std::string out;
    for (size_t q = 0; q < circuit.qubit_coords.size(); q++) {
        const auto &c = circuit.qubit_coords[q];
        out += "QUBIT_COORDS(" + std::to_string(c.row) + ", " + std::to_string(c.col) + ") " + std::to_string(q) + "\n";
    }
    emit_block(circuit.instructions, 0, out);
    return out;
}

Circuit parse_text(std::string_view text) {
    Parser parser;
    size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) {
                parser.lines.push_back(text.substr(start));
            }
            break;
        }
        parser.lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    parser.circuit.instructions = parser.block(false);
    for (size_t q = 0; q < parser.circuit.qubit_coords.size(); q++) {
        if (parser.circuit.qubit_coords[q].row == INT32_MIN) {
            throw circuit_parse_error("qubit " + std::to_string(q) + " has no coordinates");
        }
    }
    return std::move(parser.circuit);
}

}  // namespace dqec
