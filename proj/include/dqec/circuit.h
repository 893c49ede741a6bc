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


#ifndef DQEC_CIRCUIT_H
#define DQEC_CIRCUIT_H

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dqec/adapt.h"

namespace dqec {

enum class GateType : uint8_t {
    R,
    H,
    CX,
    M,
    MR,
    X_ERROR,
    Z_ERROR,
    DEPOLARIZE1,
    DEPOLARIZE2,
    TICK,
    DETECTOR,
    OBSERVABLE_INCLUDE,
    REPEAT,
};

const char *gate_name(GateType g);

struct Instruction {
    GateType gate = GateType::TICK;
    std::vector<double> args;
    /// Qubit ids, or negative measurement-record offsets for DETECTOR and
    /// OBSERVABLE_INCLUDE.
    std::vector<int64_t> targets;
    uint64_t repetitions = 0;       // REPEAT only
    std::vector<Instruction> body;  // REPEAT only
    bool operator==(const Instruction &) const = default;
};

struct Circuit {
    /// Coordinate of each qubit id.
    std::vector<Coord> qubit_coords;
    std::vector<Instruction> instructions;

    size_t num_qubits() const;
    uint64_t num_measurements() const;
    uint64_t num_detectors() const;
    uint64_t num_observables() const;
    /// Copy with every REPEAT block unrolled.
    Circuit flattened() const;
    /// Qubit id of a coordinate, if present.
    std::optional<uint32_t> qubit_at(Coord c) const;
    bool operator==(const Circuit &) const = default;
};

struct NoiseModel {
    /// Two-qubit gate error probability.
    double p = 0.0;
    /// Depolarizing probability on qubits idle during a CX layer. Off by default.
    double idle = 0.0;
    /// Per-qubit replacement for p. One-qubit and readout rates scale by the
    /// same ratios, and a two-qubit gate uses the larger of its qubits' rates.
    std::map<Coord, double> overrides;

    static NoiseModel uniform(double p);
    double p1() const {
        return 0.8 * p;
    }
    double pm() const {
        return p * 8.0 / 15.0;
    }
    double two_qubit(Coord a) const;
    double two_qubit(Coord a, Coord b) const;
    double one_qubit(Coord a) const;
    double readout(Coord a) const;
    /// Throws invalid_parameter when a probability is outside [0, 1].
    void validate() const;
};

/// Logical Z memory experiment over `rounds` syndrome cycles.
Circuit memory_circuit(const AdaptedCode &code, int rounds, const NoiseModel &noise);

struct BadQubit {
    Coord site;
    double p = 0.0;
};

/// Stability experiment on an l x l patch whose four boundaries carry X
/// checks. The observable is the product of every X check outcome in the
/// first round. When `disable_bad` is set the bad qubit is removed and its
/// neighbouring checks become super-stabilizers. Otherwise its rate becomes
/// bad->p.
Circuit stability_circuit(int l, int rounds, const NoiseModel &noise, const std::optional<BadQubit> &bad,
                          bool disable_bad);

std::string emit_text(const Circuit &circuit);

class circuit_parse_error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

Circuit parse_text(std::string_view text);

}  // namespace dqec

#endif
