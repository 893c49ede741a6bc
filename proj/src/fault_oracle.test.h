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


#ifndef DQEC_FAULT_ORACLE_TEST_H
#define DQEC_FAULT_ORACLE_TEST_H

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "dqec/circuit.h"

namespace dqec_test {

/// One Pauli fault inserted after instruction `after` of a flattened circuit.
/// Pauli codes: 1 = X, 2 = Z, 3 = Y.
struct Fault {
    size_t after;
    std::vector<std::pair<uint32_t, unsigned>> paulis;
    double p;
};

/// Identity probability of n independent channels over the Pauli group of
/// `qubits` qubits, each firing with probability q, by direct enumeration.
inline double identity_probability(int qubits, double q) {
    int n = (1 << (2 * qubits)) - 1;
    double total = 0;
    for (uint32_t subset = 0; subset < (1u << n); subset++) {
        uint32_t acc = 0;
        double pr = 1;
        for (int k = 0; k < n; k++) {
            if ((subset >> k) & 1) {
                acc ^= (uint32_t)(k + 1);
                pr *= q;
            } else {
                pr *= 1 - q;
            }
        }
        if (acc == 0) {
            total += pr;
        }
    }
    return total;
}

/// Per-Pauli probability q of independent channels reproducing a depolarizing
/// channel of strength p, found by bisection on the identity probability.
inline double component_probability(int qubits, double p) {
    double lo = 0, hi = 0.5;
    for (int it = 0; it < 60; it++) {
        double mid = (lo + hi) / 2;
        if (identity_probability(qubits, mid) > 1 - p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

inline std::vector<Fault> enumerate_faults(const dqec::Circuit &flat) {
    using dqec::GateType;
    std::vector<Fault> out;
    std::map<double, double> q1, q2;
    for (size_t i = 0; i < flat.instructions.size(); i++) {
        const auto &op = flat.instructions[i];
        if (op.args.empty()) {
            continue;
        }
        double p = op.args[0];
        switch (op.gate) {
            case GateType::X_ERROR:
            case GateType::Z_ERROR:
                for (auto t : op.targets) {
                    out.push_back({i, {{(uint32_t)t, op.gate == GateType::X_ERROR ? 1u : 2u}}, p});
                }
                break;
            case GateType::DEPOLARIZE1: {
                if (!q1.count(p)) {
                    q1[p] = component_probability(1, p);
                }
                for (auto t : op.targets) {
                    for (unsigned v = 1; v < 4; v++) {
                        out.push_back({i, {{(uint32_t)t, v}}, q1[p]});
                    }
                }
                break;
            }
            case GateType::DEPOLARIZE2: {
                if (!q2.count(p)) {
                    q2[p] = component_probability(2, p);
                }
                for (size_t k = 0; k + 1 < op.targets.size(); k += 2) {
                    for (unsigned v = 1; v < 16; v++) {
                        Fault f{i, {}, q2[p]};
                        if (v & 3) {
                            f.paulis.push_back({(uint32_t)op.targets[k], v & 3});
                        }
                        if (v >> 2) {
                            f.paulis.push_back({(uint32_t)op.targets[k + 1], v >> 2});
                        }
                        out.push_back(f);
                    }
                }
                break;
            }
            default:
                break;
        }
    }
    return out;
}

struct FaultEffect {
    std::vector<uint32_t> detectors;
    uint64_t observables = 0;
    bool operator<(const FaultEffect &o) const {
        return std::tie(detectors, observables) < std::tie(o.detectors, o.observables);
    }
    bool operator==(const FaultEffect &o) const {
        return detectors == o.detectors && observables == o.observables;
    }
};

/// Forward propagation of one fault; measurement flips feed the annotations.
inline FaultEffect propagate(const dqec::Circuit &flat, const Fault &fault) {
    using dqec::GateType;
    size_t nq = flat.num_qubits();
    std::vector<uint8_t> x(nq, 0), z(nq, 0);
    std::vector<uint8_t> rec;
    FaultEffect out;
    uint32_t det = 0;
    for (size_t i = 0; i < flat.instructions.size(); i++) {
        const auto &op = flat.instructions[i];
        const auto &t = op.targets;
        switch (op.gate) {
            case GateType::R:
                for (auto q : t) {
                    x[q] = z[q] = 0;
                }
                break;
            case GateType::H:
                for (auto q : t) {
                    std::swap(x[q], z[q]);
                }
                break;
            case GateType::CX:
                for (size_t k = 0; k + 1 < t.size(); k += 2) {
                    x[t[k + 1]] ^= x[t[k]];
                    z[t[k]] ^= z[t[k + 1]];
                }
                break;
            case GateType::M:
                for (auto q : t) {
                    rec.push_back(x[q]);
                    z[q] = 0;
                }
                break;
            case GateType::MR:
                for (auto q : t) {
                    rec.push_back(x[q]);
                    x[q] = z[q] = 0;
                }
                break;
            case GateType::DETECTOR: {
                uint8_t v = 0;
                for (auto r : t) {
                    v ^= rec[rec.size() + r];
                }
                if (v) {
                    out.detectors.push_back(det);
                }
                det++;
                break;
            }
            case GateType::OBSERVABLE_INCLUDE: {
                uint8_t v = 0;
                for (auto r : t) {
                    v ^= rec[rec.size() + r];
                }
                if (v) {
                    out.observables ^= uint64_t{1} << (op.args.empty() ? 0 : (int)op.args[0]);
                }
                break;
            }
            default:
                break;
        }
        if (i == fault.after) {
            for (auto [q, pauli] : fault.paulis) {
                x[q] ^= pauli & 1;
                z[q] ^= (pauli >> 1) & 1;
            }
        }
    }
    return out;
}

}  // namespace dqec_test

#endif
