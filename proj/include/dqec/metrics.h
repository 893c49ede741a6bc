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

#ifndef DQEC_METRICS_H
#define DQEC_METRICS_H

#include <cstdint>
#include <vector>

#include "dqec/adapt.h"
#include "dqec/gf2.h"

namespace dqec {

/// Axis naming: Basis::X is the vertical axis (X logical, top to bottom),
/// Basis::Z the horizontal one (Z logical, left to right).
///
/// Dual graph of one error type. Nodes are the stabilizers that detect it,
/// with each super-stabilizer as a single node; arcs are data qubits.
struct MatchingGraph {
    struct Arc {
        uint32_t a;
        uint32_t b;
        uint32_t qubit;
    };
    Basis axis;
    uint32_t num_checks = 0;
    std::vector<Arc> arcs;
    /// Data qubits that no stabilizer of the detecting type touches.
    std::vector<uint32_t> silent;

    uint32_t low() const {
        return num_checks;
    }
    uint32_t high() const {
        return num_checks + 1;
    }
    uint32_t num_nodes() const {
        return num_checks + 2;
    }
};

MatchingGraph matching_graph(const AdaptedCode &code, Basis axis);

struct PathStats {
    int distance = 0;  // 0 when the boundaries are disconnected
    uint64_t count = 0;
};

/// Shortest low-to-high boundary paths, with saturating multiplicities.
PathStats shortest_boundary_paths(const MatchingGraph &graph);

int code_distance(const AdaptedCode &code, Basis axis);
uint64_t count_min_weight_logicals(const AdaptedCode &code, Basis axis);

/// A bare logical of the given Pauli type: commutes with every measured check
/// of the other type and is not a stabilizer. Returned as data indices.
std::vector<uint32_t> bare_logical(const AdaptedCode &code, Basis type);

/// Number of encoded qubits: dim of operators of `type` commuting with every
/// check of the other type, minus the rank of the stabilizers of `type`.
int num_logical_qubits(const AdaptedCode &code, Basis type);

/// Distance and count computed without boundary assignment: every dangling
/// arc meets one boundary node and paths are tracked by their overlap parity
/// with the opposite bare logical.
PathStats exact_logical_paths(const AdaptedCode &code, Basis axis);

double disabled_fraction(const AdaptedCode &code);
int largest_cluster_diameter(const AdaptedCode &code);
bool meets_standard(const AdaptedCode &code, int standard, int d_target);

struct PatchMetrics {
    int l = 0;
    int d_x = 0;
    int d_z = 0;
    uint64_t n_min_x = 0;
    uint64_t n_min_z = 0;
    double disabled_fraction = 0;
    int cluster_diameter = 0;
    size_t num_faulty = 0;
    std::array<bool, 4> standards{};
    int d_target = 0;
};

PatchMetrics compute_metrics(const AdaptedCode &code, int d_target);
nlohmann::json to_json(const PatchMetrics &m);

}  // namespace dqec

#endif
