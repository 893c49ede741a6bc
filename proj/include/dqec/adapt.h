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

#ifndef DQEC_ADAPT_H
#define DQEC_ADAPT_H

#include <array>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dqec/lattice.h"

namespace dqec {

/// A measured check: an ordinary stabilizer, or one gauge of a super-stabilizer.
/// Supports are data-qubit indices of the layout; home is a face index.
struct Check {
    Basis type;
    std::vector<uint32_t> support;
    uint32_t home;

    bool operator==(const Check &) const = default;
};

using GaugeOperator = Check;

struct SuperStabilizer {
    Basis type;
    std::vector<GaugeOperator> members;
    int cluster_diameter = 1;
    uint32_t cluster = 0;  // index into AdaptedCode::clusters

    /// Data qubits covered an odd number of times by the members.
    std::vector<uint32_t> support() const;
    bool operator==(const SuperStabilizer &) const = default;
};

struct ScheduledOp {
    uint32_t op;  // plain stabilizers first, then gauges in super/member order
    Basis basis;
    bool operator==(const ScheduledOp &) const = default;
};

struct MeasurementSchedule {
    int period = 1;
    std::vector<std::vector<ScheduledOp>> rounds;
    bool operator==(const MeasurementSchedule &) const = default;
};

/// Run of excluded data qubits along one edge, in data-qubit units from the
/// edge's low-index end.
struct DeformationInterval {
    int start;
    int width;
    bool operator==(const DeformationInterval &) const = default;
};

/// A connected group of disabled sites.
struct Cluster {
    std::vector<Coord> sites;
    int diameter = 0;
    bool exterior = false;  // reaches the patch edge
    std::set<Edge> edges;   // original edges the cluster touches
};

struct AdaptedCode {
    std::shared_ptr<const PatchLayout> layout;
    DefectMap defects;
    std::vector<uint8_t> data_active;  // by layout data index
    std::vector<uint8_t> face_active;  // by layout face index
    std::vector<Check> plain;
    std::vector<SuperStabilizer> supers;
    MeasurementSchedule schedule;
    std::array<std::vector<DeformationInterval>, 4> edge_profile;
    std::vector<Cluster> clusters;

    size_t num_active_data() const;
    size_t num_active_faces() const;
    size_t num_gauges() const;
    /// Gauge id -> (super index, member index), following the schedule numbering.
    std::pair<size_t, size_t> gauge_location(uint32_t op) const;
    const Check &scheduled_check(uint32_t op) const;
    /// Basis a super-stabilizer's gauges are measured in during `round`.
    Basis phase(const SuperStabilizer &s, int round) const;
};

struct Unusable {
    std::string reason;
};

using AdaptOutcome = std::variant<AdaptedCode, Unusable>;

/// Data qubits to disable because of faulty links: the data end of each faulty
/// link, unless its syndrome end is itself faulty.
std::set<Coord> resolve_faulty_links(const PatchLayout &layout, const DefectMap &defects);

/// Closes a disabled set under the syndrome rules: a syndrome qubit with at
/// most one active data neighbor, or with exactly two that lie on a diagonal
/// through it, is disabled.
std::set<Coord> propagate_disables(const PatchLayout &layout, const std::set<Coord> &disabled);

struct BoundaryDeformation {
    std::set<Coord> disabled;  // closed set, including the input
    std::set<Coord> additional;
    std::array<std::vector<DeformationInterval>, 4> edge_profile;
};

/// Runs the full exclusion fixpoint (syndrome rules, data-qubit coverage,
/// hidden-check removal, single-type boundaries) on an initial disabled set.
BoundaryDeformation deform_boundaries(const PatchLayout &layout, const std::set<Coord> &disabled);

MeasurementSchedule build_schedule(const std::vector<Check> &plain, const std::vector<SuperStabilizer> &supers);

/// Maps every defect through the 180 degree rotation of the patch grid.
DefectMap swap_roles(const DefectMap &defects);

AdaptOutcome adapt_code(std::shared_ptr<const PatchLayout> layout, const DefectMap &defects);
AdaptOutcome adapt_code(const DefectMap &defects);

/// Throws if the outcome is Unusable.
const AdaptedCode &require_usable(const AdaptOutcome &outcome);
AdaptedCode require_usable(AdaptOutcome &&outcome);

nlohmann::json to_json(const AdaptedCode &code);
/// Re-derives the code from its embedded defect map and checks that the
/// operator content matches the document.
AdaptedCode adapted_code_from_json(const nlohmann::json &j);

class unusable_patch : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace dqec

#endif
