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

#ifndef DQEC_LATTICE_H
#define DQEC_LATTICE_H

#include <array>
#include <compare>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace dqec {

/// Position on the interleaved grid. Data qubits sit at (even, even) positions
/// in [0, 2l-2]^2; syndrome qubits sit at (odd, odd) positions, with boundary
/// syndromes on rows/cols -1 and 2l-1.
struct Coord {
    int row = 0;
    int col = 0;

    auto operator<=>(const Coord &) const = default;
    std::string str() const;
};

enum class Basis : uint8_t { X = 0, Z = 1 };

inline Basis opposite(Basis b) {
    return b == Basis::X ? Basis::Z : Basis::X;
}
char basis_char(Basis b);

enum class Edge : uint8_t { Top = 0, Right = 1, Bottom = 2, Left = 3 };
constexpr std::array<Edge, 4> ALL_EDGES{Edge::Top, Edge::Right, Edge::Bottom, Edge::Left};
const char *edge_name(Edge e);

/// A coupling between a syndrome qubit and one of its data qubits.
struct Link {
    Coord syndrome;
    Coord data;

    auto operator<=>(const Link &) const = default;
};

/// One stabilizer face of the defect-free patch, i.e. one syndrome qubit.
struct Face {
    Coord site;
    Basis type;
    std::vector<uint32_t> data;  // indices into PatchLayout::data_qubits
    bool boundary = false;
    Edge edge = Edge::Top;  // meaningful only when boundary
};

class invalid_size : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

class invalid_parameter : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Geometry of an l x l rotated surface code chiplet.
///
/// Top and bottom edges carry weight-2 X checks; left and right edges carry
/// weight-2 Z checks. Logical Z therefore runs left to right and logical X
/// runs top to bottom.
class PatchLayout {
   public:
    static constexpr uint32_t NONE = UINT32_MAX;

    explicit PatchLayout(int l);

    int l() const {
        return l_;
    }
    /// Largest data-qubit coordinate (2l - 2).
    int extent() const {
        return 2 * l_ - 2;
    }

    const std::vector<Coord> &data_qubits() const {
        return data_;
    }
    const std::vector<Face> &faces() const {
        return faces_;
    }
    const std::vector<Link> &links() const {
        return links_;
    }
    /// Faces touching each data qubit.
    const std::vector<uint32_t> &faces_of(uint32_t data_index) const {
        return faces_of_[data_index];
    }

    static Basis edge_type(Edge e) {
        return (e == Edge::Top || e == Edge::Bottom) ? Basis::X : Basis::Z;
    }

    /// Index of the data qubit at c, or NONE.
    uint32_t data_index(Coord c) const;
    /// Index of the syndrome qubit at c, or NONE.
    uint32_t face_index(Coord c) const;
    bool has_qubit(Coord c) const {
        return data_index(c) != NONE || face_index(c) != NONE;
    }
    bool has_link(const Link &link) const;

    /// Color of a face position, whether or not a syndrome qubit exists there.
    static Basis face_color(Coord site);
    bool on_edge(Coord data, Edge e) const;

    bool operator==(const PatchLayout &other) const;

   private:
    int l_;
    std::vector<Coord> data_;
    std::vector<Face> faces_;
    std::vector<Link> links_;
    std::vector<std::vector<uint32_t>> faces_of_;
    int span_;  // side of the lookup grid covering rows/cols [-1, 2l-1]
    std::vector<uint32_t> data_lookup_;
    std::vector<uint32_t> face_lookup_;

    size_t slot(Coord c) const;
    bool in_grid(Coord c) const;
};

PatchLayout build_patch(int l);

struct ComponentCounts {
    uint64_t qubits;
    uint64_t links;
    bool operator==(const ComponentCounts &) const = default;
};

ComponentCounts component_counts(const PatchLayout &layout);
ComponentCounts component_counts(int l);

enum class DefectKind : uint8_t { LinksOnly, LinksAndQubits };

struct DefectModel {
    DefectKind kind = DefectKind::LinksAndQubits;
    double rate = 0.0;
};

DefectKind parse_defect_kind(const std::string &text);
const char *defect_kind_name(DefectKind kind);

/// Faulty components on one chiplet.
struct DefectMap {
    int l = 0;
    std::set<Coord> faulty_qubits;
    std::set<Link> faulty_links;
    uint64_t seed = 0;

    size_t num_faulty() const {
        return faulty_qubits.size() + faulty_links.size();
    }
    bool empty() const {
        return faulty_qubits.empty() && faulty_links.empty();
    }
    bool operator==(const DefectMap &other) const {
        return l == other.l && faulty_qubits == other.faulty_qubits && faulty_links == other.faulty_links;
    }

    /// Throws std::invalid_argument if a member does not exist in the layout.
    void validate(const PatchLayout &layout) const;
};

/// Every component fails independently with probability model.rate.
DefectMap sample_defects(const PatchLayout &layout, const DefectModel &model, uint64_t seed);

nlohmann::json to_json(const DefectMap &defects);
DefectMap defect_map_from_json(const nlohmann::json &j);

/// Deterministic stream splitting: a well mixed seed for sub-stream `index`.
uint64_t derive_seed(uint64_t seed, uint64_t index);

}  // namespace dqec

#endif
