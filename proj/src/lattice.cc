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

#include "dqec/lattice.h"

#include <random>

namespace dqec {

std::string Coord::str() const {
    return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

char basis_char(Basis b) {
    return b == Basis::X ? 'X' : 'Z';
}

const char *edge_name(Edge e) {
    switch (e) {
        case Edge::Top:
            return "top";
        case Edge::Right:
            return "right";
        case Edge::Bottom:
            return "bottom";
        case Edge::Left:
            return "left";
    }
    return "?";
}

Basis PatchLayout::face_color(Coord site) {
    int i = (site.row - 1) / 2;
    int j = (site.col - 1) / 2;
    return ((i + j) & 1) ? Basis::X : Basis::Z;
}

PatchLayout::PatchLayout(int l) : l_(l), span_(2 * l + 1) {
    if (l < 2) {
        throw invalid_size("Patch width must be at least 2, got " + std::to_string(l) + ".");
    }
    data_lookup_.assign((size_t)span_ * span_, NONE);
    face_lookup_.assign((size_t)span_ * span_, NONE);

    int e = extent();
    for (int r = 0; r <= e; r += 2) {
        for (int c = 0; c <= e; c += 2) {
            data_lookup_[slot({r, c})] = (uint32_t)data_.size();
            data_.push_back({r, c});
        }
    }
    faces_of_.resize(data_.size());

    for (int r = -1; r <= e + 1; r += 2) {
        for (int c = -1; c <= e + 1; c += 2) {
            bool top = r == -1, bottom = r == e + 1, left = c == -1, right = c == e + 1;
            if ((top || bottom) && (left || right)) {
                continue;
            }
            Face f;
            f.site = {r, c};
            f.type = face_color(f.site);
            if (top || bottom || left || right) {
                f.boundary = true;
                f.edge = top ? Edge::Top : bottom ? Edge::Bottom : left ? Edge::Left : Edge::Right;
                if (edge_type(f.edge) != f.type) {
                    continue;
                }
            }
            for (int dr : {-1, 1}) {
                for (int dc : {-1, 1}) {
                    uint32_t q = data_index({r + dr, c + dc});
                    if (q != NONE) {
                        f.data.push_back(q);
                    }
                }
            }
            uint32_t fi = (uint32_t)faces_.size();
            face_lookup_[slot(f.site)] = fi;
            for (uint32_t q : f.data) {
                faces_of_[q].push_back(fi);
                links_.push_back({f.site, data_[q]});
            }
            faces_.push_back(std::move(f));
        }
    }
}

bool PatchLayout::in_grid(Coord c) const {
    return c.row >= -1 && c.col >= -1 && c.row < span_ - 1 && c.col < span_ - 1;
}

size_t PatchLayout::slot(Coord c) const {
    return (size_t)(c.row + 1) * span_ + (size_t)(c.col + 1);
}

uint32_t PatchLayout::data_index(Coord c) const {
    return in_grid(c) ? data_lookup_[slot(c)] : NONE;
}

uint32_t PatchLayout::face_index(Coord c) const {
    return in_grid(c) ? face_lookup_[slot(c)] : NONE;
}

bool PatchLayout::has_link(const Link &link) const {
    uint32_t f = face_index(link.syndrome);
    uint32_t q = data_index(link.data);
    if (f == NONE || q == NONE) {
        return false;
    }
    for (uint32_t k : faces_[f].data) {
        if (k == q) {
            return true;
        }
    }
    return false;
}

bool PatchLayout::on_edge(Coord data, Edge e) const {
    switch (e) {
        case Edge::Top:
            return data.row == 0;
        case Edge::Bottom:
            return data.row == extent();
        case Edge::Left:
            return data.col == 0;
        case Edge::Right:
            return data.col == extent();
    }
    return false;
}

bool PatchLayout::operator==(const PatchLayout &other) const {
    if (l_ != other.l_ || data_ != other.data_ || links_ != other.links_ || faces_.size() != other.faces_.size()) {
        return false;
    }
    for (size_t k = 0; k < faces_.size(); k++) {
        const Face &a = faces_[k];
        const Face &b = other.faces_[k];
        if (a.site != b.site || a.type != b.type || a.data != b.data || a.boundary != b.boundary) {
            return false;
        }
    }
    return true;
}

PatchLayout build_patch(int l) {
    return PatchLayout(l);
}

ComponentCounts component_counts(const PatchLayout &layout) {
    return {layout.data_qubits().size() + layout.faces().size(), layout.links().size()};
}

ComponentCounts component_counts(int l) {
    uint64_t n = (uint64_t)l;
    return {2 * n * n - 1, 4 * n * (n - 1)};
}

DefectKind parse_defect_kind(const std::string &text) {
    if (text == "links" || text == "links_only" || text == "LinksOnly") {
        return DefectKind::LinksOnly;
    }
    if (text == "links_and_qubits" || text == "qubits" || text == "LinksAndQubits") {
        return DefectKind::LinksAndQubits;
    }
    throw invalid_parameter("Unknown defect model '" + text + "' (expected links_only or links_and_qubits).");
}

const char *defect_kind_name(DefectKind kind) {
    return kind == DefectKind::LinksOnly ? "links_only" : "links_and_qubits";
}

void DefectMap::validate(const PatchLayout &layout) const {
    if (l != layout.l()) {
        throw std::invalid_argument(
            "Defect map is for l=" + std::to_string(l) + " but the layout has l=" + std::to_string(layout.l()) + ".");
    }
    for (const auto &q : faulty_qubits) {
        if (!layout.has_qubit(q)) {
            throw std::invalid_argument("Faulty qubit " + q.str() + " is not part of the patch.");
        }
    }
    for (const auto &link : faulty_links) {
        if (!layout.has_link(link)) {
            throw std::invalid_argument(
                "Faulty link " + link.syndrome.str() + "-" + link.data.str() + " is not part of the patch.");
        }
    }
}

uint64_t derive_seed(uint64_t seed, uint64_t index) {
    // splitmix64 finalizer over the combined state.
    uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

DefectMap sample_defects(const PatchLayout &layout, const DefectModel &model, uint64_t seed) {
    if (!(model.rate >= 0.0 && model.rate <= 1.0)) {
        throw invalid_parameter("Defect rate must lie in [0, 1], got " + std::to_string(model.rate) + ".");
    }
    DefectMap out;
    out.l = layout.l();
    out.seed = seed;
    if (model.rate == 0.0) {
        return out;
    }

    bool qubits = model.kind == DefectKind::LinksAndQubits;
    size_t num_data = qubits ? layout.data_qubits().size() : 0;
    size_t num_qubits = qubits ? num_data + layout.faces().size() : 0;
    size_t total = num_qubits + layout.links().size();
    auto mark = [&](size_t k) {
        if (k < num_data) {
            out.faulty_qubits.insert(layout.data_qubits()[k]);
        } else if (k < num_qubits) {
            out.faulty_qubits.insert(layout.faces()[k - num_data].site);
        } else {
            out.faulty_links.insert(layout.links()[k - num_qubits]);
        }
    };

    if (model.rate == 1.0) {
        for (size_t k = 0; k < total; k++) {
            mark(k);
        }
        return out;
    }

    // Gap sampling: the distance between consecutive faulty components is geometric.
    std::mt19937_64 rng(derive_seed(seed, 0));
    std::geometric_distribution<uint64_t> gap(model.rate);
    for (uint64_t k = gap(rng); k < total; k += 1 + gap(rng)) {
        mark((size_t)k);
    }
    return out;
}

nlohmann::json to_json(const DefectMap &defects) {
    nlohmann::json qubits = nlohmann::json::array();
    for (const auto &q : defects.faulty_qubits) {
        qubits.push_back({q.row, q.col});
    }
    nlohmann::json links = nlohmann::json::array();
    for (const auto &link : defects.faulty_links) {
        links.push_back({{link.syndrome.row, link.syndrome.col}, {link.data.row, link.data.col}});
    }
    return {{"l", defects.l}, {"faulty_qubits", qubits}, {"faulty_links", links}, {"seed", defects.seed}};
}

static Coord coord_from_json(const nlohmann::json &j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
        throw std::invalid_argument("Expected a coordinate [row, col], got " + j.dump() + ".");
    }
    return {j[0].get<int>(), j[1].get<int>()};
}

DefectMap defect_map_from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("l")) {
        throw std::invalid_argument("Defect map JSON must be an object with an 'l' field.");
    }
    DefectMap out;
    out.l = j.at("l").get<int>();
    out.seed = j.value("seed", (uint64_t)0);
    for (const auto &q : j.value("faulty_qubits", nlohmann::json::array())) {
        out.faulty_qubits.insert(coord_from_json(q));
    }
    for (const auto &link : j.value("faulty_links", nlohmann::json::array())) {
        if (!link.is_array() || link.size() != 2) {
            throw std::invalid_argument("Expected a link [[r,c],[r,c]], got " + link.dump() + ".");
        }
        Coord a = coord_from_json(link[0]);
        Coord b = coord_from_json(link[1]);
        // Either endpoint order is accepted; data qubits sit on even coordinates.
        if ((a.row & 1) == 0) {
            std::swap(a, b);
        }
        out.faulty_links.insert({a, b});
    }
    PatchLayout layout(out.l);
    out.validate(layout);
    return out;
}

}  // namespace dqec
