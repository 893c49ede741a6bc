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

#include "dqec/metrics.h"

#include <algorithm>
#include <deque>
#include <limits>

namespace dqec {

namespace {

uint64_t sat_add(uint64_t a, uint64_t b) {
    uint64_t s = a + b;
    return s < a ? std::numeric_limits<uint64_t>::max() : s;
}

/// Stabilizers of one type as supports, plain ones first.
std::vector<std::vector<uint32_t>> stabilizers_of(const AdaptedCode &code, Basis type) {
    std::vector<std::vector<uint32_t>> out;
    for (const auto &c : code.plain) {
        if (c.type == type) {
            out.push_back(c.support);
        }
    }
    for (const auto &s : code.supers) {
        if (s.type == type) {
            out.push_back(s.support());
        }
    }
    return out;
}

std::vector<std::vector<uint32_t>> checks_of(const AdaptedCode &code, Basis type) {
    std::vector<std::vector<uint32_t>> out;
    for (const auto &c : code.plain) {
        if (c.type == type) {
            out.push_back(c.support);
        }
    }
    for (const auto &s : code.supers) {
        for (const auto &m : s.members) {
            if (m.type == type) {
                out.push_back(m.support);
            }
        }
    }
    return out;
}

/// Which cluster, if any, each grid site belongs to.
class ClusterIndex {
   public:
    explicit ClusterIndex(const AdaptedCode &code) : span_(2 * code.layout->l() + 1), ids_(span_ * span_, -1) {
        for (size_t k = 0; k < code.clusters.size(); k++) {
            for (const auto &s : code.clusters[k].sites) {
                ids_[slot(s)] = (int)k;
            }
        }
    }
    int at(Coord c) const {
        if (c.row < -1 || c.col < -1 || c.row >= span_ - 1 || c.col >= span_ - 1) {
            return -1;
        }
        return ids_[slot(c)];
    }

   private:
    int span_;
    std::vector<int> ids_;
    size_t slot(Coord c) const {
        return (size_t)(c.row + 1) * span_ + (c.col + 1);
    }
};

/// Nodes of the given type touching each data qubit (by membership parity).
std::vector<std::vector<uint32_t>> memberships(const AdaptedCode &code, Basis type, uint32_t &num_nodes) {
    std::vector<std::vector<uint32_t>> out(code.data_active.size());
    uint32_t id = 0;
    for (const auto &c : code.plain) {
        if (c.type == type) {
            for (auto q : c.support) {
                out[q].push_back(id);
            }
            id++;
        }
    }
    for (const auto &s : code.supers) {
        if (s.type == type) {
            for (auto q : s.support()) {
                out[q].push_back(id);
            }
            id++;
        }
    }
    num_nodes = id;
    return out;
}

}  // namespace

MatchingGraph matching_graph(const AdaptedCode &code, Basis axis) {
    const auto &L = *code.layout;
    MatchingGraph g;
    g.axis = axis;
    auto member = memberships(code, opposite(axis), g.num_checks);
    ClusterIndex clusters(code);
    int ext = L.extent();
    Edge low_edge = axis == Basis::X ? Edge::Top : Edge::Left;
    Edge high_edge = axis == Basis::X ? Edge::Bottom : Edge::Right;

    auto side = [&](Coord c) -> uint32_t {
        int pos = axis == Basis::X ? c.row : c.col;
        if (pos == 0) {
            return g.low();
        }
        if (pos == ext) {
            return g.high();
        }
        // Inherit the edge of an adjacent deformed boundary.
        int best = INT32_MAX;
        uint32_t pick = PatchLayout::NONE;
        for (int dr = -2; dr <= 2; dr++) {
            for (int dc = -2; dc <= 2; dc++) {
                int k = clusters.at({c.row + dr, c.col + dc});
                if (k < 0 || !code.clusters[k].exterior) {
                    continue;
                }
                const auto &edges = code.clusters[k].edges;
                if (edges.count(low_edge) && pos < best) {
                    best = pos;
                    pick = g.low();
                }
                if (edges.count(high_edge) && ext - pos < best) {
                    best = ext - pos;
                    pick = g.high();
                }
            }
        }
        if (pick != PatchLayout::NONE) {
            return pick;
        }
        return 2 * pos <= ext ? g.low() : g.high();
    };

    for (uint32_t q = 0; q < member.size(); q++) {
        if (!code.data_active[q]) {
            continue;
        }
        const auto &m = member[q];
        if (m.size() > 2) {
            throw std::logic_error("Data qubit " + L.data_qubits()[q].str() + " touches more than two stabilizers.");
        }
        if (m.empty()) {
            g.silent.push_back(q);
        } else if (m.size() == 1) {
            g.arcs.push_back({m[0], side(L.data_qubits()[q]), q});
        } else {
            g.arcs.push_back({m[0], m[1], q});
        }
    }
    return g;
}

static PathStats bfs_count(uint32_t num_nodes, const std::vector<std::pair<uint32_t, uint32_t>> &edges, uint32_t src,
                           uint32_t dst) {
    std::vector<std::vector<uint32_t>> adj(num_nodes);
    for (const auto &[a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> dist(num_nodes, -1);
    std::vector<uint64_t> ways(num_nodes, 0);
    std::deque<uint32_t> queue{src};
    dist[src] = 0;
    ways[src] = 1;
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        if (u == dst) {
            continue;
        }
        for (auto v : adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
            if (dist[v] == dist[u] + 1) {
                ways[v] = sat_add(ways[v], ways[u]);
            }
        }
    }
    if (dist[dst] < 0) {
        return {};
    }
    return {dist[dst], ways[dst]};
}

PathStats shortest_boundary_paths(const MatchingGraph &graph) {
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    edges.reserve(graph.arcs.size());
    for (const auto &a : graph.arcs) {
        edges.push_back({a.a, a.b});
    }
    return bfs_count(graph.num_nodes(), edges, graph.low(), graph.high());
}

int code_distance(const AdaptedCode &code, Basis axis) {
    return exact_logical_paths(code, axis).distance;
}

uint64_t count_min_weight_logicals(const AdaptedCode &code, Basis axis) {
    auto stats = exact_logical_paths(code, axis);
    if (stats.distance == 0) {
        throw unusable_patch("No logical operator crosses the patch.");
    }
    return stats.count;
}

namespace {

struct ActiveColumns {
    std::vector<uint32_t> to_col;
    std::vector<uint32_t> to_qubit;
};

ActiveColumns active_columns(const AdaptedCode &code) {
    ActiveColumns out;
    out.to_col.assign(code.data_active.size(), PatchLayout::NONE);
    for (uint32_t q = 0; q < code.data_active.size(); q++) {
        if (code.data_active[q]) {
            out.to_col[q] = (uint32_t)out.to_qubit.size();
            out.to_qubit.push_back(q);
        }
    }
    return out;
}

BitVec to_bits(const ActiveColumns &cols, const std::vector<uint32_t> &support) {
    BitVec v(cols.to_qubit.size());
    for (auto q : support) {
        v.flip(cols.to_col[q]);
    }
    return v;
}

struct LogicalSpace {
    std::vector<BitVec> commutant;
    Gf2Span stabilizers;
};

LogicalSpace logical_space(const AdaptedCode &code, const ActiveColumns &cols, Basis type) {
    std::vector<BitVec> rows;
    for (const auto &s : checks_of(code, opposite(type))) {
        rows.push_back(to_bits(cols, s));
    }
    LogicalSpace out{gf2_null_space(rows, cols.to_qubit.size()), Gf2Span(cols.to_qubit.size())};
    for (const auto &s : stabilizers_of(code, type)) {
        out.stabilizers.add(to_bits(cols, s));
    }
    return out;
}

}  // namespace

std::vector<uint32_t> bare_logical(const AdaptedCode &code, Basis type) {
    auto cols = active_columns(code);
    auto space = logical_space(code, cols, type);
    for (auto &v : space.commutant) {
        if (!space.stabilizers.contains(v)) {
            std::vector<uint32_t> out;
            for (size_t k = 0; k < cols.to_qubit.size(); k++) {
                if (v.get(k)) {
                    out.push_back(cols.to_qubit[k]);
                }
            }
            return out;
        }
    }
    throw unusable_patch("Patch encodes no logical qubit.");
}

int num_logical_qubits(const AdaptedCode &code, Basis type) {
    auto cols = active_columns(code);
    size_t n = cols.to_qubit.size();
    Gf2Span checks(n), stabs(n);
    for (const auto &s : checks_of(code, opposite(type))) {
        checks.add(to_bits(cols, s));
    }
    for (const auto &s : stabilizers_of(code, type)) {
        stabs.add(to_bits(cols, s));
    }
    return (int)n - (int)checks.rank() - (int)stabs.rank();
}

PathStats exact_logical_paths(const AdaptedCode &code, Basis axis) {
    auto partner = bare_logical(code, opposite(axis));
    std::vector<uint8_t> flips(code.data_active.size(), 0);
    for (auto q : partner) {
        flips[q] = 1;
    }
    auto graph = matching_graph(code, axis);
    uint32_t boundary = graph.low();
    uint32_t n = graph.num_checks + 1;
    uint64_t loops = 0;
    for (auto q : graph.silent) {
        loops += flips[q];
    }
    if (loops) {
        return {1, loops};
    }
    // Node v with parity s lives at 2v + s.
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (const auto &a : graph.arcs) {
        uint32_t u = std::min(a.a, boundary);
        uint32_t v = std::min(a.b, boundary);
        uint32_t p = flips[a.qubit];
        edges.push_back({2 * u, 2 * v + p});
        edges.push_back({2 * u + 1, 2 * v + (p ^ 1)});
    }
    auto stats = bfs_count(2 * n, edges, 2 * boundary, 2 * boundary + 1);
    // Each boundary-to-boundary chain is found once per direction.
    stats.count = stats.count == std::numeric_limits<uint64_t>::max() ? stats.count : stats.count / 2;
    return stats;
}

double disabled_fraction(const AdaptedCode &code) {
    size_t off = code.data_active.size() - code.num_active_data() + code.face_active.size() - code.num_active_faces();
    return (double)off / (double)(code.data_active.size() + code.face_active.size());
}

int largest_cluster_diameter(const AdaptedCode &code) {
    int best = 0;
    for (const auto &c : code.clusters) {
        best = std::max(best, c.diameter);
    }
    return best;
}

bool meets_standard(const AdaptedCode &code, int standard, int d_target) {
    if (standard < 1 || standard > 4) {
        throw invalid_parameter("Standard must be 1, 2, 3 or 4.");
    }
    int l = code.layout->l();
    bool any_x = false, any_z = false, all = true;
    for (Edge e : ALL_EDGES) {
        int width = 0;
        for (const auto &iv : code.edge_profile[(int)e]) {
            width += iv.width;
        }
        bool ok = standard <= 2 ? width == 0 : l - width >= d_target;
        all &= ok;
        if (ok) {
            (PatchLayout::edge_type(e) == Basis::X ? any_x : any_z) = true;
        }
    }
    return (standard == 1 || standard == 3) ? all : (any_x && any_z);
}

PatchMetrics compute_metrics(const AdaptedCode &code, int d_target) {
    PatchMetrics m;
    m.l = code.layout->l();
    m.d_target = d_target;
    auto sx = exact_logical_paths(code, Basis::X);
    auto sz = exact_logical_paths(code, Basis::Z);
    m.d_x = sx.distance;
    m.d_z = sz.distance;
    m.n_min_x = sx.count;
    m.n_min_z = sz.count;
    m.disabled_fraction = disabled_fraction(code);
    m.cluster_diameter = largest_cluster_diameter(code);
    m.num_faulty = code.defects.num_faulty();
    for (int k = 1; k <= 4; k++) {
        m.standards[k - 1] = meets_standard(code, k, d_target);
    }
    return m;
}

nlohmann::json to_json(const PatchMetrics &m) {
    return {{"l", m.l},
            {"d_x", m.d_x},
            {"d_z", m.d_z},
            {"n_min_x", m.n_min_x},
            {"n_min_z", m.n_min_z},
            {"disabled_fraction", m.disabled_fraction},
            {"cluster_diameter", m.cluster_diameter},
            {"num_faulty", m.num_faulty},
            {"d_target", m.d_target},
            {"standards", {m.standards[0], m.standards[1], m.standards[2], m.standards[3]}}};
}

}  // namespace dqec
