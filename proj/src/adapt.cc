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

#include "dqec/adapt.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "dqec/metrics.h"

namespace dqec {

namespace {

int odd_overlap(const std::vector<uint32_t> &a, const std::vector<uint32_t> &b) {
    size_t i = 0, j = 0;
    int n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            i++;
        } else if (b[j] < a[i]) {
            j++;
        } else {
            n++;
            i++;
            j++;
        }
    }
    return n & 1;
}

struct Hole {
    std::vector<Coord> sites;
    std::vector<uint32_t> data;   // disabled data qubits
    std::vector<uint32_t> faces;  // disabled syndrome qubits
    bool exterior = false;
    std::set<Edge> edges;
    int diameter = 0;
};

int site_diameter(const std::vector<Coord> &sites) {
    if (sites.empty()) {
        return 0;
    }
    int r0 = INT32_MAX, r1 = INT32_MIN, c0 = INT32_MAX, c1 = INT32_MIN;
    for (const auto &s : sites) {
        r0 = std::min(r0, s.row);
        r1 = std::max(r1, s.row);
        c0 = std::min(c0, s.col);
        c1 = std::max(c1, s.col);
    }
    return std::max(r1 - r0, c1 - c0) / 2 + 1;
}

/// Mutable exclusion state over one layout.
class Adapter {
   public:
    const PatchLayout &L;
    std::vector<uint8_t> d_on;
    std::vector<uint8_t> f_on;
    std::vector<Hole> holes;
    std::vector<uint32_t> d_hole;
    std::vector<uint32_t> f_hole;

    explicit Adapter(const PatchLayout &layout)
        : L(layout), d_on(layout.data_qubits().size(), 1), f_on(layout.faces().size(), 1) {
    }

    void disable(Coord c) {
        auto d = L.data_index(c);
        if (d != PatchLayout::NONE) {
            d_on[d] = 0;
            return;
        }
        auto f = L.face_index(c);
        if (f != PatchLayout::NONE) {
            f_on[f] = 0;
        }
    }

    Basis type(uint32_t f) const {
        return L.faces()[f].type;
    }

    std::vector<uint32_t> active_support(uint32_t f) const {
        std::vector<uint32_t> out;
        for (auto q : L.faces()[f].data) {
            if (d_on[q]) {
                out.push_back(q);
            }
        }
        return out;
    }

    bool face_dead(uint32_t f) const {
        auto s = active_support(f);
        if (s.size() <= 1) {
            return true;
        }
        if (s.size() == 2) {
            const auto &a = L.data_qubits()[s[0]];
            const auto &b = L.data_qubits()[s[1]];
            return a.row != b.row && a.col != b.col;
        }
        return false;
    }

    bool data_dead(uint32_t q) const {
        bool x = false, z = false;
        for (auto f : L.faces_of(q)) {
            if (f_on[f]) {
                (type(f) == Basis::X ? x : z) = true;
            }
        }
        return !(x && z);
    }

    bool syndrome_fixpoint() {
        bool changed = false;
        for (uint32_t f = 0; f < f_on.size(); f++) {
            if (f_on[f] && face_dead(f)) {
                f_on[f] = 0;
                changed = true;
            }
        }
        return changed;
    }

    void local_fixpoint() {
        std::vector<uint32_t> fs(f_on.size()), ds(d_on.size());
        std::iota(fs.begin(), fs.end(), 0);
        std::iota(ds.begin(), ds.end(), 0);
        std::reverse(fs.begin(), fs.end());
        std::reverse(ds.begin(), ds.end());
        while (!fs.empty() || !ds.empty()) {
            if (!fs.empty()) {
                auto f = fs.back();
                fs.pop_back();
                if (f_on[f] && face_dead(f)) {
                    f_on[f] = 0;
                    for (auto q : L.faces()[f].data) {
                        if (d_on[q]) {
                            ds.push_back(q);
                        }
                    }
                }
                continue;
            }
            auto q = ds.back();
            ds.pop_back();
            if (d_on[q] && data_dead(q)) {
                d_on[q] = 0;
                for (auto f : L.faces_of(q)) {
                    if (f_on[f]) {
                        fs.push_back(f);
                    }
                }
            }
        }
    }

    std::set<Edge> edges_of_data(uint32_t q) const {
        std::set<Edge> out;
        for (Edge e : ALL_EDGES) {
            if (L.on_edge(L.data_qubits()[q], e)) {
                out.insert(e);
            }
        }
        return out;
    }

    void compute_holes() {
        holes.clear();
        d_hole.assign(d_on.size(), PatchLayout::NONE);
        f_hole.assign(f_on.size(), PatchLayout::NONE);
        auto label = [&](Coord c) -> uint32_t * {
            auto d = L.data_index(c);
            if (d != PatchLayout::NONE) {
                return d_on[d] ? nullptr : &d_hole[d];
            }
            auto f = L.face_index(c);
            if (f != PatchLayout::NONE) {
                return f_on[f] ? nullptr : &f_hole[f];
            }
            return nullptr;
        };
        auto grow = [&](Coord seed) {
            uint32_t id = (uint32_t)holes.size();
            holes.emplace_back();
            Hole &h = holes.back();
            std::vector<Coord> stack{seed};
            *label(seed) = id;
            while (!stack.empty()) {
                Coord c = stack.back();
                stack.pop_back();
                h.sites.push_back(c);
                for (int dr = -2; dr <= 2; dr++) {
                    for (int dc = -2; dc <= 2; dc++) {
                        Coord n{c.row + dr, c.col + dc};
                        auto *lab = label(n);
                        if (lab != nullptr && *lab == PatchLayout::NONE) {
                            *lab = id;
                            stack.push_back(n);
                        }
                    }
                }
            }
            std::sort(h.sites.begin(), h.sites.end());
            for (const auto &c : h.sites) {
                auto d = L.data_index(c);
                if (d != PatchLayout::NONE) {
                    h.data.push_back(d);
                    for (Edge e : edges_of_data(d)) {
                        h.edges.insert(e);
                    }
                } else {
                    auto f = L.face_index(c);
                    h.faces.push_back(f);
                    if (L.faces()[f].boundary) {
                        h.edges.insert(L.faces()[f].edge);
                    }
                }
            }
            h.exterior = !h.edges.empty();
            h.diameter = site_diameter(h.sites);
        };
        for (uint32_t q = 0; q < d_on.size(); q++) {
            if (!d_on[q] && d_hole[q] == PatchLayout::NONE) {
                grow(L.data_qubits()[q]);
            }
        }
        for (uint32_t f = 0; f < f_on.size(); f++) {
            if (!f_on[f] && f_hole[f] == PatchLayout::NONE) {
                grow(L.faces()[f].site);
            }
        }
    }

    bool near_exterior(uint32_t q) const {
        Coord c = L.data_qubits()[q];
        for (int dr = -2; dr <= 2; dr++) {
            for (int dc = -2; dc <= 2; dc++) {
                Coord n{c.row + dr, c.col + dc};
                uint32_t h = PatchLayout::NONE;
                auto d = L.data_index(n);
                if (d != PatchLayout::NONE) {
                    h = d_hole[d];
                } else {
                    auto f = L.face_index(n);
                    if (f != PatchLayout::NONE) {
                        h = f_hole[f];
                    }
                }
                if (h != PatchLayout::NONE && holes[h].exterior) {
                    return true;
                }
            }
        }
        return false;
    }

    bool on_boundary(uint32_t q) const {
        return !edges_of_data(q).empty() || near_exterior(q);
    }

    bool hidden(uint32_t f, const std::vector<uint32_t> &r) const {
        std::map<uint32_t, int> hits;
        for (auto q : r) {
            for (auto g : L.faces_of(q)) {
                if (f_on[g] && type(g) != type(f)) {
                    hits[g]++;
                }
            }
        }
        return std::all_of(hits.begin(), hits.end(), [](const auto &kv) {
            return kv.second % 2 == 0;
        });
    }

    /// Leftover data around a disabled syndrome qubit. Inside the patch they
    /// cannot be covered by a measurable super-stabilizer and are disabled.
    /// On a deformed boundary only an unmeasured stabilizer (one commuting
    /// with every active check of the other type) has to be cut open, at the
    /// boundary side.
    bool release_orphans() {
        std::vector<uint32_t> all_cuts;
        for (uint32_t f = 0; f < f_on.size(); f++) {
            if (f_on[f]) {
                continue;
            }
            auto r = active_support(f);
            if (r.empty()) {
                continue;
            }
            std::vector<uint32_t> cut;
            if (!holes[f_hole[f]].exterior) {
                for (auto q : r) {
                    if (!edges_of_data(q).empty()) {
                        cut.push_back(q);
                    }
                }
            } else if (hidden(f, r)) {
                for (auto q : r) {
                    if (on_boundary(q)) {
                        cut.push_back(q);
                    }
                }
            } else {
                continue;
            }
            if (cut.empty()) {
                cut = r;
            }
            for (auto q : cut) {
                all_cuts.push_back(q);
            }
        }
        for (auto q : all_cuts) {
            d_on[q] = 0;
        }
        return !all_cuts.empty();
    }

    int edge_distance(Coord site, Edge e) const {
        switch (e) {
            case Edge::Top:
                return std::abs(site.row);
            case Edge::Bottom:
                return std::abs(L.extent() - site.row);
            case Edge::Left:
                return std::abs(site.col);
            default:
                return std::abs(L.extent() - site.col);
        }
    }

    std::vector<uint32_t> bordering(const Hole &h) const {
        std::set<uint32_t> out;
        for (auto q : h.data) {
            for (auto g : L.faces_of(q)) {
                if (f_on[g]) {
                    out.insert(g);
                }
            }
        }
        return {out.begin(), out.end()};
    }

    /// Broken checks on a deformed boundary take the type of the nearest edge
    /// the hole touches.
    bool enforce_exterior_types() {
        bool changed = false;
        for (const auto &h : holes) {
            if (!h.exterior) {
                continue;
            }
            for (auto g : bordering(h)) {
                const auto &face = L.faces()[g];
                int best = INT32_MAX;
                bool allow_x = false, allow_z = false;
                for (Edge e : h.edges) {
                    int dist = edge_distance(face.site, e);
                    if (dist < best) {
                        best = dist;
                        allow_x = allow_z = false;
                    }
                    if (dist == best) {
                        (PatchLayout::edge_type(e) == Basis::X ? allow_x : allow_z) = true;
                    }
                }
                bool ok = face.type == Basis::X ? allow_x : allow_z;
                if (!ok) {
                    f_on[g] = 0;
                    changed = true;
                }
            }
        }
        if (changed) {
            return true;
        }
        std::vector<uint32_t> drop;
        for (const auto &h : holes) {
            if (!h.exterior) {
                continue;
            }
            auto border = bordering(h);
            for (auto gx : border) {
                if (type(gx) != Basis::X) {
                    continue;
                }
                auto sx = active_support(gx);
                for (auto gz : border) {
                    if (type(gz) == Basis::Z && odd_overlap(sx, active_support(gz))) {
                        drop.push_back(gx);
                        break;
                    }
                }
            }
        }
        for (auto g : drop) {
            f_on[g] = 0;
        }
        return !drop.empty();
    }

    void run() {
        while (true) {
            local_fixpoint();
            compute_holes();
            if (release_orphans()) {
                continue;
            }
            if (enforce_exterior_types()) {
                continue;
            }
            break;
        }
    }
};

Check make_check(const Adapter &a, uint32_t f) {
    return Check{a.type(f), a.active_support(f), f};
}

void order_clockwise(const PatchLayout &L, const Hole &h, std::vector<uint32_t> &faces) {
    double cr = 0, cc = 0;
    for (const auto &s : h.sites) {
        cr += s.row;
        cc += s.col;
    }
    cr /= h.sites.size();
    cc /= h.sites.size();
    auto angle = [&](uint32_t f) {
        const auto &s = L.faces()[f].site;
        // Rows grow downward, so atan2(dc, -dr) increases clockwise from north.
        double a = std::atan2(s.col - cc, -(s.row - cr));
        return a < 0 ? a + 2 * M_PI : a;
    };
    std::stable_sort(faces.begin(), faces.end(), [&](uint32_t x, uint32_t y) {
        return angle(x) < angle(y);
    });
}

struct Assembly {
    std::vector<Check> plain;
    std::vector<SuperStabilizer> supers;
    std::vector<Cluster> clusters;
};

Assembly assemble(const Adapter &a) {
    Assembly out;
    std::vector<uint8_t> in_super(a.f_on.size(), 0);
    for (uint32_t k = 0; k < a.holes.size(); k++) {
        const Hole &h = a.holes[k];
        out.clusters.push_back(Cluster{h.sites, h.diameter, h.exterior, h.edges});
        if (h.exterior) {
            continue;
        }
        auto border = a.bordering(h);
        std::vector<uint32_t> gx, gz;
        for (auto g : border) {
            (a.type(g) == Basis::X ? gx : gz).push_back(g);
        }
        bool frustrated = false;
        for (auto x : gx) {
            auto sx = a.active_support(x);
            for (auto z : gz) {
                frustrated |= odd_overlap(sx, a.active_support(z)) != 0;
            }
        }
        if (!frustrated) {
            continue;
        }
        order_clockwise(a.L, h, gx);
        order_clockwise(a.L, h, gz);
        for (auto *group : {&gx, &gz}) {
            SuperStabilizer s;
            s.type = a.type(group->front());
            s.cluster_diameter = h.diameter;
            s.cluster = k;
            for (auto g : *group) {
                s.members.push_back(make_check(a, g));
                in_super[g] = 1;
            }
            out.supers.push_back(std::move(s));
        }
    }
    for (uint32_t f = 0; f < a.f_on.size(); f++) {
        if (a.f_on[f] && !in_super[f]) {
            out.plain.push_back(make_check(a, f));
        }
    }
    return out;
}

/// Data qubits shared by every pair of measured operators that must commute
/// but do not.
std::vector<uint32_t> find_conflict(const Assembly &as) {
    struct Item {
        Basis type;
        const std::vector<uint32_t> *support;
        int64_t group;  // cluster for gauges, -1 for plain stabilizers
    };
    std::vector<Item> items;
    std::vector<std::vector<uint32_t>> products;
    products.reserve(as.supers.size());
    for (const auto &c : as.plain) {
        items.push_back({c.type, &c.support, -1});
    }
    for (const auto &s : as.supers) {
        for (const auto &m : s.members) {
            items.push_back({m.type, &m.support, (int64_t)s.cluster});
        }
    }
    auto shared = [](const std::vector<uint32_t> &x, const std::vector<uint32_t> &y) {
        std::vector<uint32_t> out;
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
        return out;
    };
    // Index items by data qubit so only overlapping pairs are examined.
    std::map<uint32_t, std::vector<size_t>> by_qubit;
    for (size_t i = 0; i < items.size(); i++) {
        for (auto q : *items[i].support) {
            by_qubit[q].push_back(i);
        }
    }
    std::set<std::pair<size_t, size_t>> seen;
    std::set<uint32_t> bad;
    for (const auto &kv : by_qubit) {
        for (size_t u : kv.second) {
            for (size_t v : kv.second) {
                if (u >= v || items[u].type == items[v].type) {
                    continue;
                }
                if (items[u].group >= 0 && items[u].group == items[v].group) {
                    continue;
                }
                if (!seen.insert({u, v}).second) {
                    continue;
                }
                if (odd_overlap(*items[u].support, *items[v].support)) {
                    for (auto q : shared(*items[u].support, *items[v].support)) {
                        bad.insert(q);
                    }
                }
            }
        }
    }
    for (const auto &s : as.supers) {
        auto prod = s.support();
        for (const auto &it : items) {
            if (it.type != s.type && odd_overlap(prod, *it.support)) {
                for (auto q : shared(prod, *it.support)) {
                    bad.insert(q);
                }
            }
        }
    }
    return {bad.begin(), bad.end()};
}

}  // namespace

std::vector<uint32_t> SuperStabilizer::support() const {
    std::map<uint32_t, int> n;
    for (const auto &m : members) {
        for (auto q : m.support) {
            n[q] ^= 1;
        }
    }
    std::vector<uint32_t> out;
    for (const auto &kv : n) {
        if (kv.second) {
            out.push_back(kv.first);
        }
    }
    return out;
}

size_t AdaptedCode::num_active_data() const {
    return (size_t)std::count(data_active.begin(), data_active.end(), 1);
}

size_t AdaptedCode::num_active_faces() const {
    return (size_t)std::count(face_active.begin(), face_active.end(), 1);
}

size_t AdaptedCode::num_gauges() const {
    size_t n = 0;
    for (const auto &s : supers) {
        n += s.members.size();
    }
    return n;
}

std::pair<size_t, size_t> AdaptedCode::gauge_location(uint32_t op) const {
    if (op < plain.size()) {
        throw std::out_of_range("Operator " + std::to_string(op) + " is a plain stabilizer.");
    }
    size_t k = op - plain.size();
    for (size_t s = 0; s < supers.size(); s++) {
        if (k < supers[s].members.size()) {
            return {s, k};
        }
        k -= supers[s].members.size();
    }
    throw std::out_of_range("Operator id " + std::to_string(op) + " out of range.");
}

const Check &AdaptedCode::scheduled_check(uint32_t op) const {
    if (op < plain.size()) {
        return plain[op];
    }
    auto [s, m] = gauge_location(op);
    return supers[s].members[m];
}

Basis AdaptedCode::phase(const SuperStabilizer &s, int round) const {
    return ((round / s.cluster_diameter) % 2 == 0) ? Basis::X : Basis::Z;
}

std::set<Coord> resolve_faulty_links(const PatchLayout &layout, const DefectMap &defects) {
    defects.validate(layout);
    std::set<Coord> out = defects.faulty_qubits;
    for (const auto &link : defects.faulty_links) {
        if (!defects.faulty_qubits.count(link.syndrome)) {
            out.insert(link.data);
        }
    }
    return out;
}

std::set<Coord> propagate_disables(const PatchLayout &layout, const std::set<Coord> &disabled) {
    Adapter a(layout);
    for (const auto &c : disabled) {
        a.disable(c);
    }
    a.syndrome_fixpoint();
    std::set<Coord> out = disabled;
    for (uint32_t f = 0; f < a.f_on.size(); f++) {
        if (!a.f_on[f]) {
            out.insert(layout.faces()[f].site);
        }
    }
    return out;
}

static std::array<std::vector<DeformationInterval>, 4> edge_runs(const PatchLayout &L,
                                                                  const std::vector<uint8_t> &d_on) {
    std::array<std::vector<DeformationInterval>, 4> out;
    int l = L.l();
    int ext = L.extent();
    for (Edge e : ALL_EDGES) {
        auto &runs = out[(int)e];
        int start = -1;
        for (int k = 0; k <= l; k++) {
            bool off = false;
            if (k < l) {
                Coord c = e == Edge::Top      ? Coord{0, 2 * k}
                          : e == Edge::Bottom ? Coord{ext, 2 * k}
                          : e == Edge::Left   ? Coord{2 * k, 0}
                                              : Coord{2 * k, ext};
                off = !d_on[L.data_index(c)];
            }
            if (off && start < 0) {
                start = k;
            } else if (!off && start >= 0) {
                runs.push_back({start, k - start});
                start = -1;
            }
        }
    }
    return out;
}

static void run_adapter(Adapter &a, Assembly &as) {
    while (true) {
        a.run();
        as = assemble(a);
        auto conflict = find_conflict(as);
        if (conflict.empty()) {
            return;
        }
        for (auto q : conflict) {
            a.d_on[q] = 0;
        }
    }
}

BoundaryDeformation deform_boundaries(const PatchLayout &layout, const std::set<Coord> &disabled) {
    Adapter a(layout);
    for (const auto &c : disabled) {
        a.disable(c);
    }
    Assembly as;
    run_adapter(a, as);
    BoundaryDeformation out;
    for (uint32_t q = 0; q < a.d_on.size(); q++) {
        if (!a.d_on[q]) {
            out.disabled.insert(layout.data_qubits()[q]);
        }
    }
    for (uint32_t f = 0; f < a.f_on.size(); f++) {
        if (!a.f_on[f]) {
            out.disabled.insert(layout.faces()[f].site);
        }
    }
    for (const auto &c : out.disabled) {
        if (!disabled.count(c)) {
            out.additional.insert(c);
        }
    }
    out.edge_profile = edge_runs(layout, a.d_on);
    return out;
}

MeasurementSchedule build_schedule(const std::vector<Check> &plain, const std::vector<SuperStabilizer> &supers) {
    MeasurementSchedule out;
    int period = 1;
    for (const auto &s : supers) {
        period = std::lcm(period, 2 * s.cluster_diameter);
    }
    out.period = period;
    out.rounds.resize(period);
    for (int t = 0; t < period; t++) {
        auto &round = out.rounds[t];
        for (uint32_t k = 0; k < plain.size(); k++) {
            round.push_back({k, plain[k].type});
        }
        uint32_t id = (uint32_t)plain.size();
        for (const auto &s : supers) {
            Basis phase = ((t / s.cluster_diameter) % 2 == 0) ? Basis::X : Basis::Z;
            for (size_t m = 0; m < s.members.size(); m++, id++) {
                if (s.type == phase) {
                    round.push_back({id, s.type});
                }
            }
        }
    }
    return out;
}

DefectMap swap_roles(const DefectMap &defects) {
    int ext = 2 * defects.l - 2;
    auto rot = [&](Coord c) {
        return Coord{ext - c.row, ext - c.col};
    };
    DefectMap out;
    out.l = defects.l;
    out.seed = defects.seed;
    for (const auto &q : defects.faulty_qubits) {
        out.faulty_qubits.insert(rot(q));
    }
    for (const auto &k : defects.faulty_links) {
        out.faulty_links.insert(Link{rot(k.syndrome), rot(k.data)});
    }
    return out;
}

AdaptOutcome adapt_code(std::shared_ptr<const PatchLayout> layout, const DefectMap &defects) {
    if (defects.l != layout->l()) {
        throw std::invalid_argument("Defect map is for l=" + std::to_string(defects.l) + " but the layout has l=" +
                                    std::to_string(layout->l()) + ".");
    }
    Adapter a(*layout);
    for (const auto &c : resolve_faulty_links(*layout, defects)) {
        a.disable(c);
    }
    Assembly as;
    run_adapter(a, as);

    AdaptedCode code;
    code.layout = layout;
    code.defects = defects;
    code.data_active = a.d_on;
    code.face_active = a.f_on;
    code.plain = std::move(as.plain);
    code.supers = std::move(as.supers);
    code.clusters = std::move(as.clusters);
    code.edge_profile = edge_runs(*layout, a.d_on);
    if (code.num_active_data() == 0) {
        return Unusable{"every data qubit is disabled"};
    }
    if (num_logical_qubits(code, Basis::Z) != 1) {
        return Unusable{"patch does not encode exactly one logical qubit"};
    }
    if (exact_logical_paths(code, Basis::X).distance == 0 || exact_logical_paths(code, Basis::Z).distance == 0) {
        return Unusable{"no logical operator survives"};
    }
    code.schedule = build_schedule(code.plain, code.supers);
    return code;
}

AdaptOutcome adapt_code(const DefectMap &defects) {
    return adapt_code(std::make_shared<const PatchLayout>(defects.l), defects);
}

const AdaptedCode &require_usable(const AdaptOutcome &outcome) {
    if (const auto *u = std::get_if<Unusable>(&outcome)) {
        throw unusable_patch("Patch is unusable: " + u->reason + ".");
    }
    return std::get<AdaptedCode>(outcome);
}

AdaptedCode require_usable(AdaptOutcome &&outcome) {
    require_usable(static_cast<const AdaptOutcome &>(outcome));
    return std::move(std::get<AdaptedCode>(outcome));
}

static nlohmann::json coord_json(Coord c) {
    return nlohmann::json::array({c.row, c.col});
}

static nlohmann::json check_json(const PatchLayout &L, const Check &c) {
    nlohmann::json support = nlohmann::json::array();
    for (auto q : c.support) {
        support.push_back(coord_json(L.data_qubits()[q]));
    }
    return {{"type", std::string(1, basis_char(c.type))},
            {"support", support},
            {"home", coord_json(L.faces()[c.home].site)}};
}

nlohmann::json to_json(const AdaptedCode &code) {
    const auto &L = *code.layout;
    nlohmann::json j;
    j["l"] = L.l();
    j["defects"] = to_json(code.defects);
    nlohmann::json data = nlohmann::json::array();
    for (uint32_t q = 0; q < code.data_active.size(); q++) {
        if (code.data_active[q]) {
            data.push_back(coord_json(L.data_qubits()[q]));
        }
    }
    j["active_data"] = data;
    nlohmann::json syn = nlohmann::json::array();
    for (uint32_t f = 0; f < code.face_active.size(); f++) {
        if (code.face_active[f]) {
            syn.push_back(coord_json(L.faces()[f].site));
        }
    }
    j["active_syndromes"] = syn;
    nlohmann::json plain = nlohmann::json::array();
    for (const auto &c : code.plain) {
        plain.push_back(check_json(L, c));
    }
    j["plain_stabilizers"] = plain;
    nlohmann::json supers = nlohmann::json::array();
    for (const auto &s : code.supers) {
        nlohmann::json members = nlohmann::json::array();
        for (const auto &m : s.members) {
            members.push_back(check_json(L, m));
        }
        supers.push_back({{"type", std::string(1, basis_char(s.type))},
                          {"cluster", s.cluster},
                          {"cluster_diameter", s.cluster_diameter},
                          {"members", members}});
    }
    j["super_stabilizers"] = supers;
    nlohmann::json rounds = nlohmann::json::array();
    for (const auto &r : code.schedule.rounds) {
        nlohmann::json ops = nlohmann::json::array();
        for (const auto &op : r) {
            ops.push_back({op.op, std::string(1, basis_char(op.basis))});
        }
        rounds.push_back(ops);
    }
    j["schedule"] = {{"period", code.schedule.period}, {"rounds", rounds}};
    nlohmann::json edges;
    for (Edge e : ALL_EDGES) {
        nlohmann::json runs = nlohmann::json::array();
        for (const auto &iv : code.edge_profile[(int)e]) {
            runs.push_back({iv.start, iv.width});
        }
        edges[edge_name(e)] = runs;
    }
    j["edge_profile"] = edges;
    return j;
}

AdaptedCode adapted_code_from_json(const nlohmann::json &j) {
    if (!j.contains("defects")) {
        throw std::invalid_argument("Adapted code document has no embedded defect map.");
    }
    auto defects = defect_map_from_json(j.at("defects"));
    auto code = require_usable(adapt_code(defects));
    auto expect = to_json(code);
    for (const char *key : {"active_data", "active_syndromes", "plain_stabilizers", "super_stabilizers"}) {
        if (j.contains(key) && j.at(key) != expect.at(key)) {
            throw std::invalid_argument(std::string("Adapted code field '") + key +
                                        "' does not match its defect map.");
        }
    }
    return code;
}

}  // namespace dqec
