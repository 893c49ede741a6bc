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

#include <limits>

#include "brute_force.test.h"
#include "gtest/gtest.h"

using namespace dqec;
using dqec_test::BruteForce;

static DefectMap defects(int l, std::set<Coord> qubits) {
    DefectMap m;
    m.l = l;
    m.faulty_qubits = std::move(qubits);
    return m;
}

TEST(metrics, unique_geodesic_chain) {
    MatchingGraph g;
    g.axis = Basis::X;
    g.num_checks = 3;
    g.arcs = {{g.low(), 0, 0}, {0, 1, 1}, {1, 2, 2}, {2, g.high(), 3}};
    auto s = shortest_boundary_paths(g);
    ASSERT_EQ(s.distance, 4);
    ASSERT_EQ(s.count, 1u);
    g.arcs.push_back({0, 1, 4});
    s = shortest_boundary_paths(g);
    ASSERT_EQ(s.count, 2u);
    g.arcs = {{0, 1, 0}};
    ASSERT_EQ(shortest_boundary_paths(g).distance, 0);
}

TEST(metrics, path_count_saturates) {
    MatchingGraph g;
    g.axis = Basis::X;
    g.num_checks = 80;
    uint32_t prev = g.low();
    for (uint32_t k = 0; k < 80; k++) {
        g.arcs.push_back({prev, k, 2 * k});
        g.arcs.push_back({prev, k, 2 * k + 1});
        prev = k;
    }
    g.arcs.push_back({prev, g.high(), 999});
    auto s = shortest_boundary_paths(g);
    ASSERT_EQ(s.distance, 81);
    ASSERT_EQ(s.count, std::numeric_limits<uint64_t>::max());
}

TEST(metrics, defect_free_baseline) {
    for (int l = 3; l <= 17; l++) {
        const auto &code = require_usable(adapt_code(defects(l, {})));
        ASSERT_EQ(code_distance(code, Basis::X), l);
        ASSERT_EQ(code_distance(code, Basis::Z), l);
        ASSERT_EQ(disabled_fraction(code), 0.0);
        ASSERT_EQ(largest_cluster_diameter(code), 0);
        for (int k = 1; k <= 4; k++) {
            ASSERT_TRUE(meets_standard(code, k, l));
        }
        // The geometric boundary graph agrees on clean patches.
        ASSERT_EQ(shortest_boundary_paths(matching_graph(code, Basis::X)).distance, l);
    }
}

TEST(metrics, defect_free_l3_matches_enumeration) {
    auto code = require_usable(adapt_code(defects(3, {})));
    BruteForce bf(code);
    for (Basis axis : {Basis::X, Basis::Z}) {
        auto expect = bf.min_logicals(axis, 3);
        ASSERT_EQ(expect.distance, 3);
        ASSERT_EQ(code_distance(code, axis), 3);
        ASSERT_EQ(count_min_weight_logicals(code, axis), expect.count);
    }
}

TEST(metrics, interior_fault_matches_enumeration) {
    auto code = require_usable(adapt_code(defects(5, {{4, 4}})));
    ASSERT_EQ(code.num_active_data(), 24u);
    BruteForce bf(code);
    for (Basis axis : {Basis::X, Basis::Z}) {
        auto expect = bf.min_logicals(axis, 4);
        ASSERT_EQ(expect.distance, 4);
        ASSERT_EQ(code_distance(code, axis), 4);
        ASSERT_EQ(count_min_weight_logicals(code, axis), expect.count);
    }
}

TEST(metrics, reference_instances) {
    auto b = require_usable(adapt_code(defects(7, {{5, 5}})));
    ASSERT_EQ(code_distance(b, Basis::X), 5);
    ASSERT_EQ(code_distance(b, Basis::Z), 5);
    auto c = require_usable(adapt_code(defects(9, {{5, 1}, {16, 4}, {14, 4}})));
    ASSERT_EQ(std::min(code_distance(c, Basis::X), code_distance(c, Basis::Z)), 7);
    auto d = require_usable(adapt_code(defects(9, {{5, 15}, {16, 16}})));
    ASSERT_EQ(code_distance(d, Basis::X), 9);
    ASSERT_EQ(code_distance(d, Basis::Z), 8);
    ASSERT_FALSE(meets_standard(d, 1, 8));
}

TEST(metrics, disabled_fraction_counts_sites) {
    auto b = require_usable(adapt_code(defects(7, {{5, 5}})));
    size_t off = 0;
    for (auto v : b.data_active) {
        off += !v;
    }
    for (auto v : b.face_active) {
        off += !v;
    }
    ASSERT_EQ(off, 5u);
    ASSERT_DOUBLE_EQ(disabled_fraction(b), 5.0 / 97.0);
}

TEST(metrics, cluster_diameter) {
    auto single = require_usable(adapt_code(defects(7, {{6, 6}})));
    ASSERT_EQ(largest_cluster_diameter(single), 1);
    auto b = require_usable(adapt_code(defects(7, {{5, 5}})));
    ASSERT_EQ(largest_cluster_diameter(b), 2);
}

TEST(metrics, standards_imply_weaker_ones) {
    auto L = std::make_shared<const PatchLayout>(9);
    int seen1 = 0, seen3 = 0;
    for (uint64_t s = 0; s < 300; s++) {
        auto m = sample_defects(*L, {DefectKind::LinksAndQubits, 0.01}, s);
        auto out = adapt_code(L, m);
        if (std::holds_alternative<Unusable>(out)) {
            continue;
        }
        const auto &code = std::get<AdaptedCode>(out);
        for (int dt : {5, 7, 9}) {
            bool s1 = meets_standard(code, 1, dt), s2 = meets_standard(code, 2, dt);
            bool s3 = meets_standard(code, 3, dt), s4 = meets_standard(code, 4, dt);
            ASSERT_TRUE(!s1 || s2);
            ASSERT_TRUE(!s3 || s4);
            ASSERT_TRUE(!s1 || s3);
            seen1 += !s1;
            seen3 += !s3;
        }
    }
    ASSERT_GT(seen1, 0);
    ASSERT_GT(seen3, 0);
    ASSERT_THROW(meets_standard(require_usable(adapt_code(defects(3, {}))), 5, 3), invalid_parameter);
}

TEST(metrics, oracle_equivalence_random) {
    int checked = 0;
    for (uint64_t s = 0; checked < 200; s++) {
        int l = 3 + (int)(s % 3);
        auto L = std::make_shared<const PatchLayout>(l);
        auto m = sample_defects(*L, {DefectKind::LinksAndQubits, 0.04}, s);
        auto out = adapt_code(L, m);
        if (std::holds_alternative<Unusable>(out)) {
            continue;
        }
        const auto &code = std::get<AdaptedCode>(out);
        if (code.num_active_data() > 30) {
            continue;
        }
        BruteForce bf(code);
        for (Basis axis : {Basis::X, Basis::Z}) {
            auto expect = bf.min_logicals(axis, l);
            ASSERT_EQ(code_distance(code, axis), expect.distance) << to_json(m).dump();
            ASSERT_EQ(count_min_weight_logicals(code, axis), expect.count) << to_json(m).dump();
        }
        checked++;
    }
}

TEST(metrics, bare_logicals_anticommute) {
    auto L = std::make_shared<const PatchLayout>(7);
    for (uint64_t s = 0; s < 100; s++) {
        auto out = adapt_code(L, sample_defects(*L, {DefectKind::LinksAndQubits, 0.02}, s));
        if (std::holds_alternative<Unusable>(out)) {
            continue;
        }
        const auto &code = std::get<AdaptedCode>(out);
        auto zl = bare_logical(code, Basis::Z);
        auto xl = bare_logical(code, Basis::X);
        std::set<uint32_t> zs(zl.begin(), zl.end());
        size_t n = 0;
        for (auto q : xl) {
            n += zs.count(q);
        }
        ASSERT_EQ(n % 2, 1u);
    }
}

TEST(metrics, rotation_invariance) {
    auto L = std::make_shared<const PatchLayout>(9);
    for (uint64_t s = 0; s < 150; s++) {
        auto m = sample_defects(*L, {DefectKind::LinksAndQubits, 0.01}, s);
        auto a = adapt_code(L, m);
        auto b = adapt_code(L, swap_roles(m));
        ASSERT_EQ(a.index(), b.index());
        if (std::holds_alternative<Unusable>(a)) {
            continue;
        }
        auto ma = compute_metrics(std::get<AdaptedCode>(a), 7);
        auto mb = compute_metrics(std::get<AdaptedCode>(b), 7);
        ASSERT_EQ(ma.d_x, mb.d_x) << s;
        ASSERT_EQ(ma.d_z, mb.d_z) << s;
        ASSERT_EQ(ma.n_min_x, mb.n_min_x) << s;
        ASSERT_EQ(ma.n_min_z, mb.n_min_z) << s;
    }
}

TEST(metrics, distance_never_grows_with_defects) {
    auto L = std::make_shared<const PatchLayout>(9);
    for (uint64_t s = 0; s < 200; s++) {
        auto m = sample_defects(*L, {DefectKind::LinksAndQubits, 0.01}, s);
        auto base = adapt_code(L, m);
        if (std::holds_alternative<Unusable>(base)) {
            continue;
        }
        auto extra = sample_defects(*L, {DefectKind::LinksAndQubits, 0.005}, 5000 + s);
        auto more = m;
        more.faulty_qubits.insert(extra.faulty_qubits.begin(), extra.faulty_qubits.end());
        more.faulty_links.insert(extra.faulty_links.begin(), extra.faulty_links.end());
        auto after = adapt_code(L, more);
        if (std::holds_alternative<Unusable>(after)) {
            continue;
        }
        for (Basis axis : {Basis::X, Basis::Z}) {
            ASSERT_LE(code_distance(std::get<AdaptedCode>(after), axis),
                      code_distance(std::get<AdaptedCode>(base), axis))
                << s;
        }
    }
}

TEST(metrics, metrics_json) {
    auto code = require_usable(adapt_code(defects(5, {{4, 4}})));
    auto m = compute_metrics(code, 3);
    auto j = to_json(m);
    ASSERT_EQ(j["d_x"], 4);
    ASSERT_EQ(j["d_z"], 4);
    ASSERT_EQ(j["num_faulty"], 1);
    ASSERT_EQ(j["standards"].size(), 4u);
}
