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


#include "dqec/matching.h"

#include <gtest/gtest.h>

#include <limits>
#include <random>

using namespace dqec;

namespace {

constexpr int64_t MISSING = std::numeric_limits<int64_t>::max();

/// Minimum over all perfect matchings by recursion on the lowest free vertex.
int64_t brute_min(const std::vector<std::vector<int64_t>> &w, std::vector<uint8_t> &used) {
    int n = (int)w.size();
    int i = 0;
    while (i < n && used[i]) {
        i++;
    }
    if (i == n) {
        return 0;
    }
    used[i] = 1;
    int64_t best = MISSING;
    for (int j = i + 1; j < n; j++) {
        if (!used[j] && w[i][j] != MISSING) {
            used[j] = 1;
            int64_t rest = brute_min(w, used);
            if (rest != MISSING) {
                best = std::min(best, rest + w[i][j]);
            }
            used[j] = 0;
        }
    }
    used[i] = 0;
    return best;
}

int64_t brute_max(const std::vector<std::vector<int64_t>> &w, std::vector<uint8_t> &used, int i) {
    int n = (int)w.size();
    while (i < n && used[i]) {
        i++;
    }
    if (i == n) {
        return 0;
    }
    used[i] = 1;
    int64_t best = brute_max(w, used, i + 1);
    for (int j = i + 1; j < n; j++) {
        if (!used[j] && w[i][j] != MISSING) {
            used[j] = 1;
            best = std::max(best, w[i][j] + brute_max(w, used, i + 1));
            used[j] = 0;
        }
    }
    used[i] = 0;
    return best;
}

int64_t weight_of(const std::vector<int> &mate, const std::vector<std::vector<int64_t>> &w) {
    int64_t total = 0;
    for (int v = 0; v < (int)mate.size(); v++) {
        if (mate[v] > v) {
            total += w[v][mate[v]];
        }
    }
    return total;
}

}  // namespace

TEST(matching, small_known) {
    // Path 0-1-2-3 with a heavy middle edge.
    std::vector<WeightedEdge> edges{{0, 1, 5}, {1, 2, 11}, {2, 3, 5}};
    auto mate = max_weight_matching(4, edges, false);
    EXPECT_EQ(mate[1], 2);
    EXPECT_EQ(mate[0], -1);
    auto perfect = max_weight_matching(4, edges, true);
    EXPECT_EQ(perfect[0], 1);
    EXPECT_EQ(perfect[2], 3);
}

TEST(matching, odd_cycle_blossom) {
    std::vector<WeightedEdge> edges{{0, 1, 8}, {0, 2, 9}, {1, 2, 10}, {2, 3, 7}};
    auto mate = max_weight_matching(4, edges, false);
    EXPECT_EQ(mate[0], 1);
    EXPECT_EQ(mate[2], 3);
}

TEST(matching, rejects_missing_perfect_matching) {
    EXPECT_THROW(min_weight_perfect_matching(3, {{0, 1, 1}, {1, 2, 1}}), std::invalid_argument);
}

TEST(matching, max_weight_matches_brute_force) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; trial++) {
        int n = 2 + (int)(rng() % 9);
        std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, MISSING));
        std::vector<WeightedEdge> edges;
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) {
                if (rng() % 3) {
                    int64_t x = (int64_t)(rng() % 30);
                    w[i][j] = w[j][i] = x;
                    edges.push_back({i, j, x});
                }
            }
        }
        std::vector<uint8_t> used(n, 0);
        auto mate = max_weight_matching(n, edges, false);
        ASSERT_EQ(weight_of(mate, w), brute_max(w, used, 0)) << "trial " << trial;
    }
}

TEST(matching, min_perfect_matches_brute_force) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; trial++) {
        int n = 2 * (1 + (int)(rng() % 6));
        std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, MISSING));
        std::vector<WeightedEdge> edges;
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) {
                if (j == i + 1 || rng() % 4) {
                    int64_t x = (int64_t)(rng() % 1000);
                    w[i][j] = w[j][i] = x;
                    edges.push_back({i, j, x});
                }
            }
        }
        std::vector<uint8_t> used(n, 0);
        auto mate = min_weight_perfect_matching(n, edges);
        for (int v = 0; v < n; v++) {
            ASSERT_EQ(mate[mate[v]], v);
        }
        ASSERT_EQ(weight_of(mate, w), brute_min(w, used)) << "trial " << trial;
    }
}
