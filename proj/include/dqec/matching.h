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


#ifndef DQEC_MATCHING_H
#define DQEC_MATCHING_H

#include <cstdint>
#include <vector>

namespace dqec {

struct WeightedEdge {
    int u;
    int v;
    int64_t weight;
};

/// Maximum-weight matching on a general graph with Edmonds' blossom algorithm
/// and dual variables, O(n^3). With `max_cardinality` the result is a
/// maximum-weight matching among the matchings of maximum size. Returns the
/// partner of each vertex, or -1.
std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge> &edges, bool max_cardinality);

/// Minimum-weight perfect matching. Throws std::invalid_argument if the graph
/// has no perfect matching.
std::vector<int> min_weight_perfect_matching(int n, const std::vector<WeightedEdge> &edges);

}  // namespace dqec

#endif
