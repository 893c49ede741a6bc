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


#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "dqec/engine.h"
#include "dqec/matching.h"

namespace dqec {

namespace {

constexpr int64_t UNREACHABLE = std::numeric_limits<int64_t>::max();

}  // namespace

int64_t MatchingDecoder::scaled_weight(double w) {
    if (!(w > 0)) {
        return 0;
    }
    return (int64_t)std::llround(w * 1e4);
}

MatchingDecoder::MatchingDecoder(const DetectorModel &model) : n_(model.num_detectors) {
    uint64_t nodes = n_ + 1;
    struct Edge {
        uint32_t to;
        int64_t w;
        uint64_t obs;
    };
    std::vector<std::vector<Edge>> adj(nodes);
    for (const auto &arc : model.arcs) {
        uint32_t a = arc.a;
        uint32_t b = arc.b == DetectorModel::BOUNDARY ? (uint32_t)n_ : arc.b;
        int64_t w = scaled_weight(arc.weight());
        adj[a].push_back({b, w, arc.observables});
        adj[b].push_back({a, w, arc.observables});
    }
    dist_.assign(nodes * nodes, UNREACHABLE);
    obs_.assign(nodes * nodes, 0);
    using Item = std::pair<int64_t, uint32_t>;
    for (uint64_t s = 0; s < nodes; s++) {
        int64_t *dist = &dist_[s * nodes];
        uint64_t *obs = &obs_[s * nodes];
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        dist[s] = 0;
        heap.push({0, (uint32_t)s});
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d != dist[u]) {
                continue;
            }
            // Paths end at the boundary; they never pass through it.
            if (u == n_ && s != n_) {
                continue;
            }
            for (const auto &e : adj[u]) {
                int64_t nd = d + e.w;
                if (nd < dist[e.to]) {
                    dist[e.to] = nd;
                    obs[e.to] = obs[u] ^ e.obs;
                    heap.push({nd, e.to});
                }
            }
        }
    }
}

uint64_t MatchingDecoder::decode(const std::vector<uint32_t> &fired) const {
    last_weight_ = 0;
    int k = (int)fired.size();
    if (k == 0) {
        return 0;
    }
    uint64_t nodes = n_ + 1;
    for (auto d : fired) {
        if (d >= n_) {
            throw std::invalid_argument("Detection event on detector " + std::to_string(d) +
                                        " which is absent from the model.");
        }
    }
    std::vector<WeightedEdge> edges;
    for (int i = 0; i < k; i++) {
        for (int j = i + 1; j < k; j++) {
            int64_t w = dist_[fired[i] * nodes + fired[j]];
            if (w != UNREACHABLE) {
                edges.push_back({i, j, w});
            }
            edges.push_back({k + i, k + j, 0});
        }
        int64_t wb = dist_[fired[i] * nodes + n_];
        if (wb != UNREACHABLE) {
            edges.push_back({i, k + i, wb});
        }
    }
    auto mate = min_weight_perfect_matching(2 * k, edges);
    uint64_t flips = 0;
    for (int i = 0; i < k; i++) {
        int j = mate[i];
        if (j < k && j > i) {
            flips ^= obs_[fired[i] * nodes + fired[j]];
            last_weight_ += dist_[fired[i] * nodes + fired[j]];
        } else if (j >= k) {
            flips ^= obs_[fired[i] * nodes + n_];
            last_weight_ += dist_[fired[i] * nodes + n_];
        }
    }
    return flips;
}

std::vector<uint64_t> decode_batch(const DetectorModel &model, const ShotBatch &batch) {
    if (batch.num_detectors != model.num_detectors) {
        throw std::invalid_argument("Shot batch and detector model disagree on the detector count.");
    }
    MatchingDecoder decoder(model);
    std::vector<uint64_t> out(batch.shots);
    for (uint64_t s = 0; s < batch.shots; s++) {
        out[s] = decoder.decode(batch.fired(s));
    }
    return out;
}

}  // namespace dqec
