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

#include <algorithm>
#include <stdexcept>

namespace dqec {

namespace {

class Blossom {
   public:
    Blossom(int n, const std::vector<WeightedEdge> &edges, bool max_cardinality)
        : nv_(n), edges_(edges), maxcard_(max_cardinality) {
        int64_t maxw = 0;
        for (auto &e : edges_) {
            e.weight *= 2;
            maxw = std::max(maxw, e.weight);
        }
        ne_ = (int)edges_.size();
        endpoint_.resize(2 * ne_);
        for (int p = 0; p < 2 * ne_; p++) {
            endpoint_[p] = p % 2 ? edges_[p / 2].v : edges_[p / 2].u;
        }
        neighbend_.assign(nv_, {});
        for (int k = 0; k < ne_; k++) {
            neighbend_[edges_[k].u].push_back(2 * k + 1);
            neighbend_[edges_[k].v].push_back(2 * k);
        }
        mate_.assign(nv_, -1);
        label_.assign(2 * nv_, 0);
        labelend_.assign(2 * nv_, -1);
        inblossom_.resize(nv_);
        for (int i = 0; i < nv_; i++) {
            inblossom_[i] = i;
        }
        blossomparent_.assign(2 * nv_, -1);
        childs_.assign(2 * nv_, {});
        base_.assign(2 * nv_, -1);
        for (int i = 0; i < nv_; i++) {
            base_[i] = i;
        }
        endps_.assign(2 * nv_, {});
        bestedge_.assign(2 * nv_, -1);
        bestedges_.assign(2 * nv_, {});
        has_bestedges_.assign(2 * nv_, 0);
        for (int b = 2 * nv_ - 1; b >= nv_; b--) {
            unused_.push_back(b);
        }
        std::reverse(unused_.begin(), unused_.end());
        dual_.assign(2 * nv_, 0);
        for (int i = 0; i < nv_; i++) {
            dual_[i] = maxw;
        }
        allow_.assign(ne_, 0);
    }

    std::vector<int> solve() {
        if (ne_ == 0) {
            return std::vector<int>(nv_, -1);
        }
        for (int t = 0; t < nv_; t++) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = nv_; b < 2 * nv_; b++) {
                bestedges_[b].clear();
                has_bestedges_[b] = 0;
            }
            std::fill(allow_.begin(), allow_.end(), 0);
            queue_.clear();
            for (int v = 0; v < nv_; v++) {
                if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                    assign_label(v, 1, -1);
                }
            }
            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    int v = queue_.back();
                    queue_.pop_back();
                    for (int p : neighbend_[v]) {
                        int k = p / 2;
                        int w = endpoint_[p];
                        if (inblossom_[v] == inblossom_[w]) {
                            continue;
                        }
                        int64_t kslack = 0;
                        if (!allow_[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) {
                                allow_[k] = 1;
                            }
                        }
                        if (allow_[k]) {
                            if (label_[inblossom_[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[inblossom_[w]] == 1) {
                                int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                label_[w] = 2;
                                labelend_[w] = p ^ 1;
                            }
                        } else if (label_[inblossom_[w]] == 1) {
                            int b = inblossom_[v];
                            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                                bestedge_[b] = k;
                            }
                        } else if (label_[w] == 0) {
                            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                                bestedge_[w] = k;
                            }
                        }
                    }
                }
                if (augmented) {
                    break;
                }
                int deltatype = -1;
                int64_t delta = 0;
                int deltaedge = -1, deltablossom = -1;
                if (!maxcard_) {
                    deltatype = 1;
                    delta = *std::min_element(dual_.begin(), dual_.begin() + nv_);
                }
                for (int v = 0; v < nv_; v++) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        int64_t d = slack(bestedge_[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * nv_; b++) {
                    if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        int64_t d = slack(bestedge_[b]) / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = nv_; b < 2 * nv_; b++) {
                    if (base_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                        (deltatype == -1 || dual_[b] < delta)) {
                        delta = dual_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    deltatype = 1;
                    delta = std::max<int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + nv_));
                }
                for (int v = 0; v < nv_; v++) {
                    if (label_[inblossom_[v]] == 1) {
                        dual_[v] -= delta;
                    } else if (label_[inblossom_[v]] == 2) {
                        dual_[v] += delta;
                    }
                }
                for (int b = nv_; b < 2 * nv_; b++) {
                    if (base_[b] >= 0 && blossomparent_[b] == -1) {
                        if (label_[b] == 1) {
                            dual_[b] += delta;
                        } else if (label_[b] == 2) {
                            dual_[b] -= delta;
                        }
                    }
                }
                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allow_[deltaedge] = 1;
                    int i = edges_[deltaedge].u, j = edges_[deltaedge].v;
                    if (label_[inblossom_[i]] == 0) {
                        std::swap(i, j);
                    }
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allow_[deltaedge] = 1;
                    queue_.push_back(edges_[deltaedge].u);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) {
                break;
            }
            for (int b = nv_; b < 2 * nv_; b++) {
                if (blossomparent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
                    expand_blossom(b, true);
                }
            }
        }
        std::vector<int> out(nv_, -1);
        for (int v = 0; v < nv_; v++) {
            if (mate_[v] >= 0) {
                out[v] = endpoint_[mate_[v]];
            }
        }
        return out;
    }

   private:
    int nv_;
    int ne_ = 0;
    std::vector<WeightedEdge> edges_;
    bool maxcard_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_, label_, labelend_, inblossom_, blossomparent_, base_, bestedge_, unused_, queue_;
    std::vector<std::vector<int>> childs_, endps_, bestedges_;
    std::vector<uint8_t> has_bestedges_, allow_;
    std::vector<int64_t> dual_;

    int64_t slack(int k) const {
        const auto &e = edges_[k];
        return dual_[e.u] + dual_[e.v] - 2 * e.weight;
    }

    void leaves(int b, std::vector<int> &out) const {
        if (b < nv_) {
            out.push_back(b);
            return;
        }
        for (int t : childs_[b]) {
            leaves(t, out);
        }
    }

    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p) {
        int b = inblossom_[w];
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            leaves(b, queue_);
        } else if (t == 2) {
            int base = base_[b];
            assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
        }
    }

    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom_[v];
            if (label_[b] & 4) {
                base = base_[b];
                break;
            }
            path.push_back(b);
            label_[b] = 5;
            if (labelend_[b] == -1) {
                v = -1;
            } else {
                v = endpoint_[labelend_[b]];
                b = inblossom_[v];
                v = endpoint_[labelend_[b]];
            }
            if (w != -1) {
                std::swap(v, w);
            }
        }
        for (int b : path) {
            label_[b] = 1;
        }
        return base;
    }

    void add_blossom(int base, int k) {
        int v = edges_[k].u, w = edges_[k].v;
        int bb = inblossom_[base];
        int bv = inblossom_[v];
        int bw = inblossom_[w];
        int b = unused_.back();
        unused_.pop_back();
        base_[b] = base;
        blossomparent_[b] = -1;
        blossomparent_[bb] = b;
        auto &path = childs_[b];
        auto &endps = endps_[b];
        path.clear();
        endps.clear();
        while (bv != bb) {
            blossomparent_[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[bv]);
            v = endpoint_[labelend_[bv]];
            bv = inblossom_[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent_[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[bw] ^ 1);
            w = endpoint_[labelend_[bw]];
            bw = inblossom_[w];
        }
        label_[b] = 1;
        labelend_[b] = labelend_[bb];
        dual_[b] = 0;
        for (int x : leaves(b)) {
            if (label_[inblossom_[x]] == 2) {
                queue_.push_back(x);
            }
            inblossom_[x] = b;
        }
        std::vector<int> bestedgeto(2 * nv_, -1);
        for (int sub : path) {
            std::vector<std::vector<int>> nblists;
            if (!has_bestedges_[sub]) {
                for (int x : leaves(sub)) {
                    std::vector<int> list;
                    for (int p : neighbend_[x]) {
                        list.push_back(p / 2);
                    }
                    nblists.push_back(std::move(list));
                }
            } else {
                nblists.push_back(bestedges_[sub]);
            }
            for (const auto &list : nblists) {
                for (int kk : list) {
                    int i = edges_[kk].u, j = edges_[kk].v;
                    if (inblossom_[j] == b) {
                        std::swap(i, j);
                    }
                    int bj = inblossom_[j];
                    if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                        bestedgeto[bj] = kk;
                    }
                }
            }
            bestedges_[sub].clear();
            has_bestedges_[sub] = 0;
            bestedge_[sub] = -1;
        }
        bestedges_[b].clear();
        for (int kk : bestedgeto) {
            if (kk != -1) {
                bestedges_[b].push_back(kk);
            }
        }
        has_bestedges_[b] = 1;
        bestedge_[b] = -1;
        for (int kk : bestedges_[b]) {
            if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) {
                bestedge_[b] = kk;
            }
        }
    }

    void expand_blossom(int b, bool endstage) {
        auto children = childs_[b];
        for (int s : children) {
            blossomparent_[s] = -1;
            if (s < nv_) {
                inblossom_[s] = s;
            } else if (endstage && dual_[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                for (int x : leaves(s)) {
                    inblossom_[x] = s;
                }
            }
        }
        if (!endstage && label_[b] == 2) {
            const auto &ch = childs_[b];
            const auto &ep = endps_[b];
            int len = (int)ch.size();
            auto at = [&](const std::vector<int> &vec, int idx) {
                return vec[((idx % len) + len) % len];
            };
            int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
            int j = (int)(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
            int jstep, endptrick;
            if (j & 1) {
                j -= len;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend_[b];
            while (j != 0) {
                label_[endpoint_[p ^ 1]] = 0;
                label_[endpoint_[at(ep, j - endptrick) ^ endptrick ^ 1]] = 0;
                assign_label(endpoint_[p ^ 1], 2, p);
                allow_[at(ep, j - endptrick) / 2] = 1;
                j += jstep;
                p = at(ep, j - endptrick) ^ endptrick;
                allow_[p / 2] = 1;
                j += jstep;
            }
            int bv = at(ch, j);
            label_[endpoint_[p ^ 1]] = label_[bv] = 2;
            labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
            bestedge_[bv] = -1;
            j += jstep;
            while (at(ch, j) != entrychild) {
                bv = at(ch, j);
                if (label_[bv] == 1) {
                    j += jstep;
                    continue;
                }
                auto lv = leaves(bv);
                int v = -1;
                for (int x : lv) {
                    v = x;
                    if (label_[x] != 0) {
                        break;
                    }
                }
                if (v >= 0 && label_[v] != 0) {
                    label_[v] = 0;
                    label_[endpoint_[mate_[base_[bv]]]] = 0;
                    assign_label(v, 2, labelend_[v]);
                }
                j += jstep;
            }
        }
        label_[b] = labelend_[b] = -1;
        childs_[b].clear();
        endps_[b].clear();
        base_[b] = -1;
        bestedges_[b].clear();
        has_bestedges_[b] = 0;
        bestedge_[b] = -1;
        unused_.push_back(b);
    }

    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent_[t] != b) {
            t = blossomparent_[t];
        }
        if (t >= nv_) {
            augment_blossom(t, v);
        }
        auto &ch = childs_[b];
        auto &ep = endps_[b];
        int len = (int)ch.size();
        auto idx = [&](int k) {
            return ((k % len) + len) % len;
        };
        int i = (int)(std::find(ch.begin(), ch.end(), t) - ch.begin());
        int j = i;
        int jstep, endptrick;
        if (i & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = ch[idx(j)];
            int p = ep[idx(j - endptrick)] ^ endptrick;
            if (t >= nv_) {
                augment_blossom(t, endpoint_[p]);
            }
            j += jstep;
            t = ch[idx(j)];
            if (t >= nv_) {
                augment_blossom(t, endpoint_[p ^ 1]);
            }
            mate_[endpoint_[p]] = p ^ 1;
            mate_[endpoint_[p ^ 1]] = p;
        }
        std::rotate(ch.begin(), ch.begin() + i, ch.end());
        std::rotate(ep.begin(), ep.begin() + i, ep.end());
        base_[b] = base_[ch[0]];
    }

    void augment_matching(int k) {
        int v = edges_[k].u, w = edges_[k].v;
        for (auto [s, p] : {std::pair<int, int>{v, 2 * k + 1}, std::pair<int, int>{w, 2 * k}}) {
            while (true) {
                int bs = inblossom_[s];
                if (bs >= nv_) {
                    augment_blossom(bs, s);
                }
                mate_[s] = p;
                if (labelend_[bs] == -1) {
                    break;
                }
                int t = endpoint_[labelend_[bs]];
                int bt = inblossom_[t];
                s = endpoint_[labelend_[bt]];
                int j = endpoint_[labelend_[bt] ^ 1];
                if (bt >= nv_) {
                    augment_blossom(bt, j);
                }
                mate_[j] = labelend_[bt];
                p = labelend_[bt] ^ 1;
            }
        }
    }
};

}  // namespace

std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge> &edges, bool max_cardinality) {
    for (const auto &e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v) {
            throw std::invalid_argument("Edge endpoints must be distinct vertices in range.");
        }
    }
    return Blossom(n, edges, max_cardinality).solve();
}

std::vector<int> min_weight_perfect_matching(int n, const std::vector<WeightedEdge> &edges) {
    int64_t top = 0;
    for (const auto &e : edges) {
        top = std::max(top, e.weight);
    }
    std::vector<WeightedEdge> flipped;
    flipped.reserve(edges.size());
    for (const auto &e : edges) {
        flipped.push_back({e.u, e.v, top + 1 - e.weight});
    }
    auto mate = max_weight_matching(n, flipped, true);
    for (int v = 0; v < n; v++) {
        if (mate[v] < 0) {
            throw std::invalid_argument("Graph has no perfect matching.");
        }
    }
    return mate;
}

}  // namespace dqec
