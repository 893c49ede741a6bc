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


#include <cmath>
#include <random>

#include "dqec/engine.h"

namespace dqec {

namespace {

/// Visits the positions of a Bernoulli(p) bit stream of length n.
template <typename F>
void for_each_hit(std::mt19937_64 &rng, double p, uint64_t n, F &&f) {
    if (p <= 0 || n == 0) {
        return;
    }
    if (p >= 1) {
        for (uint64_t k = 0; k < n; k++) {
            f(k);
        }
        return;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double log_q = std::log1p(-p);
    uint64_t pos = 0;
    while (true) {
        double u = unit(rng);
        double gap = std::floor(std::log1p(-u) / log_q);
        if (gap >= (double)(n - pos)) {
            return;
        }
        pos += (uint64_t)gap;
        f(pos);
        pos++;
        if (pos >= n) {
            return;
        }
    }
}

}  // namespace

FrameSimulator::FrameSimulator(const Circuit &circuit) {
    auto flat = circuit.flattened();
    num_qubits_ = flat.num_qubits();
    for (const auto &inst : flat.instructions) {
        switch (inst.gate) {
            case GateType::TICK:
                break;
            case GateType::DETECTOR:
            case GateType::OBSERVABLE_INCLUDE: {
                std::vector<uint64_t> recs;
                for (auto t : inst.targets) {
                    if ((uint64_t)(-t) > num_measurements_) {
                        throw std::invalid_argument("Record offset refers to a measurement before the circuit start.");
                    }
                    recs.push_back(num_measurements_ + t);
                }
                if (inst.gate == GateType::DETECTOR) {
                    detector_records_.push_back(std::move(recs));
                } else {
                    size_t k = inst.args.empty() ? 0 : (size_t)inst.args[0];
                    if (k >= 64) {
                        throw std::invalid_argument("At most 64 observables are supported.");
                    }
                    if (observable_records_.size() <= k) {
                        observable_records_.resize(k + 1);
                    }
                    auto &dst = observable_records_[k];
                    dst.insert(dst.end(), recs.begin(), recs.end());
                }
                break;
            }
            default: {
                Op op;
                op.gate = inst.gate;
                op.p = inst.args.empty() ? 0.0 : inst.args[0];
                for (auto t : inst.targets) {
                    op.targets.push_back((uint32_t)t);
                }
                if (inst.gate == GateType::M || inst.gate == GateType::MR) {
                    num_measurements_ += op.targets.size();
                }
                bool noise = inst.gate == GateType::X_ERROR || inst.gate == GateType::Z_ERROR ||
                             inst.gate == GateType::DEPOLARIZE1 || inst.gate == GateType::DEPOLARIZE2;
                if (noise && op.p <= 0) {
                    break;
                }
                ops_.push_back(std::move(op));
            }
        }
    }
    num_detectors_ = detector_records_.size();
    num_observables_ = observable_records_.size();
}

void FrameSimulator::sample_block(uint64_t block_seed, std::vector<uint64_t> &det, std::vector<uint64_t> &obs) const {
    std::mt19937_64 rng(block_seed);
    std::vector<uint64_t> x(num_qubits_, 0), z(num_qubits_, 0), rec(num_measurements_, 0);
    uint64_t m = 0;
    auto flip = [&](uint32_t q, unsigned pauli, uint64_t bit) {
        if (pauli & 1) {
            x[q] ^= bit;
        }
        if (pauli & 2) {
            z[q] ^= bit;
        }
    };
    std::uniform_int_distribution<unsigned> pick3(1, 3), pick15(1, 15);
    for (const auto &op : ops_) {
        const auto &t = op.targets;
        switch (op.gate) {
            case GateType::R:
                for (auto q : t) {
                    x[q] = 0;
                    z[q] = rng();
                }
                break;
            case GateType::H:
                for (auto q : t) {
                    std::swap(x[q], z[q]);
                }
                break;
            case GateType::CX:
                for (size_t k = 0; k + 1 < t.size(); k += 2) {
                    x[t[k + 1]] ^= x[t[k]];
                    z[t[k]] ^= z[t[k + 1]];
                }
                break;
            case GateType::M:
                for (auto q : t) {
                    rec[m++] = x[q];
                    z[q] = rng();
                }
                break;
            case GateType::MR:
                for (auto q : t) {
                    rec[m++] = x[q];
                    x[q] = 0;
                    z[q] = rng();
                }
                break;
            case GateType::X_ERROR:
            case GateType::Z_ERROR: {
                bool is_x = op.gate == GateType::X_ERROR;
                for_each_hit(rng, op.p, 64 * t.size(), [&](uint64_t k) {
                    flip(t[k / 64], is_x ? 1 : 2, uint64_t{1} << (k % 64));
                });
                break;
            }
            case GateType::DEPOLARIZE1:
                for_each_hit(rng, op.p, 64 * t.size(), [&](uint64_t k) {
                    flip(t[k / 64], pick3(rng), uint64_t{1} << (k % 64));
                });
                break;
            case GateType::DEPOLARIZE2: {
                size_t pairs = t.size() / 2;
                for_each_hit(rng, op.p, 64 * pairs, [&](uint64_t k) {
                    unsigned v = pick15(rng);
                    uint64_t bit = uint64_t{1} << (k % 64);
                    flip(t[2 * (k / 64)], v & 3, bit);
                    flip(t[2 * (k / 64) + 1], v >> 2, bit);
                });
                break;
            }
            default:
                break;
        }
    }
    det.assign(num_detectors_, 0);
    for (size_t d = 0; d < num_detectors_; d++) {
        for (auto r : detector_records_[d]) {
            det[d] ^= rec[r];
        }
    }
    obs.assign(num_observables_, 0);
    for (size_t k = 0; k < num_observables_; k++) {
        for (auto r : observable_records_[k]) {
            obs[k] ^= rec[r];
        }
    }
}

std::vector<uint32_t> ShotBatch::fired(uint64_t shot) const {
    std::vector<uint32_t> out;
    for (size_t w = 0; w < stride; w++) {
        uint64_t word = events[shot * stride + w];
        while (word) {
            int b = __builtin_ctzll(word);
            out.push_back((uint32_t)(w * 64 + b));
            word &= word - 1;
        }
    }
    return out;
}

namespace {

ShotBatch empty_batch(uint64_t shots, uint64_t seed, uint64_t num_det, uint64_t num_obs) {
    ShotBatch batch;
    batch.shots = shots;
    batch.seed = seed;
    batch.num_detectors = num_det;
    batch.num_observables = num_obs;
    batch.stride = (num_det + 63) / 64;
    batch.events.assign(shots * batch.stride, 0);
    batch.obs_flips.assign(shots, 0);
    return batch;
}

}  // namespace

ShotBatch sample_shots(const Circuit &circuit, uint64_t shots, uint64_t seed) {
    FrameSimulator sim(circuit);
    auto batch = empty_batch(shots, seed, sim.num_detectors(), sim.num_observables());
    std::vector<uint64_t> det, obs;
    for (uint64_t b = 0; b * 64 < shots; b++) {
        sim.sample_block(derive_seed(seed, b), det, obs);
        uint64_t n = std::min<uint64_t>(64, shots - b * 64);
        for (uint64_t s = 0; s < n; s++) {
            uint64_t shot = b * 64 + s;
            for (size_t d = 0; d < det.size(); d++) {
                if ((det[d] >> s) & 1) {
                    batch.events[shot * batch.stride + d / 64] |= uint64_t{1} << (d % 64);
                }
            }
            for (size_t k = 0; k < obs.size(); k++) {
                batch.obs_flips[shot] |= ((obs[k] >> s) & 1) << k;
            }
        }
    }
    return batch;
}

ShotBatch sample_model(const DetectorModel &model, uint64_t shots, uint64_t seed) {
    auto batch = empty_batch(shots, seed, model.num_detectors, model.num_observables);
    for (uint64_t b = 0; b * 64 < shots; b++) {
        std::mt19937_64 rng(derive_seed(seed, b));
        uint64_t n = std::min<uint64_t>(64, shots - b * 64);
        for (const auto &mech : model.mechanisms) {
            for_each_hit(rng, mech.probability, n, [&](uint64_t s) {
                uint64_t shot = b * 64 + s;
                for (auto d : mech.detectors) {
                    batch.events[shot * batch.stride + d / 64] ^= uint64_t{1} << (d % 64);
                }
                batch.obs_flips[shot] ^= mech.observables;
            });
        }
    }
    return batch;
}

}  // namespace dqec
