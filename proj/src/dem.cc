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
#include <functional>
#include <map>
#include <set>

#include "dqec/engine.h"

namespace dqec {

namespace {

using Symbols = std::vector<uint32_t>;  // sorted; detectors, then num_detectors + k for observable k

Symbols sym_xor(const Symbols &a, const Symbols &b) {
    Symbols out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// Independent per-Pauli probability equivalent to a depolarizing channel
/// that applies one of n non-identity Paulis with total probability p.
double independent_component(double p, int n) {
    double base = 1.0 - p * (n + 1) / n;
    if (base <= 0) {
        return 0.5;
    }
    int k = n == 3 ? 2 : 8;
    return 0.5 * (1.0 - std::pow(base, 1.0 / k));
}

std::string describe(const ErrorMechanism &m) {
    std::string s = "error(" + std::to_string(m.probability) + ")";
    for (auto d : m.detectors) {
        s += " D" + std::to_string(d);
    }
    for (int k = 0; k < 64; k++) {
        if ((m.observables >> k) & 1) {
            s += " L" + std::to_string(k);
        }
    }
    return s;
}

}  // namespace

double compose_probability(double a, double b) {
    return a * (1 - b) + b * (1 - a);
}

double DetectorModel::Arc::weight() const {
    double q = std::clamp(probability, 1e-300, 1.0 - 1e-16);
    return std::log((1 - q) / q);
}

DetectorModel extract_detector_model(const Circuit &circuit) {
    auto flat = circuit.flattened();
    DetectorModel model;
    uint64_t nq = flat.num_qubits();

    // Forward pass: which symbols read each measurement.
    std::vector<Symbols> meas_syms;
    uint64_t num_det = 0;
    for (const auto &op : flat.instructions) {
        if (op.gate == GateType::M || op.gate == GateType::MR) {
            meas_syms.resize(meas_syms.size() + op.targets.size());
        } else if (op.gate == GateType::DETECTOR) {
            model.detector_coords.push_back(op.args);
            num_det++;
        }
    }
    uint64_t m = 0, d = 0;
    int max_obs = -1;
    for (const auto &op : flat.instructions) {
        if (op.gate == GateType::M || op.gate == GateType::MR) {
            m += op.targets.size();
        } else if (op.gate == GateType::DETECTOR || op.gate == GateType::OBSERVABLE_INCLUDE) {
            uint32_t sym;
            if (op.gate == GateType::DETECTOR) {
                sym = (uint32_t)d++;
            } else {
                int k = op.args.empty() ? 0 : (int)op.args[0];
                if (k >= 64) {
                    throw std::invalid_argument("At most 64 observables are supported.");
                }
                max_obs = std::max(max_obs, k);
                sym = (uint32_t)(num_det + k);
            }
            for (auto t : op.targets) {
                if ((uint64_t)(-t) > m) {
                    throw std::invalid_argument("Record offset refers to a measurement before the circuit start.");
                }
                meas_syms[m + t] = sym_xor(meas_syms[m + t], {sym});
            }
        }
    }
    model.num_detectors = num_det;
    model.num_observables = (uint64_t)(max_obs + 1);

    // Backward pass over Pauli sensitivities.
    std::vector<Symbols> sx(nq), sz(nq);
    std::map<Symbols, double> merged;
    auto add = [&](const Symbols &effect, double p) {
        if (effect.empty() || p <= 0) {
            return;
        }
        auto it = merged.find(effect);
        if (it == merged.end()) {
            merged.emplace(effect, p);
        } else {
            it->second = compose_probability(it->second, p);
        }
    };
    for (auto it = flat.instructions.rbegin(); it != flat.instructions.rend(); ++it) {
        const auto &op = *it;
        const auto &t = op.targets;
        double p = op.args.empty() ? 0.0 : op.args[0];
        switch (op.gate) {
            case GateType::M:
                for (size_t k = t.size(); k-- > 0;) {
                    m--;
                    sx[t[k]] = sym_xor(sx[t[k]], meas_syms[m]);
                    sz[t[k]].clear();
                }
                break;
            case GateType::MR:
                for (size_t k = t.size(); k-- > 0;) {
                    m--;
                    sx[t[k]] = meas_syms[m];
                    sz[t[k]].clear();
                }
                break;
            case GateType::R:
                for (auto q : t) {
                    sx[q].clear();
                    sz[q].clear();
                }
                break;
            case GateType::H:
                for (auto q : t) {
                    std::swap(sx[q], sz[q]);
                }
                break;
            case GateType::CX:
                for (size_t k = t.size(); k >= 2; k -= 2) {
                    auto c = t[k - 2], g = t[k - 1];
                    sx[c] = sym_xor(sx[c], sx[g]);
                    sz[g] = sym_xor(sz[g], sz[c]);
                }
                break;
            case GateType::X_ERROR:
                for (auto q : t) {
                    add(sx[q], p);
                }
                break;
            case GateType::Z_ERROR:
                for (auto q : t) {
                    add(sz[q], p);
                }
                break;
            case GateType::DEPOLARIZE1: {
                double q1 = independent_component(p, 3);
                for (auto q : t) {
                    add(sx[q], q1);
                    add(sz[q], q1);
                    add(sym_xor(sx[q], sz[q]), q1);
                }
                break;
            }
            case GateType::DEPOLARIZE2: {
                double q2 = independent_component(p, 15);
                for (size_t k = 0; k + 1 < t.size(); k += 2) {
                    auto a = t[k], b = t[k + 1];
                    for (unsigned v = 1; v < 16; v++) {
                        Symbols e;
                        if (v & 1) e = sym_xor(e, sx[a]);
                        if (v & 2) e = sym_xor(e, sz[a]);
                        if (v & 4) e = sym_xor(e, sx[b]);
                        if (v & 8) e = sym_xor(e, sz[b]);
                        add(e, q2);
                    }
                }
                break;
            }
            default:
                break;
        }
    }

    for (const auto &[effect, p] : merged) {
        ErrorMechanism mech;
        mech.probability = p;
        for (auto s : effect) {
            if (s < num_det) {
                mech.detectors.push_back(s);
            } else {
                mech.observables |= uint64_t{1} << (s - num_det);
            }
        }
        model.mechanisms.push_back(std::move(mech));
    }

    // Decomposition into matching arcs.
    auto basis_of = [&](uint32_t det) -> int {
        const auto &c = model.detector_coords[det];
        return c.size() >= 4 ? (int)c[3] : 0;
    };
    auto split_basis = [&](const std::vector<uint32_t> &dets) {
        std::map<int, std::vector<uint32_t>> parts;
        for (auto x : dets) {
            parts[basis_of(x)].push_back(x);
        }
        std::vector<std::vector<uint32_t>> out;
        for (auto &[b, v] : parts) {
            out.push_back(v);
        }
        return out;
    };
    std::map<std::vector<uint32_t>, std::set<uint64_t>> known;
    for (const auto &mech : model.mechanisms) {
        if (mech.detectors.size() <= 2 && split_basis(mech.detectors).size() == 1) {
            known[mech.detectors].insert(mech.observables);
        }
    }
    std::map<std::tuple<uint32_t, uint32_t, uint64_t>, double> arcs;
    for (const auto &mech : model.mechanisms) {
        if (mech.detectors.empty()) {
            throw undecomposable_error("Mechanism flips an observable without any detector: " + describe(mech));
        }
        std::vector<std::vector<uint32_t>> comps;
        for (const auto &part : split_basis(mech.detectors)) {
            if (part.size() <= 2) {
                comps.push_back(part);
                continue;
            }
            std::vector<std::vector<uint32_t>> found;
            std::function<bool(std::vector<uint32_t>)> solve = [&](std::vector<uint32_t> rest) -> bool {
                if (rest.empty()) {
                    return true;
                }
                uint32_t first = rest[0];
                for (size_t j = 1; j < rest.size(); j++) {
                    std::vector<uint32_t> pair{first, rest[j]};
                    if (known.count(pair)) {
                        auto next = rest;
                        next.erase(next.begin() + j);
                        next.erase(next.begin());
                        found.push_back(pair);
                        if (solve(next)) {
                            return true;
                        }
                        found.pop_back();
                    }
                }
                if (known.count({first})) {
                    found.push_back({first});
                    if (solve(std::vector<uint32_t>(rest.begin() + 1, rest.end()))) {
                        return true;
                    }
                    found.pop_back();
                }
                return false;
            };
            if (!solve(part)) {
                throw undecomposable_error("Cannot split mechanism into matching arcs: " + describe(mech));
            }
            comps.insert(comps.end(), found.begin(), found.end());
        }
        // Pick observable masks from known arcs so that they combine to the mechanism's.
        std::vector<uint64_t> chosen(comps.size(), 0);
        std::function<bool(size_t, uint64_t)> assign = [&](size_t i, uint64_t acc) -> bool {
            if (i == comps.size()) {
                return acc == mech.observables;
            }
            auto it = known.find(comps[i]);
            if (it == known.end() || comps.size() == 1) {
                // A free component absorbs whatever remains once the others are fixed.
                for (size_t j = i + 1; j < comps.size(); j++) {
                    auto kt = known.find(comps[j]);
                    chosen[j] = kt == known.end() ? 0 : *kt->second.begin();
                    acc ^= chosen[j];
                }
                chosen[i] = acc ^ mech.observables;
                return true;
            }
            for (auto o : it->second) {
                chosen[i] = o;
                if (assign(i + 1, acc ^ o)) {
                    return true;
                }
            }
            return false;
        };
        if (!assign(0, 0)) {
            throw undecomposable_error("Observable flips of mechanism disagree with its arcs: " + describe(mech));
        }
        for (size_t i = 0; i < comps.size(); i++) {
            uint32_t a = comps[i][0];
            uint32_t b = comps[i].size() > 1 ? comps[i][1] : DetectorModel::BOUNDARY;
            auto key = std::make_tuple(a, b, chosen[i]);
            auto it = arcs.find(key);
            if (it == arcs.end()) {
                arcs.emplace(key, mech.probability);
            } else {
                it->second = compose_probability(it->second, mech.probability);
            }
        }
    }
    for (const auto &[key, p] : arcs) {
        DetectorModel::Arc arc;
        arc.a = std::get<0>(key);
        arc.b = std::get<1>(key);
        arc.observables = std::get<2>(key);
        arc.probability = p;
        model.arcs.push_back(arc);
    }
    return model;
}

}  // namespace dqec
