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
#include <array>
#include <map>
#include <set>

#include "dqec/circuit.h"
#include "dqec/metrics.h"

// Detector coordinates are (row, col, round, basis) with basis 0 for X checks
// and 1 for Z checks. The final data readout uses round = number of rounds.

namespace dqec {

namespace {

struct ProgCheck {
    Basis type;
    std::vector<uint32_t> data;  // program data ids
    Coord anc;
};

struct ProgSuper {
    Basis type;
    std::vector<uint32_t> members;  // check ids
    int diameter = 1;

    Basis phase(int round) const {
        return ((round / diameter) % 2 == 0) ? Basis::X : Basis::Z;
    }
};

struct Program {
    std::vector<Coord> data;
    std::vector<ProgCheck> checks;  // plain checks first, then gauges
    size_t num_plain = 0;
    std::vector<ProgSuper> supers;
    MeasurementSchedule schedule;
};

enum class ObservableKind { DataZ, XChecksFirstRound };

/// Corner visiting order. X checks sweep NW NE SW SE and Z checks NW SW NE SE,
/// which keeps hook errors perpendicular to the same-type logical.
constexpr std::array<Coord, 4> X_ORDER{{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};
constexpr std::array<Coord, 4> Z_ORDER{{{-1, -1}, {1, -1}, {-1, 1}, {1, 1}}};

Program program_from_code(const AdaptedCode &code, std::vector<uint32_t> *data_map_out) {
    const auto &L = *code.layout;
    Program prog;
    std::vector<uint32_t> data_map(L.data_qubits().size(), UINT32_MAX);
    for (uint32_t q = 0; q < L.data_qubits().size(); q++) {
        if (code.data_active[q]) {
            data_map[q] = (uint32_t)prog.data.size();
            prog.data.push_back(L.data_qubits()[q]);
        }
    }
    auto convert = [&](const Check &c) {
        ProgCheck out{c.type, {}, L.faces()[c.home].site};
        for (auto q : c.support) {
            out.data.push_back(data_map[q]);
        }
        return out;
    };
    for (const auto &c : code.plain) {
        prog.checks.push_back(convert(c));
    }
    prog.num_plain = prog.checks.size();
    for (const auto &s : code.supers) {
        ProgSuper ps{s.type, {}, s.cluster_diameter};
        for (const auto &m : s.members) {
            ps.members.push_back((uint32_t)prog.checks.size());
            prog.checks.push_back(convert(m));
        }
        prog.supers.push_back(std::move(ps));
    }
    prog.schedule = code.schedule;
    if (data_map_out) {
        *data_map_out = std::move(data_map);
    }
    return prog;
}

class Emitter {
   public:
    Emitter(const Program &prog, const NoiseModel &noise) : prog_(prog), noise_(noise) {
        nd_ = prog.data.size();
        for (const auto &c : prog.data) {
            circuit_.qubit_coords.push_back(c);
        }
        for (const auto &c : prog.checks) {
            circuit_.qubit_coords.push_back(c.anc);
        }
        last_.assign(prog.checks.size(), -1);
        super_ref_.resize(prog.supers.size());
        super_of_.assign(prog.checks.size(), -1);
        for (size_t s = 0; s < prog.supers.size(); s++) {
            for (auto m : prog.supers[s].members) {
                super_of_[m] = (int)s;
            }
        }
    }

    Circuit run(int rounds, ObservableKind obs, const std::vector<uint32_t> &logical) {
        std::vector<int64_t> all;
        for (size_t q = 0; q < circuit_.qubit_coords.size(); q++) {
            all.push_back((int64_t)q);
        }
        push(GateType::R, {}, all);
        for (int t = 0; t < rounds; t++) {
            round(t, obs);
        }
        finish(rounds, obs, logical);
        return std::move(circuit_);
    }

   private:
    const Program &prog_;
    const NoiseModel &noise_;
    size_t nd_ = 0;
    Circuit circuit_;
    int64_t nmeas_ = 0;
    std::vector<int64_t> last_;
    std::vector<std::vector<int64_t>> super_ref_;
    std::vector<int> super_of_;

    int64_t anc(uint32_t check) const {
        return (int64_t)(nd_ + check);
    }

    Coord coord(int64_t q) const {
        return circuit_.qubit_coords[q];
    }

    void push(GateType g, std::vector<double> args, std::vector<int64_t> targets) {
        if (targets.empty() && g != GateType::TICK && g != GateType::DETECTOR) {
            return;
        }
        Instruction op;
        op.gate = g;
        op.args = std::move(args);
        op.targets = std::move(targets);
        circuit_.instructions.push_back(std::move(op));
    }

    /// Emits one channel per distinct probability, in order of first appearance.
    void push_noise(GateType g, const std::vector<std::pair<double, std::vector<int64_t>>> &items) {
        std::vector<std::pair<double, std::vector<int64_t>>> groups;
        for (const auto &[p, targets] : items) {
            if (p <= 0) {
                continue;
            }
            auto it = std::find_if(groups.begin(), groups.end(), [&](const auto &g2) {
                return g2.first == p;
            });
            if (it == groups.end()) {
                groups.push_back({p, {}});
                it = groups.end() - 1;
            }
            it->second.insert(it->second.end(), targets.begin(), targets.end());
        }
        for (auto &[p, targets] : groups) {
            push(g, {p}, std::move(targets));
        }
    }

    void hadamards(const std::vector<uint32_t> &x_checks) {
        std::vector<int64_t> targets;
        std::vector<std::pair<double, std::vector<int64_t>>> noise;
        for (auto c : x_checks) {
            targets.push_back(anc(c));
            noise.push_back({noise_.one_qubit(prog_.checks[c].anc), {anc(c)}});
        }
        push(GateType::H, {}, targets);
        push_noise(GateType::DEPOLARIZE1, noise);
    }

    void detector(const std::vector<int64_t> &meas, Coord at, int t, Basis b) {
        Instruction op;
        op.gate = GateType::DETECTOR;
        op.args = {(double)at.row, (double)at.col, (double)t, (double)(b == Basis::Z)};
        for (auto m : meas) {
            op.targets.push_back(m - nmeas_);
        }
        circuit_.instructions.push_back(std::move(op));
    }

    void observable(const std::vector<int64_t> &meas) {
        Instruction op;
        op.gate = GateType::OBSERVABLE_INCLUDE;
        op.args = {0};
        for (auto m : meas) {
            op.targets.push_back(m - nmeas_);
        }
        circuit_.instructions.push_back(std::move(op));
    }

    void round(int t, ObservableKind obs) {
        const auto &ops = prog_.schedule.rounds[t % prog_.schedule.period];
        std::vector<uint32_t> measured, x_checks;
        for (const auto &op : ops) {
            measured.push_back(op.op);
            if (prog_.checks[op.op].type == Basis::X) {
                x_checks.push_back(op.op);
            }
        }
        push(GateType::TICK, {}, {});
        hadamards(x_checks);
        push(GateType::TICK, {}, {});
        std::vector<std::pair<Coord, int64_t>> data_at;
        for (size_t q = 0; q < nd_; q++) {
            data_at.push_back({prog_.data[q], (int64_t)q});
        }
        std::sort(data_at.begin(), data_at.end());
        auto find_data = [&](Coord c, const ProgCheck &chk) -> int64_t {
            auto it = std::lower_bound(data_at.begin(), data_at.end(), std::make_pair(c, (int64_t)-1));
            if (it == data_at.end() || it->first != c) {
                return -1;
            }
            if (std::find(chk.data.begin(), chk.data.end(), (uint32_t)it->second) == chk.data.end()) {
                return -1;
            }
            return it->second;
        };
        for (int step = 0; step < 4; step++) {
            std::vector<int64_t> targets;
            std::vector<std::pair<double, std::vector<int64_t>>> noise;
            std::vector<uint8_t> busy(circuit_.qubit_coords.size(), 0);
            for (auto c : measured) {
                const auto &chk = prog_.checks[c];
                Coord off = chk.type == Basis::X ? X_ORDER[step] : Z_ORDER[step];
                int64_t d = find_data(Coord{chk.anc.row + off.row, chk.anc.col + off.col}, chk);
                if (d < 0) {
                    continue;
                }
                int64_t a = anc(c);
                int64_t control = chk.type == Basis::X ? a : d;
                int64_t target = chk.type == Basis::X ? d : a;
                targets.push_back(control);
                targets.push_back(target);
                busy[a] = busy[d] = 1;
                noise.push_back({noise_.two_qubit(coord(control), coord(target)), {control, target}});
            }
            push(GateType::CX, {}, targets);
            push_noise(GateType::DEPOLARIZE2, noise);
            if (noise_.idle > 0) {
                std::vector<int64_t> idle;
                for (size_t q = 0; q < busy.size(); q++) {
                    if (!busy[q]) {
                        idle.push_back((int64_t)q);
                    }
                }
                push_noise(GateType::DEPOLARIZE1, {{noise_.idle, idle}});
            }
            push(GateType::TICK, {}, {});
        }
        hadamards(x_checks);
        push(GateType::TICK, {}, {});
        std::vector<int64_t> targets;
        std::vector<std::pair<double, std::vector<int64_t>>> noise;
        for (auto c : measured) {
            targets.push_back(anc(c));
            noise.push_back({noise_.readout(prog_.checks[c].anc), {anc(c)}});
        }
        push_noise(GateType::X_ERROR, noise);
        push(GateType::MR, {}, targets);
        std::vector<int64_t> now(prog_.checks.size(), -1);
        for (auto c : measured) {
            now[c] = nmeas_++;
        }
        for (auto c : measured) {
            if (super_of_[c] >= 0) {
                continue;
            }
            const auto &chk = prog_.checks[c];
            if (last_[c] >= 0) {
                detector({now[c], last_[c]}, chk.anc, t, chk.type);
            } else if (chk.type == Basis::Z) {
                detector({now[c]}, chk.anc, t, chk.type);
            }
        }
        for (size_t s = 0; s < prog_.supers.size(); s++) {
            const auto &sup = prog_.supers[s];
            if (sup.phase(t) != sup.type) {
                continue;
            }
            Coord at = prog_.checks[sup.members[0]].anc;
            bool block_start = t == 0 || sup.phase(t - 1) != sup.type;
            std::vector<int64_t> cur;
            for (auto m : sup.members) {
                cur.push_back(now[m]);
            }
            if (block_start) {
                if (!super_ref_[s].empty()) {
                    auto both = cur;
                    both.insert(both.end(), super_ref_[s].begin(), super_ref_[s].end());
                    detector(both, at, t, sup.type);
                } else if (sup.type == Basis::Z) {
                    detector(cur, at, t, sup.type);
                }
            } else {
                for (auto m : sup.members) {
                    detector({now[m], last_[m]}, prog_.checks[m].anc, t, sup.type);
                }
            }
            super_ref_[s] = cur;
        }
        for (auto c : measured) {
            last_[c] = now[c];
        }
        if (obs == ObservableKind::XChecksFirstRound && t == 0) {
            std::vector<int64_t> meas;
            for (auto c : measured) {
                if (prog_.checks[c].type == Basis::X) {
                    meas.push_back(now[c]);
                }
            }
            observable(meas);
        }
    }

    void finish(int rounds, ObservableKind obs, const std::vector<uint32_t> &logical) {
        std::vector<int64_t> targets;
        std::vector<std::pair<double, std::vector<int64_t>>> noise;
        for (size_t q = 0; q < nd_; q++) {
            targets.push_back((int64_t)q);
            noise.push_back({noise_.readout(prog_.data[q]), {(int64_t)q}});
        }
        push(GateType::TICK, {}, {});
        push_noise(GateType::X_ERROR, noise);
        push(GateType::M, {}, targets);
        int64_t base = nmeas_;
        nmeas_ += (int64_t)nd_;
        auto data_meas = [&](const std::vector<uint32_t> &support) {
            std::vector<int64_t> out;
            for (auto q : support) {
                out.push_back(base + q);
            }
            return out;
        };
        for (size_t c = 0; c < prog_.num_plain; c++) {
            const auto &chk = prog_.checks[c];
            if (chk.type != Basis::Z) {
                continue;
            }
            auto meas = data_meas(chk.data);
            meas.push_back(last_[c]);
            detector(meas, chk.anc, rounds, Basis::Z);
        }
        for (size_t s = 0; s < prog_.supers.size(); s++) {
            const auto &sup = prog_.supers[s];
            if (sup.type != Basis::Z) {
                continue;
            }
            if (sup.phase(rounds - 1) == Basis::Z) {
                for (auto m : sup.members) {
                    auto meas = data_meas(prog_.checks[m].data);
                    meas.push_back(last_[m]);
                    detector(meas, prog_.checks[m].anc, rounds, Basis::Z);
                }
                continue;
            }
            std::map<uint32_t, int> parity;
            for (auto m : sup.members) {
                for (auto q : prog_.checks[m].data) {
                    parity[q] ^= 1;
                }
            }
            std::vector<uint32_t> support;
            for (const auto &[q, odd] : parity) {
                if (odd) {
                    support.push_back(q);
                }
            }
            auto meas = data_meas(support);
            meas.insert(meas.end(), super_ref_[s].begin(), super_ref_[s].end());
            detector(meas, prog_.checks[sup.members[0]].anc, rounds, Basis::Z);
        }
        if (obs == ObservableKind::DataZ) {
            observable(data_meas(logical));
        }
    }
};

void check_rounds(int rounds) {
    if (rounds < 1) {
        throw invalid_parameter("rounds must be at least 1.");
    }
}

}  // namespace

Circuit memory_circuit(const AdaptedCode &code, int rounds, const NoiseModel &noise) {
    check_rounds(rounds);
    noise.validate();
    std::vector<uint32_t> data_map;
    auto prog = program_from_code(code, &data_map);
    std::vector<uint32_t> logical;
    for (auto q : bare_logical(code, Basis::Z)) {
        logical.push_back(data_map[q]);
    }
    return Emitter(prog, noise).run(rounds, ObservableKind::DataZ, logical);
}

Circuit stability_circuit(int l, int rounds, const NoiseModel &noise, const std::optional<BadQubit> &bad,
                          bool disable_bad) {
    check_rounds(rounds);
    noise.validate();
    auto layout = std::make_shared<const PatchLayout>(l);
    DefectMap defects;
    defects.l = l;
    NoiseModel model = noise;
    if (bad) {
        if (layout->data_index(bad->site) == PatchLayout::NONE) {
            throw invalid_parameter("Bad qubit " + bad->site.str() + " is not a data qubit.");
        }
        if (!(bad->p >= 0.0 && bad->p <= 1.0)) {
            throw invalid_parameter("Bad qubit error rate must lie in [0, 1].");
        }
        if (disable_bad) {
            defects.faulty_qubits.insert(bad->site);
        } else {
            model.overrides[bad->site] = bad->p;
        }
    }
    auto code = require_usable(adapt_code(layout, defects));
    for (uint32_t f = 0; f < layout->faces().size(); f++) {
        if (layout->faces()[f].boundary && !code.face_active[f]) {
            throw invalid_parameter("Bad qubit is too close to the boundary for a stability patch.");
        }
    }
    std::vector<uint32_t> data_map;
    auto full = program_from_code(code, &data_map);
    Program prog;
    prog.data = full.data;
    std::vector<uint32_t> renumber(full.checks.size(), UINT32_MAX);
    for (size_t c = 0; c < full.num_plain; c++) {
        const auto &chk = full.checks[c];
        if (layout->faces()[layout->face_index(chk.anc)].boundary) {
            continue;
        }
        renumber[c] = (uint32_t)prog.checks.size();
        prog.checks.push_back(chk);
    }
    // X checks on every boundary slot of X colour, including corner slots
    // where only one data qubit remains.
    int hi = 2 * l - 1;
    std::set<Coord> slots;
    for (int k = -1; k <= hi; k += 2) {
        slots.insert({-1, k});
        slots.insert({hi, k});
        slots.insert({k, -1});
        slots.insert({k, hi});
    }
    for (const auto &site : slots) {
        if (PatchLayout::face_color(site) != Basis::X) {
            continue;
        }
        ProgCheck chk{Basis::X, {}, site};
        for (int dr : {-1, 1}) {
            for (int dc : {-1, 1}) {
                auto q = layout->data_index({site.row + dr, site.col + dc});
                if (q != PatchLayout::NONE && data_map[q] != UINT32_MAX) {
                    chk.data.push_back(data_map[q]);
                }
            }
        }
        if (!chk.data.empty()) {
            prog.checks.push_back(chk);
        }
    }
    prog.num_plain = prog.checks.size();
    for (const auto &sup : full.supers) {
        ProgSuper ps{sup.type, {}, sup.diameter};
        for (auto m : sup.members) {
            renumber[m] = (uint32_t)prog.checks.size();
            ps.members.push_back(renumber[m]);
            prog.checks.push_back(full.checks[m]);
        }
        prog.supers.push_back(std::move(ps));
    }
    std::vector<Check> plain;
    for (size_t c = 0; c < prog.num_plain; c++) {
        plain.push_back(Check{prog.checks[c].type, {}, 0});
    }
    std::vector<SuperStabilizer> supers;
    for (const auto &s : prog.supers) {
        SuperStabilizer ss;
        ss.type = s.type;
        ss.cluster_diameter = s.diameter;
        ss.members.resize(s.members.size());
        supers.push_back(ss);
    }
    prog.schedule = build_schedule(plain, supers);
    return Emitter(prog, model).run(rounds, ObservableKind::XChecksFirstRound, {});
}

}  // namespace dqec
