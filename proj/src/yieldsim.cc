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


#include "dqec/yieldsim.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "dqec/engine.h"

namespace dqec {

TieBreak parse_tie_break(const std::string &text) {
    if (text == "none") {
        return TieBreak::None;
    }
    if (text == "operator_count") {
        return TieBreak::OperatorCount;
    }
    throw invalid_parameter("Unknown tie-break '" + text + "'; expected none or operator_count.");
}

const char *tie_break_name(TieBreak t) {
    return t == TieBreak::None ? "none" : "operator_count";
}

Baseline parse_baseline(const std::string &text) {
    if (text == "indicator_based") {
        return Baseline::IndicatorBased;
    }
    if (text == "fewest_faulty") {
        return Baseline::FewestFaulty;
    }
    if (text == "defect_free_only") {
        return Baseline::DefectFreeOnly;
    }
    throw invalid_parameter("Unknown baseline '" + text +
                            "'; expected indicator_based, fewest_faulty or defect_free_only.");
}

const char *baseline_name(Baseline b) {
    switch (b) {
        case Baseline::IndicatorBased:
            return "indicator_based";
        case Baseline::FewestFaulty:
            return "fewest_faulty";
        case Baseline::DefectFreeOnly:
            return "defect_free_only";
    }
    return "?";
}

uint64_t reference_operator_count(int d, Basis axis) {
    static std::mutex mu;
    static std::map<std::pair<int, Basis>, uint64_t> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({d, axis});
    if (it != cache.end()) {
        return it->second;
    }
    DefectMap empty;
    empty.l = d;
    auto code = require_usable(adapt_code(empty));
    uint64_t n = count_min_weight_logicals(code, axis);
    cache[{d, axis}] = n;
    return n;
}

namespace {

void check_policy(int l, const SelectionPolicy &policy) {
    if (l < 2) {
        throw invalid_parameter("Chiplet width must be at least 2.");
    }
    if (policy.d_target < 1) {
        throw invalid_parameter("d_target must be at least 1.");
    }
    if (policy.boundary_standard && (*policy.boundary_standard < 1 || *policy.boundary_standard > 4)) {
        throw invalid_parameter("Boundary standard must be 1, 2, 3 or 4.");
    }
}

bool passes(const AdaptedCode &code, const PatchMetrics &m, const SelectionPolicy &policy) {
    int d = std::min(m.d_x, m.d_z);
    if (d < policy.d_target) {
        return false;
    }
    if (policy.tie_break == TieBreak::OperatorCount && d == policy.d_target) {
        if ((m.d_x == d && m.n_min_x > reference_operator_count(d, Basis::X)) ||
            (m.d_z == d && m.n_min_z > reference_operator_count(d, Basis::Z))) {
            return false;
        }
    }
    if (policy.boundary_standard && !meets_standard(code, *policy.boundary_standard, policy.d_target)) {
        return false;
    }
    return true;
}

ChipletVerdict evaluate_orientation(const std::shared_ptr<const PatchLayout> &layout, const DefectMap &defects,
                                    const SelectionPolicy &policy) {
    ChipletVerdict v;
    auto outcome = adapt_code(layout, defects);
    const auto *code = std::get_if<AdaptedCode>(&outcome);
    if (code == nullptr) {
        v.distance = 0;
        return v;
    }
    auto m = compute_metrics(*code, policy.d_target);
    v.distance = std::min(m.d_x, m.d_z);
    v.accept = passes(*code, m, policy);
    v.metrics = m;
    return v;
}

}  // namespace

ChipletVerdict evaluate_chiplet(std::shared_ptr<const PatchLayout> layout, const DefectMap &defects,
                                const SelectionPolicy &policy) {
    int l = layout->l();
    check_policy(l, policy);
    ChipletVerdict v;
    switch (policy.baseline) {
        case Baseline::DefectFreeOnly:
            v.accept = defects.empty() && l >= policy.d_target;
            v.distance = defects.empty() ? l : -1;
            return v;
        case Baseline::FewestFaulty:
            v.accept = defects.num_faulty() <= policy.max_faulty && l >= policy.d_target;
            return v;
        case Baseline::IndicatorBased:
            break;
    }
    v = evaluate_orientation(layout, defects, policy);
    if (!v.accept && policy.allow_rotation) {
        auto r = evaluate_orientation(layout, swap_roles(defects), policy);
        if (r.accept) {
            r.rotated = true;
            return r;
        }
    }
    return v;
}

ChipletVerdict evaluate_chiplet(int l, const DefectMap &defects, const SelectionPolicy &policy) {
    return evaluate_chiplet(std::make_shared<const PatchLayout>(l), defects, policy);
}

double overhead_factor(int l, int d_target, double yield) {
    if (yield <= 0) {
        return std::numeric_limits<double>::infinity();
    }
    return (2.0 * l * l - 1) / ((2.0 * d_target * d_target - 1) * yield);
}

namespace {

/// Runs fn(i) for i in [0, n) over `workers` threads with strided indices.
void parallel_for(uint64_t n, int workers, const std::function<void(uint64_t)> &fn) {
    int w = std::max(1, std::min<int>(workers, (int)std::max<uint64_t>(n, 1)));
    if (w == 1) {
        for (uint64_t i = 0; i < n; i++) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> threads;
    for (int t = 0; t < w; t++) {
        threads.emplace_back([&, t] {
            for (uint64_t i = t; i < n; i += w) {
                fn(i);
            }
        });
    }
    for (auto &th : threads) {
        th.join();
    }
}

void check_model(const DefectModel &model) {
    if (!(model.rate >= 0 && model.rate <= 1)) {
        throw invalid_parameter("Defect rate must lie in [0, 1].");
    }
}

}  // namespace

YieldReport yield_at(int l, const DefectModel &model, const SelectionPolicy &policy, uint64_t samples, uint64_t seed,
                     int workers) {
    if (samples < 1) {
        throw invalid_parameter("samples must be at least 1.");
    }
    check_model(model);
    check_policy(l, policy);
    auto layout = std::make_shared<const PatchLayout>(l);
    std::vector<ChipletVerdict> verdicts(samples);
    parallel_for(samples, workers, [&](uint64_t i) {
        auto defects = sample_defects(*layout, model, derive_seed(seed, i));
        auto v = evaluate_chiplet(layout, defects, policy);
        v.metrics.reset();
        verdicts[i] = v;
    });
    YieldReport r;
    r.l = l;
    r.model = model;
    r.samples = samples;
    for (const auto &v : verdicts) {
        r.accepted += v.accept;
        if (v.distance >= 0) {
            r.distance_histogram[v.distance]++;
            if (v.accept) {
                r.accepted_histogram[v.distance]++;
            }
        }
    }
    r.yield = (double)r.accepted / (double)samples;
    std::tie(r.ci_low, r.ci_high) = wilson_interval(r.accepted, samples);
    r.overhead_factor = overhead_factor(l, policy.d_target, r.yield);
    return r;
}

std::vector<YieldReport> yield_curve(int l, DefectKind kind, const std::vector<double> &rates,
                                     const SelectionPolicy &policy, uint64_t samples, uint64_t seed, int workers) {
    std::vector<YieldReport> out;
    for (double rate : rates) {
        out.push_back(yield_at(l, DefectModel{kind, rate}, policy, samples, seed, workers));
    }
    return out;
}

double defect_free_yield(int l, DefectKind kind, double rate) {
    auto c = component_counts(l);
    double n = (double)c.links + (kind == DefectKind::LinksAndQubits ? (double)c.qubits : 0.0);
    return std::pow(1 - rate, n);
}

OptimalChiplet optimal_chiplet(const std::vector<int> &l_range, const DefectModel &model,
                               const SelectionPolicy &policy, uint64_t samples, uint64_t seed, int workers) {
    if (l_range.empty()) {
        throw invalid_parameter("optimal_chiplet needs at least one chiplet width.");
    }
    OptimalChiplet best;
    best.overhead = std::numeric_limits<double>::infinity();
    for (int l : l_range) {
        auto r = yield_at(l, model, policy, samples, seed, workers);
        if (best.l == 0 || r.overhead_factor < best.overhead) {
            best.l = l;
            best.overhead = r.overhead_factor;
        }
        best.reports.push_back(std::move(r));
    }
    return best;
}

std::map<int, uint64_t> distance_distribution(int l, const DefectModel &model, uint64_t samples, uint64_t seed,
                                              int workers) {
    SelectionPolicy policy;
    policy.d_target = 1;
    return yield_at(l, model, policy, samples, seed, workers).distance_histogram;
}

double topological_error(int d, double p_phys) {
    return 0.1 * std::pow(p_phys / 0.01, (d + 1) / 2.0);
}

FidelityEstimate application_fidelity(const std::map<int, uint64_t> &distribution, double patches, double cycles,
                                      double p_phys) {
    uint64_t total = 0;
    double sum = 0;
    for (const auto &[d, n] : distribution) {
        total += n;
        sum += (double)n * topological_error(d, p_phys);
    }
    if (total == 0) {
        throw invalid_parameter("Fidelity needs a nonempty distance distribution.");
    }
    FidelityEstimate f;
    f.patches = patches;
    f.cycles = cycles;
    f.p_phys = p_phys;
    f.distribution = distribution;
    f.mean_error = sum / (double)total;
    f.fidelity = std::exp(-patches * cycles * f.mean_error);
    return f;
}

FidelityEstimate monolithic_fidelity(const std::vector<std::pair<int, double>> &l_mix, const DefectModel &model,
                                     double patches, double cycles, double p_phys, uint64_t samples, uint64_t seed,
                                     int workers) {
    double fsum = 0;
    for (const auto &[l, frac] : l_mix) {
        if (frac < 0) {
            throw invalid_parameter("Mix fractions must be nonnegative.");
        }
        fsum += frac;
    }
    if (l_mix.empty() || std::abs(fsum - 1) > 1e-9) {
        throw invalid_parameter("Mix fractions must sum to 1.");
    }
    FidelityEstimate f;
    f.patches = patches;
    f.cycles = cycles;
    f.p_phys = p_phys;
    for (const auto &[l, frac] : l_mix) {
        auto part = application_fidelity(distance_distribution(l, model, samples, seed, workers), patches, cycles,
                                         p_phys);
        f.mean_error += frac * part.mean_error;
        for (const auto &[d, n] : part.distribution) {
            f.distribution[d] += n;
        }
    }
    f.fidelity = std::exp(-patches * cycles * f.mean_error);
    return f;
}

std::vector<ShorRow> shor_table(double rate, DefectKind kind, const std::vector<int> &l_range,
                                const SelectionPolicy &policy, uint64_t samples, uint64_t seed, int workers) {
    const int d = policy.d_target;
    auto qubits = [](int l, double yield) { return SHOR_PATCHES * (2.0 * l * l - 1) / yield; };
    std::vector<ShorRow> rows;
    rows.push_back({"no-defect", d, 1.0, 1.0, qubits(d, 1.0)});
    double y = defect_free_yield(d, kind, rate);
    rows.push_back({"defect-intolerant", d, y, overhead_factor(d, d, y), qubits(d, y)});
    auto best = optimal_chiplet(l_range, DefectModel{kind, rate}, policy, samples, seed, workers);
    double ys = 0;
    for (const auto &r : best.reports) {
        if (r.l == best.l) {
            ys = r.yield;
        }
    }
    rows.push_back({"super-stabilizer", best.l, ys, best.overhead, qubits(best.l, ys)});
    return rows;
}

std::vector<RotationBenefit> rotation_benefit(int l, DefectKind kind, const std::vector<double> &rates, int d_target,
                                              uint64_t samples, uint64_t seed, int workers) {
    SelectionPolicy plain;
    plain.d_target = d_target;
    SelectionPolicy rot = plain;
    rot.allow_rotation = true;
    std::vector<RotationBenefit> out;
    for (double rate : rates) {
        DefectModel m{kind, rate};
        out.push_back({rate, yield_at(l, m, plain, samples, seed, workers), yield_at(l, m, rot, samples, seed, workers)});
    }
    return out;
}

namespace {

nlohmann::json histogram_json(const std::map<int, uint64_t> &h) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto &[d, n] : h) {
        j[std::to_string(d)] = n;
    }
    return j;
}

}  // namespace

nlohmann::json to_json(const YieldReport &r) {
    nlohmann::json j = {{"l", r.l},
                        {"model", defect_kind_name(r.model.kind)},
                        {"rate", r.model.rate},
                        {"samples", r.samples},
                        {"accepted", r.accepted},
                        {"yield", r.yield},
                        {"ci", {r.ci_low, r.ci_high}},
                        {"distance_histogram", histogram_json(r.distance_histogram)},
                        {"accepted_histogram", histogram_json(r.accepted_histogram)}};
    if (std::isfinite(r.overhead_factor)) {
        j["overhead_factor"] = r.overhead_factor;
    } else {
        j["overhead_factor"] = nullptr;
    }
    return j;
}

nlohmann::json to_json(const FidelityEstimate &f) {
    return {{"patches", f.patches},     {"cycles", f.cycles},
            {"p_phys", f.p_phys},       {"distribution", histogram_json(f.distribution)},
            {"mean_error", f.mean_error}, {"fidelity", f.fidelity}};
}

nlohmann::json to_json(const ShorRow &r) {
    return {{"approach", r.approach},
            {"l", r.l},
            {"yield", r.yield},
            {"overhead", r.overhead},
            {"total_qubits", r.total_qubits}};
}

}  // namespace dqec
