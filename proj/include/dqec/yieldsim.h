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


#ifndef DQEC_YIELDSIM_H
#define DQEC_YIELDSIM_H

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dqec/metrics.h"
#include "json.hpp"

namespace dqec {

enum class TieBreak : uint8_t { None, OperatorCount };
enum class Baseline : uint8_t { IndicatorBased, FewestFaulty, DefectFreeOnly };

TieBreak parse_tie_break(const std::string &text);
const char *tie_break_name(TieBreak t);
Baseline parse_baseline(const std::string &text);
const char *baseline_name(Baseline b);

struct SelectionPolicy {
    int d_target = 0;
    TieBreak tie_break = TieBreak::None;
    bool allow_rotation = false;
    std::optional<int> boundary_standard;
    Baseline baseline = Baseline::IndicatorBased;
    /// FewestFaulty accepts chiplets with at most this many faulty components.
    size_t max_faulty = 0;
};

struct ChipletVerdict {
    bool accept = false;
    bool rotated = false;
    /// Metrics of the orientation that decided the verdict. Empty when the
    /// policy did not adapt the code or the code was unusable.
    std::optional<PatchMetrics> metrics;
    /// min(d_x, d_z), 0 when unusable, -1 when not evaluated.
    int distance = -1;
};

/// Minimum-weight logical count along `axis` of the defect-free patch of width d.
uint64_t reference_operator_count(int d, Basis axis);

ChipletVerdict evaluate_chiplet(std::shared_ptr<const PatchLayout> layout, const DefectMap &defects,
                                const SelectionPolicy &policy);
ChipletVerdict evaluate_chiplet(int l, const DefectMap &defects, const SelectionPolicy &policy);

struct YieldReport {
    int l = 0;
    DefectModel model;
    uint64_t samples = 0;
    uint64_t accepted = 0;
    double yield = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double overhead_factor = 0.0;
    /// min-axis distance per evaluated sample (0 = unusable).
    std::map<int, uint64_t> distance_histogram;
    /// Same, restricted to accepted samples.
    std::map<int, uint64_t> accepted_histogram;
};

/// (2l^2 - 1) / ((2 d_target^2 - 1) * yield); infinite when yield is 0.
double overhead_factor(int l, int d_target, double yield);

/// Sample i at every rate uses defect seed derive_seed(seed, i).
std::vector<YieldReport> yield_curve(int l, DefectKind kind, const std::vector<double> &rates,
                                     const SelectionPolicy &policy, uint64_t samples, uint64_t seed, int workers = 1);
YieldReport yield_at(int l, const DefectModel &model, const SelectionPolicy &policy, uint64_t samples, uint64_t seed,
                     int workers = 1);

/// Closed-form yield of the defect-free-only baseline.
double defect_free_yield(int l, DefectKind kind, double rate);

struct OptimalChiplet {
    int l = 0;
    double overhead = 0.0;
    std::vector<YieldReport> reports;
};

OptimalChiplet optimal_chiplet(const std::vector<int> &l_range, const DefectModel &model,
                               const SelectionPolicy &policy, uint64_t samples, uint64_t seed, int workers = 1);

/// Histogram of min-axis distance over all samples, accepted or not.
std::map<int, uint64_t> distance_distribution(int l, const DefectModel &model, uint64_t samples, uint64_t seed,
                                              int workers = 1);

/// Topological error per patch per cycle: 0.1 (p / 0.01)^((d + 1) / 2).
double topological_error(int d, double p_phys);

struct FidelityEstimate {
    double patches = 0.0;
    double cycles = 0.0;
    double p_phys = 0.0;
    std::map<int, uint64_t> distribution;
    double mean_error = 0.0;
    double fidelity = 0.0;
};

FidelityEstimate application_fidelity(const std::map<int, uint64_t> &distribution, double patches, double cycles,
                                      double p_phys);

/// Unselected distributions mixed per (l, fraction).
FidelityEstimate monolithic_fidelity(const std::vector<std::pair<int, double>> &l_mix, const DefectModel &model,
                                     double patches, double cycles, double p_phys, uint64_t samples, uint64_t seed,
                                     int workers = 1);

struct ShorRow {
    std::string approach;
    int l = 0;
    double yield = 0.0;
    double overhead = 0.0;
    double total_qubits = 0.0;
};

constexpr double SHOR_PATCHES = 226.0 * 63.0;
constexpr double SHOR_CYCLES = 2.5e10;
constexpr int SHOR_DISTANCE = 27;

/// No-defect, defect-intolerant (closed form) and super-stabilizer rows.
std::vector<ShorRow> shor_table(double rate, DefectKind kind, const std::vector<int> &l_range,
                                const SelectionPolicy &policy, uint64_t samples, uint64_t seed, int workers = 1);

struct RotationBenefit {
    double rate = 0.0;
    YieldReport without;
    YieldReport with;
};

std::vector<RotationBenefit> rotation_benefit(int l, DefectKind kind, const std::vector<double> &rates, int d_target,
                                              uint64_t samples, uint64_t seed, int workers = 1);

nlohmann::json to_json(const YieldReport &r);
nlohmann::json to_json(const FidelityEstimate &f);
nlohmann::json to_json(const ShorRow &r);

}  // namespace dqec

#endif
