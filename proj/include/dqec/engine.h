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


#ifndef DQEC_ENGINE_H
#define DQEC_ENGINE_H

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dqec/adapt.h"
#include "dqec/circuit.h"
#include "json.hpp"

namespace dqec {

struct ErrorMechanism {
    double probability = 0.0;
    std::vector<uint32_t> detectors;  // sorted
    uint64_t observables = 0;         // bit k flips observable k
    bool operator==(const ErrorMechanism &) const = default;
};

struct DetectorModel {
    static constexpr uint32_t BOUNDARY = UINT32_MAX;

    struct Arc {
        uint32_t a = 0;
        uint32_t b = BOUNDARY;  // BOUNDARY for single-detector arcs
        double probability = 0.0;
        uint64_t observables = 0;
        double weight() const;
    };

    uint64_t num_detectors = 0;
    uint64_t num_observables = 0;
    /// Merged mechanisms as produced by the circuit, before decomposition.
    std::vector<ErrorMechanism> mechanisms;
    /// Matching graph after splitting every mechanism into arcs.
    std::vector<Arc> arcs;
    /// Coordinates attached to each detector.
    std::vector<std::vector<double>> detector_coords;
};

class undecomposable_error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Probability that exactly one of two independent events occurs.
double compose_probability(double a, double b);

DetectorModel extract_detector_model(const Circuit &circuit);

/// Pauli-frame sampler. Blocks of 64 shots share one word per detector.
class FrameSimulator {
   public:
    explicit FrameSimulator(const Circuit &circuit);
    uint64_t num_detectors() const {
        return num_detectors_;
    }
    uint64_t num_observables() const {
        return num_observables_;
    }
    /// Bit s of det[d] (obs[k]) is detector d (observable k) in shot s.
    void sample_block(uint64_t block_seed, std::vector<uint64_t> &det, std::vector<uint64_t> &obs) const;

   private:
    struct Op {
        GateType gate;
        double p = 0.0;
        std::vector<uint32_t> targets;
    };
    std::vector<Op> ops_;
    size_t num_qubits_ = 0;
    uint64_t num_measurements_ = 0;
    uint64_t num_detectors_ = 0;
    uint64_t num_observables_ = 0;
    std::vector<std::vector<uint64_t>> detector_records_;
    std::vector<std::vector<uint64_t>> observable_records_;
};

struct ShotBatch {
    uint64_t shots = 0;
    uint64_t seed = 0;
    uint64_t num_detectors = 0;
    uint64_t num_observables = 0;
    size_t stride = 0;                // words per shot
    std::vector<uint64_t> events;     // shots x stride
    std::vector<uint64_t> obs_flips;  // observable mask per shot

    bool detector(uint64_t shot, uint64_t d) const {
        return (events[shot * stride + d / 64] >> (d % 64)) & 1;
    }
    std::vector<uint32_t> fired(uint64_t shot) const;
};

/// Shot block b is drawn from derive_seed(seed, b), so batches do not depend
/// on how blocks are distributed.
ShotBatch sample_shots(const Circuit &circuit, uint64_t shots, uint64_t seed);

/// Samples mechanisms of the model directly.
ShotBatch sample_model(const DetectorModel &model, uint64_t shots, uint64_t seed);

/// Exact minimum-weight perfect matching decoder with a boundary node.
class MatchingDecoder {
   public:
    explicit MatchingDecoder(const DetectorModel &model);
    /// Predicted observable mask for a set of fired detectors.
    uint64_t decode(const std::vector<uint32_t> &fired) const;
    /// Total integer weight of the last decode.
    int64_t last_weight() const {
        return last_weight_;
    }
    /// Integer arc weight used by the matcher.
    static int64_t scaled_weight(double w);

   private:
    uint64_t n_ = 0;
    std::vector<int64_t> dist_;  // (n+1) x (n+1), row n is the boundary
    std::vector<uint64_t> obs_;
    mutable int64_t last_weight_ = 0;
};

std::vector<uint64_t> decode_batch(const DetectorModel &model, const ShotBatch &batch);

struct LerEstimate {
    uint64_t shots = 0;
    uint64_t failures = 0;
    double ler = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// 95% Wilson score interval.
std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials);

LerEstimate estimate_circuit_ler(const Circuit &circuit, uint64_t shots, uint64_t seed, int workers = 1);
LerEstimate estimate_ler(const AdaptedCode &code, const NoiseModel &noise, int rounds, uint64_t shots, uint64_t seed,
                         int workers = 1);

struct SlopePoint {
    double p = 0.0;
    double ler = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct SlopeFit {
    double alpha_d = 0.0;
    double log_intercept = 0.0;
    double r2 = 0.0;
    std::vector<SlopePoint> points;
};

class insufficient_data : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Least squares on (log p, log LER).
SlopeFit fit_slope(const std::vector<SlopePoint> &points);

struct StabilityRow {
    double good_p = 0.0;
    LerEstimate keep;
    LerEstimate disable;
};

std::vector<StabilityRow> stability_compare(int l, Coord bad_site, double bad_p, const std::vector<double> &good_ps,
                                            int rounds, uint64_t shots, uint64_t seed, int workers = 1);

nlohmann::json to_json(const LerEstimate &e);
nlohmann::json to_json(const SlopeFit &f);

}  // namespace dqec

#endif
