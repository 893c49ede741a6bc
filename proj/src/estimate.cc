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
#include <thread>

#include "dqec/engine.h"

namespace dqec {

std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double z = 1.959963984540054;
    double n = (double)trials;
    double phat = (double)successes / n;
    double denom = 1 + z * z / n;
    double center = (phat + z * z / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom;
    double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

namespace {

uint64_t count_failures(const FrameSimulator &sim, const MatchingDecoder &decoder, uint64_t shots, uint64_t seed,
                        uint64_t first_block, uint64_t step) {
    uint64_t failures = 0;
    std::vector<uint64_t> det, obs;
    std::vector<std::vector<uint32_t>> fired(64);
    for (uint64_t b = first_block; b * 64 < shots; b += step) {
        sim.sample_block(derive_seed(seed, b), det, obs);
        uint64_t n = std::min<uint64_t>(64, shots - b * 64);
        for (auto &f : fired) {
            f.clear();
        }
        for (uint32_t d = 0; d < det.size(); d++) {
            uint64_t word = det[d];
            while (word) {
                int s = __builtin_ctzll(word);
                fired[s].push_back(d);
                word &= word - 1;
            }
        }
        for (uint64_t s = 0; s < n; s++) {
            uint64_t actual = 0;
            for (size_t k = 0; k < obs.size(); k++) {
                actual |= ((obs[k] >> s) & 1) << k;
            }
            if (decoder.decode(fired[s]) != actual) {
                failures++;
            }
        }
    }
    return failures;
}

}  // namespace

LerEstimate estimate_circuit_ler(const Circuit &circuit, uint64_t shots, uint64_t seed, int workers) {
    if (shots == 0) {
        throw invalid_parameter("shots must be at least 1.");
    }
    FrameSimulator sim(circuit);
    auto model = extract_detector_model(circuit);
    MatchingDecoder decoder(model);
    uint64_t failures = 0;
    workers = std::max(1, workers);
    if (workers == 1) {
        failures = count_failures(sim, decoder, shots, seed, 0, 1);
    } else {
        std::vector<uint64_t> partial(workers, 0);
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; w++) {
            threads.emplace_back([&, w] {
                MatchingDecoder local = decoder;
                partial[w] = count_failures(sim, local, shots, seed, (uint64_t)w, (uint64_t)workers);
            });
        }
        for (auto &t : threads) {
            t.join();
        }
        for (auto f : partial) {
            failures += f;
        }
    }
    LerEstimate e;
    e.shots = shots;
    e.failures = failures;
    e.ler = (double)failures / (double)shots;
    auto [lo, hi] = wilson_interval(failures, shots);
    e.ci_low = lo;
    e.ci_high = hi;
    return e;
}

LerEstimate estimate_ler(const AdaptedCode &code, const NoiseModel &noise, int rounds, uint64_t shots, uint64_t seed,
                         int workers) {
    return estimate_circuit_ler(memory_circuit(code, rounds, noise), shots, seed, workers);
}

SlopeFit fit_slope(const std::vector<SlopePoint> &points) {
    if (points.size() < 3) {
        throw insufficient_data("A slope fit needs at least three points.");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = (double)points.size();
    for (const auto &pt : points) {
        if (!(pt.ler > 0) || !(pt.p > 0)) {
            throw insufficient_data("Every point needs p > 0 and LER > 0; collect more shots.");
        }
        double x = std::log(pt.p), y = std::log(pt.ler);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) {
        throw insufficient_data("Slope fit needs at least two distinct p values.");
    }
    SlopeFit fit;
    fit.points = points;
    fit.alpha_d = (n * sxy - sx * sy) / denom;
    fit.log_intercept = (sy - fit.alpha_d * sx) / n;
    double mean = sy / n, ss_tot = 0, ss_res = 0;
    for (const auto &pt : points) {
        double y = std::log(pt.ler);
        double pred = fit.log_intercept + fit.alpha_d * std::log(pt.p);
        ss_tot += (y - mean) * (y - mean);
        ss_res += (y - pred) * (y - pred);
    }
    fit.r2 = ss_tot > 0 ? 1 - ss_res / ss_tot : 1.0;
    return fit;
}

std::vector<StabilityRow> stability_compare(int l, Coord bad_site, double bad_p, const std::vector<double> &good_ps,
                                            int rounds, uint64_t shots, uint64_t seed, int workers) {
    std::vector<StabilityRow> rows;
    for (size_t i = 0; i < good_ps.size(); i++) {
        auto noise = NoiseModel::uniform(good_ps[i]);
        BadQubit bad{bad_site, bad_p};
        StabilityRow row;
        row.good_p = good_ps[i];
        row.keep = estimate_circuit_ler(stability_circuit(l, rounds, noise, bad, false), shots,
                                        derive_seed(seed, 2 * i), workers);
        row.disable = estimate_circuit_ler(stability_circuit(l, rounds, noise, bad, true), shots,
                                           derive_seed(seed, 2 * i + 1), workers);
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json to_json(const LerEstimate &e) {
    return {{"shots", e.shots}, {"failures", e.failures}, {"ler", e.ler}, {"ci", {e.ci_low, e.ci_high}}};
}

nlohmann::json to_json(const SlopeFit &f) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto &p : f.points) {
        pts.push_back({{"p", p.p}, {"ler", p.ler}, {"ci", {p.ci_low, p.ci_high}}});
    }
    return {{"alpha_d", f.alpha_d}, {"log_intercept", f.log_intercept}, {"r2", f.r2}, {"points", pts}};
}

}  // namespace dqec
