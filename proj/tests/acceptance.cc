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
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "brute_force.test.h"
#include "decoder_oracle.test.h"
#include "dqec/adapt.h"
#include "dqec/circuit.h"
#include "dqec/engine.h"
#include "dqec/metrics.h"
#include "dqec/yieldsim.h"

using namespace dqec;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

std::string ci(double lo, double hi) {
    return "[" + fmt("%.4g", lo) + ", " + fmt("%.4g", hi) + "]";
}

DefectMap defects(int l, std::set<Coord> qubits) {
    DefectMap m;
    m.l = l;
    m.faulty_qubits = std::move(qubits);
    return m;
}

bool near_rel(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

Outcome fig2_distances() {
    auto dist = [](int l, std::set<Coord> q) {
        auto code = require_usable(adapt_code(defects(l, std::move(q))));
        return std::pair{code_distance(code, Basis::X), code_distance(code, Basis::Z)};
    };
    auto a = dist(5, {{4, 4}});
    auto b = dist(7, {{5, 5}});
    auto c = dist(9, {{5, 1}, {16, 4}, {14, 4}});
    auto d = dist(9, {{5, 15}, {16, 16}});
    Outcome o;
    o.pass = a == std::pair{4, 4} && std::min(b.first, b.second) == 5 && std::min(c.first, c.second) == 7 &&
             d == std::pair{9, 8};
    o.detail = "a=" + std::to_string(a.first) + "/" + std::to_string(a.second) +
               " b=" + std::to_string(std::min(b.first, b.second)) +
               " c=" + std::to_string(std::min(c.first, c.second)) + " d=" + std::to_string(d.first) +
               " vertical/" + std::to_string(d.second) + " horizontal";
    return o;
}

Outcome brute_force_equivalence() {
    const double rates[] = {0.02, 0.05, 0.08};
    int checked = 0, mismatches = 0, defective = 0;
    for (uint64_t s = 0; checked < 200; s++) {
        int l = 3 + (int)(s % 3);
        auto layout = std::make_shared<const PatchLayout>(l);
        auto m = sample_defects(*layout, {DefectKind::LinksAndQubits, rates[(s / 3) % 3]}, derive_seed(2026, s));
        auto out = adapt_code(layout, m);
        const auto *code = std::get_if<AdaptedCode>(&out);
        if (code == nullptr || code->num_active_data() > 30) {
            continue;
        }
        dqec_test::BruteForce bf(*code);
        for (Basis axis : {Basis::X, Basis::Z}) {
            auto expect = bf.min_logicals(axis, l);
            auto got = exact_logical_paths(*code, axis);
            mismatches += got.distance != expect.distance || got.count != expect.count;
        }
        defective += !m.empty();
        checked++;
    }
    return {mismatches == 0, std::to_string(checked) + " maps (" + std::to_string(defective) +
                                 " defective), " + std::to_string(mismatches) + " axis mismatches"};
}

Outcome closed_form_yield() {
    const uint64_t n = 10000;
    bool pass = true;
    int worst_l = 0;
    double worst_r = 0, worst_z = 0;
    SelectionPolicy pol;
    pol.baseline = Baseline::DefectFreeOnly;
    for (int l : {9, 13, 17, 27}) {
        pol.d_target = l;
        for (double r : {0.001, 0.003, 0.01, 0.02}) {
            auto rep = yield_at(l, {DefectKind::LinksAndQubits, r}, pol, n, derive_seed(3, l));
            double y = std::pow(1 - r, (2.0 * l * l - 1) + 4.0 * l * (l - 1));
            double sigma = std::sqrt(y * (1 - y) / n);
            double z = std::abs(rep.yield - y);
            bool ok = z <= 3 * sigma;
            pass &= ok;
            double zs = sigma > 0 ? z / sigma : (z > 0 ? INFINITY : 0);
            if (zs >= worst_z) {
                worst_z = zs;
                worst_l = l;
                worst_r = r;
            }
        }
    }
    std::string detail = "16 points, worst |dev| = " + fmt("%.2f", worst_z) + " sigma at l=" +
                         std::to_string(worst_l) + " r=" + fmt("%g", worst_r);
    // Overheads at l=9, faulty links only.
    pol.d_target = 9;
    for (auto [r, paper] : {std::pair{0.01, 18.0}, std::pair{0.02, 336.0}}) {
        double closed = overhead_factor(9, 9, defect_free_yield(9, DefectKind::LinksOnly, r));
        auto rep = yield_at(9, {DefectKind::LinksOnly, r}, pol, n, 5);
        double lo = overhead_factor(9, 9, rep.ci_high), hi = overhead_factor(9, 9, rep.ci_low);
        bool ok = near_rel(closed, paper, 0.10) && paper >= lo && paper <= hi;
        pass &= ok;
        detail += "; " + fmt("%g", paper) + "X: closed " + fmt("%.1f", closed) + ", MC " +
                  fmt("%.1f", rep.overhead_factor) + " " + ci(lo, hi);
    }
    // Defect-intolerant Shor rows at l = 27.
    pol.d_target = 27;
    {
        double y = defect_free_yield(27, DefectKind::LinksAndQubits, 0.001);
        double ov = overhead_factor(27, 27, y);
        auto rep = yield_at(27, {DefectKind::LinksAndQubits, 0.001}, pol, n, 7);
        bool ok = near_rel(y, 0.014, 0.10) && near_rel(ov, 71.32, 0.10) && 0.014 >= rep.ci_low &&
                  0.014 <= rep.ci_high;
        pass &= ok;
        detail += "; r=0.1%: yield " + fmt("%.4f", y) + " (MC " + ci(rep.ci_low, rep.ci_high) + "), overhead " +
                  fmt("%.2f", ov);
    }
    {
        double y = defect_free_yield(27, DefectKind::LinksAndQubits, 0.003);
        double ov = overhead_factor(27, 27, y);
        bool ok = near_rel(y, 2.7e-6, 0.10) && near_rel(ov, 3.67e5, 0.10);
        pass &= ok;
        detail += "; r=0.3%: yield " + fmt("%.3g", y) + ", overhead " + fmt("%.4g", ov);
    }
    return {pass, detail};
}

struct SuperRows {
    YieldReport l33, l39;
};

SuperRows super_rows() {
    SelectionPolicy pol;
    pol.d_target = 27;
    return {yield_at(33, {DefectKind::LinksAndQubits, 0.001}, pol, 10000, 1),
            yield_at(39, {DefectKind::LinksAndQubits, 0.003}, pol, 10000, 1)};
}

Outcome super_stabilizer_rows(const SuperRows &rows) {
    const auto &a = rows.l33;
    const auto &b = rows.l39;
    bool pass = std::abs(a.yield - 0.945) <= 0.02 && std::abs(a.overhead_factor - 1.58) <= 0.05 &&
                std::abs(b.yield - 0.946) <= 0.02 && std::abs(b.overhead_factor - 2.21) <= 0.07;
    return {pass, "l=33@0.1%: yield " + fmt("%.4f", a.yield) + " " + ci(a.ci_low, a.ci_high) + ", overhead " +
                      fmt("%.3f", a.overhead_factor) + "; l=39@0.3%: yield " + fmt("%.4f", b.yield) + " " +
                      ci(b.ci_low, b.ci_high) + ", overhead " + fmt("%.3f", b.overhead_factor)};
}

Outcome fidelity_estimates(const SuperRows &rows) {
    auto ideal = application_fidelity({{27, 1}}, SHOR_PATCHES, SHOR_CYCLES, 1e-3).fidelity;
    auto m33 = application_fidelity(rows.l33.accepted_histogram, SHOR_PATCHES, SHOR_CYCLES, 1e-3).fidelity;
    auto m39 = application_fidelity(rows.l39.accepted_histogram, SHOR_PATCHES, SHOR_CYCLES, 1e-3).fidelity;
    auto mono1 = monolithic_fidelity({{33, 0.53}, {35, 0.47}}, {DefectKind::LinksAndQubits, 0.001}, SHOR_PATCHES,
                                     SHOR_CYCLES, 1e-3, 10000, 1)
                     .fidelity;
    auto mono3 = monolithic_fidelity({{39, 0.47}, {41, 0.53}}, {DefectKind::LinksAndQubits, 0.003}, SHOR_PATCHES,
                                     SHOR_CYCLES, 1e-3, 10000, 1)
                     .fidelity;
    struct Item {
        const char *name;
        double got, want, tol;
    };
    Item items[] = {{"no-defect", ideal, 0.73, 0.05},
                    {"modular 0.1%", m33, 0.885, 0.03},
                    {"modular 0.3%", m39, 0.917, 0.03},
                    {"monolithic 0.1%", mono1, 0.799, 0.03},
                    {"monolithic 0.3%", mono3, 0.761, 0.03}};
    bool pass = true;
    std::string detail;
    for (const auto &it : items) {
        bool ok = std::abs(it.got - it.want) <= it.tol;
        pass &= ok;
        detail += (detail.empty() ? "" : "; ") + std::string(it.name) + " " + fmt("%.4f", it.got) + " (target " +
                  fmt("%.3f", it.want) + (ok ? ", ok)" : ", out of band)");
    }
    return {pass, detail};
}

Outcome noiseless_determinism() {
    int maps = 0, fired = 0, flips = 0, defective = 0;
    for (uint64_t s = 0; maps < 100; s++) {
        int l = 3 + (int)(s % 9);
        auto layout = std::make_shared<const PatchLayout>(l);
        double rate = 0.01 + 0.01 * (double)(s % 4);
        auto m = sample_defects(*layout, {DefectKind::LinksAndQubits, rate}, derive_seed(6, s));
        auto out = adapt_code(layout, m);
        const auto *code = std::get_if<AdaptedCode>(&out);
        if (code == nullptr) {
            continue;
        }
        auto c = memory_circuit(*code, 1 + (int)(s % 4), NoiseModel::uniform(0));
        auto batch = sample_shots(c, 1000, derive_seed(7, s));
        for (uint64_t k = 0; k < batch.shots; k++) {
            fired += !batch.fired(k).empty();
            flips += batch.obs_flips[k] != 0;
        }
        defective += !m.empty();
        maps++;
    }
    return {fired == 0 && flips == 0, std::to_string(maps) + " maps (" + std::to_string(defective) +
                                          " defective, l 3..11), shots with events " + std::to_string(fired) +
                                          ", observable flips " + std::to_string(flips)};
}

Outcome suppression() {
    auto free_code = [](int l) { return require_usable(adapt_code(defects(l, {}))); };
    auto d3 = estimate_ler(free_code(3), NoiseModel::uniform(1e-3), 3, 1000000, 11);
    auto d5 = estimate_ler(free_code(5), NoiseModel::uniform(1e-3), 5, 1000000, 12);
    bool separated = d5.ci_high < d3.ci_low;
    bool synthetic = true;
    for (double alpha : {2.0, 3.0}) {
        std::vector<SlopePoint> pts;
        for (double p : {5e-4, 1e-3, 2e-3}) {
            pts.push_back({p, 0.05 * std::pow(p / 0.01, alpha)});
        }
        synthetic &= std::abs(fit_slope(pts).alpha_d - alpha) <= 1e-9;
    }
    std::vector<SlopePoint> pts;
    for (double p : {5e-4, 7e-4, 1e-3, 1.4e-3, 2e-3}) {
        auto e = estimate_ler(free_code(3), NoiseModel::uniform(p), 3, 1000000, derive_seed(13, (uint64_t)(p * 1e6)));
        pts.push_back({p, e.ler, e.ci_low, e.ci_high});
    }
    auto fit = fit_slope(pts);
    bool slope_ok = fit.alpha_d >= 1.5 && fit.alpha_d <= 2.5;
    return {separated && synthetic && slope_ok,
            "LER d3 " + fmt("%.3g", d3.ler) + " " + ci(d3.ci_low, d3.ci_high) + ", d5 " + fmt("%.3g", d5.ler) + " " +
                ci(d5.ci_low, d5.ci_high) + "; synthetic fits " + (synthetic ? "exact" : "inexact") +
                "; d3 slope " + fmt("%.3f", fit.alpha_d) + " (r2 " + fmt("%.4f", fit.r2) + ")"};
}

Outcome median_slopes(uint64_t shots) {
    const std::vector<double> ps = {1e-3, 1.4e-3, 2e-3};
    struct Slope {
        double alpha = NAN;
        double se = NAN;
    };
    // Standard error from Poisson counts: var(log LER) ~ 1 / failures.
    auto slope_of = [&](const AdaptedCode &code, uint64_t seed) {
        std::vector<SlopePoint> pts;
        std::vector<double> var;
        for (size_t i = 0; i < ps.size(); i++) {
            auto e = estimate_ler(code, NoiseModel::uniform(ps[i]), 5, shots, derive_seed(seed, i));
            pts.push_back({ps[i], e.ler, e.ci_low, e.ci_high});
            var.push_back(e.failures > 0 ? 1.0 / (double)e.failures : INFINITY);
        }
        Slope out;
        try {
            out.alpha = fit_slope(pts).alpha_d;
        } catch (const insufficient_data &) {
            return out;
        }
        double mx = 0;
        for (double p : ps) {
            mx += std::log(p) / (double)ps.size();
        }
        double sxx = 0, num = 0;
        for (size_t i = 0; i < ps.size(); i++) {
            double dx = std::log(ps[i]) - mx;
            sxx += dx * dx;
            num += dx * dx * var[i];
        }
        out.se = std::sqrt(num) / sxx;
        return out;
    };
    auto reference = slope_of(require_usable(adapt_code(defects(5, {}))), 100);
    auto layout = std::make_shared<const PatchLayout>(7);
    std::vector<double> slopes, errors;
    for (uint64_t s = 0; slopes.size() < 20; s++) {
        auto m = sample_defects(*layout, {DefectKind::LinksAndQubits, 0.02}, derive_seed(8, s));
        auto out = adapt_code(layout, m);
        const auto *code = std::get_if<AdaptedCode>(&out);
        if (code == nullptr || m.empty() ||
            std::min(code_distance(*code, Basis::X), code_distance(*code, Basis::Z)) != 5) {
            continue;
        }
        auto a = slope_of(*code, 200 + s);
        if (!std::isnan(a.alpha)) {
            slopes.push_back(a.alpha);
            errors.push_back(a.se);
        }
    }
    double mean_se = 0;
    for (double e : errors) {
        mean_se += e / (double)errors.size();
    }
    std::sort(slopes.begin(), slopes.end());
    double median = (slopes[9] + slopes[10]) / 2;
    return {!std::isnan(reference.alpha) && median >= reference.alpha,
            "defect-free d5 slope " + fmt("%.3f", reference.alpha) + " +- " + fmt("%.3f", reference.se) +
                ", median of 20 defective l=7 d=5 patches " + fmt("%.3f", median) + " (range " +
                ci(slopes.front(), slopes.back()) + ", mean per-patch se " + fmt("%.3f", mean_se) + "), " +
                std::to_string(shots) + " shots per point"};
}

Outcome stability_cutoffs() {
    auto high = stability_compare(5, {4, 4}, 0.15, {3e-3}, 9, 100000, 21)[0];
    auto low = stability_compare(5, {4, 4}, 0.05, {3e-3}, 9, 1000000, 22)[0];
    bool pass = high.disable.ci_high < high.keep.ci_low && low.keep.ler < low.disable.ler;
    return {pass, "rounds 9; bad 15%: keep " + fmt("%.3g", high.keep.ler) + " " +
                      ci(high.keep.ci_low, high.keep.ci_high) + ", disable " + fmt("%.3g", high.disable.ler) + " " +
                      ci(high.disable.ci_low, high.disable.ci_high) + "; bad 5%: keep " + fmt("%.3g", low.keep.ler) +
                      " " + ci(low.keep.ci_low, low.keep.ci_high) + ", disable " + fmt("%.3g", low.disable.ler) +
                      " " + ci(low.disable.ci_low, low.disable.ci_high)};
}

Outcome decoder_exactness() {
    std::vector<DetectorModel> models;
    models.push_back(extract_detector_model(
        memory_circuit(require_usable(adapt_code(defects(5, {{4, 4}}))), 4, NoiseModel::uniform(0.002))));
    models.push_back(extract_detector_model(
        memory_circuit(require_usable(adapt_code(defects(7, {{5, 5}}))), 5, NoiseModel::uniform(0.001))));
    models.push_back(extract_detector_model(stability_circuit(5, 5, NoiseModel::uniform(0.003), BadQubit{{4, 4}, 0.05}, true)));
    std::mt19937_64 rng(10);
    int mismatches = 0;
    for (int trial = 0; trial < 500; trial++) {
        const auto &model = models[trial % models.size()];
        MatchingDecoder dec(model);
        dqec_test::PairingOracle oracle(model);
        size_t k = rng() % 11;
        std::set<uint32_t> picked;
        while (picked.size() < k) {
            picked.insert((uint32_t)(rng() % model.num_detectors));
        }
        std::vector<uint32_t> events(picked.begin(), picked.end());
        dec.decode(events);
        mismatches += dec.last_weight() != oracle.best(events);
    }
    return {mismatches == 0, "500 instances over 3 detector models, " + std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance checks"};
    bool slow = false;
    std::vector<int> only;
    uint64_t slow_shots = 10000000;
    app.add_flag("--slow", slow, "Also run the slow median-slope suite");
    app.add_option("--only", only, "Run only these criteria")->delimiter(',');
    app.add_option("--slow-shots", slow_shots, "Shots per point in the slow suite")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    auto wanted = [&](int k) { return only.empty() || std::find(only.begin(), only.end(), k) != only.end(); };
    std::optional<SuperRows> rows;
    auto get_rows = [&]() -> const SuperRows & {
        if (!rows) {
            rows = super_rows();
        }
        return *rows;
    };
    std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, fig2_distances},
        {2, brute_force_equivalence},
        {3, closed_form_yield},
        {4, [&] { return super_stabilizer_rows(get_rows()); }},
        {5, [&] { return fidelity_estimates(get_rows()); }},
        {6, noiseless_determinism},
        {7, suppression},
        {8, [&] { return median_slopes(slow_shots); }},
        {9, stability_cutoffs},
        {10, decoder_exactness},
    };
    int failures = 0;
    for (auto &[k, fn] : criteria) {
        if (!wanted(k)) {
            continue;
        }
        if (k == 8 && !slow) {
            std::printf("criterion 8: SKIP (slow suite; pass --slow)\n");
            std::fflush(stdout);
            continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !o.pass;
        std::printf("criterion %d: %s (%.1f s) %s\n", k, o.pass ? "PASS" : "FAIL", sec, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
