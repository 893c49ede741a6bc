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


#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dqec/adapt.h"
#include "dqec/circuit.h"
#include "dqec/engine.h"
#include "dqec/lattice.h"
#include "dqec/metrics.h"
#include "dqec/yieldsim.h"
#include "json.hpp"

using namespace dqec;
using nlohmann::json;

namespace {

constexpr const char *VERSION = "dqec 0.1.0";

std::string sha256_hex(const std::string &data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::string out;
    char buf[3];
    for (unsigned i = 0; i < len; i++) {
        std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
        out += buf;
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("Cannot read '" + path + "'.");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string &path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error &e) {
        throw std::runtime_error("Malformed JSON in '" + path + "': " + e.what());
    }
}

/// Rows of numbers from a CSV file. A first line that does not parse is a header.
std::vector<std::vector<double>> read_csv(const std::string &path) {
    std::istringstream in(read_file(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        bool ok = true;
        while (std::getline(ls, cell, ',')) {
            try {
                size_t used = 0;
                row.push_back(std::stod(cell, &used));
                while (used < cell.size() && std::isspace((unsigned char)cell[used])) {
                    used++;
                }
                ok &= used == cell.size();
            } catch (const std::exception &) {
                ok = false;
            }
        }
        if (!ok) {
            if (first) {
                first = false;
                continue;
            }
            throw std::runtime_error("Malformed CSV line in '" + path + "': " + line);
        }
        first = false;
        rows.push_back(row);
    }
    return rows;
}

std::vector<int> parse_ints(const std::string &text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(std::stoi(cell));
    }
    return out;
}

/// Appends flags from a JSON config (or a run manifest) that are not already on
/// the command line. Keys are long flag names without dashes.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::vector<std::string> out;
    std::string path;
    for (size_t i = 0; i < args.size(); i++) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            out.push_back(args[i]);
        }
    }
    if (path.empty()) {
        return out;
    }
    json cfg = read_json(path);
    if (cfg.contains("parameters")) {
        if (cfg.contains("subcommand") && (out.size() < 2 || out[1].rfind("-", 0) == 0)) {
            out.insert(out.begin() + 1, cfg["subcommand"].get<std::string>());
        }
        cfg = cfg["parameters"];
    }
    if (!cfg.is_object()) {
        throw std::runtime_error("Config '" + path + "' must be a JSON object.");
    }
    auto present = [&](const std::string &flag) {
        for (const auto &a : out) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) {
                return true;
            }
        }
        return false;
    };
    for (const auto &[key, value] : cfg.items()) {
        std::string flag = "--" + key;
        if (present(flag)) {
            continue;
        }
        if (value.is_boolean()) {
            if (value.get<bool>()) {
                out.push_back(flag);
            }
            continue;
        }
        out.push_back(flag);
        if (value.is_array()) {
            std::string joined;
            for (const auto &v : value) {
                joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
            }
            out.push_back(joined);
        } else {
            out.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    return out;
}

struct Common {
    uint64_t seed = 1;
    int workers = 1;
    std::string out;
    std::string manifest;
};

void add_common(CLI::App *sub, Common &c) {
    sub->add_option("--seed", c.seed, "Root seed for all randomness")->capture_default_str();
    sub->add_option("--workers", c.workers, "Worker threads; outputs do not depend on this")->capture_default_str();
    sub->add_option("--out", c.out, "Output file (default stdout)");
    sub->add_option("--manifest", c.manifest, "Manifest path (default <out>.manifest.json)");
}

json effective_parameters(const CLI::App *sub) {
    json p = json::object();
    for (const auto *opt : sub->get_options()) {
        if (opt->get_lnames().empty()) {
            continue;
        }
        const std::string &name = opt->get_lnames()[0];
        if (name == "help" || name == "out" || name == "manifest" || name == "workers") {
            continue;
        }
        if (opt->get_items_expected_max() == 0) {
            p[name] = opt->count() > 0;
            continue;
        }
        std::string value;
        if (opt->count() > 0) {
            for (const auto &r : opt->results()) {
                value += (value.empty() ? "" : ",") + r;
            }
        } else {
            value = opt->get_default_str();
        }
        if (!value.empty()) {
            p[name] = value;
        }
    }
    return p;
}

void emit(const CLI::App *sub, const Common &c, const std::string &text) {
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) {
            throw std::runtime_error("Cannot write '" + c.out + "'.");
        }
        f << text;
    }
    std::string mpath = !c.manifest.empty() ? c.manifest : (c.out.empty() ? "" : c.out + ".manifest.json");
    if (mpath.empty()) {
        return;
    }
    json m = {{"subcommand", sub->get_name()},
              {"parameters", effective_parameters(sub)},
              {"seed", c.seed},
              {"version", VERSION},
              {"outputs", {{c.out.empty() ? "-" : c.out, sha256_hex(text)}}}};
    std::ofstream f(mpath, std::ios::binary);
    f << m.dump(2) << "\n";
}

std::string json_text(const json &j) {
    return j.dump(2) + "\n";
}

DefectMap load_defects(const std::string &path, int l) {
    if (path.empty()) {
        if (l < 2) {
            throw invalid_parameter("Give --defects or --l.");
        }
        DefectMap m;
        m.l = l;
        return m;
    }
    json j = read_json(path);
    if (!j.contains("l") && l >= 2) {
        j["l"] = l;
    }
    return defect_map_from_json(j);
}

AdaptedCode load_code(const std::string &path, int l) {
    auto outcome = adapt_code(load_defects(path, l));
    if (auto *u = std::get_if<Unusable>(&outcome)) {
        throw unusable_patch("Patch is unusable: " + u->reason);
    }
    return std::get<AdaptedCode>(std::move(outcome));
}

Coord parse_coord(const std::string &text) {
    auto v = parse_ints(text);
    if (v.size() != 2) {
        throw invalid_parameter("Expected a coordinate r,c; got '" + text + "'.");
    }
    return {v[0], v[1]};
}

struct PolicyFlags {
    int d_target = 0;
    std::string tie_break = "none";
    std::string baseline = "indicator_based";
    bool rotation = false;
    int standard = 0;
    size_t max_faulty = 0;

    void add(CLI::App *sub) {
        sub->add_option("--d-target", d_target, "Target distance")->required();
        sub->add_option("--tie-break", tie_break, "none | operator_count")->capture_default_str();
        sub->add_option("--policy", baseline, "indicator_based | fewest_faulty | defect_free_only")
            ->capture_default_str();
        sub->add_flag("--rotation", rotation, "Allow swapping data and syndrome roles");
        sub->add_option("--standard", standard, "Boundary standard 1..4 (0 = none)")->capture_default_str();
        sub->add_option("--max-faulty", max_faulty, "Threshold for the fewest_faulty policy")->capture_default_str();
    }
    SelectionPolicy policy() const {
        SelectionPolicy p;
        p.d_target = d_target;
        p.tie_break = parse_tie_break(tie_break);
        p.baseline = parse_baseline(baseline);
        p.allow_rotation = rotation;
        if (standard != 0) {
            p.boundary_standard = standard;
        }
        p.max_faulty = max_faulty;
        return p;
    }
};

std::string yield_csv(const std::vector<YieldReport> &reports, bool with_l) {
    std::string s = with_l ? "l,rate,samples,accepted,yield,ci_low,ci_high,overhead\n"
                           : "rate,samples,accepted,yield,ci_low,ci_high,overhead\n";
    for (const auto &r : reports) {
        if (with_l) {
            s += std::to_string(r.l) + ",";
        }
        s += num(r.model.rate) + "," + std::to_string(r.samples) + "," + std::to_string(r.accepted) + "," +
             num(r.yield) + "," + num(r.ci_low) + "," + num(r.ci_high) + "," + num(r.overhead_factor) + "\n";
    }
    return s;
}

std::string histogram_csv(const std::map<int, uint64_t> &h) {
    std::string s = "d,count\n";
    for (const auto &[d, n] : h) {
        s += std::to_string(d) + "," + std::to_string(n) + "\n";
    }
    return s;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Defect-adapted surface code toolkit"};
    app.set_version_flag("--version", VERSION);
    app.require_subcommand(1);
    Common c;

    std::string defects_path, model = "links_and_qubits";
    int l = 0, rounds = 0, d_target = 0;
    double p = 0.001, rate = 0.0;
    uint64_t shots = 10000, samples = 10000;

    auto *adapt = app.add_subcommand("adapt", "Adapt a surface code to a defect map");
    adapt->add_option("--defects", defects_path, "Defect map JSON");
    adapt->add_option("--l", l, "Chiplet width when no defect file is given");
    add_common(adapt, c);

    auto *metrics = app.add_subcommand("metrics", "Distance, operator counts and standards of an adapted patch");
    metrics->add_option("--defects", defects_path, "Defect map JSON");
    metrics->add_option("--l", l, "Chiplet width when no defect file is given");
    metrics->add_option("--d-target", d_target, "Target distance for the boundary standards");
    add_common(metrics, c);

    auto *sample = app.add_subcommand("sample-defects", "Draw a random defect map");
    sample->add_option("--l", l, "Chiplet width")->required();
    sample->add_option("--model", model, "links_only | links_and_qubits")->capture_default_str();
    sample->add_option("--rate", rate, "Per-component failure rate")->required();
    add_common(sample, c);

    bool stability = false, disable_bad = false;
    std::string bad_qubit;
    double idle = 0.0;
    auto *emitc = app.add_subcommand("emit-circuit", "Write a noisy memory or stability circuit");
    emitc->add_option("--defects", defects_path, "Defect map JSON");
    emitc->add_option("--l", l, "Chiplet width when no defect file is given");
    emitc->add_option("--rounds", rounds, "Syndrome cycles (default l)");
    emitc->add_option("--p", p, "Two-qubit error rate")->capture_default_str();
    emitc->add_option("--idle", idle, "Idle depolarizing rate")->capture_default_str();
    emitc->add_flag("--stability", stability, "Emit a stability experiment instead of memory");
    emitc->add_option("--bad-qubit", bad_qubit, "r,c,scale: data qubit whose error rate is scale * p");
    emitc->add_flag("--disable-bad", disable_bad, "Remove the bad qubit with super-stabilizers");
    add_common(emitc, c);

    auto *memory = app.add_subcommand("run-memory", "Estimate the logical error rate of a memory experiment");
    memory->add_option("--defects", defects_path, "Defect map JSON");
    memory->add_option("--l", l, "Chiplet width when no defect file is given");
    memory->add_option("--p", p, "Two-qubit error rate")->capture_default_str();
    memory->add_option("--rounds", rounds, "Syndrome cycles (default l)");
    memory->add_option("--shots", shots, "Shots")->capture_default_str();
    add_common(memory, c);

    std::string input;
    auto *slope = app.add_subcommand("fit-slope", "Fit log LER against log p");
    slope->add_option("--input", input, "CSV rows p,ler[,ci_low,ci_high]")->required();
    add_common(slope, c);

    std::string bad_site = "4,4", good_ps = "0.002,0.003,0.0045,0.007";
    double bad_p = 0.15;
    auto *stab = app.add_subcommand("stability", "Keep-vs-disable stability comparison for one bad data qubit");
    stab->add_option("--l", l, "Patch width")->capture_default_str();
    stab->add_option("--bad-site", bad_site, "Bad data qubit r,c")->capture_default_str();
    stab->add_option("--bad", bad_p, "Two-qubit error rate on the bad qubit")->capture_default_str();
    stab->add_option("--good-p", good_ps, "Comma-separated good-qubit error rates")->capture_default_str();
    stab->add_option("--rounds", rounds, "Syndrome cycles (default 2l-1)");
    stab->add_option("--shots", shots, "Shots per point")->capture_default_str();
    add_common(stab, c);

    std::string rates_text, ls_text;
    PolicyFlags yflags;
    auto *yieldc = app.add_subcommand("yield", "Chiplet yield and overhead curve");
    yieldc->add_option("--l", l, "Chiplet width")->required();
    yieldc->add_option("--model", model, "links_only | links_and_qubits")->capture_default_str();
    yieldc->add_option("--rates", rates_text, "Comma-separated defect rates")->required();
    yieldc->add_option("--samples", samples, "Chiplets per rate")->capture_default_str();
    yflags.add(yieldc);
    add_common(yieldc, c);

    PolicyFlags oflags;
    auto *optimal = app.add_subcommand("optimal-l", "Chiplet width with the lowest overhead");
    optimal->add_option("--ls", ls_text, "Comma-separated chiplet widths")->required();
    optimal->add_option("--model", model, "links_only | links_and_qubits")->capture_default_str();
    optimal->add_option("--rate", rate, "Defect rate")->required();
    optimal->add_option("--samples", samples, "Chiplets per width")->capture_default_str();
    oflags.add(optimal);
    add_common(optimal, c);

    bool accepted_only = false;
    auto *dist = app.add_subcommand("distance-dist", "Histogram of min-axis code distance");
    dist->add_option("--l", l, "Chiplet width")->required();
    dist->add_option("--model", model, "links_only | links_and_qubits")->capture_default_str();
    dist->add_option("--rate", rate, "Defect rate")->required();
    dist->add_option("--samples", samples, "Chiplets")->capture_default_str();
    dist->add_option("--d-target", d_target, "With --accepted-only, the acceptance threshold");
    dist->add_flag("--accepted-only", accepted_only, "Keep only chiplets with d >= d-target");
    add_common(dist, c);

    std::string mix;
    double patches = SHOR_PATCHES, cycles = SHOR_CYCLES, p_phys = 1e-3;
    auto *fid = app.add_subcommand("fidelity", "Application fidelity from a distance distribution");
    fid->add_option("--dist", input, "CSV rows d,count");
    fid->add_option("--mix", mix, "Monolithic mix l:fraction,... (samples unselected distributions)");
    fid->add_option("--model", model, "links_only | links_and_qubits")->capture_default_str();
    fid->add_option("--rate", rate, "Defect rate for --mix")->capture_default_str();
    fid->add_option("--samples", samples, "Chiplets per width for --mix")->capture_default_str();
    fid->add_option("--patches", patches, "Logical patches")->capture_default_str();
    fid->add_option("--cycles", cycles, "Cycles per patch")->capture_default_str();
    fid->add_option("--p", p_phys, "Physical error rate")->capture_default_str();
    add_common(fid, c);

    std::string json_out;
    ls_text = "";
    auto *shor = app.add_subcommand("shor-table", "Resource table for the factoring workload");
    shor->add_option("--rate", rate, "Defect rate")->required();
    shor->add_option("--model", model, "links_only | links_and_qubits")->capture_default_str();
    shor->add_option("--ls", ls_text, "Chiplet widths for the super-stabilizer row (default 27..41 odd)");
    shor->add_option("--samples", samples, "Chiplets per width")->capture_default_str();
    shor->add_option("--json", json_out, "Also write the rows as JSON");
    add_common(shor, c);

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_config(args);
    } catch (const std::exception &e) {
        std::cerr << json({{"error", e.what()}}).dump() << "\n";
        return 2;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        auto kind = [&] { return parse_defect_kind(model); };
        if (adapt->parsed()) {
            emit(adapt, c, json_text(to_json(load_code(defects_path, l))));
        } else if (metrics->parsed()) {
            auto code = load_code(defects_path, l);
            emit(metrics, c, json_text(to_json(compute_metrics(code, d_target > 0 ? d_target : code.layout->l()))));
        } else if (sample->parsed()) {
            PatchLayout layout(l);
            auto m = sample_defects(layout, {kind(), rate}, c.seed);
            emit(sample, c, json_text(to_json(m)));
        } else if (emitc->parsed()) {
            NoiseModel noise = NoiseModel::uniform(p);
            noise.idle = idle;
            Circuit circuit;
            if (stability) {
                int width = l >= 2 ? l : load_defects(defects_path, 0).l;
                std::optional<BadQubit> bad;
                if (!bad_qubit.empty()) {
                    std::stringstream ss(bad_qubit);
                    std::string a, b, s;
                    std::getline(ss, a, ',');
                    std::getline(ss, b, ',');
                    std::getline(ss, s, ',');
                    bad = BadQubit{{std::stoi(a), std::stoi(b)}, std::stod(s) * p};
                }
                circuit = stability_circuit(width, rounds > 0 ? rounds : width, noise, bad, disable_bad);
            } else {
                auto code = load_code(defects_path, l);
                circuit = memory_circuit(code, rounds > 0 ? rounds : code.layout->l(), noise);
            }
            emit(emitc, c, emit_text(circuit));
        } else if (memory->parsed()) {
            auto code = load_code(defects_path, l);
            auto e = estimate_ler(code, NoiseModel::uniform(p), rounds > 0 ? rounds : code.layout->l(), shots, c.seed,
                                  c.workers);
            json j = to_json(e);
            j["p"] = p;
            j["rounds"] = rounds > 0 ? rounds : code.layout->l();
            emit(memory, c, json_text(j));
        } else if (slope->parsed()) {
            std::vector<SlopePoint> pts;
            for (const auto &row : read_csv(input)) {
                if (row.size() < 2) {
                    throw std::runtime_error("fit-slope rows need p,ler.");
                }
                pts.push_back({row[0], row[1], row.size() > 2 ? row[2] : 0.0, row.size() > 3 ? row[3] : 0.0});
            }
            emit(slope, c, json_text(to_json(fit_slope(pts))));
        } else if (stab->parsed()) {
            int width = l >= 2 ? l : 5;
            std::vector<double> gs;
            std::stringstream ss(good_ps);
            for (std::string cell; std::getline(ss, cell, ',');) {
                gs.push_back(std::stod(cell));
            }
            auto rows = stability_compare(width, parse_coord(bad_site), bad_p, gs, rounds > 0 ? rounds : 2 * width - 1,
                                          shots, c.seed, c.workers);
            std::string s = "good_p,ler_keep,keep_ci_low,keep_ci_high,ler_disable,disable_ci_low,disable_ci_high\n";
            for (const auto &r : rows) {
                s += num(r.good_p) + "," + num(r.keep.ler) + "," + num(r.keep.ci_low) + "," + num(r.keep.ci_high) +
                     "," + num(r.disable.ler) + "," + num(r.disable.ci_low) + "," + num(r.disable.ci_high) + "\n";
            }
            emit(stab, c, s);
        } else if (yieldc->parsed()) {
            std::vector<double> rates;
            std::stringstream ss(rates_text);
            for (std::string cell; std::getline(ss, cell, ',');) {
                rates.push_back(std::stod(cell));
            }
            auto reports = yield_curve(l, kind(), rates, yflags.policy(), samples, c.seed, c.workers);
            emit(yieldc, c, yield_csv(reports, false));
        } else if (optimal->parsed()) {
            auto best = optimal_chiplet(parse_ints(ls_text), {kind(), rate}, oflags.policy(), samples, c.seed,
                                        c.workers);
            json reports = json::array();
            for (const auto &r : best.reports) {
                reports.push_back(to_json(r));
            }
            emit(optimal, c, json_text({{"best_l", best.l}, {"overhead", best.overhead}, {"reports", reports}}));
        } else if (dist->parsed()) {
            std::map<int, uint64_t> h;
            if (accepted_only) {
                SelectionPolicy pol;
                pol.d_target = d_target > 0 ? d_target : l;
                h = yield_at(l, {kind(), rate}, pol, samples, c.seed, c.workers).accepted_histogram;
            } else {
                h = distance_distribution(l, {kind(), rate}, samples, c.seed, c.workers);
            }
            emit(dist, c, histogram_csv(h));
        } else if (fid->parsed()) {
            FidelityEstimate f;
            if (!mix.empty()) {
                std::vector<std::pair<int, double>> parts;
                std::stringstream ss(mix);
                for (std::string cell; std::getline(ss, cell, ',');) {
                    auto colon = cell.find(':');
                    if (colon == std::string::npos) {
                        throw invalid_parameter("Expected l:fraction in --mix; got '" + cell + "'.");
                    }
                    parts.push_back({std::stoi(cell.substr(0, colon)), std::stod(cell.substr(colon + 1))});
                }
                f = monolithic_fidelity(parts, {kind(), rate}, patches, cycles, p_phys, samples, c.seed, c.workers);
            } else if (!input.empty()) {
                std::map<int, uint64_t> h;
                for (const auto &row : read_csv(input)) {
                    if (row.size() < 2) {
                        throw std::runtime_error("fidelity rows need d,count.");
                    }
                    h[(int)row[0]] += (uint64_t)row[1];
                }
                f = application_fidelity(h, patches, cycles, p_phys);
            } else {
                throw invalid_parameter("Give --dist or --mix.");
            }
            emit(fid, c, json_text(to_json(f)));
        } else if (shor->parsed()) {
            std::vector<int> ls = ls_text.empty() ? std::vector<int>{27, 29, 31, 33, 35, 37, 39, 41}
                                                  : parse_ints(ls_text);
            SelectionPolicy pol;
            pol.d_target = SHOR_DISTANCE;
            auto rows = shor_table(rate, kind(), ls, pol, samples, c.seed, c.workers);
            char line[160];
            std::string s;
            std::snprintf(line, sizeof(line), "%-18s %4s %12s %12s %14s\n", "approach", "l", "yield", "overhead",
                          "total_qubits");
            s += line;
            json rows_json = json::array();
            for (const auto &r : rows) {
                std::snprintf(line, sizeof(line), "%-18s %4d %12.4g %12.4g %14.4g\n", r.approach.c_str(), r.l,
                              r.yield, r.overhead, r.total_qubits);
                s += line;
                rows_json.push_back(to_json(r));
            }
            if (!json_out.empty()) {
                std::ofstream(json_out, std::ios::binary) << json_text(rows_json);
            }
            emit(shor, c, s);
        }
    } catch (const std::exception &e) {
        std::cerr << json({{"error", e.what()}}).dump() << "\n";
        return 1;
    }
    return 0;
}
