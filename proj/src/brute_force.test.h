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

#ifndef DQEC_BRUTE_FORCE_TEST_H
#define DQEC_BRUTE_FORCE_TEST_H

#include <cstdint>
#include <functional>
#include <vector>

#include "dqec/adapt.h"

namespace dqec_test {

/// Exhaustive minimum-weight logical search on codes with at most 64 active
/// data qubits. Independent of the library's graph and GF(2) code paths.
struct BruteForce {
    std::vector<uint32_t> qubits;  // active data index per bit
    std::vector<uint64_t> x_checks, z_checks;  // measured checks
    std::vector<uint64_t> x_stabs, z_stabs;    // stabilizer generators

    explicit BruteForce(const dqec::AdaptedCode &code) {
        std::vector<int> bit(code.data_active.size(), -1);
        for (uint32_t q = 0; q < code.data_active.size(); q++) {
            if (code.data_active[q]) {
                bit[q] = (int)qubits.size();
                qubits.push_back(q);
            }
        }
        if (qubits.size() > 64) {
            throw std::invalid_argument("too many qubits for brute force");
        }
        auto mask = [&](const std::vector<uint32_t> &support) {
            uint64_t m = 0;
            for (auto q : support) {
                m ^= uint64_t{1} << bit[q];
            }
            return m;
        };
        for (const auto &c : code.plain) {
            (c.type == dqec::Basis::X ? x_checks : z_checks).push_back(mask(c.support));
            (c.type == dqec::Basis::X ? x_stabs : z_stabs).push_back(mask(c.support));
        }
        for (const auto &s : code.supers) {
            uint64_t prod = 0;
            for (const auto &m : s.members) {
                (m.type == dqec::Basis::X ? x_checks : z_checks).push_back(mask(m.support));
                prod ^= mask(m.support);
            }
            (s.type == dqec::Basis::X ? x_stabs : z_stabs).push_back(prod);
        }
    }

    static bool odd(uint64_t a, uint64_t b) {
        return __builtin_popcountll(a & b) & 1;
    }

    /// Echelon basis of the span of rows.
    static std::vector<uint64_t> echelon(std::vector<uint64_t> rows) {
        std::vector<uint64_t> basis;
        for (auto r : rows) {
            for (auto b : basis) {
                r = std::min(r, r ^ b);
            }
            if (r) {
                basis.push_back(r);
                std::sort(basis.rbegin(), basis.rend());
            }
        }
        return basis;
    }

    static bool in_span(const std::vector<uint64_t> &basis, uint64_t v) {
        for (auto b : basis) {
            v = std::min(v, v ^ b);
        }
        return v == 0;
    }

    /// A logical of the given type found by scanning weights upward: commutes
    /// with all checks of the other type and is not a stabilizer.
    uint64_t bare_logical(dqec::Basis type) const {
        const auto &other = type == dqec::Basis::X ? z_checks : x_checks;
        auto stabs = echelon(type == dqec::Basis::X ? x_stabs : z_stabs);
        uint64_t found = 0;
        for (int w = 1; w <= (int)qubits.size() && !found; w++) {
            enumerate(w, [&](uint64_t v) {
                for (auto c : other) {
                    if (odd(v, c)) {
                        return false;
                    }
                }
                if (in_span(stabs, v)) {
                    return false;
                }
                found = v;
                return true;
            });
        }
        return found;
    }

    struct Result {
        int distance = 0;
        uint64_t count = 0;
    };

    /// Minimum weight operators of the axis type that commute with the
    /// other type's stabilizers and anticommute with the partner logical.
    Result min_logicals(dqec::Basis axis, int max_weight) const {
        auto partner = bare_logical(axis == dqec::Basis::X ? dqec::Basis::Z : dqec::Basis::X);
        const auto &stabs = axis == dqec::Basis::X ? z_stabs : x_stabs;
        for (int w = 1; w <= max_weight; w++) {
            uint64_t n = 0;
            enumerate(w, [&](uint64_t v) {
                if (!odd(v, partner)) {
                    return false;
                }
                for (auto s : stabs) {
                    if (odd(v, s)) {
                        return false;
                    }
                }
                n++;
                return false;
            });
            if (n) {
                return {w, n};
            }
        }
        return {};
    }

    /// Calls f on every mask of the given weight until it returns true.
    void enumerate(int w, const std::function<bool(uint64_t)> &f) const {
        int n = (int)qubits.size();
        std::vector<int> idx(w);
        for (int k = 0; k < w; k++) {
            idx[k] = k;
        }
        if (w > n) {
            return;
        }
        while (true) {
            uint64_t m = 0;
            for (int k : idx) {
                m |= uint64_t{1} << k;
            }
            if (f(m)) {
                return;
            }
            int k = w - 1;
            while (k >= 0 && idx[k] == n - w + k) {
                k--;
            }
            if (k < 0) {
                return;
            }
            idx[k]++;
            for (int j = k + 1; j < w; j++) {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
};

}  // namespace dqec_test

#endif
