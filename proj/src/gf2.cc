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

#include "dqec/gf2.h"

#include <algorithm>
#include <bit>

namespace dqec {

BitVec &BitVec::operator^=(const BitVec &other) {
    for (size_t k = 0; k < words_.size(); k++) {
        words_[k] ^= other.words_[k];
    }
    return *this;
}

bool BitVec::any() const {
    return std::any_of(words_.begin(), words_.end(), [](uint64_t w) {
        return w != 0;
    });
}

size_t BitVec::popcount() const {
    size_t n = 0;
    for (auto w : words_) {
        n += std::popcount(w);
    }
    return n;
}

bool BitVec::dot(const BitVec &other) const {
    uint64_t acc = 0;
    for (size_t k = 0; k < words_.size(); k++) {
        acc ^= words_[k] & other.words_[k];
    }
    return std::popcount(acc) & 1;
}

size_t BitVec::first() const {
    for (size_t k = 0; k < words_.size(); k++) {
        if (words_[k]) {
            return k * 64 + std::countr_zero(words_[k]);
        }
    }
    return n_;
}

void Gf2Span::reduce(BitVec &v) const {
    for (size_t k = 0; k < rows_.size(); k++) {
        if (v.get(pivots_[k])) {
            v ^= rows_[k];
        }
    }
}

bool Gf2Span::add(BitVec v) {
    reduce(v);
    size_t p = v.first();
    if (p >= cols_) {
        return false;
    }
    // Keep every stored row clear of the new pivot so reduce() stays one pass.
    for (auto &r : rows_) {
        if (r.get(p)) {
            r ^= v;
        }
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
}

bool Gf2Span::contains(BitVec v) const {
    reduce(v);
    return !v.any();
}

size_t gf2_rank(const std::vector<BitVec> &rows, size_t cols) {
    Gf2Span span(cols);
    for (const auto &r : rows) {
        span.add(r);
    }
    return span.rank();
}

std::vector<BitVec> gf2_null_space(const std::vector<BitVec> &rows, size_t cols) {
    // Reduced row echelon form, then one basis vector per free column.
    std::vector<BitVec> m = rows;
    std::vector<size_t> pivot_cols;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < m.size(); c++) {
        size_t sel = r;
        while (sel < m.size() && !m[sel].get(c)) {
            sel++;
        }
        if (sel == m.size()) {
            continue;
        }
        std::swap(m[r], m[sel]);
        for (size_t k = 0; k < m.size(); k++) {
            if (k != r && m[k].get(c)) {
                m[k] ^= m[r];
            }
        }
        pivot_cols.push_back(c);
        r++;
    }
    std::vector<uint8_t> is_pivot(cols, 0);
    for (auto c : pivot_cols) {
        is_pivot[c] = 1;
    }
    std::vector<BitVec> out;
    for (size_t f = 0; f < cols; f++) {
        if (is_pivot[f]) {
            continue;
        }
        BitVec v(cols);
        v.set(f);
        for (size_t k = 0; k < pivot_cols.size(); k++) {
            if (m[k].get(f)) {
                v.set(pivot_cols[k]);
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace dqec
