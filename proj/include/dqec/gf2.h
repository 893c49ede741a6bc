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

#ifndef DQEC_GF2_H
#define DQEC_GF2_H

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dqec {

/// Packed vector over GF(2).
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(size_t n) : n_(n), words_((n + 63) / 64, 0) {
    }

    size_t size() const {
        return n_;
    }
    bool get(size_t k) const {
        return (words_[k >> 6] >> (k & 63)) & 1;
    }
    void set(size_t k, bool v = true) {
        uint64_t m = uint64_t{1} << (k & 63);
        words_[k >> 6] = v ? (words_[k >> 6] | m) : (words_[k >> 6] & ~m);
    }
    void flip(size_t k) {
        words_[k >> 6] ^= uint64_t{1} << (k & 63);
    }
    BitVec &operator^=(const BitVec &other);
    bool any() const;
    size_t popcount() const;
    /// Parity of the overlap with other.
    bool dot(const BitVec &other) const;
    /// Lowest set index, or size() when zero.
    size_t first() const;
    bool operator==(const BitVec &) const = default;

   private:
    size_t n_ = 0;
    std::vector<uint64_t> words_;
};

/// Incrementally built row space, kept in echelon form.
class Gf2Span {
   public:
    explicit Gf2Span(size_t cols) : cols_(cols) {
    }
    /// Adds v; returns false when it was already in the span.
    bool add(BitVec v);
    bool contains(BitVec v) const;
    size_t rank() const {
        return rows_.size();
    }
    /// Reduces v against the pivots in place.
    void reduce(BitVec &v) const;

   private:
    size_t cols_;
    std::vector<BitVec> rows_;
    std::vector<size_t> pivots_;
};

size_t gf2_rank(const std::vector<BitVec> &rows, size_t cols);

/// Basis of {v : r.v = 0 for every row r}.
std::vector<BitVec> gf2_null_space(const std::vector<BitVec> &rows, size_t cols);

}  // namespace dqec

#endif
