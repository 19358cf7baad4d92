// Copyright 2026 The hcft Authors
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

#ifndef HCFT_ENTROPY_HPP
#define HCFT_ENTROPY_HPP

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "hcft/tableau.hpp"

namespace hcft {

inline constexpr double kLn2 = std::numbers::ln2;

// Entanglement entropy held as an integer number of bits.
struct EntropyValue {
    int64_t bits = 0;
    double nats() const { return static_cast<double>(bits) * kLn2; }
};

// Dense row-major GF(2) matrix.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), stride_(words_for_bits(cols)), data_(rows * stride_, 0) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t stride() const { return stride_; }
    uint64_t *row(size_t r) { return data_.data() + r * stride_; }
    const uint64_t *row(size_t r) const { return data_.data() + r * stride_; }
    bool get(size_t r, size_t c) const { return (row(r)[c >> 6] >> (c & 63)) & 1; }
    void set(size_t r, size_t c) { row(r)[c >> 6] |= uint64_t{1} << (c & 63); }
    // row dst ^= row src, from word `from` on
    void xor_row(size_t dst, size_t src, size_t from = 0) {
        uint64_t *d = row(dst);
        const uint64_t *s = row(src);
        for (size_t w = from; w < stride_; w++) d[w] ^= s[w];
    }

   private:
    size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<uint64_t> data_;
};

// Rank over GF(2); the matrix is consumed.
size_t gf2_rank(BitMatrix &m);

// Stabilizer generators as rows with column 2k = X and 2k+1 = Z on qubit
// `positions[k]`.
BitMatrix stabilizer_columns(const StabilizerTableau &state, std::span<const size_t> positions);

EntropyValue entropy_subset(const StabilizerTableau &state, std::span<const size_t> A);

// Generators in clipped gauge along a 1D ordering of all qubits. Each
// generator occupies sites [left_end, right_end].
class ClippedTableau {
   public:
    size_t num_sites() const { return left_count_.size(); }
    size_t num_generators() const { return left_.size(); }
    int left_end(size_t g) const { return left_[g]; }
    int right_end(size_t g) const { return right_[g]; }
    // Endpoint density: how many generators start / end on each site.
    const std::vector<int> &left_counts() const { return left_count_; }
    const std::vector<int> &right_counts() const { return right_count_; }
    const BitMatrix &generators() const { return gens_; }

    // Entropy of sites [a, b): half the number of generators with exactly
    // one endpoint inside.
    EntropyValue interval(size_t a, size_t b) const;
    // S([0, k)) for k = 0..num_sites.
    std::vector<int64_t> prefix_bits() const;

   private:
    friend ClippedTableau clip_gauge(const StabilizerTableau &, std::span<const size_t>);
    BitMatrix gens_;
    std::vector<int> left_, right_;
    std::vector<int> left_count_, right_count_;
};

ClippedTableau clip_gauge(const StabilizerTableau &state);
ClippedTableau clip_gauge(const StabilizerTableau &state, std::span<const size_t> ordering);

// I(A:B) = S(A) + S(B) - S(AB). Throws std::invalid_argument if A and B
// overlap.
EntropyValue mutual_information_bits(const StabilizerTableau &state, std::span<const size_t> A,
                                     std::span<const size_t> B);
double mutual_information(const StabilizerTableau &state, std::span<const size_t> A, std::span<const size_t> B);

}  // namespace hcft

#endif
