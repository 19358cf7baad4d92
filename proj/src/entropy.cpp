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

#include "hcft/entropy.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hcft {

namespace {

constexpr uint64_t kStabRows = 0xAAAAAAAAAAAAAAAAull;

std::vector<uint8_t> membership(size_t n, std::span<const size_t> A) {
    std::vector<uint8_t> in(n, 0);
    for (size_t q : A) {
        if (q >= n) throw std::out_of_range("qubit index out of range");
        if (in[q]) throw std::invalid_argument("repeated qubit in subset");
        in[q] = 1;
    }
    return in;
}

}  // namespace

size_t gf2_rank(BitMatrix &m) {
    size_t rank = 0;
    for (size_t c = 0; c < m.cols() && rank < m.rows(); c++) {
        size_t w = c >> 6;
        uint64_t bit = uint64_t{1} << (c & 63);
        size_t piv = rank;
        while (piv < m.rows() && !(m.row(piv)[w] & bit)) piv++;
        if (piv == m.rows()) continue;
        if (piv != rank) std::swap_ranges(m.row(piv) + w, m.row(piv) + m.stride(), m.row(rank) + w);
        for (size_t r = piv + 1; r < m.rows(); r++) {
            if (m.row(r)[w] & bit) m.xor_row(r, rank, w);
        }
        rank++;
    }
    return rank;
}

BitMatrix stabilizer_columns(const StabilizerTableau &state, std::span<const size_t> positions) {
    size_t n = state.num_qubits();
    BitMatrix m(n, 2 * positions.size());
    size_t W = state.row_words();
    for (size_t k = 0; k < positions.size(); k++) {
        size_t q = positions[k];
        if (q >= n) throw std::out_of_range("qubit index out of range");
        const uint64_t *cols[2] = {state.x_column(q), state.z_column(q)};
        for (size_t b = 0; b < 2; b++) {
            for (size_t w = 0; w < W; w++) {
                uint64_t bits = cols[b][w] & kStabRows;
                while (bits) {
                    size_t r = (64 * w + std::countr_zero(bits)) >> 1;
                    m.set(r, 2 * k + b);
                    bits &= bits - 1;
                }
            }
        }
    }
    return m;
}

EntropyValue entropy_subset(const StabilizerTableau &state, std::span<const size_t> A) {
    size_t n = state.num_qubits();
    auto in = membership(n, A);
    // pure state: use the smaller side
    std::vector<size_t> side(A.begin(), A.end());
    if (2 * A.size() > n) {
        side.clear();
        for (size_t q = 0; q < n; q++) {
            if (!in[q]) side.push_back(q);
        }
    }
    if (side.empty()) return {0};
    BitMatrix m = stabilizer_columns(state, side);
    size_t r = gf2_rank(m);
    return {static_cast<int64_t>(r) - static_cast<int64_t>(side.size())};
}

ClippedTableau clip_gauge(const StabilizerTableau &state) {
    std::vector<size_t> order(state.num_qubits());
    for (size_t i = 0; i < order.size(); i++) order[i] = i;
    return clip_gauge(state, order);
}

ClippedTableau clip_gauge(const StabilizerTableau &state, std::span<const size_t> ordering) {
    size_t n = state.num_qubits();
    if (ordering.size() != n) throw std::invalid_argument("clipping order must cover every qubit");
    membership(n, ordering);

    ClippedTableau out;
    out.gens_ = stabilizer_columns(state, ordering);
    BitMatrix &g = out.gens_;
    std::vector<int> pivcol(n, -1);
    out.left_.assign(n, -1);
    out.right_.assign(n, -1);

    // Row echelon form from the left; column 2j is X_j and 2j+1 is Z_j.
    std::vector<size_t> open(n);
    for (size_t i = 0; i < n; i++) open[i] = i;
    for (size_t c = 0; c < 2 * n && !open.empty(); c++) {
        size_t w = c >> 6;
        uint64_t bit = uint64_t{1} << (c & 63);
        size_t piv = SIZE_MAX, piv_slot = 0;
        for (size_t s = 0; s < open.size(); s++) {
            size_t r = open[s];
            if (!(g.row(r)[w] & bit)) continue;
            if (piv == SIZE_MAX) {
                piv = r;
                piv_slot = s;
            } else {
                g.xor_row(r, piv, w);
            }
        }
        if (piv != SIZE_MAX) {
            pivcol[piv] = static_cast<int>(c);
            out.left_[piv] = static_cast<int>(c / 2);
            open.erase(open.begin() + static_cast<std::ptrdiff_t>(piv_slot));
        }
    }
    if (!open.empty()) throw std::logic_error("stabilizer generators are not independent");

    // Sweep from the right; the row with the latest left pivot absorbs the
    // others, which keeps every left endpoint in place.
    std::vector<uint8_t> done(n, 0);
    for (size_t c = 2 * n; c-- > 0;) {
        size_t w = c >> 6;
        uint64_t bit = uint64_t{1} << (c & 63);
        size_t piv = SIZE_MAX;
        for (size_t r = 0; r < n; r++) {
            if (done[r] || !(g.row(r)[w] & bit)) continue;
            if (piv == SIZE_MAX || pivcol[r] > pivcol[piv]) piv = r;
        }
        if (piv == SIZE_MAX) continue;
        for (size_t r = 0; r < n; r++) {
            if (r == piv || done[r] || !(g.row(r)[w] & bit)) continue;
            uint64_t *d = g.row(r);
            const uint64_t *s = g.row(piv);
            for (size_t k = 0; k <= w; k++) d[k] ^= s[k];
        }
        done[piv] = 1;
        out.right_[piv] = static_cast<int>(c / 2);
    }

    out.left_count_.assign(n, 0);
    out.right_count_.assign(n, 0);
    for (size_t r = 0; r < n; r++) {
        out.left_count_[out.left_[r]]++;
        out.right_count_[out.right_[r]]++;
    }
    return out;
}

EntropyValue ClippedTableau::interval(size_t a, size_t b) const {
    if (a > b || b > num_sites()) throw std::out_of_range("interval outside the chain");
    int64_t crossing = 0;
    for (size_t g = 0; g < left_.size(); g++) {
        bool l_in = static_cast<size_t>(left_[g]) >= a && static_cast<size_t>(left_[g]) < b;
        bool r_in = static_cast<size_t>(right_[g]) >= a && static_cast<size_t>(right_[g]) < b;
        crossing += (l_in != r_in);
    }
    return {crossing / 2};
}

std::vector<int64_t> ClippedTableau::prefix_bits() const {
    size_t n = num_sites();
    std::vector<int64_t> diff(n + 2, 0);
    for (size_t g = 0; g < left_.size(); g++) {
        diff[left_[g] + 1]++;
        diff[right_[g] + 1]--;
    }
    std::vector<int64_t> out(n + 1, 0);
    int64_t run = 0;
    for (size_t k = 0; k <= n; k++) {
        run += diff[k];
        out[k] = run / 2;
    }
    return out;
}

EntropyValue mutual_information_bits(const StabilizerTableau &state, std::span<const size_t> A,
                                     std::span<const size_t> B) {
    auto in_a = membership(state.num_qubits(), A);
    membership(state.num_qubits(), B);
    for (size_t q : B) {
        if (in_a[q]) throw std::invalid_argument("mutual information needs disjoint subsets");
    }
    std::vector<size_t> ab(A.begin(), A.end());
    ab.insert(ab.end(), B.begin(), B.end());
    return {entropy_subset(state, A).bits + entropy_subset(state, B).bits - entropy_subset(state, ab).bits};
}

double mutual_information(const StabilizerTableau &state, std::span<const size_t> A, std::span<const size_t> B) {
    return mutual_information_bits(state, A, B).nats();
}

}  // namespace hcft
