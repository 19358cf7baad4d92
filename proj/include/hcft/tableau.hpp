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

#ifndef HCFT_TABLEAU_HPP
#define HCFT_TABLEAU_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hcft/clifford.hpp"
#include "hcft/pauli.hpp"
#include "hcft/rng.hpp"

namespace hcft {

enum class Basis { Z };

struct MeasureResult {
    int outcome;  // +1 or -1
    bool deterministic;
};

// Stabilizer state with destabilizers (Aaronson-Gottesman). Storage is
// qubit-major: for each qubit a bit column over all generator rows, so a
// gate touches four columns with word-parallel XOR. Row 2i is
// destabilizer i, row 2i+1 is stabilizer i. Row phases are i^k with k
// kept as two bit planes.
class StabilizerTableau {
   public:
    StabilizerTableau() = default;

    static StabilizerTableau product_state(size_t n, size_t reserve_qubits = 0);
    // 2L qubits; system qubit i is paired with environment qubit L + i.
    static StabilizerTableau bell_pairs(size_t pairs, size_t reserve_qubits = 0);

    size_t num_qubits() const { return n_; }

    void apply(const CliffordGate &gate, std::span<const size_t> targets);
    void apply(const CliffordGate &gate, size_t a);
    void apply(const CliffordGate &gate, size_t a, size_t b);
    // Unchecked fast path for distinct in-range a, b.
    void apply_compiled2(const CliffordGate::Compiled &c, size_t a, size_t b);

    MeasureResult measure(size_t q, Basis basis, Rng &rng);
    // Outcome a measurement would produce if deterministic, else 0.
    int peek_z(size_t q) const;

    // New qubit in |0>; returns its index.
    size_t append_fresh_qubit();
    void reserve(size_t qubits);

    PauliString stabilizer(size_t i) const;
    PauliString destabilizer(size_t i) const;
    // <P> in {-1, 0, +1}.
    int expectation(const PauliString &p) const;

    // Raw column access for the entropy engine. Bits index rows; stabilizer
    // rows sit at odd positions.
    size_t row_words() const { return words_for_bits(2 * n_); }
    const uint64_t *x_column(size_t q) const { return xs_.data() + q * stride_; }
    const uint64_t *z_column(size_t q) const { return zs_.data() + q * stride_; }

    // Structural checks used by tests: commutation, rank and pairing.
    bool is_valid() const;

   private:
    void grow(size_t qubits);
    uint64_t *xcol(size_t q) { return xs_.data() + q * stride_; }
    uint64_t *zcol(size_t q) { return zs_.data() + q * stride_; }
    PauliString row(size_t r) const;
    // log_i of the ordered product of rows in `rows`; also returns its bits.
    uint8_t row_product(const uint64_t *rows, std::vector<uint64_t> *x_out, std::vector<uint64_t> *z_out) const;

    size_t n_ = 0;
    size_t cap_ = 0;
    size_t stride_ = 0;
    std::vector<uint64_t> xs_, zs_;
    std::vector<uint64_t> ph0_, ph1_;
    std::vector<uint64_t> scratch_a_, scratch_b_;
};

StabilizerTableau new_product_state(size_t n);
StabilizerTableau new_bell_pairs(size_t pairs);
void apply_gate(StabilizerTableau &state, const CliffordGate &gate, std::span<const size_t> targets);
int measure_pauli(StabilizerTableau &state, size_t site, Basis basis, Rng &rng);
size_t append_fresh_qubit(StabilizerTableau &state);

}  // namespace hcft

#endif
