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

#ifndef HCFT_CLIFFORD_HPP
#define HCFT_CLIFFORD_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "hcft/pauli.hpp"
#include "hcft/rng.hpp"

namespace hcft {

// Number of 4x4 binary symplectic matrices, |Sp(4, 2)|.
inline constexpr uint32_t kSymplectic4Count = 720;
// Two-qubit Clifford group order modulo global phase.
inline constexpr uint32_t kTwoQubitCliffordCount = kSymplectic4Count * 16;

// A 1- or 2-qubit Clifford unitary, stored by its conjugation action on
// X_0, Z_0 (, X_1, Z_1).
class CliffordGate {
   public:
    // images[2q] = U X_q U^dag, images[2q+1] = U Z_q U^dag. Throws if the
    // images are not Hermitian or do not satisfy the symplectic condition.
    explicit CliffordGate(std::vector<PauliString> images);

    size_t arity() const { return arity_; }
    const PauliString &x_image(size_t q) const { return images_[2 * q]; }
    const PauliString &z_image(size_t q) const { return images_[2 * q + 1]; }
    const std::vector<PauliString> &images() const { return images_; }

    // Conjugates a Pauli on `arity` qubits.
    PauliString conjugate(const PauliString &p) const;

    // 5 bits per image (x/z bits and sign), packed; equal keys mean equal
    // gates modulo global phase.
    uint32_t canonical_key() const;

    static CliffordGate H();
    static CliffordGate S();
    static CliffordGate X();
    static CliffordGate CNOT();
    static CliffordGate CZ();
    static CliffordGate SWAP();

    // Gate built from symplectic matrix number `symplectic_index` (< 720)
    // and four sign bits for the images of X_0, Z_0, X_1, Z_1.
    static CliffordGate two_qubit(uint32_t symplectic_index, uint32_t sign_bits);

    // Compiled form used by the tableau: output bit o (x0, z0, x1, z1) is the
    // XOR of the inputs in out_mask[o]; the phase gains sum_j b_j k_j plus
    // 2 * sum_{j<l} b_j b_l c_jl.
    struct Compiled {
        std::array<uint8_t, 4> out_mask{};
        std::array<uint8_t, 4> k{};
        std::array<uint8_t, 4> pair_mask{};  // bit l of pair_mask[j] is c_jl, j < l
    };
    const Compiled &compiled() const { return compiled_; }

   private:
    size_t arity_;
    std::vector<PauliString> images_;
    Compiled compiled_;
};

// Symplectic matrix number `index` of Sp(2n, 2) for n = 2 in the canonical
// enumeration (coordinates ordered x0, z0, x1, z1). Row j is the image of
// basis vector j.
std::array<std::array<uint8_t, 4>, 4> symplectic_matrix_4(uint32_t index);

// Compiled form of CliffordGate::two_qubit without building Pauli strings.
CliffordGate::Compiled compile_two_qubit(uint32_t symplectic_index, uint32_t sign_bits);

// Uniformly random 2-qubit Clifford modulo global phase.
CliffordGate sample_two_qubit_clifford(Rng &rng);
// Same draw as sample_two_qubit_clifford, compiled form only.
CliffordGate::Compiled sample_two_qubit_compiled(Rng &rng);

}  // namespace hcft

#endif
