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

#ifndef HCFT_PAULI_HPP
#define HCFT_PAULI_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hcft {

inline size_t words_for_bits(size_t bits) {
    return (bits + 63) / 64;
}

// A Pauli operator i^k X^x Z^z on n qubits. Hermitian strings are read back
// in the usual I/X/Y/Z notation with a sign of +1 or -1.
class PauliString {
   public:
    explicit PauliString(size_t n = 0);

    // Accepts "+XY_Z", "-XIZ", "ZZ"; '_' and 'I' are identity.
    static PauliString from_text(std::string_view text);

    size_t num_qubits() const { return n_; }
    bool x(size_t q) const { return (xs_[q >> 6] >> (q & 63)) & 1; }
    bool z(size_t q) const { return (zs_[q >> 6] >> (q & 63)) & 1; }
    void set(size_t q, bool x, bool z);

    // Exponent k of the i^k prefactor in the X^x Z^z ordering.
    uint8_t log_i() const { return log_i_; }
    void set_log_i(uint8_t k) { log_i_ = k & 3; }

    bool is_hermitian() const;
    // +1 or -1; throws std::logic_error on an anti-Hermitian string.
    int sign() const;
    void set_sign(int s);

    bool commutes(const PauliString &other) const;
    size_t weight() const;

    // this <- this * rhs
    PauliString &operator*=(const PauliString &rhs);
    friend PauliString operator*(PauliString lhs, const PauliString &rhs) {
        lhs *= rhs;
        return lhs;
    }
    bool operator==(const PauliString &other) const = default;

    std::string str() const;

    const std::vector<uint64_t> &x_words() const { return xs_; }
    const std::vector<uint64_t> &z_words() const { return zs_; }

   private:
    size_t n_;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
    uint8_t log_i_ = 0;
};

}  // namespace hcft

#endif
