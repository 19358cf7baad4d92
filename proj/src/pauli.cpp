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

#include "hcft/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace hcft {

PauliString::PauliString(size_t n) : n_(n), xs_(words_for_bits(n), 0), zs_(words_for_bits(n), 0) {}

PauliString PauliString::from_text(std::string_view text) {
    int s = 1;
    if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
        s = text[0] == '-' ? -1 : 1;
        text.remove_prefix(1);
    }
    PauliString p(text.size());
    for (size_t q = 0; q < text.size(); q++) {
        switch (text[q]) {
            case 'I':
            case '_':
                break;
            case 'X':
                p.set(q, true, false);
                break;
            case 'Y':
                p.set(q, true, true);
                break;
            case 'Z':
                p.set(q, false, true);
                break;
            default:
                throw std::invalid_argument("bad Pauli character '" + std::string(1, text[q]) + "'");
        }
    }
    p.set_sign(s);
    return p;
}

void PauliString::set(size_t q, bool x, bool z) {
    if (q >= n_) {
        throw std::out_of_range("qubit index out of range");
    }
    // Keep the Hermitian sign when a Y appears or disappears.
    int s = is_hermitian() ? sign() : 0;
    uint64_t m = uint64_t{1} << (q & 63);
    xs_[q >> 6] = x ? (xs_[q >> 6] | m) : (xs_[q >> 6] & ~m);
    zs_[q >> 6] = z ? (zs_[q >> 6] | m) : (zs_[q >> 6] & ~m);
    if (s != 0) {
        set_sign(s);
    }
}

static size_t y_count(const std::vector<uint64_t> &xs, const std::vector<uint64_t> &zs) {
    size_t c = 0;
    for (size_t w = 0; w < xs.size(); w++) {
        c += std::popcount(xs[w] & zs[w]);
    }
    return c;
}

bool PauliString::is_hermitian() const {
    return ((log_i_ + 4 - y_count(xs_, zs_) % 4) & 1) == 0;
}

int PauliString::sign() const {
    unsigned d = (log_i_ + 4 - y_count(xs_, zs_) % 4) & 3;
    if (d & 1) {
        throw std::logic_error("Pauli string is not Hermitian");
    }
    return d == 0 ? 1 : -1;
}

void PauliString::set_sign(int s) {
    log_i_ = static_cast<uint8_t>((y_count(xs_, zs_) + (s < 0 ? 2 : 0)) & 3);
}

bool PauliString::commutes(const PauliString &other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("Pauli strings differ in length");
    }
    uint64_t acc = 0;
    for (size_t w = 0; w < xs_.size(); w++) {
        acc ^= (xs_[w] & other.zs_[w]) ^ (zs_[w] & other.xs_[w]);
    }
    return (std::popcount(acc) & 1) == 0;
}

size_t PauliString::weight() const {
    size_t c = 0;
    for (size_t w = 0; w < xs_.size(); w++) {
        c += std::popcount(xs_[w] | zs_[w]);
    }
    return c;
}

PauliString &PauliString::operator*=(const PauliString &rhs) {
    if (rhs.n_ != n_) {
        throw std::invalid_argument("Pauli strings differ in length");
    }
    // (i^a X^x Z^z)(i^b X^u Z^v) = i^(a+b) (-1)^(z.u) X^(x+u) Z^(z+v)
    size_t swaps = 0;
    for (size_t w = 0; w < xs_.size(); w++) {
        swaps += std::popcount(zs_[w] & rhs.xs_[w]);
        xs_[w] ^= rhs.xs_[w];
        zs_[w] ^= rhs.zs_[w];
    }
    log_i_ = static_cast<uint8_t>((log_i_ + rhs.log_i_ + 2 * (swaps & 1)) & 3);
    return *this;
}

std::string PauliString::str() const {
    std::string out;
    unsigned d = (log_i_ + 4 - y_count(xs_, zs_) % 4) & 3;
    static const char *prefix[4] = {"+", "+i", "-", "-i"};
    out += prefix[d];
    for (size_t q = 0; q < n_; q++) {
        out += "_XZY"[x(q) + 2 * z(q)];
    }
    return out;
}

}  // namespace hcft
