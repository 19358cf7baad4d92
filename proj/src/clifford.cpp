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

#include "hcft/clifford.hpp"

#include <stdexcept>

namespace hcft {

CliffordGate::CliffordGate(std::vector<PauliString> images) : arity_(images.size() / 2), images_(std::move(images)) {
    if (arity_ < 1 || arity_ > 2 || images_.size() != 2 * arity_) {
        throw std::invalid_argument("Clifford gate arity must be 1 or 2");
    }
    for (const auto &im : images_) {
        if (im.num_qubits() != arity_) {
            throw std::invalid_argument("Clifford image has wrong width");
        }
        if (!im.is_hermitian()) {
            throw std::invalid_argument("Clifford image is not Hermitian");
        }
    }
    // X_q and Z_q anticommute; every other pair commutes.
    for (size_t j = 0; j < images_.size(); j++) {
        for (size_t l = j + 1; l < images_.size(); l++) {
            bool expect_anti = (j / 2 == l / 2);
            if (images_[j].commutes(images_[l]) == expect_anti) {
                throw std::invalid_argument("Clifford images violate the symplectic condition");
            }
        }
    }
    size_t n_in = images_.size();
    for (size_t j = 0; j < n_in; j++) {
        const PauliString &im = images_[j];
        for (size_t q = 0; q < arity_; q++) {
            if (im.x(q)) compiled_.out_mask[2 * q] |= static_cast<uint8_t>(1u << j);
            if (im.z(q)) compiled_.out_mask[2 * q + 1] |= static_cast<uint8_t>(1u << j);
        }
        compiled_.k[j] = im.log_i();
        for (size_t l = j + 1; l < n_in; l++) {
            unsigned c = 0;
            for (size_t q = 0; q < arity_; q++) {
                c ^= im.z(q) & images_[l].x(q);
            }
            if (c) compiled_.pair_mask[j] |= static_cast<uint8_t>(1u << l);
        }
    }
}

PauliString CliffordGate::conjugate(const PauliString &p) const {
    if (p.num_qubits() != arity_) {
        throw std::invalid_argument("Pauli width does not match gate arity");
    }
    PauliString out(arity_);
    out.set_log_i(p.log_i());
    for (size_t q = 0; q < arity_; q++) {
        if (p.x(q)) out *= images_[2 * q];
        if (p.z(q)) out *= images_[2 * q + 1];
    }
    return out;
}

uint32_t CliffordGate::canonical_key() const {
    uint32_t key = 0;
    for (const auto &im : images_) {
        for (size_t q = 0; q < arity_; q++) {
            key = (key << 2) | (im.x(q) ? 1u : 0u) | (im.z(q) ? 2u : 0u);
        }
        key = (key << 1) | (im.sign() < 0 ? 1u : 0u);
    }
    return key;
}

static std::vector<PauliString> parse_images(std::initializer_list<const char *> texts) {
    std::vector<PauliString> out;
    for (const char *t : texts) out.push_back(PauliString::from_text(t));
    return out;
}

CliffordGate CliffordGate::H() { return CliffordGate(parse_images({"+Z", "+X"})); }
CliffordGate CliffordGate::S() { return CliffordGate(parse_images({"+Y", "+Z"})); }
CliffordGate CliffordGate::X() { return CliffordGate(parse_images({"+X", "-Z"})); }
CliffordGate CliffordGate::CNOT() { return CliffordGate(parse_images({"+XX", "+Z_", "+_X", "+ZZ"})); }
CliffordGate CliffordGate::CZ() { return CliffordGate(parse_images({"+XZ", "+Z_", "+ZX", "+_Z"})); }
CliffordGate CliffordGate::SWAP() { return CliffordGate(parse_images({"+_X", "+_Z", "+X_", "+Z_"})); }

// Canonical enumeration of Sp(2n, 2), n <= 2, following Koenig and Smolin,
// "How to efficiently select an arbitrary Clifford group element".
namespace {

struct Vec {
    std::array<uint8_t, 4> v{};
    size_t nn = 4;
    uint8_t &operator[](size_t i) { return v[i]; }
    uint8_t operator[](size_t i) const { return v[i]; }
    bool operator==(const Vec &o) const { return v == o.v; }
};

Vec zeros(size_t nn) {
    Vec out;
    out.nn = nn;
    return out;
}

unsigned inner(const Vec &a, const Vec &b) {
    unsigned t = 0;
    for (size_t i = 0; i < a.nn / 2; i++) {
        t += a[2 * i] * b[2 * i + 1] + b[2 * i] * a[2 * i + 1];
    }
    return t & 1;
}

Vec add(const Vec &a, const Vec &b) {
    Vec out = a;
    for (size_t i = 0; i < a.nn; i++) out[i] ^= b[i];
    return out;
}

Vec transvection(const Vec &k, const Vec &v) {
    return inner(k, v) ? add(v, k) : v;
}

// Finds h1, h2 with y = Z_h1 Z_h2 x.
std::pair<Vec, Vec> find_transvection(const Vec &x, const Vec &y) {
    size_t nn = x.nn;
    if (x == y) return {zeros(nn), zeros(nn)};
    if (inner(x, y)) return {add(x, y), zeros(nn)};
    Vec z = zeros(nn);
    for (size_t i = 0; i < nn / 2; i++) {
        size_t ii = 2 * i;
        if ((x[ii] | x[ii + 1]) && (y[ii] | y[ii + 1])) {
            z[ii] = x[ii] ^ y[ii];
            z[ii + 1] = x[ii + 1] ^ y[ii + 1];
            if (!(z[ii] | z[ii + 1])) {
                z[ii + 1] = 1;
                if (x[ii] != x[ii + 1]) z[ii] = 1;
            }
            return {add(x, z), add(y, z)};
        }
    }
    for (size_t i = 0; i < nn / 2; i++) {
        size_t ii = 2 * i;
        if ((x[ii] | x[ii + 1]) && !(y[ii] | y[ii + 1])) {
            if (x[ii] == x[ii + 1]) {
                z[ii + 1] = 1;
            } else {
                z[ii + 1] = x[ii];
                z[ii] = x[ii + 1];
            }
            break;
        }
    }
    for (size_t i = 0; i < nn / 2; i++) {
        size_t ii = 2 * i;
        if (!(x[ii] | x[ii + 1]) && (y[ii] | y[ii + 1])) {
            if (y[ii] == y[ii + 1]) {
                z[ii + 1] = 1;
            } else {
                z[ii + 1] = y[ii];
                z[ii] = y[ii + 1];
            }
            break;
        }
    }
    return {add(x, z), add(y, z)};
}

Vec int_to_bits(uint64_t i, size_t n) {
    Vec out = zeros(n);
    for (size_t j = 0; j < n; j++) out[j] = (i >> j) & 1;
    return out;
}

std::array<Vec, 4> symplectic(uint64_t i, size_t n) {
    size_t nn = 2 * n;
    uint64_t s = (uint64_t{1} << nn) - 1;
    uint64_t k = (i % s) + 1;
    i /= s;
    Vec f1 = int_to_bits(k, nn);
    Vec e1 = zeros(nn);
    e1[0] = 1;
    auto [t0, t1] = find_transvection(e1, f1);
    Vec bits = int_to_bits(i % (uint64_t{1} << (nn - 1)), nn - 1);
    Vec eprime = e1;
    for (size_t j = 2; j < nn; j++) eprime[j] = bits[j - 1];
    Vec h0 = transvection(t1, transvection(t0, eprime));
    if (bits[0] == 1) f1 = zeros(nn);
    std::array<Vec, 4> g;
    for (auto &row : g) row = zeros(nn);
    g[0][0] = 1;
    g[1][1] = 1;
    if (n != 1) {
        auto sub = symplectic(i >> (nn - 1), n - 1);
        for (size_t r = 0; r < 2; r++) {
            for (size_t c = 0; c < 2; c++) g[r + 2][c + 2] = sub[r][c];
        }
    }
    for (size_t j = 0; j < nn; j++) {
        g[j] = transvection(t0, g[j]);
        g[j] = transvection(t1, g[j]);
        g[j] = transvection(h0, g[j]);
        g[j] = transvection(f1, g[j]);
    }
    return g;
}

}  // namespace

std::array<std::array<uint8_t, 4>, 4> symplectic_matrix_4(uint32_t index) {
    if (index >= kSymplectic4Count) {
        throw std::out_of_range("symplectic index out of range");
    }
    auto g = symplectic(index, 2);
    std::array<std::array<uint8_t, 4>, 4> out{};
    for (size_t r = 0; r < 4; r++) {
        for (size_t c = 0; c < 4; c++) out[r][c] = g[r][c];
    }
    return out;
}

CliffordGate CliffordGate::two_qubit(uint32_t symplectic_index, uint32_t sign_bits) {
    auto g = symplectic_matrix_4(symplectic_index);
    std::vector<PauliString> images;
    images.reserve(4);
    for (size_t j = 0; j < 4; j++) {
        PauliString p(2);
        p.set(0, g[j][0], g[j][1]);
        p.set(1, g[j][2], g[j][3]);
        p.set_sign(((sign_bits >> j) & 1) ? -1 : 1);
        images.push_back(std::move(p));
    }
    return CliffordGate(std::move(images));
}

CliffordGate::Compiled compile_two_qubit(uint32_t symplectic_index, uint32_t sign_bits) {
    auto g = symplectic_matrix_4(symplectic_index);
    CliffordGate::Compiled c;
    for (size_t j = 0; j < 4; j++) {
        for (size_t o = 0; o < 4; o++) {
            if (g[j][o]) c.out_mask[o] |= static_cast<uint8_t>(1u << j);
        }
        unsigned y = (g[j][0] & g[j][1]) + (g[j][2] & g[j][3]);
        c.k[j] = static_cast<uint8_t>((y + 2 * ((sign_bits >> j) & 1)) & 3);
        for (size_t l = j + 1; l < 4; l++) {
            unsigned cjl = (g[j][1] & g[l][0]) ^ (g[j][3] & g[l][2]);
            if (cjl) c.pair_mask[j] |= static_cast<uint8_t>(1u << l);
        }
    }
    return c;
}

CliffordGate::Compiled sample_two_qubit_compiled(Rng &rng) {
    uint64_t r = uniform_below(rng, kTwoQubitCliffordCount);
    return compile_two_qubit(static_cast<uint32_t>(r >> 4), static_cast<uint32_t>(r & 15));
}

CliffordGate sample_two_qubit_clifford(Rng &rng) {
    uint64_t r = uniform_below(rng, kTwoQubitCliffordCount);
    return CliffordGate::two_qubit(static_cast<uint32_t>(r >> 4), static_cast<uint32_t>(r & 15));
}

}  // namespace hcft
