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

#include "hcft/tableau.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "hcft/errors.hpp"

namespace hcft {

namespace {

constexpr uint64_t kDestabRows = 0x5555555555555555ull;
constexpr uint64_t kStabRows = 0xAAAAAAAAAAAAAAAAull;

inline bool get_bit(const uint64_t *v, size_t i) { return (v[i >> 6] >> (i & 63)) & 1; }
inline void set_bit(uint64_t *v, size_t i) { v[i >> 6] |= uint64_t{1} << (i & 63); }

inline uint64_t prefix_xor(uint64_t x) {
    x ^= x << 1;
    x ^= x << 2;
    x ^= x << 4;
    x ^= x << 8;
    x ^= x << 16;
    x ^= x << 32;
    return x;
}

}  // namespace

void StabilizerTableau::grow(size_t qubits) {
    size_t new_cap = std::max({qubits, 2 * cap_, size_t{8}});
    size_t new_stride = words_for_bits(2 * new_cap);
    std::vector<uint64_t> nx(new_cap * new_stride, 0), nz(new_cap * new_stride, 0);
    for (size_t q = 0; q < n_; q++) {
        std::copy_n(xs_.data() + q * stride_, stride_, nx.data() + q * new_stride);
        std::copy_n(zs_.data() + q * stride_, stride_, nz.data() + q * new_stride);
    }
    xs_ = std::move(nx);
    zs_ = std::move(nz);
    ph0_.resize(new_stride, 0);
    ph1_.resize(new_stride, 0);
    scratch_a_.assign(new_stride, 0);
    scratch_b_.assign(new_stride, 0);
    cap_ = new_cap;
    stride_ = new_stride;
}

void StabilizerTableau::reserve(size_t qubits) {
    if (qubits > cap_) grow(qubits);
}

StabilizerTableau StabilizerTableau::product_state(size_t n, size_t reserve_qubits) {
    if (n == 0) throw InvalidSizeError("product state needs at least one qubit");
    StabilizerTableau t;
    t.grow(std::max(n, reserve_qubits));
    for (size_t q = 0; q < n; q++) {
        set_bit(t.xcol(q), 2 * q);
        set_bit(t.zcol(q), 2 * q + 1);
    }
    t.n_ = n;
    return t;
}

StabilizerTableau StabilizerTableau::bell_pairs(size_t pairs, size_t reserve_qubits) {
    if (pairs == 0) throw InvalidSizeError("Bell state needs at least one pair");
    StabilizerTableau t;
    size_t n = 2 * pairs;
    t.grow(std::max(n, reserve_qubits));
    for (size_t i = 0; i < pairs; i++) {
        size_t sys = i, env = pairs + i;
        // generator 2i = X_sys X_env with destabilizer Z_sys
        size_t rd = 2 * (2 * i), rs = rd + 1;
        set_bit(t.xcol(sys), rs);
        set_bit(t.xcol(env), rs);
        set_bit(t.zcol(sys), rd);
        // generator 2i+1 = Z_sys Z_env with destabilizer X_env
        rd = 2 * (2 * i + 1);
        rs = rd + 1;
        set_bit(t.zcol(sys), rs);
        set_bit(t.zcol(env), rs);
        set_bit(t.xcol(env), rd);
    }
    t.n_ = n;
    return t;
}

size_t StabilizerTableau::append_fresh_qubit() {
    if (n_ + 1 > cap_) grow(n_ + 1);
    size_t q = n_;
    set_bit(xcol(q), 2 * q);
    set_bit(zcol(q), 2 * q + 1);
    n_++;
    return q;
}

namespace {

template <size_t N>
inline void apply_compiled_words(const CliffordGate::Compiled &c, std::array<uint64_t *, N> cols, uint64_t *ph0,
                                 uint64_t *ph1, size_t words) {
    for (size_t w = 0; w < words; w++) {
        uint64_t in[N];
        for (size_t j = 0; j < N; j++) in[j] = cols[j][w];
        uint64_t p0 = ph0[w], p1 = ph1[w];
        uint64_t quad = 0;
        for (size_t j = 0; j < N; j++) {
            uint64_t b = in[j];
            if (c.k[j] & 1) {
                p1 ^= p0 & b;
                p0 ^= b;
            }
            if (c.k[j] & 2) p1 ^= b;
            for (size_t l = j + 1; l < N; l++) {
                if ((c.pair_mask[j] >> l) & 1) quad ^= b & in[l];
            }
        }
        ph0[w] = p0;
        ph1[w] = p1 ^ quad;
        for (size_t o = 0; o < N; o++) {
            uint64_t v = 0;
            for (size_t j = 0; j < N; j++) {
                if ((c.out_mask[o] >> j) & 1) v ^= in[j];
            }
            cols[o][w] = v;
        }
    }
}

}  // namespace

void StabilizerTableau::apply_compiled2(const CliffordGate::Compiled &c, size_t a, size_t b) {
    apply_compiled_words<4>(c, {xcol(a), zcol(a), xcol(b), zcol(b)}, ph0_.data(), ph1_.data(), row_words());
}

void StabilizerTableau::apply(const CliffordGate &gate, size_t a) {
    if (gate.arity() != 1) throw std::invalid_argument("gate arity does not match target count");
    if (a >= n_) throw std::out_of_range("gate target out of range");
    apply_compiled_words<2>(gate.compiled(), {xcol(a), zcol(a)}, ph0_.data(), ph1_.data(), row_words());
}

void StabilizerTableau::apply(const CliffordGate &gate, size_t a, size_t b) {
    if (gate.arity() != 2) throw std::invalid_argument("gate arity does not match target count");
    if (a >= n_ || b >= n_) throw std::out_of_range("gate target out of range");
    if (a == b) throw std::out_of_range("repeated gate target");
    apply_compiled2(gate.compiled(), a, b);
}

void StabilizerTableau::apply(const CliffordGate &gate, std::span<const size_t> targets) {
    if (targets.size() == 1) {
        apply(gate, targets[0]);
    } else if (targets.size() == 2) {
        apply(gate, targets[0], targets[1]);
    } else {
        throw std::invalid_argument("gate arity does not match target count");
    }
}

uint8_t StabilizerTableau::row_product(const uint64_t *rows, std::vector<uint64_t> *x_out,
                                       std::vector<uint64_t> *z_out) const {
    size_t W = row_words();
    unsigned lg = 0;
    for (size_t w = 0; w < W; w++) {
        lg += std::popcount(ph0_[w] & rows[w]) + 2 * std::popcount(ph1_[w] & rows[w]);
    }
    if (x_out) x_out->assign(words_for_bits(n_), 0);
    if (z_out) z_out->assign(words_for_bits(n_), 0);
    unsigned pairs = 0;
    for (size_t r = 0; r < n_; r++) {
        const uint64_t *X = x_column(r);
        const uint64_t *Z = z_column(r);
        unsigned carry = 0, xpar = 0;
        for (size_t w = 0; w < W; w++) {
            uint64_t zz = Z[w] & rows[w];
            uint64_t xx = X[w] & rows[w];
            if ((zz | xx) == 0) continue;
            // parity of z bits strictly before each position
            uint64_t excl = (prefix_xor(zz) << 1) ^ (carry ? ~uint64_t{0} : 0);
            pairs += std::popcount(xx & excl);
            carry ^= std::popcount(zz) & 1;
            xpar ^= std::popcount(xx) & 1;
        }
        if (x_out && xpar) set_bit(x_out->data(), r);
        if (z_out && carry) set_bit(z_out->data(), r);
    }
    return static_cast<uint8_t>((lg + 2 * (pairs & 1)) & 3);
}

int StabilizerTableau::peek_z(size_t q) const {
    if (q >= n_) throw std::out_of_range("measured qubit out of range");
    size_t W = row_words();
    const uint64_t *xa = x_column(q);
    for (size_t w = 0; w < W; w++) {
        if (xa[w] & kStabRows) return 0;
    }
    std::vector<uint64_t> S(W);
    for (size_t w = 0; w < W; w++) S[w] = (xa[w] & kDestabRows) << 1;
    return row_product(S.data(), nullptr, nullptr) == 0 ? 1 : -1;
}

MeasureResult StabilizerTableau::measure(size_t q, Basis, Rng &rng) {
    if (q >= n_) throw std::out_of_range("measured qubit out of range");
    size_t W = row_words();
    uint64_t *xa = xcol(q);
    size_t p = SIZE_MAX;
    for (size_t w = 0; w < W; w++) {
        uint64_t m = xa[w] & kStabRows;
        if (m) {
            p = 64 * w + std::countr_zero(m);
            break;
        }
    }
    if (p == SIZE_MAX) {
        uint64_t *S = scratch_a_.data();
        for (size_t w = 0; w < W; w++) S[w] = (xa[w] & kDestabRows) << 1;
        int outcome = row_product(S, nullptr, nullptr) == 0 ? 1 : -1;
        return {outcome, true};
    }

    size_t wp = p >> 6, bp = p & 63;
    uint64_t bitp = uint64_t{1} << bp, bitd = bitp >> 1;
    uint64_t *M = scratch_a_.data();
    uint64_t *par = scratch_b_.data();
    std::copy_n(xa, W, M);
    M[wp] &= ~(bitp | bitd);
    std::fill_n(par, W, 0);
    for (size_t r = 0; r < n_; r++) {
        if (xcol(r)[wp] & bitp) {
            const uint64_t *Z = zcol(r);
            for (size_t w = 0; w < W; w++) par[w] ^= Z[w];
        }
    }
    // row_i <- row_i * row_p for every row i in M
    unsigned kp = ((ph0_[wp] >> bp) & 1) | (((ph1_[wp] >> bp) & 1) << 1);
    for (size_t w = 0; w < W; w++) {
        uint64_t m = M[w];
        if (!m) continue;
        if (kp & 1) {
            ph1_[w] ^= ph0_[w] & m;
            ph0_[w] ^= m;
        }
        if (kp & 2) ph1_[w] ^= m;
        ph1_[w] ^= par[w] & m;
    }
    for (size_t r = 0; r < n_; r++) {
        uint64_t *X = xcol(r);
        uint64_t *Z = zcol(r);
        if (X[wp] & bitp) {
            for (size_t w = 0; w < W; w++) X[w] ^= M[w];
        }
        if (Z[wp] & bitp) {
            for (size_t w = 0; w < W; w++) Z[w] ^= M[w];
        }
    }
    // destabilizer partner takes the old row p; row p becomes +-Z_q
    auto move_down = [&](uint64_t &word) { word = (word & ~(bitd | bitp)) | ((word & bitp) >> 1); };
    for (size_t r = 0; r < n_; r++) {
        move_down(xcol(r)[wp]);
        move_down(zcol(r)[wp]);
    }
    move_down(ph0_[wp]);
    move_down(ph1_[wp]);
    int outcome = coin_flip(rng) ? -1 : 1;
    zcol(q)[wp] |= bitp;
    if (outcome < 0) ph1_[wp] |= bitp;
    return {outcome, false};
}

PauliString StabilizerTableau::row(size_t r) const {
    PauliString p(n_);
    for (size_t q = 0; q < n_; q++) {
        bool x = get_bit(x_column(q), r), z = get_bit(z_column(q), r);
        if (x || z) p.set(q, x, z);
    }
    p.set_log_i(static_cast<uint8_t>(get_bit(ph0_.data(), r) + 2 * get_bit(ph1_.data(), r)));
    return p;
}

PauliString StabilizerTableau::stabilizer(size_t i) const {
    if (i >= n_) throw std::out_of_range("generator index out of range");
    return row(2 * i + 1);
}

PauliString StabilizerTableau::destabilizer(size_t i) const {
    if (i >= n_) throw std::out_of_range("generator index out of range");
    return row(2 * i);
}

int StabilizerTableau::expectation(const PauliString &pauli) const {
    if (pauli.num_qubits() != n_) throw std::invalid_argument("Pauli width does not match state");
    size_t W = row_words();
    std::vector<uint64_t> acc(W, 0);
    for (size_t q = 0; q < n_; q++) {
        if (pauli.z(q)) {
            const uint64_t *X = x_column(q);
            for (size_t w = 0; w < W; w++) acc[w] ^= X[w];
        }
        if (pauli.x(q)) {
            const uint64_t *Z = z_column(q);
            for (size_t w = 0; w < W; w++) acc[w] ^= Z[w];
        }
    }
    for (size_t w = 0; w < W; w++) {
        if (acc[w] & kStabRows) return 0;
    }
    for (size_t w = 0; w < W; w++) acc[w] = (acc[w] & kDestabRows) << 1;
    std::vector<uint64_t> xb, zb;
    uint8_t lg = row_product(acc.data(), &xb, &zb);
    if (xb != pauli.x_words() || zb != pauli.z_words()) {
        throw std::logic_error("tableau inconsistent: commuting Pauli outside stabilizer group");
    }
    unsigned d = (pauli.log_i() + 4 - lg) & 3;
    if (d & 1) throw std::logic_error("expectation of a non-Hermitian Pauli");
    return d == 0 ? 1 : -1;
}

bool StabilizerTableau::is_valid() const {
    std::vector<PauliString> stabs, destabs;
    for (size_t i = 0; i < n_; i++) {
        stabs.push_back(stabilizer(i));
        destabs.push_back(destabilizer(i));
        if (!stabs.back().is_hermitian() || !destabs.back().is_hermitian()) return false;
    }
    for (size_t i = 0; i < n_; i++) {
        for (size_t j = 0; j < n_; j++) {
            if (i < j && !stabs[i].commutes(stabs[j])) return false;
            if (i < j && !destabs[i].commutes(destabs[j])) return false;
            if (destabs[i].commutes(stabs[j]) == (i == j)) return false;
        }
    }
    // GF(2) rank of the stabilizer check matrix
    size_t W = words_for_bits(n_);
    std::vector<std::vector<uint64_t>> rows;
    for (const auto &s : stabs) {
        std::vector<uint64_t> v(s.x_words());
        v.insert(v.end(), s.z_words().begin(), s.z_words().end());
        rows.push_back(std::move(v));
    }
    size_t rank = 0;
    for (size_t col = 0; col < 2 * n_ && rank < n_; col++) {
        size_t w = (col < n_) ? (col >> 6) : W + ((col - n_) >> 6);
        uint64_t bit = uint64_t{1} << ((col < n_ ? col : col - n_) & 63);
        size_t piv = rank;
        while (piv < n_ && !(rows[piv][w] & bit)) piv++;
        if (piv == n_) continue;
        std::swap(rows[rank], rows[piv]);
        for (size_t r = 0; r < n_; r++) {
            if (r != rank && (rows[r][w] & bit)) {
                for (size_t k = 0; k < rows[r].size(); k++) rows[r][k] ^= rows[rank][k];
            }
        }
        rank++;
    }
    return rank == n_;
}

StabilizerTableau new_product_state(size_t n) { return StabilizerTableau::product_state(n); }
StabilizerTableau new_bell_pairs(size_t pairs) { return StabilizerTableau::bell_pairs(pairs); }

void apply_gate(StabilizerTableau &state, const CliffordGate &gate, std::span<const size_t> targets) {
    state.apply(gate, targets);
}

int measure_pauli(StabilizerTableau &state, size_t site, Basis basis, Rng &rng) {
    return state.measure(site, basis, rng).outcome;
}

size_t append_fresh_qubit(StabilizerTableau &state) { return state.append_fresh_qubit(); }

}  // namespace hcft
