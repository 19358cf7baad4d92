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

#ifndef HCFT_RNG_HPP
#define HCFT_RNG_HPP

#include <cstdint>
#include <random>

namespace hcft {

// mt19937_64 output is fixed by the standard, so streams agree across hosts.
using Rng = std::mt19937_64;

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Counter-mode split: stream i of a master seed.
inline uint64_t split_seed(uint64_t master_seed, uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index ^ 0x6A09E667F3BCC909ull));
}

inline Rng make_stream(uint64_t master_seed, uint64_t index) {
    return Rng(split_seed(master_seed, index));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), n > 0 (Lemire's nearly-divisionless method).
inline uint64_t uniform_below(Rng &rng, uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
    uint64_t low = static_cast<uint64_t>(m);
    if (low < n) {
        uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(rng()) * n;
            low = static_cast<uint64_t>(m);
        }
    }
    return static_cast<uint64_t>(m >> 64);
}

inline bool coin_flip(Rng &rng) {
    return (rng() >> 63) != 0;
}

}  // namespace hcft

#endif
