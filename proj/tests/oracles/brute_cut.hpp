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

// Minimum cut by enumerating every assignment of the free nodes to the
// source or sink side. Only for lattices with at most ~20 free nodes.

#ifndef HCFT_TESTS_BRUTE_CUT_HPP
#define HCFT_TESTS_BRUTE_CUT_HPP

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "hcft/percolation.hpp"

namespace oracle {

inline int64_t brute_force_cut(const hcft::PercolationInstance &inst, size_t split) {
    const size_t L = inst.L();
    const int64_t S = inst.num_slices();
    const size_t n = L * static_cast<size_t>(S);
    auto node = [&](size_t j, int64_t s) { return static_cast<size_t>(s) * L + j; };

    std::vector<std::pair<size_t, size_t>> edges;
    for (int64_t s = 1; s < S; s++) {
        for (size_t j = 0; j < L; j++) {
            if (inst.vertical_intact(j, s)) edges.emplace_back(node(j, s - 1), node(j, s));
        }
    }
    for (int64_t s = 0; s < S; s++) {
        for (size_t j = 0; j < L; j++) {
            if (inst.horizontal(j, s)) edges.emplace_back(node(j, s), node((j + 1) % L, s));
        }
    }

    // side[v]: 0 source, 1 sink, -1 free
    std::vector<int> side(n, -1);
    const int64_t top = S - 1;
    if (inst.coloring() == hcft::Coloring::top_bipartition) {
        if (split == 0 || split >= L) return 0;
        for (size_t j = 0; j < L; j++) side[node(j, top)] = j < split ? 0 : 1;
    } else {
        for (size_t j = 0; j < L; j++) {
            side[node(j, top)] = 0;
            side[node(j, 0)] = 1;
        }
    }
    std::vector<size_t> free_nodes;
    for (size_t v = 0; v < n; v++) {
        if (side[v] < 0) free_nodes.push_back(v);
    }
    int64_t best = std::numeric_limits<int64_t>::max();
    std::vector<int> assign = side;
    for (uint64_t mask = 0; mask < (uint64_t{1} << free_nodes.size()); mask++) {
        for (size_t i = 0; i < free_nodes.size(); i++) assign[free_nodes[i]] = (mask >> i) & 1;
        int64_t cost = 0;
        for (auto [u, v] : edges) cost += assign[u] != assign[v];
        best = std::min(best, cost);
    }
    return best;
}

}  // namespace oracle

#endif
