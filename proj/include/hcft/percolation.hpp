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

// Minimal cuts on the brickwork lattice of a hybrid circuit.
//
// Nodes sit at (column j, slice s) with s = 0..T+1. Slice 0 is the initial
// time and slice T+1 the final time. Gate layer t (1..T) adds horizontal
// links at slice t on the brickwork pairs of that layer. Vertical links join
// slices s-1 and s for s = 1..T+1 and are broken independently with
// probability p. The lattice is invariant under s -> T+1-s when T is odd.

#ifndef HCFT_PERCOLATION_HPP
#define HCFT_PERCOLATION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "hcft/entropy.hpp"

namespace hcft {

enum class Coloring { top_bipartition, top_vs_bottom };
enum class Wrap { open, periodic };

// Gate pairs (j, j+1 mod L) of brickwork layer t >= 1. Odd layers start at
// site 0; even layers start at site 1, and wrap the last pair when periodic.
std::vector<std::pair<size_t, size_t>> brickwork_pairs(size_t L, int64_t t, Wrap wrap);

class PercolationInstance {
   public:
    PercolationInstance(size_t L, int64_t T, double p, Coloring coloring, Wrap wrap);

    size_t L() const { return L_; }
    int64_t T() const { return T_; }
    double p() const { return p_; }
    Coloring coloring() const { return coloring_; }
    Wrap wrap() const { return wrap_; }
    int64_t num_slices() const { return T_ + 2; }

    // Vertical link between (j, s-1) and (j, s), s in [1, T+1].
    bool vertical_intact(size_t j, int64_t s) const { return vertical_[(s - 1) * L_ + j] != 0; }
    void set_vertical(size_t j, int64_t s, bool intact) { vertical_[(s - 1) * L_ + j] = intact; }
    // Horizontal link between j and j+1 (mod L) at slice s.
    bool horizontal(size_t j, int64_t s) const;

    // Same lattice restricted to the first `depth` gate layers: the bottom
    // depth+1 rows of vertical links.
    PercolationInstance truncated(int64_t depth) const;
    PercolationInstance with_coloring(Coloring c) const;

    size_t intact_vertical_count() const;

   private:
    size_t L_;
    int64_t T_;
    double p_;
    Coloring coloring_;
    Wrap wrap_;
    std::vector<uint8_t> vertical_;
};

// Throws GeometryError for odd or zero L and negative T.
PercolationInstance build_instance(size_t L, int64_t T, double p, Coloring coloring, Wrap wrap, uint64_t seed);

struct CutResult {
    int64_t cost = 0;
    double nats() const { return static_cast<double>(cost) * kLn2; }
};

// Max-flow between the colored terminal sets with unit capacity on every
// intact link. For top_bipartition the top nodes j < split are the source
// side and j >= split the sink side; split is ignored for top_vs_bottom.
CutResult min_cut(const PercolationInstance &inst, size_t split = 0);

// Planar-dual shortest paths on open chains: the cost for every split
// 0..L of the top edge in one 0-1 BFS. Throws GeometryError for periodic
// instances.
std::vector<int64_t> top_bipartition_profile(const PercolationInstance &inst);
// Left-to-right dual path cost for top_vs_bottom on an open chain.
int64_t top_vs_bottom_dual(const PercolationInstance &inst);

}  // namespace hcft

#endif
