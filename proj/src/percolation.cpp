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

#include "hcft/percolation.hpp"

#include <deque>
#include <limits>

#include "hcft/errors.hpp"
#include "hcft/rng.hpp"

namespace hcft {

namespace {

// Dinic max-flow on a graph built once; undirected unit links are a pair of
// arcs that serve as each other's residual.
class FlowNetwork {
   public:
    explicit FlowNetwork(size_t n) : head_(n, -1) {}

    void add_undirected(size_t u, size_t v, int32_t cap) {
        add_arc(u, v, cap);
        add_arc(v, u, cap);
    }
    void add_directed(size_t u, size_t v, int32_t cap) {
        add_arc(u, v, cap);
        add_arc(v, u, 0);
    }

    int64_t max_flow(size_t s, size_t t) {
        int64_t flow = 0;
        level_.assign(head_.size(), -1);
        iter_.resize(head_.size());
        while (bfs(s, t)) {
            for (size_t v = 0; v < head_.size(); v++) iter_[v] = head_[v];
            while (int32_t f = augment(s, t)) flow += f;
        }
        return flow;
    }

   private:
    struct Arc {
        uint32_t to;
        int32_t next;
        int32_t cap;
    };

    void add_arc(size_t u, size_t v, int32_t cap) {
        arcs_.push_back({static_cast<uint32_t>(v), head_[u], cap});
        head_[u] = static_cast<int32_t>(arcs_.size() - 1);
    }

    bool bfs(size_t s, size_t t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::deque<uint32_t> q{static_cast<uint32_t>(s)};
        level_[s] = 0;
        while (!q.empty()) {
            uint32_t u = q.front();
            q.pop_front();
            for (int32_t e = head_[u]; e >= 0; e = arcs_[e].next) {
                if (arcs_[e].cap > 0 && level_[arcs_[e].to] < 0) {
                    level_[arcs_[e].to] = level_[u] + 1;
                    q.push_back(arcs_[e].to);
                }
            }
        }
        return level_[t] >= 0;
    }

    // One augmenting path in the level graph, iteratively.
    int32_t augment(size_t s, size_t t) {
        path_.clear();
        size_t u = s;
        while (true) {
            if (u == t) {
                int32_t f = std::numeric_limits<int32_t>::max();
                for (int32_t e : path_) f = std::min(f, arcs_[e].cap);
                for (int32_t e : path_) {
                    arcs_[e].cap -= f;
                    arcs_[e ^ 1].cap += f;
                }
                return f;
            }
            int32_t &e = iter_[u];
            while (e >= 0 && !(arcs_[e].cap > 0 && level_[arcs_[e].to] == level_[u] + 1)) e = arcs_[e].next;
            if (e >= 0) {
                path_.push_back(e);
                u = arcs_[e].to;
            } else {
                if (path_.empty()) return 0;
                level_[u] = -1;  // dead end
                int32_t back = path_.back();
                path_.pop_back();
                u = arcs_[back ^ 1].to;
                iter_[u] = arcs_[iter_[u]].next;
            }
        }
    }

    std::vector<int32_t> head_;
    std::vector<Arc> arcs_;
    std::vector<int32_t> level_;
    std::vector<int32_t> iter_;
    std::vector<int32_t> path_;
};

// 0-1 BFS over an implicit graph.
template <class Neighbors>
std::vector<int64_t> zero_one_bfs(size_t n, const std::vector<size_t> &sources, Neighbors &&neighbors) {
    constexpr int64_t kInf = std::numeric_limits<int64_t>::max();
    std::vector<int64_t> dist(n, kInf);
    std::deque<size_t> q;
    for (size_t s : sources) {
        dist[s] = 0;
        q.push_back(s);
    }
    while (!q.empty()) {
        size_t u = q.front();
        q.pop_front();
        neighbors(u, [&](size_t v, int w) {
            if (dist[u] + w < dist[v]) {
                dist[v] = dist[u] + w;
                if (w == 0) {
                    q.push_front(v);
                } else {
                    q.push_back(v);
                }
            }
        });
    }
    return dist;
}

}  // namespace

std::vector<std::pair<size_t, size_t>> brickwork_pairs(size_t L, int64_t t, Wrap wrap) {
    std::vector<std::pair<size_t, size_t>> out;
    size_t start = (t % 2 == 1) ? 0 : 1;
    for (size_t j = start; j + 1 < L; j += 2) out.emplace_back(j, j + 1);
    if (start == 1 && wrap == Wrap::periodic && L >= 2 && L % 2 == 0) out.emplace_back(L - 1, 0);
    return out;
}

PercolationInstance::PercolationInstance(size_t L, int64_t T, double p, Coloring coloring, Wrap wrap)
    : L_(L), T_(T), p_(p), coloring_(coloring), wrap_(wrap), vertical_(L * static_cast<size_t>(T + 1), 1) {}

bool PercolationInstance::horizontal(size_t j, int64_t s) const {
    if (s < 1 || s > T_) return false;
    if (s % 2 == 1) return j % 2 == 0 && j + 1 < L_;
    if (j % 2 == 0) return false;
    return j + 1 < L_ || wrap_ == Wrap::periodic;
}

PercolationInstance PercolationInstance::truncated(int64_t depth) const {
    if (depth < 0 || depth > T_) throw GeometryError("truncation depth outside [0, T]");
    PercolationInstance out(L_, depth, p_, coloring_, wrap_);
    std::copy(vertical_.begin(), vertical_.begin() + static_cast<std::ptrdiff_t>(out.vertical_.size()),
              out.vertical_.begin());
    return out;
}

PercolationInstance PercolationInstance::with_coloring(Coloring c) const {
    PercolationInstance out = *this;
    out.coloring_ = c;
    return out;
}

size_t PercolationInstance::intact_vertical_count() const {
    size_t n = 0;
    for (uint8_t v : vertical_) n += v;
    return n;
}

PercolationInstance build_instance(size_t L, int64_t T, double p, Coloring coloring, Wrap wrap, uint64_t seed) {
    if (L == 0 || L % 2 != 0) throw GeometryError("brickwork lattice needs an even, nonzero width");
    if (T < 0) throw GeometryError("depth must be nonnegative");
    PercolationInstance inst(L, T, p, coloring, wrap);
    Rng rng(seed);
    for (int64_t s = 1; s <= T + 1; s++) {
        for (size_t j = 0; j < L; j++) inst.set_vertical(j, s, !(uniform01(rng) < p));
    }
    return inst;
}

CutResult min_cut(const PercolationInstance &inst, size_t split) {
    const size_t L = inst.L();
    const int64_t S = inst.num_slices();
    const size_t n = L * static_cast<size_t>(S);
    const size_t src = n, snk = n + 1;
    auto node = [&](size_t j, int64_t s) { return static_cast<size_t>(s) * L + j; };

    FlowNetwork g(n + 2);
    for (int64_t s = 1; s < S; s++) {
        for (size_t j = 0; j < L; j++) {
            if (inst.vertical_intact(j, s)) g.add_undirected(node(j, s - 1), node(j, s), 1);
        }
    }
    for (int64_t s = 1; s <= inst.T(); s++) {
        for (size_t j = 0; j < L; j++) {
            if (inst.horizontal(j, s)) g.add_undirected(node(j, s), node((j + 1) % L, s), 1);
        }
    }
    constexpr int32_t kInf = 1 << 28;
    const int64_t top = S - 1;
    if (inst.coloring() == Coloring::top_bipartition) {
        if (split == 0 || split >= L) return {0};
        for (size_t j = 0; j < L; j++) {
            if (j < split) {
                g.add_directed(src, node(j, top), kInf);
            } else {
                g.add_directed(node(j, top), snk, kInf);
            }
        }
    } else {
        for (size_t j = 0; j < L; j++) {
            g.add_directed(src, node(j, top), kInf);
            g.add_directed(node(j, 0), snk, kInf);
        }
    }
    return {g.max_flow(src, snk)};
}

namespace {

// Dual cells (j, r): between columns j and j+1 and slices r-1 and r, for
// j in [0, L-2] and r in [1, T+1]. Extra nodes: left, right and bottom
// outer faces.
struct DualOpen {
    const PercolationInstance &inst;
    size_t W;   // cells per row
    int64_t R;  // rows
    size_t left, right, bottom;

    explicit DualOpen(const PercolationInstance &i)
        : inst(i), W(i.L() - 1), R(i.T() + 1), left(W * R), right(W * R + 1), bottom(W * R + 2) {}

    size_t cell(size_t j, int64_t r) const { return static_cast<size_t>(r - 1) * W + j; }
    size_t size() const { return W * static_cast<size_t>(R) + 3; }

    // bottom_open: whether the bottom outer face is traversable
    template <class F>
    void neighbors(size_t u, bool bottom_open, F &&visit) const {
        const size_t L = inst.L();
        if (u == left || u == right) {
            size_t col = (u == left) ? 0 : L - 1;
            size_t cj = (u == left) ? 0 : W - 1;
            for (int64_t r = 1; r <= R; r++) visit(cell(cj, r), inst.vertical_intact(col, r) ? 1 : 0);
            return;
        }
        if (u == bottom) {
            if (!bottom_open) return;
            for (size_t j = 0; j < W; j++) visit(cell(j, 1), 0);
            return;
        }
        size_t j = u % W;
        int64_t r = static_cast<int64_t>(u / W) + 1;
        // across the vertical link on column j (left side) and j+1 (right side)
        visit(j == 0 ? left : cell(j - 1, r), inst.vertical_intact(j, r) ? 1 : 0);
        visit(j + 1 == L - 1 ? right : cell(j + 1, r), inst.vertical_intact(j + 1, r) ? 1 : 0);
        // across the horizontal slot at slice r (above) and r-1 (below)
        if (r < R) visit(cell(j, r + 1), inst.horizontal(j, r) ? 1 : 0);
        if (r > 1) {
            visit(cell(j, r - 1), inst.horizontal(j, r - 1) ? 1 : 0);
        } else if (bottom_open) {
            visit(bottom, 0);
        }
    }
};

}  // namespace

std::vector<int64_t> top_bipartition_profile(const PercolationInstance &inst) {
    if (inst.wrap() != Wrap::open) throw GeometryError("dual shortest path needs an open chain");
    const size_t L = inst.L();
    std::vector<int64_t> out(L + 1, 0);
    if (L < 2) return out;
    DualOpen d(inst);
    auto dist = zero_one_bfs(d.size(), {d.left, d.right, d.bottom},
                             [&](size_t u, auto &&visit) { d.neighbors(u, true, visit); });
    for (size_t k = 1; k < L; k++) out[k] = dist[d.cell(k - 1, d.R)];
    return out;
}

int64_t top_vs_bottom_dual(const PercolationInstance &inst) {
    if (inst.wrap() != Wrap::open) throw GeometryError("dual shortest path needs an open chain");
    DualOpen d(inst);
    auto dist = zero_one_bfs(d.size(), {d.left}, [&](size_t u, auto &&visit) { d.neighbors(u, false, visit); });
    return dist[d.right];
}

}  // namespace hcft
