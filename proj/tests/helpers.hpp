#pragma once

#include <utility>
#include <vector>

#include "sqd/gen.hpp"
#include "sqd/graph.hpp"

namespace sqd::testing {

inline GraphHandle path_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return GraphHandle::of(SparseGraph::from_edges(n, e));
}

inline GraphHandle cycle_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
    return GraphHandle::of(SparseGraph::from_edges(n, e));
}

inline GraphHandle grid_graph(int w, int h) {
    std::vector<std::pair<int, int>> e;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (x + 1 < w) e.push_back({y * w + x, y * w + x + 1});
            if (y + 1 < h) e.push_back({y * w + x, (y + 1) * w + x});
        }
    return GraphHandle::of(SparseGraph::from_edges(w * h, e));
}

// Random tree on n vertices (parent of i drawn from 0..i-1).
inline GraphHandle random_tree(int n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i < n; ++i) e.push_back({static_cast<int>(rng() % i), i});
    return GraphHandle::of(SparseGraph::from_edges(n, e));
}

// Largest connected component of a generated instance, relabelled.
inline GraphHandle largest_component(const GraphHandle& h) {
    auto cs = components(h);
    size_t best = 0;
    for (size_t i = 1; i < cs.size(); ++i)
        if (cs[i].size() > cs[best].size()) best = i;
    return cs.size() <= 1 ? h : induced(h, cs[best]);
}

inline GraphHandle instance(GraphClass cls, int n, uint64_t seed) {
    switch (cls) {
        case GraphClass::Sparse: return largest_component(GraphHandle::of(gen_sparse(n, seed)));
        case GraphClass::UnitDisk: return largest_component(GraphHandle::of(gen_geometric(GeoKind::UnitDisk, n, seed)));
        case GraphClass::UnitSquare: return largest_component(GraphHandle::of(gen_geometric(GeoKind::UnitSquare, n, seed)));
        case GraphClass::Square: return largest_component(GraphHandle::of(gen_geometric(GeoKind::Square, n, seed)));
    }
    return {};
}

inline constexpr GraphClass kAllClasses[] = {GraphClass::Sparse, GraphClass::UnitDisk, GraphClass::UnitSquare,
                                             GraphClass::Square};

}  // namespace sqd::testing
