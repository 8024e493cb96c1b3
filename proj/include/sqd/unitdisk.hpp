#pragma once

#include <bitset>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "disk_cover.hpp"
#include "framework.hpp"
#include "graph.hpp"

namespace sqd {

using TypeSet = std::bitset<kNumTypes + 1>;  // bit T for type T in 1..36

inline TypeSet all_types() {
    TypeSet m;
    for (int t = 1; t <= kNumTypes; ++t) m.set(t);
    return m;
}

inline TypeSet types_upto(int T) {
    TypeSet m;
    for (int t = 1; t <= T && t <= kNumTypes; ++t) m.set(t);
    return m;
}

inline int vertex_type(const GraphHandle& h, int v) { return type_of(cell_of(h.geo.c[v])); }

inline constexpr int kTypedBruteCap = 20000;

// Typed ball by constrained BFS: walks of length exactly r (self-loops
// allowed) from s whose second vertex has a type in M, or that stay at s.
// Equivalently {s} u U_{v in N[s], type(v) in M} N^{r-1}[v]. Restricted to
// `ground` when given.
inline std::vector<int> typed_ball_bruteforce(const GraphHandle& h, int s, int r, const TypeSet& M,
                                              const std::vector<int>* ground = nullptr, int cap = kTypedBruteCap) {
    if (h.cls != GraphClass::UnitDisk) throw std::invalid_argument("typed balls are defined for unit-disk graphs");
    if (h.n() > cap) throw std::length_error("typed_ball_bruteforce: instance above the size cap");
    if (s < 0 || s >= h.n()) throw std::out_of_range("typed_ball_bruteforce: vertex out of range");
    std::vector<int> dist(h.n(), kUnreachable);
    std::vector<char> in(h.n(), 0);
    if (r >= 0) in[s] = 1;
    if (r >= 1) {
        std::vector<int> frontier;
        auto seed = [&](int v) {
            if (M.test(vertex_type(h, v)) && dist[v] == kUnreachable) {
                dist[v] = 0;
                frontier.push_back(v);
            }
        };
        seed(s);
        for (int v = 0; v < h.n(); ++v)
            if (h.adjacent(s, v)) seed(v);
        for (size_t i = 0; i < frontier.size(); ++i) {
            int u = frontier[i];
            if (dist[u] >= r - 1) continue;
            for (int v = 0; v < h.n(); ++v)
                if (dist[v] == kUnreachable && h.adjacent(u, v)) {
                    dist[v] = dist[u] + 1;
                    frontier.push_back(v);
                }
        }
        for (int v = 0; v < h.n(); ++v)
            if (dist[v] != kUnreachable && dist[v] <= r - 1) in[v] = 1;
    }
    std::vector<int> out;
    if (ground) {
        for (int t : *ground)
            if (in[t]) out.push_back(t);
    } else {
        for (int v = 0; v < h.n(); ++v)
            if (in[v]) out.push_back(v);
    }
    return out;
}

// Observation hook into the type loop: after type T at radius r, `check`
// receives the materialized N^r_{<=T}[s] for the (r, T, s) that `want` selects.
struct TypedProbe {
    std::function<bool(const PieceContext&, int r, int T, int s)> want;
    std::function<void(const PieceContext&, int r, int T, int s, const std::vector<int>& members)> check;
};

struct TypedGrowthStats {
    GrowthStats growth;
    long long structures = 0;    // pseudoline structures built
    long long skipped_queries = 0;  // interior vertices without an occupied type-T cell nearby
    int max_envelope = 0;
};

// Ball growth for unit disks, one type at a time:
//   N^r_{<=T}[s] = N^r_{<=T-1}[s] u U_{v in N[s], type(v) = T} N^{r-1}[v].
// Within the 5x5 block around a cell each type names at most one cell, so the
// type-T step is one pseudoline structure per (type-T cell, query cell) pair.
// Boundary vertices read their balls from BFS rows.
inline TypedGrowthStats grow_typed_balls(const GraphHandle& h, const PieceContext& c, std::shared_ptr<const StabbingPath> path,
                                         int base, const TypedProbe* probe,
                                         const std::function<bool(const BallLayer&)>& emit) {
    TypedGrowthStats st;
    int k = static_cast<int>(c.piece.size());
    std::map<CellIndex, std::vector<int>> members;  // piece-local ids per cell
    for (int i = 0; i < k; ++i) members[cell_of(h.geo.c[c.piece[i]])].push_back(i);
    std::vector<std::vector<CellIndex>> cells_of_type(kNumTypes + 1);
    for (auto& [cell, ids] : members) cells_of_type[type_of(cell)].push_back(cell);
    std::map<CellIndex, std::vector<int>> queries;  // interior vertices per cell
    for (auto& [cell, ids] : members)
        for (int i : ids)
            if (!c.on_boundary[i]) queries[cell].push_back(i);
    std::vector<int> brow(k, -1);
    for (size_t i = 0; i < c.boundary.size(); ++i) brow[c.local[c.boundary[i]]] = static_cast<int>(i);
    auto in_ground = [&](int v) { return std::binary_search(c.ground.begin(), c.ground.end(), v); };

    BallLayer cur;
    cur.r = c.r_lo - 1;
    cur.path = path;
    cur.ball.assign(k, empty_rep(*path));
    for (int r = c.r_lo; r <= c.r_hi; ++r) {
        BallLayer next;
        next.r = r;
        next.path = path;
        next.ball.assign(k, empty_rep(*path));
        for (auto& [cell, ids] : queries)
            for (int i : ids) {
                int s = c.piece[i];
                if (-c.weight[s] <= r && in_ground(s)) next.ball[i] = make_rep({s}, *path);
            }
        for (int T = 1; T <= kNumTypes; ++T) {
            std::vector<char> touched(k, 0);
            for (const CellIndex& cv : cells_of_type[T]) {
                std::vector<DiskObject> objs;
                for (int i : members[cv])
                    for (auto iv : cur.ball[i].iv) objs.push_back({i, h.geo.c[c.piece[i]], iv.lo, iv.hi});
                for (int64_t dx = -2; dx <= 2; ++dx)
                    for (int64_t dy = -2; dy <= 2; ++dy) {
                        auto it = queries.find({cv.ix + dx, cv.iy + dy});
                        if (it == queries.end()) continue;
                        for (int i : it->second) touched[i] = 1;
                        if (objs.empty()) continue;
                        UnitDiskCoverDS ds(objs, it->first, cv, base);
                        ++st.structures;
                        st.max_envelope = std::max(st.max_envelope, ds.stats().max_gen_pieces);
                        for (int i : it->second) {
                            IntervalRep u = interval_search(ds, h.geo.c[c.piece[i]], path->id);
                            if (!u.iv.empty()) next.ball[i] = union_reps(next.ball[i], u);
                        }
                        st.growth.union_queries += static_cast<long long>(it->second.size());
                    }
            }
            for (auto& [cell, ids] : queries)
                for (int i : ids)
                    if (!touched[i]) ++st.skipped_queries;
            if (probe && probe->want && probe->check)
                for (auto& [cell, ids] : queries)
                    for (int i : ids)
                        if (probe->want(c, r, T, c.piece[i])) probe->check(c, r, T, c.piece[i], materialize(next.ball[i], *path));
        }
        for (int i = 0; i < k; ++i)
            if (c.on_boundary[i]) next.ball[i] = ball_from_row(c, c.rows.rows[brow[i]], r, *path);
        for (auto& b : next.ball) st.growth.rep_intervals += static_cast<long long>(b.count());
        ++st.growth.layers;
        cur = std::move(next);
        if (!emit(cur)) break;
    }
    return st;
}

}  // namespace sqd
