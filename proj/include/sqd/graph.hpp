#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace sqd {

inline constexpr int kUnreachable = INT_MAX;

struct SparseGraph {
    int n = 0;
    std::vector<std::vector<int>> adj;
    int declared_vc_dim = 2;

    static SparseGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges, int d = 2) {
        SparseGraph g;
        g.n = n;
        g.declared_vc_dim = d;
        g.adj.assign(n, {});
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
            if (u == v) continue;
            g.adj[u].push_back(v);
            g.adj[v].push_back(u);
        }
        for (auto& a : g.adj) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
        return g;
    }
    size_t edge_count() const {
        size_t m = 0;
        for (auto& a : adj) m += a.size();
        return m / 2;
    }
};

struct GeometricInstance {
    GeoKind kind = GeoKind::UnitDisk;
    std::vector<Point> c;
    std::vector<double> h;  // half sides; unused for disks

    int size() const { return static_cast<int>(c.size()); }
    bool adjacent(int u, int v) const {
        if (kind == GeoKind::UnitDisk) return intersects(UnitDisk{c[u]}, UnitDisk{c[v]});
        return intersects(AxisSquare{c[u], h[u]}, AxisSquare{c[v], h[v]});
    }
    std::vector<UnitDisk> disks() const {
        std::vector<UnitDisk> out;
        for (auto p : c) out.push_back({p});
        return out;
    }
};

// Applies the documented normalizations: unit disks get the cell-line guard,
// unit squares must share one half side.
inline GeometricInstance normalize_instance(GeometricInstance g) {
    if (g.kind == GeoKind::UnitDisk) {
        for (auto& p : g.c) p = guard_grid_lines(p);
        g.h.assign(g.c.size(), 0.5);
    } else {
        if (g.h.size() != g.c.size()) throw std::invalid_argument("square instance without half sides");
        for (double x : g.h)
            if (!(x > 0)) throw std::invalid_argument("half side must be positive");
        if (g.kind == GeoKind::UnitSquare)
            for (double x : g.h)
                if (x != g.h[0]) throw std::invalid_argument("unit-square instance with unequal half sides");
    }
    for (auto p : g.c)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("non-finite coordinate");
    return g;
}

enum class GraphClass { Sparse, UnitDisk, UnitSquare, Square };

inline const char* class_name(GraphClass k) {
    switch (k) {
        case GraphClass::Sparse: return "sparse-graph";
        case GraphClass::UnitDisk: return "unit-disk";
        case GraphClass::UnitSquare: return "unit-square";
        case GraphClass::Square: return "square";
    }
    return "?";
}

struct GraphHandle {
    GraphClass cls = GraphClass::Sparse;
    SparseGraph sparse;
    GeometricInstance geo;

    static GraphHandle of(SparseGraph g) {
        GraphHandle h;
        h.cls = GraphClass::Sparse;
        h.sparse = std::move(g);
        return h;
    }
    static GraphHandle of(GeometricInstance g) {
        GraphHandle h;
        g = normalize_instance(std::move(g));
        h.cls = g.kind == GeoKind::UnitDisk ? GraphClass::UnitDisk
                : g.kind == GeoKind::UnitSquare ? GraphClass::UnitSquare
                                                : GraphClass::Square;
        h.geo = std::move(g);
        return h;
    }
    bool is_sparse() const { return cls == GraphClass::Sparse; }
    int n() const { return is_sparse() ? sparse.n : geo.size(); }
    bool adjacent(int u, int v) const {
        if (u == v) return false;
        if (is_sparse()) return std::binary_search(sparse.adj[u].begin(), sparse.adj[u].end(), v);
        return geo.adjacent(u, v);
    }
    int vc_dim() const { return is_sparse() ? sparse.declared_vc_dim : 4; }
};

// Semi-dynamic "find any live object intersecting a query object, then delete
// it" structure over a subset of geometric objects. A 2D k-d tree over centers
// with per-node live counts and the largest half side; dead subtrees and
// subtrees out of reach are skipped. Reinsertion flips the flag back.
class GeoDeleter {
public:
    GeoDeleter(const GeometricInstance& g, const std::vector<int>& ids) : g_(&g) {
        pts_ = ids;
        slot_.assign(g.size(), -1);
        if (!pts_.empty()) build(0, static_cast<int>(pts_.size()), 0, -1);
        for (int i = 0; i < static_cast<int>(pts_.size()); ++i) slot_[pts_[i]] = i;
        alive_.assign(pts_.size(), 1);
    }

    // Returns an arbitrary live object adjacent to object q (q itself excluded),
    // removing it; -1 if none.
    int take(int q) {
        if (nodes_.empty()) return -1;
        int r = find(0, q);
        if (r >= 0) erase(r);
        return r;
    }
    // Reports every live object adjacent to q without removing anything.
    template <class F>
    void report(int q, F&& f) const {
        if (!nodes_.empty()) report_rec(0, q, f);
    }
    bool alive(int v) const { return slot_[v] >= 0 && alive_[slot_[v]]; }
    void erase(int v) {
        int s = slot_[v];
        if (s < 0 || !alive_[s]) return;
        alive_[s] = 0;
        for (int nd = leaf_of_[s]; nd >= 0; nd = nodes_[nd].parent) nodes_[nd].live--;
    }
    void revive(int v) {
        int s = slot_[v];
        if (s < 0 || alive_[s]) return;
        alive_[s] = 1;
        for (int nd = leaf_of_[s]; nd >= 0; nd = nodes_[nd].parent) nodes_[nd].live++;
    }
    long long visits() const { return visits_; }

private:
    struct Node {
        double x0, x1, y0, y1, maxh;
        int lo, hi, left = -1, right = -1, parent = -1, live = 0;
    };
    const GeometricInstance* g_;
    std::vector<int> pts_, slot_, leaf_of_;
    std::vector<char> alive_;
    std::vector<Node> nodes_;
    long long visits_ = 0;

    int build(int lo, int hi, int depth, int parent) {
        int id = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        Node nd;
        nd.lo = lo;
        nd.hi = hi;
        nd.parent = parent;
        nd.live = hi - lo;
        nd.x0 = nd.y0 = INFINITY;
        nd.x1 = nd.y1 = -INFINITY;
        nd.maxh = 0;
        for (int i = lo; i < hi; ++i) {
            Point p = g_->c[pts_[i]];
            nd.x0 = std::min(nd.x0, p.x);
            nd.x1 = std::max(nd.x1, p.x);
            nd.y0 = std::min(nd.y0, p.y);
            nd.y1 = std::max(nd.y1, p.y);
            if (g_->kind != GeoKind::UnitDisk) nd.maxh = std::max(nd.maxh, g_->h[pts_[i]]);
        }
        if (hi - lo > 8) {
            int mid = (lo + hi) / 2;
            bool byx = (nd.x1 - nd.x0) >= (nd.y1 - nd.y0);
            std::nth_element(pts_.begin() + lo, pts_.begin() + mid, pts_.begin() + hi, [&](int a, int b) {
                return byx ? g_->c[a].x < g_->c[b].x : g_->c[a].y < g_->c[b].y;
            });
            nodes_[id] = nd;
            int l = build(lo, mid, depth + 1, id);
            int r = build(mid, hi, depth + 1, id);
            nodes_[id].left = l;
            nodes_[id].right = r;
        } else {
            nodes_[id] = nd;
            if (leaf_of_.size() < pts_.size()) leaf_of_.resize(pts_.size(), -1);
            for (int i = lo; i < hi; ++i) leaf_of_[i] = id;
        }
        return id;
    }

    bool reachable(const Node& nd, int q) const {
        Point p = g_->c[q];
        double dx = std::max({nd.x0 - p.x, 0.0, p.x - nd.x1});
        double dy = std::max({nd.y0 - p.y, 0.0, p.y - nd.y1});
        if (g_->kind == GeoKind::UnitDisk) return dx * dx + dy * dy <= kDiskR2;
        return std::max(dx, dy) <= (g_->h[q] + nd.maxh) * (1.0 + kRelEps);
    }

    int find(int id, int q) {
        const Node& nd = nodes_[id];
        ++visits_;
        if (nd.live == 0 || !reachable(nd, q)) return -1;
        if (nd.left < 0) {
            for (int i = nd.lo; i < nd.hi; ++i) {
                int v = pts_[i];
                if (alive_[i] && v != q && g_->adjacent(q, v)) return v;
            }
            return -1;
        }
        int r = find(nd.left, q);
        if (r >= 0) return r;
        return find(nodes_[id].right, q);
    }

    template <class F>
    void report_rec(int id, int q, F& f) const {
        const Node& nd = nodes_[id];
        if (nd.live == 0 || !reachable(nd, q)) return;
        if (nd.left < 0) {
            for (int i = nd.lo; i < nd.hi; ++i) {
                int v = pts_[i];
                if (alive_[i] && v != q && g_->adjacent(q, v)) f(v);
            }
            return;
        }
        report_rec(nd.left, q, f);
        report_rec(nd.right, q, f);
    }
};

// Sorted adjacency lists for any handle; geometric ones go through the k-d
// tree so only actual edges are touched.
inline std::vector<std::vector<int>> adjacency_lists(const GraphHandle& h) {
    if (h.is_sparse()) return h.sparse.adj;
    std::vector<int> all(h.n());
    std::iota(all.begin(), all.end(), 0);
    GeoDeleter idx(h.geo, all);
    std::vector<std::vector<int>> adj(h.n());
    for (int v = 0; v < h.n(); ++v) {
        idx.report(v, [&](int u) { adj[v].push_back(u); });
        std::sort(adj[v].begin(), adj[v].end());
    }
    return adj;
}

// Uniform neighbor exploration over a live vertex subset: every call of
// pop_neighbors reports each live neighbor of v once and removes it.
class Explorer {
public:
    Explorer(const GraphHandle& h, const std::vector<int>& subset) : h_(&h) {
        live_.assign(h.n(), 0);
        for (int v : subset) live_[v] = 1;
        if (!h.is_sparse()) del_ = std::make_unique<GeoDeleter>(h.geo, subset);
    }
    static Explorer whole(const GraphHandle& h) {
        std::vector<int> all(h.n());
        std::iota(all.begin(), all.end(), 0);
        return Explorer(h, all);
    }
    bool live(int v) const { return live_[v]; }
    void kill(int v) {
        if (!live_[v]) return;
        live_[v] = 0;
        if (del_) del_->erase(v);
    }
    void revive(int v) {
        if (live_[v]) return;
        live_[v] = 1;
        if (del_) del_->revive(v);
    }
    template <class F>
    void pop_neighbors(int v, F&& f) {
        if (h_->is_sparse()) {
            for (int u : h_->sparse.adj[v])
                if (live_[u]) {
                    live_[u] = 0;
                    f(u);
                }
            return;
        }
        for (int u; (u = del_->take(v)) >= 0;) {
            live_[u] = 0;
            f(u);
        }
    }
    long long visits() const { return del_ ? del_->visits() : 0; }

private:
    const GraphHandle* h_;
    std::vector<char> live_;
    std::unique_ptr<GeoDeleter> del_;
};

inline void check_vertex(const GraphHandle& h, int v) {
    if (v < 0 || v >= h.n()) throw std::out_of_range("vertex id out of range");
}

inline std::vector<int> bfs_sparse(const SparseGraph& g, int source) {
    if (source < 0 || source >= g.n) throw std::out_of_range("invalid source");
    std::vector<int> dist(g.n, kUnreachable), q{source};
    dist[source] = 0;
    for (size_t i = 0; i < q.size(); ++i) {
        int v = q[i];
        for (int u : g.adj[v])
            if (dist[u] == kUnreachable) {
                dist[u] = dist[v] + 1;
                q.push_back(u);
            }
    }
    return dist;
}

// Multi-source BFS restricted to a vertex subset where seed s starts at
// distance weight(s). Levels are processed in order and a seed joins when the
// sweep reaches its weight, unless it was already reached.
inline std::vector<int> weighted_bfs(const GraphHandle& h, const std::vector<int>& subset,
                                     std::vector<std::pair<int, int>> seeds, long long* visits = nullptr) {
    std::vector<int> dist(h.n(), kUnreachable);
    Explorer ex(h, subset);
    std::sort(seeds.begin(), seeds.end(), [](auto a, auto b) { return a.second < b.second; });
    size_t si = 0;
    std::vector<int> cur, nxt;
    int level = seeds.empty() ? 0 : seeds[0].second;
    while (si < seeds.size() || !cur.empty()) {
        if (cur.empty() && si < seeds.size()) level = std::max(level, seeds[si].second);
        while (si < seeds.size() && seeds[si].second <= level) {
            auto [s, w] = seeds[si++];
            if (w < 0) throw std::invalid_argument("negative seed weight");
            if (ex.live(s)) {
                ex.kill(s);
                dist[s] = level;
                cur.push_back(s);
            }
        }
        nxt.clear();
        for (int v : cur)
            ex.pop_neighbors(v, [&](int u) {
                dist[u] = level + 1;
                nxt.push_back(u);
            });
        std::swap(cur, nxt);
        ++level;
    }
    if (visits) *visits = ex.visits();
    return dist;
}

inline std::vector<int> bfs_geometric(const GraphHandle& h, int source, long long* visits = nullptr) {
    check_vertex(h, source);
    std::vector<int> all(h.n());
    std::iota(all.begin(), all.end(), 0);
    return weighted_bfs(h, all, {{source, 0}}, visits);
}

inline std::vector<int> bfs(const GraphHandle& h, int source) {
    check_vertex(h, source);
    if (h.is_sparse()) return bfs_sparse(h.sparse, source);
    return bfs_geometric(h, source);
}

// Distances over the piece only; entries outside the piece stay unreachable.
inline std::vector<int> boundary_weighted_bfs(const GraphHandle& h, const std::vector<int>& piece,
                                              const std::vector<std::pair<int, int>>& seeds) {
    std::vector<char> in(h.n(), 0);
    for (int v : piece) in[v] = 1;
    for (auto [s, w] : seeds) {
        check_vertex(h, s);
        if (!in[s]) throw std::invalid_argument("seed outside piece");
        if (w < 0) throw std::invalid_argument("negative seed weight");
    }
    return weighted_bfs(h, piece, seeds);
}

// Multi-source BFS over the whole graph where every seed starts at distance 0
// and exploration stops after `radius` levels.
inline std::vector<int> truncated_bfs(const GraphHandle& h, const std::vector<int>& sources, int radius) {
    std::vector<int> all(h.n());
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> dist(h.n(), kUnreachable);
    if (radius < 0) return dist;
    Explorer ex(h, all);
    std::vector<int> cur, nxt;
    for (int s : sources)
        if (ex.live(s)) {
            ex.kill(s);
            dist[s] = 0;
            cur.push_back(s);
        }
    for (int level = 0; level < radius && !cur.empty(); ++level) {
        nxt.clear();
        for (int v : cur)
            ex.pop_neighbors(v, [&](int u) {
                dist[u] = level + 1;
                nxt.push_back(u);
            });
        std::swap(cur, nxt);
    }
    return dist;
}

inline std::vector<std::vector<int>> components(const GraphHandle& h) {
    std::vector<std::vector<int>> out;
    Explorer ex = Explorer::whole(h);
    for (int s = 0; s < h.n(); ++s) {
        if (!ex.live(s)) continue;
        std::vector<int> comp{s};
        ex.kill(s);
        for (size_t i = 0; i < comp.size(); ++i) ex.pop_neighbors(comp[i], [&](int u) { comp.push_back(u); });
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

inline bool is_connected(const GraphHandle& h) { return h.n() <= 1 || components(h).size() == 1; }

// Induced sub-instance on the given vertices, renumbered in the given order.
inline GraphHandle induced(const GraphHandle& h, const std::vector<int>& verts) {
    if (h.is_sparse()) {
        std::vector<int> idx(h.n(), -1);
        for (int i = 0; i < static_cast<int>(verts.size()); ++i) idx[verts[i]] = i;
        std::vector<std::pair<int, int>> e;
        for (int v : verts)
            for (int u : h.sparse.adj[v])
                if (idx[u] >= 0 && v < u) e.push_back({idx[v], idx[u]});
        return GraphHandle::of(SparseGraph::from_edges(static_cast<int>(verts.size()), e, h.sparse.declared_vc_dim));
    }
    GraphHandle s;
    s.cls = h.cls;
    s.geo.kind = h.geo.kind;
    for (int v : verts) {
        s.geo.c.push_back(h.geo.c[v]);
        s.geo.h.push_back(h.geo.h[v]);
    }
    return s;
}

// ---- brute-force ground truth -------------------------------------------

inline constexpr int kDefaultBruteCap = 2000;

// Explicit O(n^2) adjacency; independent of the k-d tree code on purpose.
inline std::vector<std::vector<int>> explicit_adjacency(const GraphHandle& h) {
    if (h.is_sparse()) return h.sparse.adj;
    int n = h.n();
    std::vector<std::vector<int>> adj(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (h.geo.adjacent(u, v)) {
                adj[u].push_back(v);
                adj[v].push_back(u);
            }
    return adj;
}

using DistMatrix = std::vector<std::vector<int>>;

inline DistMatrix apsp_bruteforce(const GraphHandle& h, int cap = kDefaultBruteCap) {
    if (h.n() > cap) throw std::length_error("apsp_bruteforce: instance exceeds cap of " + std::to_string(cap));
    SparseGraph g;
    g.n = h.n();
    g.adj = explicit_adjacency(h);
    DistMatrix d(g.n);
    for (int s = 0; s < g.n; ++s) d[s] = bfs_sparse(g, s);
    return d;
}

inline void require_connected(const DistMatrix& d) {
    for (auto& row : d)
        for (int x : row)
            if (x == kUnreachable) throw std::domain_error("instance is disconnected");
}

inline std::vector<int> ecc_bruteforce(const GraphHandle& h, int cap = kDefaultBruteCap) {
    auto d = apsp_bruteforce(h, cap);
    require_connected(d);
    std::vector<int> e(d.size(), 0);
    for (size_t i = 0; i < d.size(); ++i) e[i] = *std::max_element(d[i].begin(), d[i].end());
    return e;
}

inline int diameter_bruteforce(const GraphHandle& h, int cap = kDefaultBruteCap) {
    auto e = ecc_bruteforce(h, cap);
    return e.empty() ? 0 : *std::max_element(e.begin(), e.end());
}

inline long long wiener_bruteforce(const GraphHandle& h, int cap = kDefaultBruteCap) {
    auto d = apsp_bruteforce(h, cap);
    require_connected(d);
    long long s = 0;
    for (size_t i = 0; i < d.size(); ++i)
        for (size_t j = i + 1; j < d.size(); ++j) s += d[i][j];
    return s;
}

// The naive pipeline for large inputs: adjacency lists once, then one BFS per
// vertex, O(n + m) memory and no size cap. Used by --naive and the benchmark.
inline std::vector<int> ecc_naive(const GraphHandle& h) {
    SparseGraph g;
    g.n = h.n();
    g.adj = adjacency_lists(h);
    std::vector<int> e(g.n, 0);
    for (int s = 0; s < g.n; ++s) {
        auto d = bfs_sparse(g, s);
        for (int x : d) {
            if (x == kUnreachable) throw std::domain_error("instance is disconnected");
            e[s] = std::max(e[s], x);
        }
    }
    return e;
}

inline long long wiener_naive(const GraphHandle& h) {
    SparseGraph g;
    g.n = h.n();
    g.adj = adjacency_lists(h);
    long long w = 0;
    for (int s = 0; s < g.n; ++s) {
        auto d = bfs_sparse(g, s);
        for (int t = s + 1; t < g.n; ++t) {
            if (d[t] == kUnreachable) throw std::domain_error("instance is disconnected");
            w += d[t];
        }
    }
    return w;
}

}  // namespace sqd
