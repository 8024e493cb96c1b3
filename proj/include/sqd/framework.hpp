#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"
#include "ldd.hpp"
#include "patterns.hpp"
#include "stabbing.hpp"

namespace sqd {

inline constexpr uint64_t kBuiltinSeed = 20240601;

// Default seed: SQD_SEED from the environment when set, else a fixed value.
inline uint64_t default_seed() {
    if (const char* s = std::getenv("SQD_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end && *end == '\0' && end != s) return v;
    }
    return kBuiltinSeed;
}

enum class Purpose { Ecc, Diameter, Oracle };

// User-facing knobs; zero / negative values mean "class default".
struct Params {
    int delta = 0;
    double rho = 0;
    long long small_threshold = -1;  // A: pieces with at most A vertices take the pattern route
    int block = 0;                   // block size b of the square cover structure
    uint64_t seed = default_seed();
    LddMode ldd_mode = LddMode::Fallback;
    bool explicit_unions = false;    // neighbor unions by adjacency lists instead of the geometric structures
    StabbingOptions stabbing;
};

struct Resolved {
    int delta = 1;
    double rho = 1;
    long long A = 0;
    int block = 1;
};

inline int ceil_root(double n, double k) { return std::max(1, static_cast<int>(std::ceil(std::pow(std::max(n, 1.0), 1.0 / k) - 1e-9))); }

inline Resolved resolve_params(GraphClass cls, int n, int vc_dim, Purpose purpose, const Params& p) {
    Resolved r;
    double N = std::max(n, 2);
    int d = std::max(1, vc_dim);
    switch (cls) {
        case GraphClass::Sparse:
            if (purpose == Purpose::Oracle) {
                r.delta = ceil_root(N, 4.0 * d + 1);
                r.rho = std::pow(r.delta, 2);
                r.A = static_cast<long long>(std::pow(r.delta, 3));
            } else {
                r.delta = ceil_root(N, 2.0 * d);
                r.rho = std::pow(N, 1.0 / d);
                r.A = 0;
            }
            break;
        case GraphClass::Square:
            if (purpose == Purpose::Oracle) {
                r.delta = ceil_root(N, 20);
                r.rho = std::pow(r.delta, 3);
                r.A = static_cast<long long>(std::pow(r.delta, 4));
            } else {
                r.delta = ceil_root(N, 12);
                r.rho = std::pow(N, 0.25);
                r.A = 0;
            }
            r.block = r.delta;
            break;
        case GraphClass::UnitSquare:
            if (purpose == Purpose::Oracle) {
                r.delta = ceil_root(N, 16);
                r.rho = std::pow(r.delta, 2);
                r.A = static_cast<long long>(std::pow(r.delta, 3));
            } else {
                r.delta = ceil_root(N, 8);
                r.rho = std::pow(N, 0.25);
                r.A = 0;
            }
            break;
        case GraphClass::UnitDisk:
            if (purpose == Purpose::Diameter) {
                r.delta = ceil_root(N, 18);
                r.rho = std::pow(r.delta, 2);
                r.A = static_cast<long long>(std::pow(r.delta, 2));
            } else {
                r.delta = ceil_root(N, 20);
                r.rho = std::pow(r.delta, 2);
                r.A = static_cast<long long>(std::pow(r.delta, 4));
            }
            break;
    }
    if (p.delta > 0) r.delta = p.delta;
    if (p.rho > 0) r.rho = p.rho;
    if (p.small_threshold >= 0) r.A = p.small_threshold;
    if (p.block > 0) r.block = p.block;
    if (r.block < 1) r.block = 1;
    if (!(r.rho >= 1)) r.rho = 1;
    return r;
}

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void check_params(const Params& p) {
    if (p.delta < 0) throw ParameterError("delta must be positive");
    if (p.rho < 0 || (p.rho > 0 && p.rho < 1)) throw ParameterError("rho must be at least 1");
    if (p.block < 0) throw ParameterError("block size must be positive");
}

// ---- piece contexts ------------------------------------------------------

// Per-piece data of the framework. Balls are "weighted": for a source s and
// radius r, N^r[s] = {t in ground : d(s,t) - w(t) <= r}. Eccentricities use
// w = 0 and ground = relevant region; oracles use w(t) = d(t, anchor) and
// ground = V. The radius window [r_lo, r_hi] is chosen so N^{r_lo - 1}[s] is
// empty and N^{r_hi}[s] is the whole ground for every s in the piece.
struct PieceContext {
    int index = 0;
    std::vector<int> piece, boundary;
    std::vector<int> local;  // V -> index in piece, -1 elsewhere
    std::vector<char> on_boundary;  // piece-local
    int anchor = 0;
    std::vector<int> anchor_row;
    int ecc_anchor = 0;
    int eps = 0;  // max distance from the anchor to a piece vertex
    std::vector<int> weight;  // w over V
    std::vector<int> ground;  // sorted
    int r_lo = 0, r_hi = 0;
    BoundaryRows rows;

    int radii() const { return r_hi - r_lo + 1; }
};

inline PieceContext make_piece_context(const GraphHandle& h, const LowDiameterDecomposition& L, int p,
                                       Purpose purpose) {
    PieceContext c;
    c.index = p;
    c.piece = L.pieces[p];
    c.boundary = L.boundary[p];
    c.anchor = L.anchor[p];
    c.local.assign(h.n(), -1);
    for (int i = 0; i < static_cast<int>(c.piece.size()); ++i) c.local[c.piece[i]] = i;
    c.on_boundary.assign(c.piece.size(), 0);
    for (int b : c.boundary) c.on_boundary[c.local[b]] = 1;
    c.anchor_row = bfs(h, c.anchor);
    for (int v = 0; v < h.n(); ++v)
        if (c.anchor_row[v] == kUnreachable) throw std::domain_error("framework: graph is not connected");
    c.ecc_anchor = *std::max_element(c.anchor_row.begin(), c.anchor_row.end());
    for (int v : c.piece) c.eps = std::max(c.eps, c.anchor_row[v]);
    if (purpose == Purpose::Oracle) {
        c.weight = c.anchor_row;
        c.ground.resize(h.n());
        std::iota(c.ground.begin(), c.ground.end(), 0);
        c.r_lo = -c.eps;
        c.r_hi = c.eps;
    } else {
        c.weight.assign(h.n(), 0);
        for (int v = 0; v < h.n(); ++v)
            if (c.anchor_row[v] >= c.ecc_anchor - 2 * c.eps) c.ground.push_back(v);
        c.r_lo = std::max(0, c.ecc_anchor - 3 * c.eps);
        c.r_hi = c.ecc_anchor + c.eps;
    }
    if (c.ground.empty()) throw std::logic_error("framework: empty relevant region");
    c.rows = boundary_rows(h, c.boundary);
    return c;
}

// {t in ground : row[t] - w(t) <= r} as a rep over `path`.
inline IntervalRep ball_from_row(const PieceContext& c, const std::vector<int>& row, int r, const StabbingPath& path) {
    std::vector<int> m;
    for (int t : c.ground)
        if (row[t] != kUnreachable && row[t] - c.weight[t] <= r) m.push_back(t);
    return make_rep(m, path);
}

inline uint64_t ball_key(uint64_t salt, int s, int r, int tag = 0) {
    return splitmix64(salt ^ splitmix64((static_cast<uint64_t>(static_cast<uint32_t>(s)) << 32) ^
                                        (static_cast<uint64_t>(static_cast<uint32_t>(r)) << 6) ^
                                        static_cast<uint64_t>(tag)));
}

// Set system {N^r[s] : s in piece, r in window} over the piece ground set,
// reported by BFS from each center.
inline SetSystem piece_ball_system(const GraphHandle& h, const PieceContext& c, int d, uint64_t salt) {
    SetSystem s;
    s.universe = h.n();
    s.ground = c.ground;
    int span = c.radii();
    s.count = c.piece.size() * static_cast<size_t>(span);
    s.m = static_cast<double>(s.count);
    s.dual_dim = d;
    s.key = [salt, span, &c](size_t i) { return ball_key(salt, c.piece[i / span], c.r_lo + static_cast<int>(i % span)); };
    s.report = [&h, &c, span](const std::vector<size_t>& ids, const std::function<void(size_t, const std::vector<int>&)>& f) {
        size_t i = 0;
        std::vector<int> members;
        while (i < ids.size()) {
            size_t center = ids[i] / span;
            auto row = bfs(h, c.piece[center]);
            for (; i < ids.size() && ids[i] / span == center; ++i) {
                int r = c.r_lo + static_cast<int>(ids[i] % span);
                members.clear();
                for (int t : c.ground)
                    if (row[t] - c.weight[t] <= r) members.push_back(t);
                f(ids[i], members);
            }
        }
    };
    return s;
}

// ---- ball growing --------------------------------------------------------

// One radius worth of balls: cumulative reps for every piece vertex, over `path`.
struct BallLayer {
    int r = 0;
    std::shared_ptr<const StabbingPath> path;
    std::vector<IntervalRep> ball;
};

// Neighbor-union step: for each query vertex q (piece-local index), the
// union of `sets[v]` over the piece vertices v in N[q].
using NeighborUnion = std::function<std::vector<IntervalRep>(
    const GraphHandle& h, const PieceContext& c, const std::vector<IntervalRep>& sets,
    const std::vector<int>& queries, const StabbingPath& path)>;

// Union over closed neighborhoods by explicit adjacency lists.
inline NeighborUnion explicit_neighbor_union(const std::vector<std::vector<int>>& adj) {
    return [&adj](const GraphHandle&, const PieceContext& c, const std::vector<IntervalRep>& sets,
                  const std::vector<int>& queries, const StabbingPath& path) {
        std::vector<IntervalRep> out;
        out.reserve(queries.size());
        std::vector<const IntervalRep*> parts;
        for (int q : queries) {
            parts.assign(1, &sets[q]);
            for (int u : adj[c.piece[q]])
                if (c.local[u] >= 0) parts.push_back(&sets[c.local[u]]);
            IntervalRep r = union_reps(parts);
            r.path = path.id;
            out.push_back(std::move(r));
        }
        return out;
    };
}

enum class GrowthRule { Cumulative, Difference };

struct GrowthStats {
    long long rep_intervals = 0;  // summed over all layers and vertices
    long long union_queries = 0;
    int layers = 0;
    long long structures = 0;  // geometric structures built (unit-disk type loop)
    int max_envelope = 0;
};

// Grows balls radius by radius over a fixed path. Boundary vertices read
// their balls from BFS rows; interior vertices use
//   N^r[s] = {s if -w(s) <= r} u U_{v in N[s]} N^{r-1}[v]
// or, with the difference rule, the same identity on spheres
//   N^{=r}[s] = U N^{=r-1}[v] \ (N^{=r-1}[s] u N^{=r-2}[s]) u {s if -w(s) = r}.
// `emit` sees each layer; returning false stops the growth.
inline GrowthStats grow_balls(const GraphHandle& h, const PieceContext& c, std::shared_ptr<const StabbingPath> path,
                              GrowthRule rule, const NeighborUnion& unite,
                              const std::function<bool(const BallLayer&)>& emit) {
    GrowthStats st;
    int k = static_cast<int>(c.piece.size());
    std::vector<int> interior;
    for (int i = 0; i < k; ++i)
        if (!c.on_boundary[i]) interior.push_back(i);
    std::vector<int> brow(k, -1);
    for (size_t i = 0; i < c.boundary.size(); ++i) brow[c.local[c.boundary[i]]] = static_cast<int>(i);

    BallLayer cur;
    cur.r = c.r_lo - 1;
    cur.path = path;
    cur.ball.assign(k, empty_rep(*path));
    std::vector<IntervalRep> sph1(k, empty_rep(*path)), sph2(k, empty_rep(*path));  // spheres at r-1, r-2
    for (int r = c.r_lo; r <= c.r_hi; ++r) {
        BallLayer next;
        next.r = r;
        next.path = path;
        next.ball.resize(k);
        std::vector<IntervalRep> sph(k);
        const auto& src = rule == GrowthRule::Cumulative ? cur.ball : sph1;
        auto united = unite(h, c, src, interior, *path);
        st.union_queries += static_cast<long long>(interior.size());
        for (size_t j = 0; j < interior.size(); ++j) {
            int i = interior[j];
            int s = c.piece[i];
            IntervalRep u = std::move(united[j]);
            if (rule == GrowthRule::Cumulative) {
                if (-c.weight[s] <= r && std::binary_search(c.ground.begin(), c.ground.end(), s))
                    u = union_reps(u, make_rep({s}, *path));
                next.ball[i] = std::move(u);
            } else {
                u = subtract_rep(u, union_reps(sph1[i], sph2[i]));
                if (-c.weight[s] == r && std::binary_search(c.ground.begin(), c.ground.end(), s))
                    u = union_reps(u, make_rep({s}, *path));
                next.ball[i] = union_reps(cur.ball[i], u);
                sph[i] = std::move(u);
            }
        }
        for (int i = 0; i < k; ++i) {
            if (!c.on_boundary[i]) continue;
            next.ball[i] = ball_from_row(c, c.rows.rows[brow[i]], r, *path);
            if (rule == GrowthRule::Difference) sph[i] = subtract_rep(next.ball[i], cur.ball[i]);
        }
        for (auto& b : next.ball) st.rep_intervals += static_cast<long long>(b.count());
        ++st.layers;
        if (rule == GrowthRule::Difference) {
            sph2 = std::move(sph1);
            sph1 = std::move(sph);
        }
        cur = std::move(next);
        if (!emit(cur)) break;
    }
    return st;
}

// Least radius with a full ball, per piece vertex; the window guarantees one.
struct EccTracker {
    std::vector<int> ecc;
    int pending = 0;
    explicit EccTracker(int k) : ecc(k, -1), pending(k) {}
    bool update(const BallLayer& L) {
        for (size_t i = 0; i < L.ball.size(); ++i)
            if (ecc[i] < 0 && is_full(L.ball[i], *L.path)) {
                ecc[i] = L.r;
                --pending;
            }
        return pending > 0;
    }
};

}  // namespace sqd
