#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graph.hpp"

namespace sqd {

struct GenParams {
    double avg_degree = 8.0;  // target average degree
    double min_half = 0.25;   // arbitrary squares: half sides uniform in [min_half, max_half]
    double max_half = 1.5;
    std::string sparse_mode = "gnm";  // gnm | tree | grid
    int vc_dim = 2;
};

namespace detail {

// Expected adjacency probability of two uniform points in [0,L]^2 at L-inf
// distance <= t, per axis 2t/L - t^2/L^2.
inline double square_pair_prob(double t, double L) {
    double a = t >= L ? 1.0 : 2 * t / L - t * t / (L * L);
    return a * a;
}

inline double disk_pair_prob(double L) {
    if (L <= 2) return 1.0;
    return std::min(1.0, M_PI / (L * L) - 8.0 / (3.0 * L * L * L) + 1.0 / (2.0 * L * L * L * L));
}

inline double box_for_degree(int n, const std::function<double(double)>& prob, double deg) {
    if (n <= 1) return 1.0;
    double lo = 1e-3, hi = 1e7;
    for (int it = 0; it < 200; ++it) {
        double mid = std::sqrt(lo * hi);
        if ((n - 1) * prob(mid) > deg) lo = mid;
        else hi = mid;
    }
    return hi;
}

// Relative distance of a pair to the tie boundary of its predicate; pairs that
// are almost tangent get resampled so the 1e-9 tolerance never decides edges.
inline bool near_tangent(const GeometricInstance& g, int u, int v) {
    double dx = std::fabs(g.c[u].x - g.c[v].x), dy = std::fabs(g.c[u].y - g.c[v].y);
    if (g.kind == GeoKind::UnitDisk) return std::fabs(std::sqrt(dx * dx + dy * dy) - 1.0) < 1e-6;
    return std::fabs(std::max(dx, dy) - (g.h[u] + g.h[v])) < 1e-6;
}

inline bool near_line(double v) { return std::fabs(2 * v - std::round(2 * v)) < 2e-6; }

struct SpatialHash {
    double side;
    std::unordered_map<CellIndex, std::vector<int>, CellHash> cells;
    CellIndex key(Point p) const {
        return {static_cast<int64_t>(std::floor(p.x / side)), static_cast<int64_t>(std::floor(p.y / side))};
    }
    void add(int id, Point p) { cells[key(p)].push_back(id); }
    void remove(int id, Point p) {
        auto& v = cells[key(p)];
        v.erase(std::find(v.begin(), v.end(), id));
    }
    template <class F>
    void around(Point p, F&& f) const {
        CellIndex k = key(p);
        for (int64_t dx = -1; dx <= 1; ++dx)
            for (int64_t dy = -1; dy <= 1; ++dy) {
                auto it = cells.find({k.ix + dx, k.iy + dy});
                if (it == cells.end()) continue;
                for (int id : it->second) f(id);
            }
    }
};

}  // namespace detail

// Uniform centers in a box sized for the target degree. Vertices outside the
// largest component are then re-placed next to a random vertex of it, which
// keeps the instance connected while barely moving the degree.
inline GeometricInstance gen_geometric(GeoKind kind, int n, uint64_t seed, const GenParams& p = {}) {
    if (n < 1) throw std::invalid_argument("gen: n must be positive");
    if (!(p.avg_degree > 0)) throw std::invalid_argument("gen: degree must be positive");
    if (kind == GeoKind::Square && !(p.min_half > 0 && p.max_half >= p.min_half))
        throw std::invalid_argument("gen: bad half-side range");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    GeometricInstance g;
    g.kind = kind;
    g.c.resize(n);
    g.h.assign(n, 0.5);
    if (kind == GeoKind::Square)
        for (auto& h : g.h) h = p.min_half + (p.max_half - p.min_half) * U(rng);
    std::function<double(double)> prob;
    if (kind == GeoKind::UnitDisk) prob = detail::disk_pair_prob;
    else if (kind == GeoKind::UnitSquare) prob = [](double L) { return detail::square_pair_prob(1.0, L); };
    else
        prob = [&](double L) {
            double s = 0;
            const int K = 24;
            for (int i = 0; i < K; ++i)
                for (int j = 0; j < K; ++j) {
                    double a = p.min_half + (p.max_half - p.min_half) * (i + 0.5) / K;
                    double b = p.min_half + (p.max_half - p.min_half) * (j + 0.5) / K;
                    s += detail::square_pair_prob(a + b, L);
                }
            return s / (K * K);
        };
    double L = detail::box_for_degree(n, prob, p.avg_degree);
    double reach = kind == GeoKind::UnitDisk ? 1.0 : 2 * (kind == GeoKind::Square ? p.max_half : 0.5);
    detail::SpatialHash hash{reach, {}};

    auto clean = [&](int v) {
        if (kind == GeoKind::UnitDisk && (detail::near_line(g.c[v].x) || detail::near_line(g.c[v].y))) return false;
        bool ok = true;
        hash.around(g.c[v], [&](int u) {
            if (u != v && detail::near_tangent(g, u, v)) ok = false;
        });
        return ok;
    };
    for (int v = 0; v < n; ++v) {
        do g.c[v] = {L * U(rng), L * U(rng)};
        while (!clean(v));
        hash.add(v, g.c[v]);
    }

    GraphHandle h = GraphHandle::of(g);
    auto comps = components(h);
    if (comps.size() > 1) {
        size_t big = 0;
        for (size_t i = 1; i < comps.size(); ++i)
            if (comps[i].size() > comps[big].size()) big = i;
        const std::vector<int>& giant = comps[big];
        for (size_t i = 0; i < comps.size(); ++i) {
            if (i == big) continue;
            for (int v : comps[i]) {
                hash.remove(v, g.c[v]);
                for (;;) {
                    int u = giant[std::uniform_int_distribution<size_t>(0, giant.size() - 1)(rng)];
                    double ang = 2 * M_PI * U(rng), rad = 0.9 * std::sqrt(U(rng));
                    double lim = kind == GeoKind::UnitDisk ? 1.0 : g.h[u] + g.h[v];
                    g.c[v] = {g.c[u].x + lim * rad * std::cos(ang), g.c[u].y + lim * rad * std::sin(ang)};
                    if (clean(v)) break;
                }
                hash.add(v, g.c[v]);
            }
        }
    }
    return g;
}

inline SparseGraph gen_sparse(int n, uint64_t seed, const GenParams& p = {}) {
    if (n < 1) throw std::invalid_argument("gen: n must be positive");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> edges;
    if (p.sparse_mode == "grid") {
        // Near-square grid with diagonals, thinned at random. All column edges
        // and the first row survive, which keeps it connected.
        int w = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
        std::bernoulli_distribution keep(std::clamp((p.avg_degree - 2.0) / 4.0, 0.0, 1.0));
        for (int v = 0; v < n; ++v) {
            int r = v / w, c = v % w;
            if (c + 1 < w && v + 1 < n) {
                if (r == 0 || keep(rng)) edges.push_back({v, v + 1});
            }
            if (v + w < n) edges.push_back({v, v + w});
            if (c + 1 < w && v + w + 1 < n && keep(rng)) edges.push_back({v, v + w + 1});
        }
    } else if (p.sparse_mode == "tree" || p.sparse_mode == "gnm") {
        for (int v = 1; v < n; ++v) edges.push_back({std::uniform_int_distribution<int>(0, v - 1)(rng), v});
        if (p.sparse_mode == "gnm") {
            long long want = static_cast<long long>(std::llround(p.avg_degree * n / 2.0));
            long long maxm = static_cast<long long>(n) * (n - 1) / 2;
            if (want > maxm) throw std::invalid_argument("gen: degree too high for n");
            std::unordered_set<uint64_t> seen;
            auto key = [](int a, int b) { return (static_cast<uint64_t>(std::min(a, b)) << 32) | static_cast<uint32_t>(std::max(a, b)); };
            for (auto [a, b] : edges) seen.insert(key(a, b));
            std::uniform_int_distribution<int> V(0, n - 1);
            while (static_cast<long long>(edges.size()) < want) {
                int a = V(rng), b = V(rng);
                if (a == b || !seen.insert(key(a, b)).second) continue;
                edges.push_back({a, b});
            }
        }
    } else {
        throw std::invalid_argument("gen: unknown sparse mode " + p.sparse_mode);
    }
    return SparseGraph::from_edges(n, edges, p.vc_dim);
}

}  // namespace sqd
