#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"

namespace sqd {

struct LowDiameterDecomposition {
    std::vector<std::vector<int>> pieces;    // sorted vertex ids
    std::vector<std::vector<int>> boundary;  // sorted, subset of the piece
    std::vector<int> anchor;
    std::vector<int> piece_of;
    std::vector<char> merged;  // piece absorbed at least one residual component
    int delta = 0;
    bool whole_graph = false;
    long long marked = 0;  // vertices marked during ball growing

    int piece_count() const { return static_cast<int>(pieces.size()); }
    long long boundary_total() const {
        long long s = 0;
        for (auto& b : boundary) s += static_cast<long long>(b.size());
        return s;
    }
};

// strict: reject delta outside (24 ln n, n]; fallback: whole graph as one
// piece in that case; force: run the ball growing regardless.
enum class LddMode { Strict, Fallback, Force };

inline double ldd_phi(int n, int delta) { return 24.0 * std::log(std::max(n, 2)) / delta; }

inline bool ldd_in_range(int n, int delta) { return delta >= 1 && delta <= std::max(n, 1) && ldd_phi(n, delta) < 1.0; }

namespace detail {

inline void finalize_boundaries(const GraphHandle& h, LowDiameterDecomposition& L) {
    int n = h.n();
    L.piece_of.assign(n, -1);
    for (int p = 0; p < L.piece_count(); ++p)
        for (int v : L.pieces[p]) L.piece_of[v] = p;
    L.boundary.assign(L.piece_count(), {});
    auto adj = adjacency_lists(h);
    for (int v = 0; v < n; ++v)
        for (int u : adj[v])
            if (L.piece_of[u] != L.piece_of[v]) {
                L.boundary[L.piece_of[v]].push_back(v);
                break;
            }
    L.anchor.assign(L.piece_count(), -1);
    for (int p = 0; p < L.piece_count(); ++p) {
        std::sort(L.pieces[p].begin(), L.pieces[p].end());
        std::sort(L.boundary[p].begin(), L.boundary[p].end());
        L.anchor[p] = L.boundary[p].empty() ? L.pieces[p].front() : L.boundary[p].front();
    }
}

}  // namespace detail

inline LowDiameterDecomposition whole_graph_ldd(const GraphHandle& h, int delta) {
    LowDiameterDecomposition L;
    L.delta = delta;
    L.whole_graph = true;
    std::vector<int> all(h.n());
    std::iota(all.begin(), all.end(), 0);
    L.pieces.push_back(all);
    L.merged.assign(1, 0);
    detail::finalize_boundaries(h, L);
    return L;
}

// merge_components = false keeps residual-component pieces apart; only tests
// use that to produce decompositions with undersized pieces.
inline LowDiameterDecomposition build_ldd(const GraphHandle& h, int delta, LddMode mode = LddMode::Strict,
                                          bool merge_components = true) {
    int n = h.n();
    if (n == 0) throw std::invalid_argument("build_ldd: empty graph");
    if (delta < 1) throw std::invalid_argument("build_ldd: delta must be positive");
    if (!ldd_in_range(n, delta)) {
        if (mode == LddMode::Strict) {
            std::ostringstream os;
            os << "build_ldd: delta " << delta << " outside (24 ln n, n] = (" << 24.0 * std::log(std::max(n, 2)) << ", "
               << n << "]";
            throw std::domain_error(os.str());
        }
        if (mode == LddMode::Fallback) return whole_graph_ldd(h, delta);
    }
    const double phi = ldd_phi(n, delta);

    LowDiameterDecomposition L;
    L.delta = delta;
    std::vector<int> owner(n, -1);
    std::vector<char> marked(n, 0);
    Explorer ex = Explorer::whole(h);
    std::vector<int> whole_component;  // pieces equal to their residual component
    int next = 0;
    std::vector<int> ball, level_start;
    while (true) {
        while (next < n && !ex.live(next)) ++next;
        if (next >= n) break;
        int v = next;
        ball.assign(1, v);
        level_start.assign({0, 1});  // level i occupies [level_start[i], level_start[i+1])
        ex.kill(v);
        int ell = 0;
        bool exhausted = false;
        while (true) {
            // grow level ell+1
            size_t lo = level_start[ell], hi = level_start[ell + 1];
            for (size_t i = lo; i < hi; ++i) ex.pop_neighbors(ball[i], [&](int u) { ball.push_back(u); });
            level_start.push_back(static_cast<int>(ball.size()));
            ++ell;
            if (level_start[ell + 1] == level_start[ell]) exhausted = true;
            if (ell >= 2 && level_start[ell + 1] <= (1.0 + phi) * level_start[ell - 1]) break;
        }
        // piece = N^{ell-1}; N^ell \ N^{ell-2} gets marked
        int piece_end = level_start[ell];
        for (int i = level_start[ell - 1]; i < level_start[ell + 1]; ++i) marked[ball[i]] = 1;
        for (int i = piece_end; i < level_start[ell + 1]; ++i) ex.revive(ball[i]);
        std::vector<int> piece(ball.begin(), ball.begin() + piece_end);
        int id = static_cast<int>(L.pieces.size());
        for (int u : piece) owner[u] = id;
        L.pieces.push_back(std::move(piece));
        // When the level above the piece is empty the piece is a whole residual component.
        if (exhausted || level_start[ell + 1] == piece_end) whole_component.push_back(id);
    }
    L.marked = std::count(marked.begin(), marked.end(), 1);

    // Merge whole-component pieces into the piece of their lowest-index
    // neighbor. Such a neighbor was removed before the piece was grown, so it
    // sits in an earlier piece and the merge chains are acyclic.
    std::vector<int> target(L.pieces.size());
    std::iota(target.begin(), target.end(), 0);
    auto adj = adjacency_lists(h);
    for (int p : whole_component) {
        if (!merge_components) break;
        int best = -1;
        for (int v : L.pieces[p])
            for (int u : adj[v])
                if (owner[u] != p && (best < 0 || u < best)) best = u;
        if (best < 0) continue;  // a connected component of G on its own
        int t = owner[best];
        while (target[t] != t) t = target[t];
        target[p] = t;
    }
    std::vector<std::vector<int>> merged_pieces;
    std::vector<int> remap(L.pieces.size(), -1);
    std::vector<char> merged_flag;
    for (size_t p = 0; p < L.pieces.size(); ++p)
        if (target[p] == static_cast<int>(p)) {
            remap[p] = static_cast<int>(merged_pieces.size());
            merged_pieces.push_back({});
            merged_flag.push_back(0);
        }
    for (size_t p = 0; p < L.pieces.size(); ++p) {
        int t = static_cast<int>(p);
        while (target[t] != t) t = target[t];
        auto& dst = merged_pieces[remap[t]];
        dst.insert(dst.end(), L.pieces[p].begin(), L.pieces[p].end());
        if (t != static_cast<int>(p)) merged_flag[remap[t]] = 1;
    }
    L.pieces = std::move(merged_pieces);
    L.merged = std::move(merged_flag);
    detail::finalize_boundaries(h, L);
    return L;
}

struct LddReport {
    bool partition_ok = true, connected_ok = true, diameter_ok = true, boundary_ok = true, bound_ok = true;
    bool size_ok = true;  // pieces with a boundary have at least delta / (24 ln n) vertices
    int max_diameter = 0;           // exact, or 2 ecc(anchor) when that already fits
    long long boundary_total = 0;
    double boundary_bound = 0;      // 24 n ln n / delta
    int min_unmerged_size = 0;      // measured against delta / (24 ln n)
    std::string message;
    bool pass() const { return partition_ok && connected_ok && diameter_ok && boundary_ok && bound_ok && size_ok; }
};

inline LddReport verify_ldd(const GraphHandle& h, const LowDiameterDecomposition& L) {
    LddReport R;
    int n = h.n();
    std::ostringstream msg;
    std::vector<int> owner(n, -1);
    for (int p = 0; p < L.piece_count(); ++p)
        for (int v : L.pieces[p]) {
            if (v < 0 || v >= n || owner[v] != -1) R.partition_ok = false;
            else owner[v] = p;
        }
    for (int v = 0; v < n; ++v)
        if (owner[v] < 0) R.partition_ok = false;
    if (!R.partition_ok) {
        R.message = "pieces do not partition V";
        R.connected_ok = R.diameter_ok = R.boundary_ok = R.bound_ok = false;
        return R;
    }
    auto adj = adjacency_lists(h);
    if (static_cast<int>(L.boundary.size()) != L.piece_count()) R.boundary_ok = false;
    for (int p = 0; R.boundary_ok && p < L.piece_count(); ++p) {
        std::vector<int> want;
        for (int v : L.pieces[p])
            for (int u : adj[v])
                if (owner[u] != p) {
                    want.push_back(v);
                    break;
                }
        std::sort(want.begin(), want.end());
        std::vector<int> got = L.boundary[p];
        std::sort(got.begin(), got.end());
        if (got != want) {
            R.boundary_ok = false;
            msg << "piece " << p << " boundary mismatch; ";
        }
    }
    R.min_unmerged_size = n;
    for (int p = 0; p < L.piece_count(); ++p) {
        const auto& P = L.pieces[p];
        if (L.merged.size() == L.pieces.size() && !L.merged[p])
            R.min_unmerged_size = std::min<int>(R.min_unmerged_size, static_cast<int>(P.size()));
        if (!L.whole_graph && !L.boundary[p].empty() && static_cast<double>(P.size()) < 1.0 / ldd_phi(n, L.delta)) {
            R.size_ok = false;
            msg << "piece " << p << " has " << P.size() << " vertices; ";
        }
        auto d = boundary_weighted_bfs(h, P, {{P.front(), 0}});
        int ecc = 0;
        for (int v : P) {
            if (d[v] == kUnreachable) {
                R.connected_ok = false;
                ecc = -1;
                break;
            }
            ecc = std::max(ecc, d[v]);
        }
        if (ecc < 0) {
            msg << "piece " << p << " disconnected; ";
            continue;
        }
        int diam = 2 * ecc;
        if (diam > L.delta) {
            diam = 0;
            for (int s : P) {
                auto ds = boundary_weighted_bfs(h, P, {{s, 0}});
                for (int v : P) diam = std::max(diam, ds[v]);
                if (diam > L.delta) break;
            }
        }
        R.max_diameter = std::max(R.max_diameter, diam);
        if (diam > L.delta) {
            R.diameter_ok = false;
            msg << "piece " << p << " diameter " << diam << " > " << L.delta << "; ";
        }
    }
    R.boundary_total = L.boundary_total();
    R.boundary_bound = 24.0 * n * std::log(std::max(n, 2)) / L.delta;
    if (!L.whole_graph && R.boundary_total > R.boundary_bound) R.bound_ok = false;
    R.message = msg.str();
    return R;
}

}  // namespace sqd
