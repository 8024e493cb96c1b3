#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "graph.hpp"

namespace sqd {

// Distance rows from the boundary vertices of one piece, indexed like the
// boundary list: rows[i][v] = d_G(boundary[i], v).
struct BoundaryRows {
    std::vector<int> boundary;
    std::vector<std::vector<int>> rows;
};

inline BoundaryRows boundary_rows(const GraphHandle& h, const std::vector<int>& boundary) {
    BoundaryRows b;
    b.boundary = boundary;
    for (int s : boundary) b.rows.push_back(bfs(h, s));
    return b;
}

// Pattern of v outside the piece: offsets d(v, s_i) - d(v, P) over the
// boundary vertices s_i, with base d(v, P).
struct PatternTable {
    std::vector<std::vector<int>> patterns;  // deduplicated offset vectors
    std::vector<int> pattern_of;             // per vertex of V, -1 inside the piece or unreachable
    std::vector<int> base;                   // d(v, P), -1 where pattern_of is -1
    std::vector<int> far_base;               // per pattern, largest base among its vertices

    int size() const { return static_cast<int>(patterns.size()); }
};

inline PatternTable compute_patterns(const GraphHandle& h, const std::vector<int>& piece, const BoundaryRows& b) {
    int n = h.n();
    for (auto& r : b.rows)
        if (static_cast<int>(r.size()) != n) throw std::invalid_argument("compute_patterns: missing distance rows");
    if (b.rows.size() != b.boundary.size()) throw std::invalid_argument("compute_patterns: missing distance rows");
    std::vector<char> in(n, 0);
    for (int v : piece) in[v] = 1;
    PatternTable T;
    T.pattern_of.assign(n, -1);
    T.base.assign(n, -1);
    if (b.boundary.empty()) {
        // the piece is a whole component; nothing outside it is reachable
        T.patterns.push_back({});
        T.far_base.push_back(0);
        return T;
    }
    std::map<std::vector<int>, int> ids;
    size_t k = b.boundary.size();
    std::vector<int> off(k);
    for (int v = 0; v < n; ++v) {
        if (in[v]) continue;
        int base = kUnreachable;
        for (size_t i = 0; i < k; ++i) base = std::min(base, b.rows[i][v]);
        if (base == kUnreachable) continue;
        for (size_t i = 0; i < k; ++i) off[i] = b.rows[i][v] - base;
        auto [it, fresh] = ids.emplace(off, T.size());
        if (fresh) {
            T.patterns.push_back(off);
            T.far_base.push_back(base);
        }
        T.pattern_of[v] = it->second;
        T.base[v] = base;
        T.far_base[it->second] = std::max(T.far_base[it->second], base);
    }
    return T;
}

// d_G(s, t) for s, t in the piece: BFS inside the piece from t, where each
// boundary vertex b may also be entered at d_G(b, t) (a detour outside).
inline std::vector<std::vector<int>> in_piece_distances(const GraphHandle& h, const std::vector<int>& piece,
                                                        const BoundaryRows& b) {
    int n = h.n();
    std::vector<int> local(n, -1);
    for (int i = 0; i < static_cast<int>(piece.size()); ++i) local[piece[i]] = i;
    std::vector<std::vector<int>> D(piece.size(), std::vector<int>(piece.size(), kUnreachable));
    for (size_t j = 0; j < piece.size(); ++j) {
        int t = piece[j];
        std::vector<std::pair<int, int>> seeds{{t, 0}};
        for (size_t i = 0; i < b.boundary.size(); ++i)
            if (b.rows[i][t] != kUnreachable) seeds.push_back({b.boundary[i], b.rows[i][t]});
        auto d = weighted_bfs(h, piece, seeds);
        for (size_t i = 0; i < piece.size(); ++i) D[i][j] = d[piece[i]];
    }
    return D;
}

// Per pattern p, D_p(s) = min_i (d_P(s, s_i) + p[i]) over the piece; the
// exact distance to an outside vertex v with pattern p is base(v) + D_p(s).
inline std::vector<std::vector<int>> pattern_distances(const GraphHandle& h, const std::vector<int>& piece,
                                                       const BoundaryRows& b, const PatternTable& T) {
    std::vector<std::vector<int>> out;
    if (b.boundary.empty()) return out;
    out.reserve(T.size());
    for (auto& p : T.patterns) {
        std::vector<std::pair<int, int>> seeds;
        for (size_t i = 0; i < p.size(); ++i) seeds.push_back({b.boundary[i], p[i]});
        auto d = boundary_weighted_bfs(h, piece, seeds);
        std::vector<int> row(piece.size());
        for (size_t i = 0; i < piece.size(); ++i) row[i] = d[piece[i]];
        out.push_back(std::move(row));
    }
    return out;
}

// Exact eccentricities (within the component) of the piece vertices, in piece order.
inline std::vector<int> ecc_small_piece(const GraphHandle& h, const std::vector<int>& piece, const BoundaryRows& b,
                                        const PatternTable& T) {
    auto inside = in_piece_distances(h, piece, b);
    std::vector<int> ecc(piece.size(), 0);
    for (size_t i = 0; i < piece.size(); ++i)
        for (int d : inside[i])
            if (d != kUnreachable) ecc[i] = std::max(ecc[i], d);
    auto pd = pattern_distances(h, piece, b, T);
    for (size_t p = 0; p < pd.size(); ++p)
        for (size_t i = 0; i < piece.size(); ++i)
            if (pd[p][i] != kUnreachable) ecc[i] = std::max(ecc[i], pd[p][i] + T.far_base[p]);
    return ecc;
}

// Small-piece distance oracle. Outside vertices sharing a pattern share one
// nested ball sequence: radii r_1 < ... < r_k (the distinct boundary offsets)
// and balls Y_j = {x in P : entry(x) <= r_j}, stored through the entry radius
// of every piece vertex. The first ball holding s is the one at entry(s), so
// the answer is base(t) + entry(s).
struct SmallOracle {
    std::vector<int> piece;
    std::vector<int> local;                    // V -> index in piece or -1
    std::vector<std::vector<int>> inside;      // |P| x |P|
    std::vector<int> pattern_of, base;         // per vertex of V
    std::vector<std::vector<int>> radii;       // per pattern, sorted distinct offsets
    std::vector<std::vector<int>> entry;       // per pattern, per piece vertex
};

inline SmallOracle oracle_small_piece_build(const GraphHandle& h, const std::vector<int>& piece, const BoundaryRows& b,
                                            const PatternTable& T) {
    SmallOracle o;
    o.piece = piece;
    o.local.assign(h.n(), -1);
    for (int i = 0; i < static_cast<int>(piece.size()); ++i) o.local[piece[i]] = i;
    o.inside = in_piece_distances(h, piece, b);
    o.pattern_of = T.pattern_of;
    o.base = T.base;
    o.entry = pattern_distances(h, piece, b, T);
    for (auto& p : T.patterns) {
        std::vector<int> r = p;
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        o.radii.push_back(std::move(r));
    }
    return o;
}

inline int oracle_small_piece_query(const SmallOracle& o, int s, int t) {
    if (s < 0 || s >= static_cast<int>(o.local.size()) || o.local[s] < 0)
        throw std::invalid_argument("small oracle: source outside the piece");
    if (t < 0 || t >= static_cast<int>(o.local.size())) throw std::out_of_range("vertex id out of range");
    int i = o.local[s];
    if (o.local[t] >= 0) return o.inside[i][o.local[t]];
    int p = o.pattern_of[t];
    if (p < 0) return kUnreachable;
    int e = o.entry[p][i];
    return e == kUnreachable ? kUnreachable : o.base[t] + e;
}

}  // namespace sqd
