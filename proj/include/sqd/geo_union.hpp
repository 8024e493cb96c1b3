#pragma once

#include <memory>
#include <vector>

#include "framework.hpp"
#include "geo_ds.hpp"
#include "orthant.hpp"

namespace sqd {

// Arbitrary squares: every vertex of the piece contributes one object per
// interval of its current rep; each query square collects the union of the
// intervals of the squares it meets by interval searching over the
// block-reduced cover structure and the avoidance structure.
inline NeighborUnion square_neighbor_union(int block) {
    return [block](const GraphHandle& h, const PieceContext& c, const std::vector<IntervalRep>& sets,
                   const std::vector<int>& queries, const StabbingPath& path) {
        std::vector<SquareObject> objs;
        for (size_t i = 0; i < c.piece.size(); ++i) {
            AxisSquare sq{h.geo.c[c.piece[i]], h.geo.h[c.piece[i]]};
            for (auto iv : sets[i].iv) objs.push_back({sq, iv.lo, iv.hi});
        }
        SquareCoverDS cover(objs, block);
        SquareAvoidDS avoid(objs);
        std::vector<IntervalRep> out;
        out.reserve(queries.size());
        for (int q : queries) {
            int v = c.piece[q];
            out.push_back(interval_search(cover, avoid, AxisSquare{h.geo.c[v], h.geo.h[v]}, path.id));
        }
        return out;
    };
}

// Unit squares: the same search over the orthant structure, whose queries
// are the centers of the query squares.
inline NeighborUnion unitsquare_neighbor_union(int base) {
    return [base](const GraphHandle& h, const PieceContext& c, const std::vector<IntervalRep>& sets,
                  const std::vector<int>& queries, const StabbingPath& path) {
        std::vector<UnitSquareObject> objs;
        for (size_t i = 0; i < c.piece.size(); ++i)
            for (auto iv : sets[i].iv) objs.push_back({h.geo.c[c.piece[i]], iv.lo, iv.hi});
        double half = h.geo.h.empty() ? 0.5 : h.geo.h[0];
        UnitSquareCoverDS ds(objs, half, base);
        std::vector<IntervalRep> out;
        out.reserve(queries.size());
        for (int q : queries) out.push_back(interval_search(ds, h.geo.c[c.piece[q]], path.id));
        return out;
    };
}

inline NeighborUnion class_neighbor_union(const GraphHandle& h, const Resolved& R,
                                          std::shared_ptr<std::vector<std::vector<int>>> adj) {
    if (h.cls == GraphClass::Square) return square_neighbor_union(R.block);
    if (h.cls == GraphClass::UnitSquare) return unitsquare_neighbor_union(0);
    auto keep = adj;
    NeighborUnion inner = explicit_neighbor_union(*keep);
    return [keep, inner](const GraphHandle& g, const PieceContext& c, const std::vector<IntervalRep>& sets,
                         const std::vector<int>& q, const StabbingPath& p) { return inner(g, c, sets, q, p); };
}

inline GrowthRule class_growth_rule(const GraphHandle& h) {
    return h.cls == GraphClass::Square || h.cls == GraphClass::UnitSquare ? GrowthRule::Difference : GrowthRule::Cumulative;
}

}  // namespace sqd
