#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "envelope.hpp"
#include "geometry.hpp"
#include "intervals.hpp"

namespace sqd {

// A disk of the source cell with one interval of path positions.
struct DiskObject {
    int owner = -1;
    Point center;
    int lo = 0, hi = -1;
};

struct UnitDiskCoverStats {
    int nodes = 0;
    long long arcs = 0;
    long long own_pieces = 0, gen_pieces = 0, sub_pieces = 0;
    int max_gen_pieces = 0;  // largest generalized envelope
};

// Covers?(s, I) and Avoids?(s, I) for the disks of one source cell queried at
// points of one target cell. In the target frame every disk is the region
// above its pseudoline. Intervals are rank-reduced and cut into base-b
// canonical intervals; node J stores
//   LE(S_J)                          lower envelope of its own arcs,
//   E_J = LE({LE(S_J), UE(E_child)})  the generalized envelope: J is covered by
//                                     its subtree exactly above E_J,
//   U_J = LE of the whole subtree     for avoidance.
// A point within kTol of a chain is decided by the exact disk predicate.
class UnitDiskCoverDS {
public:
    static constexpr double kTol = 1e-9;

    UnitDiskCoverDS(const std::vector<DiskObject>& objs, CellIndex target, CellIndex source, int base = 0)
        : frame_(make_frame(target, source)) {
        if (std::max(std::llabs(source.ix - target.ix), std::llabs(source.iy - target.iy)) > 2)
            throw std::invalid_argument("unitdisk cover: source cell is not relevant");
        std::unordered_map<int, int> arc_of_owner;
        std::vector<IntervalObject<int>> ivs;
        for (auto& o : objs) {
            if (o.lo > o.hi) continue;
            if (cell_of(o.center) != source) throw std::invalid_argument("unitdisk cover: disk outside the source cell");
            auto it = arc_of_owner.find(o.owner);
            int a;
            if (it == arc_of_owner.end()) {
                Arc arc;
                arc.c = frame_.to_local(o.center);
                arc.g = o.center;
                arc.full = target == source;
                arc.owner = o.owner;
                a = static_cast<int>(arcs_.size());
                arcs_.push_back(arc);
                arc_of_owner.emplace(o.owner, a);
            } else {
                a = it->second;
            }
            ivs.push_back({a, o.lo, o.hi});
        }
        init(ivs, base);
    }

    // Arcs given directly in the target frame (global = local).
    UnitDiskCoverDS(std::vector<Arc> arcs, const std::vector<IntervalObject<int>>& ivs, int base = 0) : arcs_(std::move(arcs)) {
        frame_.center = {0, 0};
        init(ivs, base);
    }

    const RankReduction& ranks() const { return rr_; }
    const UnitDiskCoverStats& stats() const { return stats_; }
    const std::vector<Arc>& arcs() const { return arcs_; }

    bool cover(Point q, int l, int r) const {
        if (l > r) return true;
        bool inside = false;
        auto [a, b] = rr_.query(l, r, &inside);
        if (!inside) return false;
        Point loc = frame_.to_local(q);
        bool ok = true;
        auto rec = [&](auto&& self, int level, int j, bool above) -> void {
            auto [lo, hi] = tree_.range(level, j);
            if (hi < a || lo > b) return;
            int id = tree_.id(level, j);
            if (a <= lo && hi <= b) {
                if (!above && !gen_covers(id, q, loc)) ok = false;
                return;
            }
            above = above || own_covers(id, q, loc);
            int c0 = j * tree_.b, c1 = std::min(tree_.count[level - 1], c0 + tree_.b);
            for (int k = c0; k < c1 && ok; ++k) self(self, level - 1, k, above);
        };
        if (tree_.m > 0) rec(rec, tree_.levels() - 1, 0, false);
        return ok;
    }

    bool avoid(Point q, int l, int r) const {
        if (l > r) return true;
        auto [a, b] = rr_.query(l, r, nullptr);
        if (a > b) return true;
        Point loc = frame_.to_local(q);
        bool ok = true;
        auto rec = [&](auto&& self, int level, int j) -> void {
            auto [lo, hi] = tree_.range(level, j);
            if (hi < a || lo > b) return;
            int id = tree_.id(level, j);
            if (a <= lo && hi <= b) {
                if (sub_covers(id, q, loc)) ok = false;
                return;
            }
            if (own_covers(id, q, loc)) {
                ok = false;
                return;
            }
            int c0 = j * tree_.b, c1 = std::min(tree_.count[level - 1], c0 + tree_.b);
            for (int k = c0; k < c1 && ok; ++k) self(self, level - 1, k);
        };
        if (tree_.m > 0) rec(rec, tree_.levels() - 1, 0);
        return ok;
    }

private:
    struct Node {
        std::vector<int> own;  // arc ids
        Chain le, gen, sub;
        int level = 0, j = 0;
    };

    void init(const std::vector<IntervalObject<int>>& ivs, int base) {
        rr_ = RankReduction(ivs);
        if (base <= 0) base = default_canonical_base(static_cast<long long>(ivs.size()));
        tree_ = detail::CanonicalTree(rr_.segments(), base);
        int N = tree_.nodes();
        nodes_.resize(N);
        for (auto& o : ivs) {
            if (o.lo > o.hi) continue;
            auto [sa, sb] = rr_.stored(o.lo, o.hi);
            tree_.decompose(sa, sb, [&](int level, int j) { nodes_[tree_.id(level, j)].own.push_back(o.obj); });
        }
        stats_.nodes = N;
        stats_.arcs = static_cast<long long>(arcs_.size());
        for (int level = 0; level < tree_.levels(); ++level)
            for (int j = 0; j < tree_.count[level]; ++j) {
                Node& nd = nodes_[tree_.id(level, j)];
                nd.level = level;
                nd.j = j;
                auto& own = nd.own;
                std::sort(own.begin(), own.end());
                own.erase(std::unique(own.begin(), own.end()), own.end());
                nd.le = envelope(arcs_, own, Side::Lower);
                if (level == 0) {
                    nd.gen = nd.le;
                    nd.sub = nd.le;
                } else {
                    int c0 = j * tree_.b, c1 = std::min(tree_.count[level - 1], c0 + tree_.b);
                    Chain up = nodes_[tree_.id(level - 1, c0)].gen;
                    Chain low = nodes_[tree_.id(level - 1, c0)].sub;
                    for (int k = c0 + 1; k < c1; ++k) {
                        up = merge_chains(up, nodes_[tree_.id(level - 1, k)].gen, Side::Upper, arcs_);
                        low = merge_chains(low, nodes_[tree_.id(level - 1, k)].sub, Side::Lower, arcs_);
                    }
                    nd.gen = merge_chains(nd.le, up, Side::Lower, arcs_);
                    nd.sub = merge_chains(nd.le, low, Side::Lower, arcs_);
                }
                stats_.own_pieces += static_cast<long long>(nd.le.size());
                stats_.gen_pieces += static_cast<long long>(nd.gen.size());
                stats_.sub_pieces += static_cast<long long>(nd.sub.size());
                stats_.max_gen_pieces = std::max(stats_.max_gen_pieces, static_cast<int>(nd.gen.size()));
            }
    }

    // 1: above the chain, 0: below, -1: too close to call numerically.
    int side_of(const Chain& c, Point loc) const {
        double v = c.eval(loc.x, arcs_);
        if (loc.y > v + kTol) return 1;
        if (loc.y < v - kTol) return 0;
        return -1;
    }

    bool own_exact(int id, Point q) const {
        for (int a : nodes_[id].own)
            if (arcs_[a].contains_global(q)) return true;
        return false;
    }
    bool gen_exact(int id, Point q) const {
        if (own_exact(id, q)) return true;
        const Node& nd = nodes_[id];
        if (nd.level == 0) return false;
        int c0 = nd.j * tree_.b, c1 = std::min(tree_.count[nd.level - 1], c0 + tree_.b);
        for (int k = c0; k < c1; ++k)
            if (!gen_exact(tree_.id(nd.level - 1, k), q)) return false;
        return true;
    }
    bool sub_exact(int id, Point q) const {
        if (own_exact(id, q)) return true;
        const Node& nd = nodes_[id];
        if (nd.level == 0) return false;
        int c0 = nd.j * tree_.b, c1 = std::min(tree_.count[nd.level - 1], c0 + tree_.b);
        for (int k = c0; k < c1; ++k)
            if (sub_exact(tree_.id(nd.level - 1, k), q)) return true;
        return false;
    }

    bool own_covers(int id, Point q, Point loc) const {
        if (nodes_[id].own.empty()) return false;
        int s = side_of(nodes_[id].le, loc);
        return s < 0 ? own_exact(id, q) : s == 1;
    }
    bool gen_covers(int id, Point q, Point loc) const {
        int s = side_of(nodes_[id].gen, loc);
        return s < 0 ? gen_exact(id, q) : s == 1;
    }
    bool sub_covers(int id, Point q, Point loc) const {
        int s = side_of(nodes_[id].sub, loc);
        return s < 0 ? sub_exact(id, q) : s == 1;
    }

    CellFrame frame_;
    std::vector<Arc> arcs_;
    RankReduction rr_;
    detail::CanonicalTree tree_;
    std::vector<Node> nodes_;
    UnitDiskCoverStats stats_;
};

inline UnitDiskCoverDS unitdisk_cover_build(const std::vector<DiskObject>& objs, CellIndex target, CellIndex source,
                                            int base = 0) {
    return UnitDiskCoverDS(objs, target, source, base);
}
inline bool unitdisk_cover_query(const UnitDiskCoverDS& ds, Point s, int l, int r) { return ds.cover(s, l, r); }
inline bool unitdisk_avoid_query(const UnitDiskCoverDS& ds, Point s, int l, int r) { return ds.avoid(s, l, r); }

inline IntervalRep interval_search(const UnitDiskCoverDS& ds, Point q, uint64_t path_id, long long* probes = nullptr) {
    return interval_search(
        ds.ranks(), q, [&](Point s, int l, int r) { return ds.cover(s, l, r); },
        [&](Point s, int l, int r) { return ds.avoid(s, l, r); }, path_id, probes);
}

}  // namespace sqd
