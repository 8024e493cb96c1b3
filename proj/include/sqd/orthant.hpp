#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "geometry.hpp"
#include "intervals.hpp"

namespace sqd {

// Equal unit squares of half side h with one interval each. A query point q
// is "under" the object centered at p iff the squares of q and p intersect,
// i.e. |q - p|_inf <= 2h(1 + kRelEps) with the exact rounding of intersects().
struct UnitSquareObject {
    Point center;
    int lo = 0, hi = -1;
};

namespace detail {

// Largest double x >= c with fl(x - c) <= R and smallest x <= c with
// fl(c - x) <= R. Rounding is monotone, so |x - c| <= R in floating point
// holds exactly on [lo, hi]. Found by bisection over doubles: near zero the
// ulps are far finer than those of R, so stepping one ulp at a time can take
// billions of steps.
template <class Pred>
double last_true(double yes, double no, Pred&& pred) {
    for (;;) {
        double mid = yes + (no - yes) / 2;
        if (mid == yes || mid == no) break;
        (pred(mid) ? yes : no) = mid;
    }
    for (double next = std::nextafter(yes, no); next != no && pred(next); next = std::nextafter(yes, no)) yes = next;
    return yes;
}

inline double reach_hi(double c, double R) {
    return last_true(c, c + 2 * R, [&](double x) { return x - c <= R; });
}

inline double reach_lo(double c, double R) {
    return last_true(c, c - 2 * R, [&](double x) { return c - x <= R; });
}

// Rank space of one axis inside a cell. Thresholds t_0 < ... < t_{k-1}; a
// coordinate maps to slot 2i+1 when it equals t_i and to 2i when it lies
// strictly between t_{i-1} and t_i, so threshold comparisons become integer
// comparisons on slots.
struct SlotAxis {
    std::vector<double> t;
    int slot(double v) const {
        auto it = std::lower_bound(t.begin(), t.end(), v);
        int i = static_cast<int>(it - t.begin());
        return 2 * i + (it != t.end() && *it == v ? 1 : 0);
    }
    int of_threshold(double v) const { return 2 * static_cast<int>(std::lower_bound(t.begin(), t.end(), v) - t.begin()) + 1; }
    int max_slot() const { return 2 * static_cast<int>(t.size()); }
};

struct SlotRect {
    int x1, x2, y1, y2;  // inclusive
    bool contains(int x, int y) const { return x1 <= x && x <= x2 && y1 <= y && y <= y2; }
    bool operator==(const SlotRect& o) const { return x1 == o.x1 && x2 == o.x2 && y1 == o.y1 && y2 == o.y2; }
};

// Union of orthants {x >= a, y >= c} in slot space, after the per-type flip.
class Staircase {
public:
    Staircase() = default;
    explicit Staircase(std::vector<std::pair<int, int>> pts) {
        std::sort(pts.begin(), pts.end());
        for (auto [a, c] : pts) {
            if (!a_.empty() && c >= m_.back()) continue;
            if (!a_.empty() && a_.back() == a) {
                m_.back() = c;
                continue;
            }
            a_.push_back(a);
            m_.push_back(c);
        }
    }
    bool empty() const { return a_.empty(); }
    size_t steps() const { return a_.size(); }
    std::vector<std::pair<int, int>> corners() const {
        std::vector<std::pair<int, int>> out;
        for (size_t i = 0; i < a_.size(); ++i) out.push_back({a_[i], m_[i]});
        return out;
    }
    bool covers(int x, int y) const {
        int i = static_cast<int>(std::upper_bound(a_.begin(), a_.end(), x) - a_.begin()) - 1;
        return i >= 0 && m_[i] <= y;
    }
    // Parts of r not covered, appended to out.
    void subtract(const SlotRect& r, std::vector<SlotRect>& out) const {
        int i = static_cast<int>(std::upper_bound(a_.begin(), a_.end(), r.x1) - a_.begin()) - 1;
        int x = r.x1;
        while (x <= r.x2) {
            int next = i + 1 < static_cast<int>(a_.size()) ? a_[i + 1] : std::numeric_limits<int>::max();
            int xe = std::min<long long>(r.x2, static_cast<long long>(next) - 1);
            int top = i >= 0 ? std::min(r.y2, m_[i] - 1) : r.y2;
            if (top >= r.y1) out.push_back({x, xe, r.y1, top});
            if (next == std::numeric_limits<int>::max()) break;
            x = next;
            ++i;
        }
    }

private:
    std::vector<int> a_, m_;  // step starts and the minimal c from there on
};

// Four orthant orientations; `flip` maps a slot rectangle or point into the
// frame where the orientation reads {x >= a, y >= c}.
struct OrthantFrame {
    int X = 0, Y = 0;  // max slots
    int fx(int type, int x) const { return type & 1 ? X - x : x; }
    int fy(int type, int y) const { return type & 2 ? Y - y : y; }
    SlotRect flip(int type, const SlotRect& r) const {
        SlotRect o = r;
        if (type & 1) {
            o.x1 = X - r.x2;
            o.x2 = X - r.x1;
        }
        if (type & 2) {
            o.y1 = Y - r.y2;
            o.y2 = Y - r.y1;
        }
        return o;
    }
};

struct OrthantUnion {
    Staircase st[4];
    bool empty() const { return st[0].empty() && st[1].empty() && st[2].empty() && st[3].empty(); }
    bool covers(const OrthantFrame& f, int x, int y) const {
        for (int t = 0; t < 4; ++t)
            if (!st[t].empty() && st[t].covers(f.fx(t, x), f.fy(t, y))) return true;
        return false;
    }
    // rects minus this union.
    std::vector<SlotRect> carve(const OrthantFrame& f, std::vector<SlotRect> rects) const {
        std::vector<SlotRect> tmp;
        for (int t = 0; t < 4 && !rects.empty(); ++t) {
            if (st[t].empty()) continue;
            tmp.clear();
            for (auto& r : rects) {
                size_t from = tmp.size();
                st[t].subtract(f.flip(t, r), tmp);
                for (size_t k = from; k < tmp.size(); ++k) tmp[k] = f.flip(t, tmp[k]);
            }
            rects.swap(tmp);
        }
        return rects;
    }
};

// Static point stabbing over (possibly overlapping) rectangles: a k-d tree
// of rectangles with bounding boxes.
class RectStab {
public:
    RectStab() = default;
    explicit RectStab(std::vector<SlotRect> rects) : r_(std::move(rects)) {
        if (r_.size() > kLeaf) {
            box_.resize(2 * r_.size());
            build(1, 0, r_.size(), 0);
        }
    }
    size_t size() const { return r_.size(); }
    bool stab(int x, int y) const {
        if (r_.size() <= kLeaf) {
            for (auto& r : r_)
                if (r.contains(x, y)) return true;
            return false;
        }
        return stab(1, 0, r_.size(), x, y);
    }

private:
    static constexpr size_t kLeaf = 8;
    void build(size_t node, size_t lo, size_t hi, int axis) {
        SlotRect b = r_[lo];
        for (size_t i = lo + 1; i < hi; ++i) {
            b.x1 = std::min(b.x1, r_[i].x1);
            b.x2 = std::max(b.x2, r_[i].x2);
            b.y1 = std::min(b.y1, r_[i].y1);
            b.y2 = std::max(b.y2, r_[i].y2);
        }
        if (node >= box_.size()) box_.resize(2 * node + 2);
        box_[node] = b;
        if (hi - lo <= kLeaf) return;
        size_t mid = (lo + hi) / 2;
        std::nth_element(r_.begin() + lo, r_.begin() + mid, r_.begin() + hi, [axis](const SlotRect& a, const SlotRect& c) {
            return axis == 0 ? a.x1 + a.x2 < c.x1 + c.x2 : a.y1 + a.y2 < c.y1 + c.y2;
        });
        build(2 * node, lo, mid, axis ^ 1);
        build(2 * node + 1, mid, hi, axis ^ 1);
    }
    bool stab(size_t node, size_t lo, size_t hi, int x, int y) const {
        if (!box_[node].contains(x, y)) return false;
        if (hi - lo <= kLeaf) {
            for (size_t i = lo; i < hi; ++i)
                if (r_[i].contains(x, y)) return true;
            return false;
        }
        size_t mid = (lo + hi) / 2;
        return stab(2 * node, lo, mid, x, y) || stab(2 * node + 1, mid, hi, x, y);
    }
    std::vector<SlotRect> r_;
    std::vector<SlotRect> box_;
};

}  // namespace detail

struct UnitSquareStats {
    long long cells = 0, nodes = 0, orthants = 0, rectangles = 0, staircase_steps = 0;
};

// Covers?(q, I) and Avoids?(q, I) for unit squares. The plane is cut by a grid
// slightly finer than the square side, so inside a cell every square is an
// orthant. Per cell, the object intervals are rank-reduced and cut into base-b
// canonical intervals; node J keeps the orthant union of S_J (objects having J
// as a canonical piece), the union over its subtree (for avoidance), and the
// rectangles of Z_J, the part of the cell where J is not covered by S of its
// own subtree:
//   Z_leaf = cell \ U(S_J),   Z_J = U_children (Z_child \ U(S_J)).
// A canonical piece J of I is covered at q iff q misses Z_J or some strict
// ancestor's orthants contain q.
class UnitSquareCoverDS {
public:
    UnitSquareCoverDS(const std::vector<UnitSquareObject>& objs, double half_side, int base = 0) {
        R_ = (half_side + half_side) * (1.0 + kRelEps);
        G_ = 2.0 * R_ * (1.0 - 1e-6);
        std::vector<IntervalObject<int>> all;
        for (auto& o : objs)
            if (o.lo <= o.hi) all.push_back({0, o.lo, o.hi});
        rr_ = RankReduction(all);
        if (base <= 0) base = default_canonical_base(static_cast<long long>(all.size()));
        base_ = std::max(2, base);

        std::unordered_map<CellIndex, std::vector<int>, CellHash> members;
        std::vector<std::array<double, 4>> reach(objs.size());
        for (size_t i = 0; i < objs.size(); ++i) {
            if (objs[i].lo > objs[i].hi) continue;
            auto& p = objs[i].center;
            reach[i] = {detail::reach_lo(p.x, R_), detail::reach_hi(p.x, R_), detail::reach_lo(p.y, R_), detail::reach_hi(p.y, R_)};
            int64_t x0 = axis_cell(reach[i][0]), x1 = axis_cell(reach[i][1]);
            int64_t y0 = axis_cell(reach[i][2]), y1 = axis_cell(reach[i][3]);
            for (int64_t cx = x0; cx <= x1; ++cx)
                for (int64_t cy = y0; cy <= y1; ++cy) members[{cx, cy}].push_back(static_cast<int>(i));
        }
        for (auto& [cell, ids] : members) {
            auto c = std::make_unique<Cell>();
            build_cell(*c, cell, ids, objs, reach);
            cells_.emplace(cell, std::move(c));
        }
        stats_.cells = static_cast<long long>(cells_.size());
    }

    const RankReduction& ranks() const { return rr_; }
    const UnitSquareStats& stats() const { return stats_; }
    int base() const { return base_; }

    // Union of the intervals of objects over q contains [l, r]. Empty I is vacuous.
    bool cover(const Point& q, int l, int r) const {
        if (l > r) return true;
        const Cell* c = find(q);
        if (!c) return false;
        bool inside = false;
        auto [a, b] = c->rr.query(l, r, &inside);
        if (!inside) return false;
        int x = c->ax.slot(q.x), y = c->ay.slot(q.y);
        bool ok = true;
        auto rec = [&](auto&& self, int level, int j, bool above) -> void {
            if (!ok) return;
            auto [lo, hi] = c->tree.range(level, j);
            if (hi < a || lo > b) return;
            int id = c->tree.id(level, j);
            if (a <= lo && hi <= b) {
                if (above || !c->z[id].stab(x, y)) return;
                ok = false;
                return;
            }
            above = above || c->own[id].covers(c->frame, x, y);
            int c0 = j * c->tree.b, c1 = std::min(c->tree.count[level - 1], c0 + c->tree.b);
            for (int k = c0; k < c1 && ok; ++k) self(self, level - 1, k, above);
        };
        rec(rec, c->tree.levels() - 1, 0, false);
        return ok;
    }

    // No object over q has an interval meeting [l, r].
    bool avoid(const Point& q, int l, int r) const {
        if (l > r) return true;
        const Cell* c = find(q);
        if (!c) return true;
        auto [a, b] = c->rr.query(l, r, nullptr);
        if (a > b) return true;
        int x = c->ax.slot(q.x), y = c->ay.slot(q.y);
        bool ok = true;
        auto rec = [&](auto&& self, int level, int j) -> void {
            if (!ok) return;
            auto [lo, hi] = c->tree.range(level, j);
            if (hi < a || lo > b) return;
            int id = c->tree.id(level, j);
            if (a <= lo && hi <= b) {
                if (c->sub[id].covers(c->frame, x, y)) ok = false;
                return;
            }
            if (c->own[id].covers(c->frame, x, y)) {
                ok = false;
                return;
            }
            int c0 = j * c->tree.b, c1 = std::min(c->tree.count[level - 1], c0 + c->tree.b);
            for (int k = c0; k < c1 && ok; ++k) self(self, level - 1, k);
        };
        rec(rec, c->tree.levels() - 1, 0);
        return ok;
    }

private:
    struct Cell {
        RankReduction rr;
        detail::CanonicalTree tree;
        detail::SlotAxis ax, ay;
        detail::OrthantFrame frame;
        std::vector<detail::OrthantUnion> own, sub;
        std::vector<detail::RectStab> z;
    };

    int64_t axis_cell(double v) const { return static_cast<int64_t>(std::floor(v / G_)); }
    const Cell* find(const Point& q) const {
        auto it = cells_.find({axis_cell(q.x), axis_cell(q.y)});
        return it == cells_.end() ? nullptr : it->second.get();
    }

    void build_cell(Cell& c, CellIndex cell, const std::vector<int>& ids, const std::vector<UnitSquareObject>& objs,
                    const std::vector<std::array<double, 4>>& reach) {
        // Within the cell a coordinate v satisfies cell*G <= v < (cell+1)*G up to
        // rounding, and every reach span is longer than G by a relative 1e-6,
        // so at most one bound per axis can cut the cell.
        double x0 = static_cast<double>(cell.ix) * G_, y0 = static_cast<double>(cell.iy) * G_;
        struct Orth {
            int obj;
            double tx, ty;  // threshold or NaN when the axis is unconstrained
            bool xge, yge;  // true: v >= t, false: v <= t
        };
        std::vector<Orth> orth;
        std::vector<IntervalObject<int>> ivs;
        for (int i : ids) {
            const auto& rc = reach[i];
            Orth o{i, std::nan(""), std::nan(""), true, true};
            if (rc[0] > x0) o.tx = rc[0];
            else if (rc[1] < x0 + G_) {
                o.tx = rc[1];
                o.xge = false;
            }
            if (rc[2] > y0) o.ty = rc[2];
            else if (rc[3] < y0 + G_) {
                o.ty = rc[3];
                o.yge = false;
            }
            if (!std::isnan(o.tx)) c.ax.t.push_back(o.tx);
            if (!std::isnan(o.ty)) c.ay.t.push_back(o.ty);
            orth.push_back(o);
            ivs.push_back({i, objs[i].lo, objs[i].hi});
        }
        for (auto* t : {&c.ax.t, &c.ay.t}) {
            std::sort(t->begin(), t->end());
            t->erase(std::unique(t->begin(), t->end()), t->end());
        }
        c.frame = {c.ax.max_slot(), c.ay.max_slot()};
        c.rr = RankReduction(ivs);
        c.tree = detail::CanonicalTree(c.rr.segments(), base_);
        int N = c.tree.nodes();
        std::vector<std::vector<std::pair<int, int>>> own_pts(static_cast<size_t>(N) * 4);
        for (auto& o : orth) {
            // slot-space orthant, oriented so it reads {x >= a, y >= b} after the flip
            int type = (o.xge ? 0 : 1) | (o.yge ? 0 : 2);
            int a = std::isnan(o.tx) ? 0 : c.ax.of_threshold(o.tx);
            int bb = std::isnan(o.ty) ? 0 : c.ay.of_threshold(o.ty);
            if (!o.xge) a = std::isnan(o.tx) ? 0 : c.frame.X - a;
            if (!o.yge) bb = std::isnan(o.ty) ? 0 : c.frame.Y - bb;
            auto [sa, sb] = c.rr.stored(objs[o.obj].lo, objs[o.obj].hi);
            c.tree.decompose(sa, sb, [&](int level, int j) {
                own_pts[static_cast<size_t>(c.tree.id(level, j)) * 4 + type].push_back({a, bb});
            });
            ++stats_.orthants;
        }
        c.own.resize(N);
        c.sub.resize(N);
        c.z.resize(N);
        std::vector<std::vector<std::pair<int, int>>> sub_pts(static_cast<size_t>(N) * 4);
        detail::SlotRect whole{0, c.frame.X, 0, c.frame.Y};
        std::vector<std::vector<detail::SlotRect>> zr(N);
        for (int level = 0; level < c.tree.levels(); ++level) {
            for (int j = 0; j < c.tree.count[level]; ++j) {
                int id = c.tree.id(level, j);
                for (int t = 0; t < 4; ++t) {
                    auto& mine = own_pts[static_cast<size_t>(id) * 4 + t];
                    auto& acc = sub_pts[static_cast<size_t>(id) * 4 + t];
                    acc.insert(acc.end(), mine.begin(), mine.end());
                    c.own[id].st[t] = detail::Staircase(mine);
                    c.sub[id].st[t] = detail::Staircase(acc);
                    stats_.staircase_steps += static_cast<long long>(c.own[id].st[t].steps());
                    // the subtree union only needs its staircase corners upstream
                    acc.clear();
                    acc.shrink_to_fit();
                }
                std::vector<detail::SlotRect> in;
                if (level == 0) in.push_back(whole);
                else {
                    int c0 = j * c.tree.b, c1 = std::min(c.tree.count[level - 1], c0 + c.tree.b);
                    for (int k = c0; k < c1; ++k) {
                        auto& child = zr[c.tree.id(level - 1, k)];
                        in.insert(in.end(), child.begin(), child.end());
                        child.clear();
                        child.shrink_to_fit();
                    }
                }
                zr[id] = c.own[id].carve(c.frame, std::move(in));
                dedupe(zr[id]);
                stats_.rectangles += static_cast<long long>(zr[id].size());
                c.z[id] = detail::RectStab(zr[id]);
                if (level + 1 < c.tree.levels()) {
                    int parent = c.tree.id(level + 1, j / c.tree.b);
                    for (int t = 0; t < 4; ++t) {
                        auto& dst = sub_pts[static_cast<size_t>(parent) * 4 + t];
                        for (auto& pt : c.sub[id].st[t].corners()) dst.push_back(pt);
                    }
                }
            }
        }
        stats_.nodes += N;
    }

    static void dedupe(std::vector<detail::SlotRect>& v) {
        // drop rectangles contained in another one
        if (v.size() < 2) return;
        std::sort(v.begin(), v.end(), [](const detail::SlotRect& a, const detail::SlotRect& b) {
            long long A = 1LL * (a.x2 - a.x1 + 1) * (a.y2 - a.y1 + 1), B = 1LL * (b.x2 - b.x1 + 1) * (b.y2 - b.y1 + 1);
            return A > B;
        });
        std::vector<detail::SlotRect> keep;
        for (auto& r : v) {
            bool inside = false;
            for (auto& k : keep)
                if (k.x1 <= r.x1 && r.x2 <= k.x2 && k.y1 <= r.y1 && r.y2 <= k.y2) {
                    inside = true;
                    break;
                }
            if (!inside) keep.push_back(r);
            if (keep.size() > 64) {
                // containment checks only pay off on short lists
                keep.insert(keep.end(), &r + 1, v.data() + v.size());
                break;
            }
        }
        v.swap(keep);
    }

    double R_ = 1, G_ = 2;
    int base_ = 2;
    RankReduction rr_;
    std::unordered_map<CellIndex, std::unique_ptr<Cell>, CellHash> cells_;
    UnitSquareStats stats_;
};

inline UnitSquareCoverDS unitsquare_cover_build(const std::vector<UnitSquareObject>& objs, double half_side, int base = 0) {
    return UnitSquareCoverDS(objs, half_side, base);
}
inline bool unitsquare_cover_query(const UnitSquareCoverDS& ds, const Point& q, int l, int r) { return ds.cover(q, l, r); }
inline bool unitsquare_avoid_query(const UnitSquareCoverDS& ds, const Point& q, int l, int r) { return ds.avoid(q, l, r); }

inline IntervalRep interval_search(const UnitSquareCoverDS& ds, const Point& q, uint64_t path_id, long long* probes = nullptr) {
    return interval_search(
        ds.ranks(), q, [&](const Point& s, int l, int r) { return ds.cover(s, l, r); },
        [&](const Point& s, int l, int r) { return ds.avoid(s, l, r); }, path_id, probes);
}

}  // namespace sqd
