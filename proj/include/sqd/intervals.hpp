#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rep.hpp"

namespace sqd {

// A geometric object carrying one interval [lo, hi] of path positions.
template <class Obj>
struct IntervalObject {
    Obj obj;
    int lo = 0, hi = -1;
};

// Endpoint rank reduction. Breakpoints split the position line into
// elementary segments on which every stored interval is all-or-nothing.
class RankReduction {
public:
    RankReduction() = default;
    template <class Obj>
    explicit RankReduction(const std::vector<IntervalObject<Obj>>& objs) {
        for (auto& o : objs) {
            brk_.push_back(o.lo);
            brk_.push_back(o.hi + 1);
        }
        std::sort(brk_.begin(), brk_.end());
        brk_.erase(std::unique(brk_.begin(), brk_.end()), brk_.end());
    }
    int segments() const { return brk_.empty() ? 0 : static_cast<int>(brk_.size()) - 1; }
    int index(int pos) const { return static_cast<int>(std::lower_bound(brk_.begin(), brk_.end(), pos) - brk_.begin()); }
    // Segment range of a stored interval.
    std::pair<int, int> stored(int lo, int hi) const { return {index(lo), index(hi + 1) - 1}; }
    // Segments meeting [l, r], clipped to the covered span; `inside` tells
    // whether [l, r] lies within that span.
    std::pair<int, int> query(int l, int r, bool* inside) const {
        if (brk_.empty()) {
            if (inside) *inside = false;
            return {0, -1};
        }
        if (inside) *inside = l >= brk_.front() && r < brk_.back();
        int a = static_cast<int>(std::upper_bound(brk_.begin(), brk_.end(), l) - brk_.begin()) - 1;
        int b = static_cast<int>(std::upper_bound(brk_.begin(), brk_.end(), r) - brk_.begin()) - 1;
        a = std::max(a, 0);
        b = std::min(b, segments() - 1);
        return {a, b};
    }
    int start(int seg) const { return brk_[seg]; }
    int end(int seg) const { return brk_[seg + 1] - 1; }

private:
    std::vector<int> brk_;
};

// Default base of the canonical intervals: 2^ceil(sqrt(log2 N)).
inline int default_canonical_base(long long n) {
    double lg = std::log2(static_cast<double>(std::max<long long>(n, 2)));
    return 1 << static_cast<int>(std::ceil(std::sqrt(lg)));
}

namespace detail {

// Base-b canonical intervals over elementary segments [0, m): node (i, j)
// covers [j b^i, (j+1) b^i) clipped to m.
struct CanonicalTree {
    int m = 0, b = 2;
    std::vector<long long> width;  // b^i per level
    std::vector<int> first;        // id of node (i, 0)
    std::vector<int> count;        // nodes per level

    CanonicalTree() = default;
    CanonicalTree(int m_, int base) : m(m_), b(std::max(2, base)) {
        long long w = 1;
        int id = 0;
        while (true) {
            int c = static_cast<int>((m + w - 1) / w);
            width.push_back(w);
            first.push_back(id);
            count.push_back(c);
            id += c;
            if (c <= 1) break;
            w *= b;
        }
    }
    int levels() const { return static_cast<int>(width.size()); }
    int nodes() const { return first.empty() ? 0 : first.back() + count.back(); }
    int id(int level, int j) const { return first[level] + j; }
    int root() const { return id(levels() - 1, 0); }
    std::pair<int, int> range(int level, int j) const {
        long long lo = j * width[level];
        return {static_cast<int>(lo), static_cast<int>(std::min<long long>(m, lo + width[level]) - 1)};
    }
    // Canonical pieces of [a, b] as (level, j).
    template <class F>
    void decompose(int a, int bb, F&& f) const {
        if (m <= 0 || a > bb) return;
        auto rec = [&](auto&& self, int level, int j) -> void {
            auto [lo, hi] = range(level, j);
            if (hi < a || lo > bb) return;
            if (a <= lo && hi <= bb) {
                f(level, j);
                return;
            }
            int c0 = j * b, c1 = std::min(count[level - 1], c0 + b);
            for (int c = c0; c < c1; ++c) self(self, level - 1, c);
        };
        rec(rec, levels() - 1, 0);
    }
};


// Segment tree over [0, m) whose canonical nodes each own a Hit structure.
template <class Obj, class Hit>
class CanonicalHitTree {
public:
    CanonicalHitTree() = default;
    // items: (object, [a, b]) inserted into the canonical nodes of [a, b].
    CanonicalHitTree(int m, const std::vector<std::pair<const Obj*, std::pair<int, int>>>& items, bool eager = false) : m_(m) {
        if (m_ <= 0) return;
        size_ = 1;
        while (size_ < m_) size_ *= 2;
        std::vector<std::vector<Obj>> bucket(2 * size_);
        for (auto& [o, ab] : items) {
            if (ab.first > ab.second) continue;
            insert(bucket, 1, 0, size_ - 1, ab.first, ab.second, *o);
        }
        hit_.resize(2 * size_);
        for (int i = 1; i < 2 * size_; ++i)
            if (!bucket[i].empty()) hit_[i] = std::make_unique<Hit>(bucket[i], eager);
    }
    // Any object stored on the root-to-leaf path of position a meets q.
    template <class Q>
    bool stab(const Q& q, int a) const {
        if (m_ <= 0 || a < 0 || a >= m_) return false;
        int node = 1, lo = 0, hi = size_ - 1;
        while (true) {
            if (hit_[node] && hit_[node]->any(q)) return true;
            if (lo == hi) return false;
            int mid = (lo + hi) / 2;
            if (a <= mid) node = 2 * node, hi = mid;
            else node = 2 * node + 1, lo = mid + 1;
        }
    }

private:
    void insert(std::vector<std::vector<Obj>>& bucket, int node, int lo, int hi, int a, int b, const Obj& o) {
        if (b < lo || hi < a) return;
        if (a <= lo && hi <= b) {
            bucket[node].push_back(o);
            return;
        }
        int mid = (lo + hi) / 2;
        insert(bucket, 2 * node, lo, mid, a, b, o);
        insert(bucket, 2 * node + 1, mid + 1, hi, a, b, o);
    }
    int m_ = 0, size_ = 0;
    std::vector<std::unique_ptr<Hit>> hit_;
};

// Range tree over sorted keys: each node owns a Hit over the objects whose
// key falls in it; a key range is answered by O(log) node probes.
template <class Obj, class Hit>
class KeyRangeHitTree {
public:
    KeyRangeHitTree() = default;
    explicit KeyRangeHitTree(std::vector<std::pair<int, const Obj*>> keyed, bool eager = false) : eager_(eager) {
        std::sort(keyed.begin(), keyed.end(), [](auto& a, auto& b) { return a.first < b.first; });
        n_ = static_cast<int>(keyed.size());
        if (n_ == 0) return;
        for (auto& k : keyed) keys_.push_back(k.first);
        size_ = 1;
        while (size_ < n_) size_ *= 2;
        hit_.resize(2 * size_);
        build(keyed, 1, 0, size_ - 1);
    }
    template <class Q>
    bool any(const Q& q, int a, int b) const {
        if (n_ == 0 || a > b) return false;
        int i = static_cast<int>(std::lower_bound(keys_.begin(), keys_.end(), a) - keys_.begin());
        int j = static_cast<int>(std::upper_bound(keys_.begin(), keys_.end(), b) - keys_.begin()) - 1;
        if (i > j) return false;
        return probe(q, 1, 0, size_ - 1, i, j);
    }

private:
    void build(const std::vector<std::pair<int, const Obj*>>& keyed, int node, int lo, int hi) {
        if (lo >= n_) return;
        std::vector<Obj> objs;
        for (int i = lo; i <= std::min(hi, n_ - 1); ++i) objs.push_back(*keyed[i].second);
        hit_[node] = std::make_unique<Hit>(objs, eager_);
        if (lo == hi) return;
        int mid = (lo + hi) / 2;
        build(keyed, 2 * node, lo, mid);
        build(keyed, 2 * node + 1, mid + 1, hi);
    }
    template <class Q>
    bool probe(const Q& q, int node, int lo, int hi, int a, int b) const {
        if (b < lo || hi < a || !hit_[node]) return false;
        if (a <= lo && hi <= b) return hit_[node]->any(q);
        int mid = (lo + hi) / 2;
        return probe(q, 2 * node, lo, mid, a, b) || probe(q, 2 * node + 1, mid + 1, hi, a, b);
    }
    int n_ = 0, size_ = 0;
    bool eager_ = false;
    std::vector<int> keys_;
    std::vector<std::unique_ptr<Hit>> hit_;
};

}  // namespace detail

// Interval avoidance: avoid(q, I) is true iff no object meeting q carries an
// interval that meets I. An interval meets I = [l, r] iff one of its
// endpoints lies in I or it contains l.
template <class Obj, class Hit>
class AvoidDS {
public:
    AvoidDS() = default;
    explicit AvoidDS(const std::vector<IntervalObject<Obj>>& objs, bool eager = false) : rr_(objs) {
        std::vector<IntervalObject<Obj>> kept;
        for (auto& o : objs)
            if (o.lo <= o.hi) kept.push_back(o);
        objs_ = kept;
        std::vector<std::pair<int, const Obj*>> ends;
        std::vector<std::pair<const Obj*, std::pair<int, int>>> spans;
        for (auto& o : objs_) {
            auto [a, b] = rr_.stored(o.lo, o.hi);
            ends.push_back({a, &o.obj});
            if (b != a) ends.push_back({b, &o.obj});
            spans.push_back({&o.obj, {a, b}});
        }
        ends_ = detail::KeyRangeHitTree<Obj, Hit>(std::move(ends), eager);
        stab_ = detail::CanonicalHitTree<Obj, Hit>(rr_.segments(), spans, eager);
    }
    template <class Q>
    bool query(const Q& q, int l, int r) const {
        if (l > r || objs_.empty()) return true;
        auto [a, b] = rr_.query(l, r, nullptr);
        if (a > b) return true;
        if (ends_.any(q, a, b)) return false;
        return !stab_.stab(q, a);
    }
    const RankReduction& ranks() const { return rr_; }

private:
    RankReduction rr_;
    std::vector<IntervalObject<Obj>> objs_;
    detail::KeyRangeHitTree<Obj, Hit> ends_;
    detail::CanonicalHitTree<Obj, Hit> stab_;
};

// Interval cover with block reduction. Elementary segments are grouped in
// blocks of b. For a block, category-1 objects carry an interval spanning the
// whole block, category-2 objects cover part of it. A block is covered for q
// iff q meets a category-1 object or meets, for every segment of the block, a
// category-2 object holding it (a rainbow query with segments as colors).
// Segments of partially queried blocks are checked one by one.
template <class Obj, class Hit, class Rainbow>
class CoverDS {
public:
    CoverDS() = default;
    CoverDS(const std::vector<IntervalObject<Obj>>& objs, int block, bool eager = false) : rr_(objs) {
        if (block < 1) throw std::invalid_argument("cover: block size must be positive");
        b_ = block;
        for (auto& o : objs)
            if (o.lo <= o.hi) objs_.push_back(o);
        int m = rr_.segments();
        nblocks_ = m == 0 ? 0 : (m + b_ - 1) / b_;
        std::vector<std::pair<const Obj*, std::pair<int, int>>> full;
        std::vector<std::vector<std::pair<const Obj*, std::pair<int, int>>>> part(nblocks_);
        for (auto& o : objs_) {
            auto [a, c] = rr_.stored(o.lo, o.hi);
            int B1 = a / b_, B2 = c / b_;
            for (int B : {B1, B2}) {
                int s = B * b_, e = std::min(m, (B + 1) * b_) - 1;
                bool whole = a <= s && c >= e;
                if (!whole) part[B].push_back({&o.obj, {std::max(a, s), std::min(c, e)}});
                if (B1 == B2) break;
            }
            int f1 = (a % b_ == 0) ? B1 : B1 + 1;
            int f2 = (c == std::min(m, (B2 + 1) * b_) - 1) ? B2 : B2 - 1;
            if (f1 <= f2) full.push_back({&o.obj, {f1, f2}});
        }
        cat1_ = detail::CanonicalHitTree<Obj, Hit>(nblocks_, full, eager);
        elem_.resize(m);
        block_rainbow_.resize(nblocks_);
        for (int B = 0; B < nblocks_; ++B) {
            int s = B * b_, e = std::min(m, (B + 1) * b_) - 1;
            std::vector<std::vector<Obj>> per(e - s + 1);
            std::vector<Obj> rain;
            std::vector<int> colors;
            for (auto& [o, ab] : part[B])
                for (int j = ab.first; j <= ab.second; ++j) {
                    per[j - s].push_back(*o);
                    rain.push_back(*o);
                    colors.push_back(j - s);
                }
            bool dense = true;
            for (int j = s; j <= e; ++j) {
                if (per[j - s].empty()) dense = false;
                else elem_[j] = std::make_unique<Hit>(per[j - s], eager);
            }
            if (dense) block_rainbow_[B] = std::make_unique<Rainbow>(rain, colors, eager);
        }
    }

    template <class Q>
    bool query(const Q& q, int l, int r) const {
        if (l > r) return true;
        bool inside = false;
        auto [a, c] = rr_.query(l, r, &inside);
        if (!inside) return false;
        int B1 = a / b_, B2 = c / b_;
        for (int B = B1; B <= B2; ++B) {
            int s = std::max(a, B * b_), e = std::min(c, std::min(rr_.segments(), (B + 1) * b_) - 1);
            bool whole = s == B * b_ && e == std::min(rr_.segments(), (B + 1) * b_) - 1;
            if (cat1_.stab(q, B)) continue;
            if (whole) {
                if (!block_rainbow_[B] || !block_rainbow_[B]->query(q)) return false;
                continue;
            }
            for (int j = s; j <= e; ++j)
                if (!elem_[j] || !elem_[j]->any(q)) return false;
        }
        return true;
    }
    const RankReduction& ranks() const { return rr_; }
    int block() const { return b_; }

private:
    RankReduction rr_;
    int b_ = 1, nblocks_ = 0;
    std::vector<IntervalObject<Obj>> objs_;
    detail::CanonicalHitTree<Obj, Hit> cat1_;
    std::vector<std::unique_ptr<Hit>> elem_;
    std::vector<std::unique_ptr<Rainbow>> block_rainbow_;
};

// Dyadic interval searching over elementary segments: a node is skipped when
// avoided, emitted when covered, split otherwise. Returns the union of the
// intervals of all objects meeting q as an interval representation.
template <class Q, class CoverFn, class AvoidFn>
IntervalRep interval_search(const RankReduction& rr, const Q& q, CoverFn&& cover, AvoidFn&& avoid, uint64_t path_id,
                            long long* probes = nullptr) {
    IntervalRep out{path_id, {}};
    int m = rr.segments();
    if (m <= 0) return out;
    long long count = 0;
    auto rec = [&](auto&& self, int a, int b) -> void {
        int l = rr.start(a), r = rr.end(b);
        ++count;
        if (avoid(q, l, r)) return;
        ++count;
        if (cover(q, l, r)) {
            if (!out.iv.empty() && out.iv.back().hi + 1 == l) out.iv.back().hi = r;
            else out.iv.push_back({l, r});
            return;
        }
        if (a == b) return;
        int mid = (a + b) / 2;
        self(self, a, mid);
        self(self, mid + 1, b);
    };
    rec(rec, 0, m - 1);
    if (probes) *probes += count;
    return out;
}

}  // namespace sqd
