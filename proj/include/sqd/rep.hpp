#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sqd {

struct Interval {
    int lo = 0, hi = -1;  // inclusive positions
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

// An ordering of a ground set of element ids (drawn from a universe 0..U-1)
// plus the contiguous classes it respects. Class identity is the smallest
// element id of the class, so two paths over the same partition agree on it.
struct StabbingPath {
    uint64_t id = 0;
    std::vector<int> order;        // position -> element
    std::vector<int> pos;          // element -> position, -1 when not in the ground set
    std::vector<int> class_at;     // position -> class index
    std::vector<int> class_begin;  // class index -> first position; size classes + 1
    std::vector<int> class_rep;    // class index -> smallest element of the class
    std::vector<int> sample;       // sampled set indices that produced the classes

    int size() const { return static_cast<int>(order.size()); }
    int classes() const { return static_cast<int>(class_rep.size()); }
    bool has(int x) const { return x >= 0 && x < static_cast<int>(pos.size()) && pos[x] >= 0; }
};

inline uint64_t next_path_id() {
    static std::atomic<uint64_t> counter{1};
    return counter.fetch_add(1);
}

// Builds the index arrays for an order whose class labels (any integers) are
// contiguous. Throws if a class appears in two runs.
inline StabbingPath make_path(std::vector<int> order, const std::vector<int>& label_at, int universe) {
    StabbingPath p;
    p.id = next_path_id();
    p.order = std::move(order);
    p.pos.assign(universe, -1);
    for (int i = 0; i < p.size(); ++i) {
        int x = p.order[i];
        if (x < 0 || x >= universe || p.pos[x] >= 0) throw std::invalid_argument("make_path: bad or repeated element");
        p.pos[x] = i;
    }
    p.class_at.assign(p.size(), 0);
    std::vector<int> seen_labels;
    for (int i = 0; i < p.size(); ++i) {
        if (i == 0 || label_at[i] != label_at[i - 1]) {
            p.class_begin.push_back(i);
            p.class_rep.push_back(p.order[i]);
            seen_labels.push_back(label_at[i]);
        }
        p.class_at[i] = p.classes() - 1;
        p.class_rep.back() = std::min(p.class_rep.back(), p.order[i]);
    }
    p.class_begin.push_back(p.size());
    std::sort(seen_labels.begin(), seen_labels.end());
    if (std::adjacent_find(seen_labels.begin(), seen_labels.end()) != seen_labels.end())
        throw std::invalid_argument("make_path: class is not contiguous");
    return p;
}

// Identity-like path with every element in one class.
inline StabbingPath trivial_path(const std::vector<int>& order, int universe) {
    return make_path(order, std::vector<int>(order.size(), 0), universe);
}

struct IntervalRep {
    uint64_t path = 0;
    std::vector<Interval> iv;

    bool empty() const { return iv.empty(); }
    size_t count() const { return iv.size(); }
    long long elements() const {
        long long s = 0;
        for (auto& i : iv) s += i.hi - i.lo + 1;
        return s;
    }
    bool operator==(const IntervalRep& o) const { return path == o.path && iv == o.iv; }
};

inline void check_same(const IntervalRep& a, const IntervalRep& b) {
    if (a.path != b.path) throw std::invalid_argument("interval reps over different paths");
}
inline void check_on(const IntervalRep& a, const StabbingPath& p) {
    if (a.path != p.id) throw std::invalid_argument("interval rep does not belong to this path");
}

// Sorted positions -> maximal runs.
inline IntervalRep rep_from_positions(std::vector<int> ps, uint64_t path) {
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    IntervalRep r;
    r.path = path;
    for (int x : ps) {
        if (!r.iv.empty() && r.iv.back().hi + 1 == x) r.iv.back().hi = x;
        else r.iv.push_back({x, x});
    }
    return r;
}

// Elements outside the path's ground set are ignored.
inline IntervalRep make_rep(const std::vector<int>& elements, const StabbingPath& p) {
    std::vector<int> ps;
    ps.reserve(elements.size());
    for (int x : elements)
        if (p.has(x)) ps.push_back(p.pos[x]);
    return rep_from_positions(std::move(ps), p.id);
}

inline IntervalRep empty_rep(const StabbingPath& p) { return IntervalRep{p.id, {}}; }

inline IntervalRep full_rep(const StabbingPath& p) {
    IntervalRep r{p.id, {}};
    if (p.size() > 0) r.iv.push_back({0, p.size() - 1});
    return r;
}

// Sorts runs and merges overlapping or touching ones into maximal runs.
inline void normalize(std::vector<Interval>& v) {
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    size_t k = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i].lo > v[i].hi) continue;
        if (k > 0 && v[i].lo <= v[k - 1].hi + 1) v[k - 1].hi = std::max(v[k - 1].hi, v[i].hi);
        else v[k++] = v[i];
    }
    v.resize(k);
}

inline IntervalRep union_reps(const std::vector<const IntervalRep*>& reps) {
    IntervalRep out;
    if (reps.empty()) return out;
    out.path = reps[0]->path;
    size_t total = 0;
    for (auto* r : reps) {
        check_same(*r, *reps[0]);
        total += r->iv.size();
    }
    out.iv.reserve(total);
    for (auto* r : reps) out.iv.insert(out.iv.end(), r->iv.begin(), r->iv.end());
    normalize(out.iv);
    return out;
}

inline IntervalRep union_reps(const std::vector<IntervalRep>& reps) {
    std::vector<const IntervalRep*> ptrs;
    for (auto& r : reps) ptrs.push_back(&r);
    return union_reps(ptrs);
}

inline IntervalRep union_reps(const IntervalRep& a, const IntervalRep& b) { return union_reps(std::vector<const IntervalRep*>{&a, &b}); }

inline IntervalRep subtract_rep(const IntervalRep& a, const IntervalRep& b) {
    check_same(a, b);
    IntervalRep out{a.path, {}};
    size_t j = 0;
    for (Interval x : a.iv) {
        int lo = x.lo;
        while (j < b.iv.size() && b.iv[j].hi < lo) ++j;
        size_t k = j;
        while (lo <= x.hi) {
            if (k >= b.iv.size() || b.iv[k].lo > x.hi) {
                out.iv.push_back({lo, x.hi});
                break;
            }
            if (b.iv[k].lo > lo) out.iv.push_back({lo, b.iv[k].lo - 1});
            lo = std::max(lo, b.iv[k].hi + 1);
            ++k;
        }
    }
    return out;
}

inline IntervalRep intersect_rep(const IntervalRep& a, const IntervalRep& b) {
    check_same(a, b);
    IntervalRep out{a.path, {}};
    size_t i = 0, j = 0;
    while (i < a.iv.size() && j < b.iv.size()) {
        int lo = std::max(a.iv[i].lo, b.iv[j].lo), hi = std::min(a.iv[i].hi, b.iv[j].hi);
        if (lo <= hi) out.iv.push_back({lo, hi});
        if (a.iv[i].hi < b.iv[j].hi) ++i;
        else ++j;
    }
    return out;
}

inline IntervalRep complement_rep(const IntervalRep& a, const StabbingPath& p) {
    check_on(a, p);
    return subtract_rep(full_rep(p), a);
}

inline bool is_full(const IntervalRep& a, const StabbingPath& p) {
    check_on(a, p);
    return p.size() == 0 ? a.iv.empty() : (a.iv.size() == 1 && a.iv[0].lo == 0 && a.iv[0].hi == p.size() - 1);
}

inline bool contains_pos(const IntervalRep& a, int position) {
    auto it = std::upper_bound(a.iv.begin(), a.iv.end(), position, [](int x, const Interval& i) { return x < i.lo; });
    if (it == a.iv.begin()) return false;
    --it;
    return position <= it->hi;
}

inline bool contains(const IntervalRep& a, const StabbingPath& p, int element) {
    check_on(a, p);
    return p.has(element) && contains_pos(a, p.pos[element]);
}

inline std::vector<int> materialize(const IntervalRep& a, const StabbingPath& p) {
    check_on(a, p);
    std::vector<int> out;
    for (auto i : a.iv)
        for (int x = i.lo; x <= i.hi; ++x) out.push_back(p.order[x]);
    std::sort(out.begin(), out.end());
    return out;
}

// Restriction of a path to a subset of its ground set, keeping the order.
// Classes are restricted as well; parent_prefix[i] counts kept positions
// before parent position i, which maps reps from the parent in O(|rep|).
struct RestrictedPath {
    StabbingPath path;
    std::vector<int> parent_prefix;
    uint64_t parent = 0;
};

template <class Keep>
RestrictedPath restrict_path(const StabbingPath& p, Keep&& keep) {
    RestrictedPath r;
    r.parent = p.id;
    r.parent_prefix.assign(p.size() + 1, 0);
    std::vector<int> order, labels;
    for (int i = 0; i < p.size(); ++i) {
        bool k = keep(p.order[i]);
        r.parent_prefix[i + 1] = r.parent_prefix[i] + (k ? 1 : 0);
        if (k) {
            order.push_back(p.order[i]);
            labels.push_back(p.class_at[i]);
        }
    }
    r.path = make_path(std::move(order), labels, static_cast<int>(p.pos.size()));
    r.path.sample = p.sample;
    return r;
}

inline IntervalRep restrict_rep(const IntervalRep& a, const RestrictedPath& r) {
    if (a.path != r.parent) throw std::invalid_argument("restrict_rep: rep is not over the parent path");
    IntervalRep out{r.path.id, {}};
    for (auto i : a.iv) {
        int lo = r.parent_prefix[i.lo], hi = r.parent_prefix[i.hi + 1] - 1;
        if (lo > hi) continue;
        if (!out.iv.empty() && out.iv.back().hi + 1 >= lo) out.iv.back().hi = hi;
        else out.iv.push_back({lo, hi});
    }
    return out;
}

}  // namespace sqd
