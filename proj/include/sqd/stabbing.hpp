#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rep.hpp"

namespace sqd {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Uniform [0,1) coin for a set identity. Coins only depend on (seed, key), so
// restricting a sample to a subcollection gives the sample the subcollection
// would have drawn itself.
inline double set_coin(uint64_t seed, uint64_t key) {
    return static_cast<double>(splitmix64(splitmix64(seed) ^ key) >> 11) * 0x1.0p-53;
}

// Inclusion probability of a set standing for `copies` identical sets.
inline double sample_probability(double rho, double m, double copies = 1.0) {
    if (m <= 0) return 1.0;
    double p = std::clamp(rho / m, 0.0, 1.0);
    if (copies == 1.0) return p;
    return 1.0 - std::pow(1.0 - p, copies);
}

inline std::vector<int> rho_sample(int m, double rho, uint64_t seed) {
    if (!(rho >= 1) || rho > m) throw std::invalid_argument("rho_sample: rho must lie in [1, m]");
    std::vector<int> out;
    double p = sample_probability(rho, m);
    for (int i = 0; i < m; ++i)
        if (set_coin(seed, static_cast<uint64_t>(i)) < p) out.push_back(i);
    return out;
}

// A set system given through an element reporting oracle. Sets are indexed
// 0..count-1; `key` gives the identity used for sampling and `weight` the
// number of copies a set stands for. `report` receives a batch of set indices
// so that callers can share work between sets (all radii of one BFS, say).
struct SetSystem {
    int universe = 0;
    std::vector<int> ground;
    size_t count = 0;
    double m = 0;  // total weight; kept fixed when the system is restricted
    int dual_dim = 2;
    std::function<double(size_t)> weight;
    std::function<uint64_t(size_t)> key;
    std::function<void(const std::vector<size_t>&, const std::function<void(size_t, const std::vector<int>&)>&)> report;

    double w(size_t i) const { return weight ? weight(i) : 1.0; }
    uint64_t k(size_t i) const { return key ? key(i) : static_cast<uint64_t>(i); }
};

inline SetSystem explicit_system(int universe, std::vector<int> ground, std::vector<std::vector<int>> sets, int d) {
    SetSystem s;
    s.universe = universe;
    s.ground = std::move(ground);
    s.count = sets.size();
    s.m = static_cast<double>(sets.size());
    s.dual_dim = d;
    auto shared = std::make_shared<std::vector<std::vector<int>>>(std::move(sets));
    s.report = [shared](const std::vector<size_t>& ids, const std::function<void(size_t, const std::vector<int>&)>& f) {
        for (size_t i : ids) f(i, (*shared)[i]);
    };
    return s;
}

struct StabbingOptions {
    double c = 8.0;         // Las Vegas constant
    int max_attempts = 10;
    bool las_vegas = true;  // off: keep the first sample whatever its quality
    int probes = 64;        // held-out random sets in the quality estimate
    int max_depth = 40;
};

struct StabbingResult {
    StabbingPath path;
    int attempts = 0;
    double estimate = 0;   // estimated total interval count over all sets
    double threshold = 0;
    uint64_t seed = 0;     // seed of the accepted sample
};

struct RetryExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<size_t> sampled_sets(const SetSystem& s, double rho, uint64_t seed) {
    std::vector<size_t> out;
    for (size_t i = 0; i < s.count; ++i)
        if (set_coin(seed, s.k(i)) < sample_probability(rho, s.m, s.w(i))) out.push_back(i);
    return out;
}

// Orders `elems` (sorted ids) and labels each position with its class under
// the sample drawn with (rho, seed). Lower levels recurse on one
// representative per class.
inline void order_level(const SetSystem& s, const std::vector<int>& elems, double rho, uint64_t seed, int depth,
                        const StabbingOptions& opt, std::vector<int>& order, std::vector<int>& labels,
                        std::vector<int>* top_sample) {
    int k = static_cast<int>(elems.size());
    order.clear();
    labels.clear();
    if (k == 0) return;
    std::vector<int> local(s.universe, -1);
    for (int i = 0; i < k; ++i) local[elems[i]] = i;
    auto sample = sampled_sets(s, rho, seed);
    if (top_sample) top_sample->assign(sample.begin(), sample.end());
    std::vector<std::vector<int>> sig(k);
    {
        // set index -> ordinal in the sample
        std::vector<std::pair<size_t, int>> idx;
        for (size_t j = 0; j < sample.size(); ++j) idx.push_back({sample[j], static_cast<int>(j)});
        std::sort(idx.begin(), idx.end());
        s.report(sample, [&](size_t set, const std::vector<int>& members) {
            auto it = std::lower_bound(idx.begin(), idx.end(), std::make_pair(set, -1));
            int j = it->second;
            for (int x : members)
                if (x >= 0 && x < s.universe && local[x] >= 0) sig[local[x]].push_back(j);
        });
    }
    for (auto& v : sig) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    std::vector<int> by_sig(k);
    std::iota(by_sig.begin(), by_sig.end(), 0);
    std::stable_sort(by_sig.begin(), by_sig.end(), [&](int a, int b) { return sig[a] < sig[b]; });
    std::vector<int> class_start;
    for (int i = 0; i < k; ++i)
        if (i == 0 || sig[by_sig[i]] != sig[by_sig[i - 1]]) class_start.push_back(i);
    int classes = static_cast<int>(class_start.size());
    class_start.push_back(k);
    // representative = smallest id (by_sig is stable on sorted elems)
    std::vector<int> reps(classes);
    for (int c = 0; c < classes; ++c) reps[c] = elems[by_sig[class_start[c]]];

    std::vector<int> class_order(classes);
    std::iota(class_order.begin(), class_order.end(), 0);  // signature order
    if (classes > 2 && depth < opt.max_depth) {
        double rho2 = std::pow(static_cast<double>(classes), 1.0 / std::max(1, s.dual_dim));
        if (classes == k) rho2 = std::min(rho2, rho / 2);
        std::vector<int> sorted_reps = reps;
        std::sort(sorted_reps.begin(), sorted_reps.end());
        std::vector<int> sub_order, sub_labels;
        order_level(s, sorted_reps, rho2, splitmix64(seed + 0x51ED), depth + 1, opt, sub_order, sub_labels, nullptr);
        std::vector<int> rank(s.universe, -1);
        for (int i = 0; i < static_cast<int>(sub_order.size()); ++i) rank[sub_order[i]] = i;
        std::sort(class_order.begin(), class_order.end(), [&](int a, int b) { return rank[reps[a]] < rank[reps[b]]; });
    }
    for (int c : class_order)
        for (int i = class_start[c]; i < class_start[c + 1]; ++i) {
            order.push_back(elems[by_sig[i]]);
            labels.push_back(c);
        }
}

}  // namespace detail

// Interval count of every given set (elements outside the path are ignored).
struct CrossingMeasure {
    long long total = 0;
    long long max = 0;
    double weighted_total = 0;
};

inline CrossingMeasure measure_crossing(const StabbingPath& p, const std::vector<std::vector<int>>& sets,
                                        const std::vector<double>* weights = nullptr) {
    CrossingMeasure m;
    for (size_t i = 0; i < sets.size(); ++i) {
        long long c = static_cast<long long>(make_rep(sets[i], p).count());
        m.total += c;
        m.max = std::max(m.max, c);
        m.weighted_total += c * (weights ? (*weights)[i] : 1.0);
    }
    return m;
}

inline CrossingMeasure measure_crossing(const StabbingPath& p, const SetSystem& s) {
    CrossingMeasure m;
    std::vector<size_t> all(s.count);
    std::iota(all.begin(), all.end(), 0);
    s.report(all, [&](size_t i, const std::vector<int>& members) {
        long long c = static_cast<long long>(make_rep(members, p).count());
        m.total += c;
        m.max = std::max(m.max, c);
        m.weighted_total += c * s.w(i);
    });
    return m;
}

inline double stabbing_threshold(double m, double n, double rho, int d, double c = 8.0) {
    double lg = std::log(std::max(n, 2.0));
    return c * (m * n / rho + m * std::pow(rho, d - 1)) * lg * lg;
}

// Builds an R-respecting stabbing path for the system. With las_vegas on,
// the interval count is estimated from the sampled sets plus random probe
// sets and the sample is redrawn (next seed) while the estimate exceeds the
// threshold; after max_attempts a RetryExhausted is thrown.
inline StabbingResult build_stabbing_path(const SetSystem& s, double rho, uint64_t seed,
                                          const StabbingOptions& opt = {}) {
    if (!(rho > 0)) throw std::invalid_argument("build_stabbing_path: rho must be positive");
    std::vector<int> ground = s.ground;
    std::sort(ground.begin(), ground.end());
    StabbingResult res;
    res.threshold = stabbing_threshold(s.m, static_cast<double>(ground.size()), rho, s.dual_dim, opt.c);
    for (int attempt = 0; attempt < std::max(1, opt.max_attempts); ++attempt) {
        uint64_t sd = attempt == 0 ? seed : splitmix64(seed + 0x9E37ull * attempt);
        std::vector<int> order, labels, sample;
        detail::order_level(s, ground, rho, sd, 0, opt, order, labels, &sample);
        res.path = make_path(std::move(order), labels, s.universe);
        res.path.sample = sample;
        res.attempts = attempt + 1;
        res.seed = sd;
        if (!opt.las_vegas || s.count == 0) return res;
        std::vector<size_t> probe(sample.begin(), sample.end());
        uint64_t ps = splitmix64(sd ^ 0xABCDEF);
        for (int i = 0; i < opt.probes; ++i) probe.push_back(splitmix64(ps + i) % s.count);
        std::sort(probe.begin(), probe.end());
        probe.erase(std::unique(probe.begin(), probe.end()), probe.end());
        double wsum = 0, csum = 0;
        s.report(probe, [&](size_t i, const std::vector<int>& members) {
            wsum += s.w(i);
            csum += s.w(i) * static_cast<double>(make_rep(members, res.path).count());
        });
        res.estimate = wsum > 0 ? csum / wsum * s.m : 0;
        if (res.estimate <= res.threshold) return res;
    }
    throw RetryExhausted("stabbing path quality check failed after " + std::to_string(opt.max_attempts) + " attempts");
}

// True when every class of `classes` (as a partition given by a path) is a
// contiguous block of p.
inline bool respects(const StabbingPath& p, const StabbingPath& classes) {
    if (p.size() != classes.size()) return false;
    std::vector<int> last(classes.classes(), -2);
    int runs = 0;
    for (int i = 0; i < p.size(); ++i) {
        int x = p.order[i];
        if (!classes.has(x)) return false;
        int c = classes.class_at[classes.pos[x]];
        if (i == 0 || last[c] != i - 1) ++runs;
        last[c] = i;
    }
    return runs == classes.classes();
}

// Rep of S in `from` -> rep of S in `to`, where both paths keep the classes
// of the same sample contiguous. Per class only the members that disagree
// with the class representative are touched.
inline IntervalRep convert_rep(const IntervalRep& a, const StabbingPath& from, const StabbingPath& to) {
    check_on(a, from);
    if (from.classes() != to.classes() || from.size() != to.size())
        throw std::invalid_argument("convert_rep: paths do not share their classes");
    IntervalRep out{to.id, {}};
    std::vector<int> exc;
    size_t j = 0;
    int c = a.iv.empty() ? from.classes() : from.class_at[a.iv[0].lo];
    while (c < from.classes()) {
        int b0 = from.class_begin[c], b1 = from.class_begin[c + 1] - 1;
        int x = from.class_rep[c];
        if (!to.has(x)) throw std::invalid_argument("convert_rep: element missing from target path");
        int tc = to.class_at[to.pos[x]];
        if (to.class_rep[tc] != x) throw std::invalid_argument("convert_rep: class partitions differ");
        int t0 = to.class_begin[tc], t1 = to.class_begin[tc + 1] - 1;
        if (t1 - t0 != b1 - b0) throw std::invalid_argument("convert_rep: class partitions differ");
        bool in = contains_pos(a, from.pos[x]);
        exc.clear();
        // walk the covered runs inside [b0, b1]
        size_t k = j;
        int cur = b0;
        while (k < a.iv.size() && a.iv[k].lo <= b1) {
            int lo = std::max(a.iv[k].lo, b0), hi = std::min(a.iv[k].hi, b1);
            if (lo <= hi) {
                if (in)
                    for (int p = cur; p < lo; ++p) exc.push_back(to.pos[from.order[p]]);
                else
                    for (int p = lo; p <= hi; ++p) exc.push_back(to.pos[from.order[p]]);
                cur = hi + 1;
            }
            if (a.iv[k].hi <= b1) ++k;
            else break;
        }
        if (in)
            for (int p = cur; p <= b1; ++p) exc.push_back(to.pos[from.order[p]]);
        std::sort(exc.begin(), exc.end());
        if (!exc.empty() && (exc.front() < t0 || exc.back() > t1))
            throw std::invalid_argument("convert_rep: class partitions differ");
        if (in) {
            int lo = t0;
            for (int p : exc) {
                if (p > lo) out.iv.push_back({lo, p - 1});
                lo = p + 1;
            }
            if (lo <= t1) out.iv.push_back({lo, t1});
        } else {
            for (int p : exc) out.iv.push_back({p, p});
        }
        j = k;
        // next class touched by the rep
        if (j >= a.iv.size()) break;
        int nc = from.class_at[std::max(a.iv[j].lo, b1 + 1)];
        c = std::max(nc, c + 1);
    }
    normalize(out.iv);
    return out;
}

// Intermediate ordering for moving between a path `fine` (sample R, set
// system S) and a path `coarse` (sample R' = R restricted to a subcollection
// S'). It keeps fine's classes and groups them by coarse class, so it respects
// both; `by_fine` and `by_coarse` share the order and differ in class labels.
struct ReorderBridge {
    StabbingPath by_fine, by_coarse;
};

inline ReorderBridge make_bridge(const StabbingPath& fine, const StabbingPath& coarse) {
    if (fine.size() != coarse.size()) throw std::invalid_argument("make_bridge: ground sets differ");
    std::vector<int> coarse_of_fine(fine.classes(), -1);
    for (int i = 0; i < fine.size(); ++i) {
        int x = fine.order[i];
        if (!coarse.has(x)) throw std::invalid_argument("make_bridge: ground sets differ");
        int cc = coarse.class_at[coarse.pos[x]];
        int& slot = coarse_of_fine[fine.class_at[i]];
        if (slot == -1) slot = cc;
        else if (slot != cc) throw std::invalid_argument("make_bridge: sample is not a restriction (classes do not refine)");
    }
    // coarse classes in order of first appearance in fine, fine classes kept in fine order inside
    std::vector<int> first(coarse.classes(), -1), seq;
    for (int c = 0; c < fine.classes(); ++c) {
        int cc = coarse_of_fine[c];
        if (first[cc] < 0) {
            first[cc] = static_cast<int>(seq.size());
            seq.push_back(cc);
        }
    }
    std::vector<std::vector<int>> members(coarse.classes());
    for (int c = 0; c < fine.classes(); ++c) members[coarse_of_fine[c]].push_back(c);
    std::vector<int> order, fine_lab, coarse_lab;
    for (int cc : seq)
        for (int c : members[cc])
            for (int p = fine.class_begin[c]; p < fine.class_begin[c + 1]; ++p) {
                order.push_back(fine.order[p]);
                fine_lab.push_back(c);
                coarse_lab.push_back(cc);
            }
    ReorderBridge b;
    int universe = static_cast<int>(fine.pos.size());
    b.by_fine = make_path(order, fine_lab, universe);
    b.by_coarse = make_path(order, coarse_lab, universe);
    return b;
}

inline IntervalRep retag(IntervalRep a, const StabbingPath& p) {
    a.path = p.id;
    return a;
}

// Rep over `fine` -> rep over `coarse`.
inline IntervalRep shrink_rep(const IntervalRep& a, const StabbingPath& fine, const StabbingPath& coarse,
                              const ReorderBridge& b) {
    IntervalRep mid = convert_rep(a, fine, b.by_fine);
    return convert_rep(retag(std::move(mid), b.by_coarse), b.by_coarse, coarse);
}

// Rep over `coarse` -> rep over `fine`.
inline IntervalRep expand_rep(const IntervalRep& a, const StabbingPath& fine, const StabbingPath& coarse,
                              const ReorderBridge& b) {
    IntervalRep mid = convert_rep(a, coarse, b.by_coarse);
    return convert_rep(retag(std::move(mid), b.by_fine), b.by_fine, fine);
}

inline std::vector<IntervalRep> shrink_reps(const std::vector<IntervalRep>& reps, const StabbingPath& fine,
                                            const StabbingPath& coarse) {
    auto b = make_bridge(fine, coarse);
    std::vector<IntervalRep> out;
    out.reserve(reps.size());
    for (auto& r : reps) out.push_back(shrink_rep(r, fine, coarse, b));
    return out;
}

inline std::vector<IntervalRep> expand_reps(const std::vector<IntervalRep>& reps, const StabbingPath& fine,
                                            const StabbingPath& coarse) {
    auto b = make_bridge(fine, coarse);
    std::vector<IntervalRep> out;
    out.reserve(reps.size());
    for (auto& r : reps) out.push_back(expand_rep(r, fine, coarse, b));
    return out;
}

}  // namespace sqd
