#include <gtest/gtest.h>

#include <random>
#include <set>

#include "sqd/gen.hpp"
#include "sqd/stabbing.hpp"

using namespace sqd;

namespace {

std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// Ball system {N^r[s]} over a geometric instance, all radii in [r0, r1].
SetSystem ball_system(const GraphHandle& h, int r0, int r1, int d) {
    int n = h.n();
    SetSystem s;
    s.universe = n;
    s.ground = iota_vec(n);
    int span = r1 - r0 + 1;
    s.count = static_cast<size_t>(n) * span;
    s.m = static_cast<double>(s.count);
    s.dual_dim = d;
    s.report = [&h, span, r0](const std::vector<size_t>& ids, const std::function<void(size_t, const std::vector<int>&)>& f) {
        std::map<int, std::vector<size_t>> by_center;
        for (size_t i : ids) by_center[static_cast<int>(i / span)].push_back(i);
        for (auto& [c, list] : by_center) {
            auto d = bfs(h, c);
            for (size_t i : list) {
                int r = r0 + static_cast<int>(i % span);
                std::vector<int> members;
                for (int v = 0; v < h.n(); ++v)
                    if (d[v] <= r) members.push_back(v);
                f(i, members);
            }
        }
    };
    return s;
}

std::vector<std::vector<int>> all_sets(const SetSystem& s) {
    std::vector<std::vector<int>> out(s.count);
    s.report(std::vector<size_t>([&] {
                 std::vector<size_t> v(s.count);
                 std::iota(v.begin(), v.end(), 0);
                 return v;
             }()),
             [&](size_t i, const std::vector<int>& m) { out[i] = m; });
    return out;
}

}  // namespace

TEST(RhoSample, Basics) {
    EXPECT_EQ(rho_sample(50, 50, 1).size(), 50u);
    EXPECT_THROW(rho_sample(10, 0, 1), std::invalid_argument);
    EXPECT_EQ(rho_sample(10000, 40, 9), rho_sample(10000, 40, 9));
    double total = 0;
    for (uint64_t seed = 0; seed < 200; ++seed) total += rho_sample(10000, 1, seed).size();
    EXPECT_NEAR(total / 200, 1.0, 0.35);
}

TEST(Rep, UnionMergesAdjacent) {
    auto p = trivial_path(iota_vec(10), 10);
    auto a = make_rep({1, 2, 3}, p), b = make_rep({4, 5, 6, 7}, p);
    auto u = union_reps(a, b);
    ASSERT_EQ(u.count(), 1u);
    EXPECT_EQ(u.iv[0], (Interval{1, 7}));
    EXPECT_TRUE(subtract_rep(u, u).empty());
    EXPECT_TRUE(is_full(union_reps(u, complement_rep(u, p)), p));
    EXPECT_TRUE(contains(u, p, 5));
    EXPECT_FALSE(contains(u, p, 8));
}

TEST(Rep, MixedPathsRejected) {
    auto p = trivial_path(iota_vec(5), 5), q = trivial_path(iota_vec(5), 5);
    EXPECT_THROW(union_reps(make_rep({1}, p), make_rep({1}, q)), std::invalid_argument);
    EXPECT_THROW(contains(make_rep({1}, p), q, 1), std::invalid_argument);
}

TEST(Rep, RandomRoundTrips) {
    std::mt19937_64 rng(4);
    auto order = iota_vec(1000);
    std::shuffle(order.begin(), order.end(), rng);
    auto p = trivial_path(order, 1000);
    for (int it = 0; it < 100; ++it) {
        std::set<int> a, b;
        while (a.size() < 200) a.insert(rng() % 1000);
        while (b.size() < 300) b.insert(rng() % 1000);
        std::vector<int> va(a.begin(), a.end()), vb(b.begin(), b.end());
        auto ra = make_rep(va, p), rb = make_rep(vb, p);
        EXPECT_EQ(materialize(ra, p), va);
        std::vector<int> u, d, x;
        std::set_union(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(u));
        std::set_difference(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(d));
        std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(x));
        EXPECT_EQ(materialize(union_reps(ra, rb), p), u);
        EXPECT_EQ(materialize(subtract_rep(ra, rb), p), d);
        EXPECT_EQ(materialize(intersect_rep(ra, rb), p), x);
        EXPECT_EQ(complement_rep(ra, p).elements(), 800);
        for (int v = 0; v < 1000; ++v) EXPECT_EQ(contains(ra, p, v), a.count(v) > 0);
    }
}

TEST(Restrict, IdentityAndSingleton) {
    std::mt19937_64 rng(2);
    auto order = iota_vec(50);
    std::shuffle(order.begin(), order.end(), rng);
    auto p = trivial_path(order, 50);
    auto all = restrict_path(p, [](int) { return true; });
    EXPECT_EQ(all.path.order, p.order);
    auto one = restrict_path(p, [](int x) { return x == 17; });
    ASSERT_EQ(one.path.size(), 1);
    auto r = restrict_rep(make_rep({1, 17, 30}, p), one);
    EXPECT_EQ(r.count(), 1u);
}

TEST(Restrict, NeverIncreasesIntervalCount) {
    std::mt19937_64 rng(8);
    auto order = iota_vec(400);
    std::shuffle(order.begin(), order.end(), rng);
    auto p = trivial_path(order, 400);
    std::vector<char> keep(400);
    for (auto& k : keep) k = rng() % 2;
    auto R = restrict_path(p, [&](int x) { return keep[x] != 0; });
    for (int it = 0; it < 1000; ++it) {
        std::vector<int> s;
        for (int v = 0; v < 400; ++v)
            if (rng() % 3 == 0) s.push_back(v);
        auto full = make_rep(s, p);
        auto res = restrict_rep(full, R);
        EXPECT_LE(res.count(), full.count());
        std::vector<int> want;
        for (int v : s)
            if (keep[v]) want.push_back(v);
        EXPECT_EQ(materialize(res, R.path), want);
        EXPECT_EQ(res, make_rep(s, R.path));
    }
}

TEST(StabbingPath, SingleSetSystem) {
    auto s = explicit_system(20, iota_vec(20), {{2, 5, 7, 11, 19}}, 1);
    auto r = build_stabbing_path(s, 1.0, 3);
    EXPECT_EQ(r.path.classes(), 2);
    EXPECT_LE(make_rep({2, 5, 7, 11, 19}, r.path).count(), 1u);
    EXPECT_EQ(measure_crossing(r.path, std::vector<std::vector<int>>{}).total, 0);
}

// Ground = points on a line (ids in random order), sets = intervals.
TEST(StabbingPath, IntervalsOnALine) {
    int n = 1000, m = 1000;
    std::mt19937_64 rng(12);
    std::vector<int> coord = iota_vec(n);
    std::shuffle(coord.begin(), coord.end(), rng);  // element id -> coordinate
    std::vector<int> at(n);
    for (int i = 0; i < n; ++i) at[coord[i]] = i;
    std::vector<std::vector<int>> sets;
    for (int j = 0; j < m; ++j) {
        int a = rng() % n, b = rng() % n;
        if (a > b) std::swap(a, b);
        std::vector<int> s;
        for (int c = a; c <= b; ++c) s.push_back(at[c]);
        sets.push_back(s);
    }
    auto sys = explicit_system(n, iota_vec(n), sets, 1);
    double rho = 30;
    auto r = build_stabbing_path(sys, rho, 5);
    auto meas = measure_crossing(r.path, sets);
    double lg = std::log(n);
    EXPECT_LE(meas.total, 8 * (double(m) * n / rho + m) * lg * lg);
    // far below the trivial random-order count
    auto rnd = iota_vec(n);
    EXPECT_LT(meas.total, measure_crossing(trivial_path(rnd, n), sets).total / 4);
}

TEST(StabbingPath, DiskBallSystemAcceptsQuickly) {
    auto h = GraphHandle::of(gen_geometric(GeoKind::UnitDisk, 500, 21));
    auto sys = ball_system(h, 2, 6, 4);
    double rho = std::pow(500.0, 0.25);
    auto r = build_stabbing_path(sys, rho, 77);
    EXPECT_LE(r.attempts, 5);
    auto meas = measure_crossing(r.path, all_sets(sys));
    EXPECT_LE(meas.total, stabbing_threshold(sys.m, 500, rho, 4));
}

TEST(StabbingPath, ExhaustionIsReported) {
    auto h = GraphHandle::of(gen_geometric(GeoKind::UnitDisk, 200, 3));
    auto sys = ball_system(h, 1, 3, 4);
    StabbingOptions opt;
    opt.c = 1e-9;
    opt.max_attempts = 3;
    EXPECT_THROW(build_stabbing_path(sys, 4, 1, opt), RetryExhausted);
}

TEST(StabbingPath, ClassesAreContiguousAndConsistent) {
    auto h = GraphHandle::of(gen_geometric(GeoKind::UnitSquare, 300, 4));
    auto sys = ball_system(h, 1, 4, 4);
    auto r = build_stabbing_path(sys, 6, 9);
    // members of one class are never separated by a sampled set
    auto sets = all_sets(sys);
    for (int sidx : r.path.sample) {
        std::set<int> in(sets[sidx].begin(), sets[sidx].end());
        for (int c = 0; c < r.path.classes(); ++c) {
            bool first = in.count(r.path.order[r.path.class_begin[c]]) > 0;
            for (int p = r.path.class_begin[c]; p < r.path.class_begin[c + 1]; ++p)
                ASSERT_EQ(in.count(r.path.order[p]) > 0, first);
        }
    }
}

// Random class-preserving reshuffles: convert materializes to the same set.
TEST(Convert, ClassPreservingReshuffle) {
    auto h = GraphHandle::of(gen_geometric(GeoKind::UnitDisk, 400, 6));
    auto sys = ball_system(h, 1, 5, 4);
    auto r = build_stabbing_path(sys, 5, 13);
    const auto& p = r.path;
    std::mt19937_64 rng(1);
    auto sets = all_sets(sys);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<int> cls(p.classes());
        std::iota(cls.begin(), cls.end(), 0);
        std::shuffle(cls.begin(), cls.end(), rng);
        std::vector<int> order, lab;
        for (int c : cls) {
            std::vector<int> mem(p.order.begin() + p.class_begin[c], p.order.begin() + p.class_begin[c + 1]);
            std::shuffle(mem.begin(), mem.end(), rng);
            for (int x : mem) order.push_back(x), lab.push_back(c);
        }
        auto q = make_path(order, lab, 400);
        EXPECT_TRUE(respects(q, p));
        EXPECT_EQ(convert_rep(make_rep(sets[0], p), p, p), make_rep(sets[0], p));
        for (size_t i = 0; i < sets.size(); i += 7) {
            auto conv = convert_rep(make_rep(sets[i], p), p, q);
            ASSERT_EQ(conv, make_rep(sets[i], q));
        }
        // one full class stays a single interval
        std::vector<int> c0(p.order.begin() + p.class_begin[0], p.order.begin() + p.class_begin[1]);
        EXPECT_EQ(convert_rep(make_rep(c0, p), p, q).count(), 1u);
    }
}

TEST(Convert, MismatchedClassesRejected) {
    auto p = make_path(iota_vec(6), {0, 0, 0, 1, 1, 1}, 6);
    auto q = make_path(iota_vec(6), {0, 0, 1, 1, 2, 2}, 6);
    EXPECT_THROW(convert_rep(make_rep({0, 1}, p), p, q), std::invalid_argument);
}

// Two systems sharing coins: the ball systems at radius r and r+1 are
// subcollections of their union; shrink/expand round trips are exact.
TEST(ShrinkExpand, BallSystemsAcrossOneRadiusStep) {
    auto h = GraphHandle::of(gen_geometric(GeoKind::UnitDisk, 300, 10));
    int n = h.n();
    auto both = ball_system(h, 3, 4, 4);  // set index = v*2 + (r-3)
    SetSystem low = both;
    low.count = n;
    low.key = [](size_t i) { return static_cast<uint64_t>(i * 2); };
    low.report = [&both](const std::vector<size_t>& ids, const std::function<void(size_t, const std::vector<int>&)>& f) {
        std::vector<size_t> mapped;
        for (size_t i : ids) mapped.push_back(i * 2);
        both.report(mapped, [&](size_t j, const std::vector<int>& m) { f(j / 2, m); });
    };
    StabbingOptions opt;
    opt.las_vegas = false;
    double rho = 8;
    auto fine = build_stabbing_path(both, rho, 99, opt).path;
    auto coarse = build_stabbing_path(low, rho, 99, opt).path;
    auto sets = all_sets(both);
    std::vector<IntervalRep> in_coarse, in_fine;
    std::vector<int> ids;
    for (int v = 0; v < n; v += 3) {
        ids.push_back(v * 2);
        in_coarse.push_back(make_rep(sets[v * 2], coarse));
    }
    auto expanded = expand_reps(in_coarse, fine, coarse);
    for (size_t i = 0; i < ids.size(); ++i) ASSERT_EQ(expanded[i], make_rep(sets[ids[i]], fine));
    auto back = shrink_reps(expanded, fine, coarse);
    for (size_t i = 0; i < ids.size(); ++i) ASSERT_EQ(back[i], in_coarse[i]);
    // identity when the subcollection is everything
    auto same = shrink_reps({make_rep(sets[1], fine)}, fine, fine);
    EXPECT_EQ(same[0], make_rep(sets[1], fine));
}
