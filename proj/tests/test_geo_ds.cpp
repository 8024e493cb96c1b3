#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sqd/disk_cover.hpp"
#include "sqd/envelope.hpp"
#include "sqd/geo_ds.hpp"
#include "sqd/orthant.hpp"
#include "sqd/rainbow.hpp"

using namespace sqd;

namespace {

std::vector<AxisSquare> random_squares(std::mt19937_64& g, int n, double box, double hmin, double hmax) {
    std::uniform_real_distribution<double> pos(0, box), half(hmin, hmax);
    std::vector<AxisSquare> out;
    for (int i = 0; i < n; ++i) out.push_back({{pos(g), pos(g)}, half(g)});
    return out;
}

std::pair<int, int> random_range(std::mt19937_64& g, int n) {
    int a = static_cast<int>(g() % (n + 2)), b = static_cast<int>(g() % (n + 2));
    if (a > b) std::swap(a, b);
    return {a, b};
}

// Positions covered by the objects whose shape contains / meets q.
template <class Objs, class Meets>
std::vector<char> covered_positions(const Objs& objs, int n, Meets&& meets) {
    std::vector<char> cov(n + 3, 0);
    for (auto& o : objs)
        if (meets(o))
            for (int t = o.lo; t <= o.hi; ++t) cov[t] = 1;
    return cov;
}

bool all_in(const std::vector<char>& cov, int a, int b) {
    for (int t = a; t <= b; ++t)
        if (!cov[t]) return false;
    return true;
}

template <class Objs, class Meets>
bool avoids(const Objs& objs, int a, int b, Meets&& meets) {
    for (auto& o : objs)
        if (o.lo <= o.hi && o.lo <= b && a <= o.hi && meets(o)) return false;
    return true;
}

std::vector<char> rep_positions(const IntervalRep& r, int n) {
    std::vector<char> cov(n + 3, 0);
    for (auto iv : r.iv)
        for (int t = iv.lo; t <= iv.hi; ++t) cov[t] = 1;
    return cov;
}

}  // namespace

// ---- rainbow ---------------------------------------------------------------

TEST(Rainbow, SingleSquare) {
    RainbowDS ds(ColoredSquareSet{{{{0, 0}, 1}}, {0}});
    EXPECT_TRUE(ds.query({{1.5, 0}, 0.6}));
    EXPECT_FALSE(ds.query({{3, 3}, 0.5}));
}

TEST(Rainbow, MatchesBruteForce) {
    std::mt19937_64 g(11);
    auto squares = random_squares(g, 500, 30, 0.2, 2.0);
    std::vector<int> color(squares.size());
    for (auto& c : color) c = static_cast<int>(g() % 8);
    ColoredSquareSet cs{squares, color};
    RainbowDS ds = rainbow_build(cs);
    for (int c = 0; c < 8; ++c) {
        int size = static_cast<int>(std::count(color.begin(), color.end(), c));
        EXPECT_LE(ds.stats().faces[c], 4 * size) << "color " << c;
    }
    std::uniform_real_distribution<double> pos(0, 30), half(0.1, 12);
    int yes = 0;
    for (int k = 0; k < 10000; ++k) {
        AxisSquare q{{pos(g), pos(g)}, half(g)};
        std::vector<char> hit(8, 0);
        for (size_t i = 0; i < squares.size(); ++i)
            if (intersects(q, squares[i])) hit[color[i]] = 1;
        bool expect = std::count(hit.begin(), hit.end(), 1) == 8;
        yes += expect;
        ASSERT_EQ(rainbow_query(ds, q), expect) << "query " << k;
    }
    EXPECT_GT(yes, 100);
    EXPECT_LT(yes, 9900);
}

TEST(Rainbow, TouchingSquaresCount) {
    // squares meeting exactly along an edge or a corner still intersect
    RainbowDS ds(ColoredSquareSet{{{{0, 0}, 0.5}, {{2, 2}, 0.5}}, {0, 1}});
    EXPECT_TRUE(ds.query({{1, 1}, 0.5}));
    EXPECT_FALSE(ds.query({{1, 1}, 0.49}));
}

// ---- avoid / cover / search over squares ----------------------------------

TEST(SquareStructures, EmptyAndDisjoint) {
    SquareAvoidDS empty = avoid_build({});
    EXPECT_TRUE(avoid_query(empty, {{0, 0}, 1}, 1, 10));
    std::vector<SquareObject> objs{{{{0, 0}, 1}, 5, 8}};
    SquareAvoidDS ds = avoid_build(objs);
    EXPECT_TRUE(avoid_query(ds, {{0, 0}, 1}, 9, 12));
    EXPECT_FALSE(avoid_query(ds, {{0, 0}, 1}, 8, 12));
    SquareCoverDS cov = cover_build(objs, 1);
    EXPECT_TRUE(cover_query(cov, {{0, 0}, 1}, 7, 6));  // empty I
    EXPECT_TRUE(cover_query(cov, {{0, 0}, 1}, 5, 8));
    EXPECT_FALSE(cover_query(cov, {{0, 0}, 1}, 4, 8));
    EXPECT_TRUE(interval_search(cov, ds, {{9, 9}, 1}, 0).iv.empty());
}

TEST(SquareStructures, TilingGivesOneInterval) {
    std::vector<SquareObject> objs;
    for (int i = 0; i < 10; ++i) objs.push_back({{{0.1 * i, 0}, 1}, 10 * i + 1, 10 * i + 10});
    SquareCoverDS cov = cover_build(objs, 3);
    SquareAvoidDS av = avoid_build(objs);
    auto rep = interval_search(cov, av, {{0, 0}, 0.5}, 0);
    ASSERT_EQ(rep.iv.size(), 1u);
    EXPECT_EQ(rep.iv[0].lo, 1);
    EXPECT_EQ(rep.iv[0].hi, 100);
}

class SquareSuite : public ::testing::TestWithParam<std::tuple<int, int, int, bool>> {};

TEST_P(SquareSuite, MatchBruteForce) {
    auto [N, n, block, eager] = GetParam();
    std::mt19937_64 g(N * 31 + n + block);
    auto squares = random_squares(g, N, 40, 0.2, 3);
    std::vector<SquareObject> objs;
    for (auto& s : squares) {
        auto [a, b] = random_range(g, n);
        if (a == 0) a = 1;
        objs.push_back({s, a, g() % 9 == 0 ? a - 1 : b});  // some empty intervals
    }
    SquareCoverDS cov = cover_build(objs, block, eager);
    SquareAvoidDS av = avoid_build(objs, eager);
    std::uniform_real_distribution<double> pos(0, 40), half(0.1, 4);
    for (int k = 0; k < 10000; ++k) {
        AxisSquare q{{pos(g), pos(g)}, half(g)};
        auto meets = [&](const SquareObject& o) { return intersects(q, o.obj); };
        auto [a, b] = random_range(g, n);
        auto cv = covered_positions(objs, n, meets);
        ASSERT_EQ(cover_query(cov, q, a, b), all_in(cv, a, b)) << "cover " << k;
        ASSERT_EQ(avoid_query(av, q, a, b), avoids(objs, a, b, meets)) << "avoid " << k;
        if (k < 1000) {
            long long probes = 0;
            auto rep = interval_search(cov, av, q, 0, &probes);
            ASSERT_EQ(rep_positions(rep, n), cv) << "search " << k;
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Sizes, SquareSuite,
                         ::testing::Values(std::make_tuple(300, 60, 1, false), std::make_tuple(400, 40, 4, true),
                                           std::make_tuple(2000, 300, 2, true)));

// ---- canonical intervals -------------------------------------------------

TEST(CanonicalIntervals, DecompositionIsExactAndSmall) {
    for (int m : {1, 7, 64, 1000, 4097})
        for (int b : {2, 4, 8, 16}) {
            detail::CanonicalTree t(m, b);
            std::mt19937_64 g(m * 17 + b);
            int logb = static_cast<int>(std::ceil(std::log(std::max(m, 2)) / std::log(b)));
            for (int k = 0; k < 500; ++k) {
                int lo = static_cast<int>(g() % m), hi = static_cast<int>(g() % m);
                if (lo > hi) std::swap(lo, hi);
                std::vector<int> hit(m, 0);
                int pieces = 0;
                t.decompose(lo, hi, [&](int level, int j) {
                    ++pieces;
                    auto [a, c] = t.range(level, j);
                    for (int x = a; x <= c; ++x) ++hit[x];
                });
                for (int x = 0; x < m; ++x) ASSERT_EQ(hit[x], (x >= lo && x <= hi) ? 1 : 0);
                ASSERT_LE(pieces, b + 2 + 2 * b * logb);
            }
        }
}

// ---- unit-square orthant structure ----------------------------------------

TEST(UnitSquareCover, Trivial) {
    UnitSquareCoverDS ds({{{0.3, 0.3}, 4, 9}}, 0.5);
    EXPECT_TRUE(unitsquare_cover_query(ds, {0.8, 1.0}, 4, 9));
    EXPECT_FALSE(unitsquare_cover_query(ds, {2.0, 0.3}, 4, 9));
    EXPECT_FALSE(unitsquare_avoid_query(ds, {0.8, 1.0}, 9, 12));
    EXPECT_TRUE(unitsquare_avoid_query(ds, {2.0, 0.3}, 1, 20));
}

TEST(UnitSquareCover, MatchesBruteForce) {
    for (int round = 0; round < 3; ++round) {
        std::mt19937_64 g(100 + round);
        int N = 1000, n = round == 0 ? 40 : 200;
        double box = round == 2 ? 4 : 10;
        std::uniform_real_distribution<double> pos(0, box);
        std::vector<UnitSquareObject> objs;
        for (int i = 0; i < N; ++i) {
            auto [a, b] = random_range(g, n);
            Point c{pos(g), pos(g)};
            if (i > 0 && g() % 6 == 0) c.x = objs[g() % i].center.x + 1.0;  // exactly at reach
            objs.push_back({c, std::max(a, 1), b});
        }
        UnitSquareCoverDS ds = unitsquare_cover_build(objs, 0.5, round == 1 ? 2 : 0);
        RecordProperty("rectangles_" + std::to_string(round), std::to_string(ds.stats().rectangles));
        for (int k = 0; k < 10000; ++k) {
            Point q{pos(g), pos(g)};
            if (k % 3 == 0) {
                const Point& c = objs[g() % N].center;
                q = {c.x + (g() % 2 ? 1.0 : -1.0) * (1 + 1e-9), c.y + static_cast<double>(g() % 3) - 1};
            }
            auto meets = [&](const UnitSquareObject& o) { return intersects(AxisSquare{q, 0.5}, AxisSquare{o.center, 0.5}); };
            auto [a, b] = random_range(g, n);
            auto cv = covered_positions(objs, n, meets);
            ASSERT_EQ(ds.cover(q, a, b), all_in(cv, a, b)) << "cover " << k;
            ASSERT_EQ(ds.avoid(q, a, b), avoids(objs, a, b, meets)) << "avoid " << k;
            if (k < 1000) {
                ASSERT_EQ(rep_positions(interval_search(ds, q, 0), n), cv) << "search " << k;
            }
        }
    }
}

// ---- envelopes --------------------------------------------------------------

namespace {

Arc plain_arc(Point c, double r2 = kDiskR2) {
    Arc a;
    a.c = c;
    a.g = c;
    a.r2 = r2;
    return a;
}

double pointwise(const std::vector<Arc>& arcs, double x, Side side) {
    double v = side == Side::Lower ? INFINITY : -INFINITY;
    for (auto& a : arcs) v = side == Side::Lower ? std::min(v, a.value(x)) : std::max(v, a.value(x));
    return v;
}

}  // namespace

TEST(Envelope, OneSegmentIsItself) {
    std::vector<Arc> arcs{plain_arc({0.1, 0.9})};
    Chain c = envelope(arcs, Side::Lower);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.p[0].arc, 0);
}

TEST(Envelope, TwoCrossingArcsHaveOneBreakpoint) {
    // mirror images cross once at x = 0
    std::vector<Arc> arcs{plain_arc({-0.3, 0.9}), plain_arc({0.3, 0.9})};
    Chain lo = envelope(arcs, Side::Lower);
    ASSERT_EQ(lo.size(), 2u);
    EXPECT_NEAR(lo.p[1].x0, 0.0, 1e-12);
    EXPECT_EQ(lo.p[0].arc, 0);
    EXPECT_EQ(lo.p[1].arc, 1);
    Chain up = envelope(arcs, Side::Upper);
    ASSERT_EQ(up.size(), 2u);
    EXPECT_EQ(up.p[0].arc, 1);
}

TEST(Envelope, RandomSameTypeArcsMatchPointwise) {
    const int offsets[][2] = {{0, 1}, {1, 1}, {0, 2}, {1, 2}, {2, 2}, {-1, 2}, {-2, 2}, {-1, 1}};
    for (int round = 0; round < 40; ++round) {
        std::mt19937_64 g(round);
        std::uniform_real_distribution<double> u(-0.25, 0.25), x(Pseudoline::kLo, Pseudoline::kHi);
        auto [ox, oy] = offsets[round % 8];
        std::vector<Arc> arcs;
        int n = 1 + static_cast<int>(g() % 200);
        for (int i = 0; i < n; ++i) arcs.push_back(plain_arc({0.5 * ox + u(g), 0.5 * oy + u(g)}));
        for (Side side : {Side::Lower, Side::Upper}) {
            EnvelopeStats st;
            Chain c = envelope(arcs, side, &st);
            EXPECT_EQ(st.pieces, static_cast<long long>(c.size()));
            for (size_t i = 1; i < c.size(); ++i) ASSERT_LT(c.p[i - 1].x0, c.p[i].x0);
            for (int k = 0; k < 1000; ++k) {
                double at = x(g);
                ASSERT_NEAR(c.eval(at, arcs), pointwise(arcs, at, side), 1e-12);
            }
        }
    }
}

TEST(Envelope, DoubleCrossingRejected) {
    // a small circle dipping under a unit arc crosses it twice inside the cell
    std::vector<Arc> arcs{plain_arc({0, 1.0}), plain_arc({0, 0.1}, 0.04)};
    EXPECT_THROW(envelope(arcs, Side::Lower), EnvelopeError);
    EXPECT_THROW(UnitDiskCoverDS(arcs, {{0, 1, 5}, {1, 3, 7}}), EnvelopeError);
}

// ---- unit-disk pseudoline structure ---------------------------------------

TEST(UnitDiskCover, Trivial) {
    CellIndex tgt{0, 0}, src{0, 2};
    Point c{0.2, 1.1};
    UnitDiskCoverDS ds({{0, c, 3, 8}}, tgt, src);
    EXPECT_TRUE(unitdisk_cover_query(ds, {0.2, 0.4}, 3, 8));    // inside the disk
    EXPECT_FALSE(unitdisk_cover_query(ds, {0.45, 0.01}, 3, 8)); // below the arc
    EXPECT_FALSE(unitdisk_avoid_query(ds, {0.2, 0.4}, 8, 9));
    EXPECT_TRUE(unitdisk_avoid_query(ds, {0.45, 0.01}, 1, 20));
}

TEST(UnitDiskCover, SourceMustBeRelevant) {
    EXPECT_THROW(UnitDiskCoverDS({{0, {0.2, 1.6}, 1, 2}}, {0, 0}, {0, 3}), std::invalid_argument);
    EXPECT_THROW(UnitDiskCoverDS({{0, {0.2, 0.2}, 1, 2}}, {0, 0}, {0, 2}), std::invalid_argument);
}

TEST(UnitDiskCover, MatchesBruteForce) {
    const int offsets[][2] = {{0, 0}, {0, 1}, {1, 1}, {-2, 1}, {2, -2}, {-1, -2}};
    for (int round = 0; round < 6; ++round) {
        std::mt19937_64 g(500 + round);
        std::uniform_real_distribution<double> u(0, 0.5);
        CellIndex tgt{8, -3}, src{tgt.ix + offsets[round][0], tgt.iy + offsets[round][1]};
        int disks = 500, n = round % 2 ? 60 : 400;
        std::vector<DiskObject> objs;
        for (int i = 0; i < disks; ++i) {
            Point c = guard_grid_lines({cell_x0(src) + u(g), cell_y0(src) + u(g)});
            int k = 1 + static_cast<int>(g() % 3);
            for (int t = 0; t < k; ++t) {
                auto [a, b] = random_range(g, n);
                objs.push_back({i, c, std::max(a, 1), b});
            }
        }
        UnitDiskCoverDS ds = unitdisk_cover_build(objs, tgt, src, round == 2 ? 2 : 0);
        RecordProperty("max_envelope_" + std::to_string(round), std::to_string(ds.stats().max_gen_pieces));
        for (int k = 0; k < 10000; ++k) {
            Point q = guard_grid_lines({cell_x0(tgt) + u(g), cell_y0(tgt) + u(g)});
            if (k % 4 == 0) {
                // on a disk boundary
                const Point& c = objs[g() % objs.size()].center;
                double ang = std::uniform_real_distribution<double>(0, 2 * M_PI)(g);
                Point p{c.x + kDiskR * std::cos(ang), c.y + kDiskR * std::sin(ang)};
                if (cell_of(p) == tgt) q = p;
            }
            auto meets = [&](const DiskObject& o) { return intersects(UnitDisk{q}, UnitDisk{o.center}); };
            auto [a, b] = random_range(g, n);
            auto cv = covered_positions(objs, n, meets);
            ASSERT_EQ(ds.cover(q, a, b), all_in(cv, a, b)) << "cover " << k;
            ASSERT_EQ(ds.avoid(q, a, b), avoids(objs, a, b, meets)) << "avoid " << k;
            if (k < 500) {
                ASSERT_EQ(rep_positions(interval_search(ds, q, 0), n), cv) << "search " << k;
            }
        }
    }
}
