#include <gtest/gtest.h>

#include <random>

#include "sqd/gen.hpp"
#include "sqd/graph.hpp"

using namespace sqd;

namespace {

SparseGraph path_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return SparseGraph::from_edges(n, e);
}

DistMatrix floyd_warshall(const SparseGraph& g) {
    const int INF = 1 << 28;
    DistMatrix d(g.n, std::vector<int>(g.n, INF));
    for (int v = 0; v < g.n; ++v) {
        d[v][v] = 0;
        for (int u : g.adj[v]) d[v][u] = 1;
    }
    for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    for (auto& row : d)
        for (int& x : row)
            if (x >= INF) x = kUnreachable;
    return d;
}

}  // namespace

TEST(BfsSparse, Path) {
    auto d = bfs_sparse(path_graph(3), 0);
    EXPECT_EQ(d, (std::vector<int>{0, 1, 2}));
}

TEST(BfsSparse, Unreachable) {
    auto g = SparseGraph::from_edges(3, {{0, 1}});
    EXPECT_EQ(bfs_sparse(g, 0)[2], kUnreachable);
    EXPECT_THROW(bfs_sparse(g, 3), std::out_of_range);
}

TEST(BfsSparse, MatchesFloydWarshall) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> V(0, 199);
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 600; ++i) e.push_back({V(rng), V(rng)});
    auto g = SparseGraph::from_edges(200, e);
    auto fw = floyd_warshall(g);
    for (int s = 0; s < 200; s += 7) EXPECT_EQ(bfs_sparse(g, s), fw[s]);
}

TEST(BfsGeometric, TwoDisks) {
    GeometricInstance g;
    g.kind = GeoKind::UnitDisk;
    g.c = {{0, 0}, {0.5, 0}};
    auto h = GraphHandle::of(g);
    EXPECT_EQ(bfs_geometric(h, 0), (std::vector<int>{0, 1}));
}

class BfsGeometricRandom : public ::testing::TestWithParam<GeoKind> {};

// Explicit O(n^2) edge enumeration is the oracle for the k-d deletion BFS.
TEST_P(BfsGeometricRandom, MatchesExplicitEdges) {
    for (uint64_t seed = 0; seed < 200; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> U(0, 5);
        std::uniform_real_distribution<double> H(0.1, 1.0);
        GeometricInstance g;
        g.kind = GetParam();
        int n = 50 + static_cast<int>(seed % 7) * 60;
        for (int i = 0; i < n; ++i) {
            g.c.push_back({U(rng), U(rng)});
            g.h.push_back(g.kind == GeoKind::Square ? H(rng) : 0.5);
        }
        auto h = GraphHandle::of(g);
        SparseGraph ex;
        ex.n = n;
        ex.adj = explicit_adjacency(h);
        for (int s : {0, n / 2, n - 1}) ASSERT_EQ(bfs_geometric(h, s), bfs_sparse(ex, s)) << "seed " << seed;
    }
}

INSTANTIATE_TEST_SUITE_P(Kinds, BfsGeometricRandom,
                         ::testing::Values(GeoKind::UnitDisk, GeoKind::UnitSquare, GeoKind::Square));

TEST(BoundaryWeightedBfs, SingleSeedIsPlainBfs) {
    auto h = GraphHandle::of(path_graph(6));
    std::vector<int> piece{1, 2, 3, 4};
    auto d = boundary_weighted_bfs(h, piece, {{2, 0}});
    EXPECT_EQ(d[1], 1);
    EXPECT_EQ(d[4], 2);
    EXPECT_EQ(d[0], kUnreachable);
}

TEST(BoundaryWeightedBfs, AllSeededZero) {
    auto h = GraphHandle::of(path_graph(5));
    std::vector<int> piece{0, 1, 2, 3, 4};
    std::vector<std::pair<int, int>> seeds;
    for (int v : piece) seeds.push_back({v, 0});
    auto d = boundary_weighted_bfs(h, piece, seeds);
    for (int v : piece) EXPECT_EQ(d[v], 0);
}

TEST(BoundaryWeightedBfs, SeedOutsidePiece) {
    auto h = GraphHandle::of(path_graph(5));
    EXPECT_THROW(boundary_weighted_bfs(h, {0, 1}, {{3, 0}}), std::invalid_argument);
}

// Pointwise minimum of per-seed shifted BFS runs inside the piece.
TEST(BoundaryWeightedBfs, MatchesPerSeedMinimum) {
    for (uint64_t seed = 0; seed < 30; ++seed) {
        std::mt19937_64 rng(seed);
        auto g = gen_geometric(seed % 2 ? GeoKind::UnitDisk : GeoKind::Square, 250, seed);
        auto h = GraphHandle::of(g);
        std::vector<int> piece;
        for (int v = 0; v < h.n(); ++v)
            if (rng() % 3) piece.push_back(v);
        auto sub = induced(h, piece);
        std::vector<std::pair<int, int>> seeds;
        for (size_t i = 0; i < piece.size(); ++i)
            if (rng() % 10 == 0) seeds.push_back({piece[i], static_cast<int>(rng() % 6)});
        auto got = boundary_weighted_bfs(h, piece, seeds);
        std::vector<int> want(h.n(), kUnreachable);
        for (auto [s, w] : seeds) {
            int si = static_cast<int>(std::lower_bound(piece.begin(), piece.end(), s) - piece.begin());
            auto d = bfs(sub, si);
            for (size_t i = 0; i < piece.size(); ++i)
                if (d[i] != kUnreachable) want[piece[i]] = std::min(want[piece[i]], d[i] + w);
        }
        ASSERT_EQ(got, want) << "seed " << seed;
    }
}

TEST(BruteForce, SmallGraphs) {
    auto tri = GraphHandle::of(SparseGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}));
    auto d = apsp_bruteforce(tri);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(d[i][j], i == j ? 0 : 1);
    auto star = GraphHandle::of(SparseGraph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
    EXPECT_EQ(apsp_bruteforce(star)[1][2], 2);
    auto p = GraphHandle::of(path_graph(3));
    EXPECT_EQ(ecc_bruteforce(p), (std::vector<int>{2, 1, 2}));
    EXPECT_EQ(diameter_bruteforce(p), 2);
    EXPECT_EQ(wiener_bruteforce(p), 4);
    std::vector<std::pair<int, int>> k4;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) k4.push_back({i, j});
    auto k = GraphHandle::of(SparseGraph::from_edges(4, k4));
    EXPECT_EQ(diameter_bruteforce(k), 1);
    EXPECT_EQ(wiener_bruteforce(k), 6);
}

TEST(BruteForce, CapAndDisconnected) {
    EXPECT_THROW(apsp_bruteforce(GraphHandle::of(path_graph(30)), 10), std::length_error);
    EXPECT_THROW(ecc_bruteforce(GraphHandle::of(SparseGraph::from_edges(3, {{0, 1}}))), std::domain_error);
}

TEST(BruteForce, MatrixIsMetric) {
    auto h = GraphHandle::of(gen_geometric(GeoKind::UnitDisk, 150, 9));
    auto d = apsp_bruteforce(h);
    int diam = 0;
    for (int i = 0; i < h.n(); ++i) {
        EXPECT_EQ(d[i][i], 0);
        for (int j = 0; j < h.n(); ++j) {
            EXPECT_EQ(d[i][j], d[j][i]);
            diam = std::max(diam, d[i][j]);
        }
    }
    EXPECT_EQ(diameter_bruteforce(h), diam);
}

TEST(Gen, Deterministic) {
    auto a = gen_geometric(GeoKind::UnitDisk, 100, 7), b = gen_geometric(GeoKind::UnitDisk, 100, 7);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.c[i].x, b.c[i].x);
        EXPECT_EQ(a.c[i].y, b.c[i].y);
    }
}

TEST(Gen, TreeModeIsConnectedAndAcyclic) {
    GenParams p;
    p.sparse_mode = "tree";
    auto g = gen_sparse(50, 3, p);
    EXPECT_EQ(g.edge_count(), 49u);
    EXPECT_TRUE(is_connected(GraphHandle::of(g)));
}

TEST(Gen, AlwaysConnected) {
    for (auto k : {GeoKind::UnitDisk, GeoKind::UnitSquare, GeoKind::Square})
        for (uint64_t s = 0; s < 20; ++s) {
            GenParams p;
            p.avg_degree = 3;
            EXPECT_TRUE(is_connected(GraphHandle::of(gen_geometric(k, 300, s, p))));
        }
    GenParams p;
    p.sparse_mode = "grid";
    EXPECT_TRUE(is_connected(GraphHandle::of(gen_sparse(500, 1, p))));
}

TEST(Gen, DensitySweepHitsTargetDegree) {
    for (auto k : {GeoKind::UnitDisk, GeoKind::UnitSquare, GeoKind::Square})
        for (double deg : {6.0, 10.0, 20.0}) {
            GenParams p;
            p.avg_degree = deg;
            auto h = GraphHandle::of(gen_geometric(k, 3000, 17, p));
            auto adj = explicit_adjacency(h);
            double sum = 0;
            for (auto& a : adj) sum += a.size();
            double got = sum / h.n();
            EXPECT_NEAR(got, deg, 0.1 * deg) << static_cast<int>(k);
        }
}

// Node visits of the deletion structure grow near-linearly on unit disks.
TEST(BfsGeometric, NearLinearWork) {
    std::vector<double> xs, ys;
    for (int e = 10; e <= 15; ++e) {
        int n = 1 << e;
        auto h = GraphHandle::of(gen_geometric(GeoKind::UnitDisk, n, 100 + e));
        long long visits = 0;
        bfs_geometric(h, 0, &visits);
        xs.push_back(std::log(n));
        ys.push_back(std::log(static_cast<double>(visits)));
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) mx += xs[i] / xs.size(), my += ys[i] / ys.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) num += (xs[i] - mx) * (ys[i] - my), den += (xs[i] - mx) * (xs[i] - mx);
    EXPECT_LT(num / den, 1.3);
}
