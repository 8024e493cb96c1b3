#include <gtest/gtest.h>

#include "sqd/gen.hpp"
#include "sqd/ldd.hpp"

using namespace sqd;

namespace {

GraphHandle path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return GraphHandle::of(SparseGraph::from_edges(n, e));
}

}  // namespace

TEST(Ldd, PathPiecesHaveSmallDiameter) {
    auto h = path(1000);
    auto L = build_ldd(h, 200);
    auto r = verify_ldd(h, L);
    EXPECT_TRUE(r.pass()) << r.message;
    EXPECT_LE(r.max_diameter, 200);
    EXPECT_GT(L.piece_count(), 1);
}

TEST(Ldd, PathWithForcedSmallDelta) {
    auto h = path(1000);
    auto L = build_ldd(h, 100, LddMode::Force);
    auto r = verify_ldd(h, L);
    EXPECT_TRUE(r.pass()) << r.message;
}

TEST(Ldd, StrictRejectsOutOfRange) {
    auto h = path(1000);
    EXPECT_THROW(build_ldd(h, 100), std::domain_error);
    auto L = build_ldd(h, 100, LddMode::Fallback);
    EXPECT_EQ(L.piece_count(), 1);
    EXPECT_TRUE(L.boundary[0].empty());
}

TEST(Ldd, CliqueIsSinglePiece) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 50; ++i)
        for (int j = i + 1; j < 50; ++j) e.push_back({i, j});
    auto h = GraphHandle::of(SparseGraph::from_edges(50, e));
    auto L = build_ldd(h, 40, LddMode::Force);
    EXPECT_EQ(L.piece_count(), 1);
    EXPECT_TRUE(L.boundary[0].empty());
    EXPECT_TRUE(verify_ldd(h, L).pass());
}

TEST(Ldd, UnitDisksWithinBounds) {
    auto h = GraphHandle::of(gen_geometric(GeoKind::UnitDisk, 2000, 5));
    for (int delta : {64, 256}) {
        auto L = build_ldd(h, delta, LddMode::Force);
        auto r = verify_ldd(h, L);
        EXPECT_TRUE(r.pass()) << r.message;
        EXPECT_LE(r.boundary_total, r.boundary_bound);
        EXPECT_LE(L.boundary_total(), L.marked);
    }
}

TEST(Ldd, AllClassesInRange) {
    // A long thin grid has diameter far above 24 ln n, so delta can be in range.
    GenParams p;
    p.sparse_mode = "tree";
    std::vector<GraphHandle> hs{path(5000), GraphHandle::of(gen_sparse(3000, 2, p))};
    for (auto k : {GeoKind::UnitDisk, GeoKind::UnitSquare, GeoKind::Square}) {
        GenParams q;
        q.avg_degree = 4;
        hs.push_back(GraphHandle::of(gen_geometric(k, 3000, 8, q)));
    }
    for (auto& h : hs) {
        int delta = static_cast<int>(24 * std::log(h.n())) + 1;
        auto L = build_ldd(h, delta);
        auto r = verify_ldd(h, L);
        EXPECT_TRUE(r.pass()) << r.message;
    }
}

TEST(Ldd, MovedVertexFails) {
    auto h = GraphHandle::of(gen_geometric(GeoKind::UnitSquare, 800, 3));
    auto L = build_ldd(h, 30, LddMode::Force);
    ASSERT_GT(L.piece_count(), 2);
    ASSERT_TRUE(verify_ldd(h, L).pass());
    int v = L.boundary[0].front();
    L.pieces[0].erase(std::find(L.pieces[0].begin(), L.pieces[0].end(), v));
    L.pieces[1].push_back(v);
    auto r = verify_ldd(h, L);
    EXPECT_FALSE(r.pass());
    auto L2 = build_ldd(h, 30, LddMode::Force);
    L2.pieces[1].push_back(L2.pieces[0].front());
    EXPECT_FALSE(verify_ldd(h, L2).partition_ok);
}

TEST(Ldd, UnmergedComponentsFailSizeCheck) {
    // A path with pendant leaves: growing from the lowest index strands leaves
    // as tiny residual components.
    int n = 3000;
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n / 2; ++i) e.push_back({2 * i, 2 * i + 2});
    for (int i = 0; i < n / 2; ++i) e.push_back({2 * i, 2 * i + 1});
    auto h = GraphHandle::of(SparseGraph::from_edges(n, e));
    int delta = static_cast<int>(24 * std::log(n)) + 1;
    auto good = build_ldd(h, delta);
    EXPECT_TRUE(verify_ldd(h, good).pass()) << verify_ldd(h, good).message;
    auto bad = build_ldd(h, delta, LddMode::Strict, false);
    ASSERT_GT(bad.piece_count(), good.piece_count());
    EXPECT_FALSE(verify_ldd(h, bad).size_ok);
}
