#include <gtest/gtest.h>

#include "helpers.hpp"
#include "sqd/ldd.hpp"
#include "sqd/patterns.hpp"

using namespace sqd;
using namespace sqd::testing;

namespace {

// Piece = vertices [lo, hi) of a path; its boundary is the endpoints that
// touch the rest of the path.
std::vector<int> range(int lo, int hi) {
    std::vector<int> v;
    for (int i = lo; i < hi; ++i) v.push_back(i);
    return v;
}

std::vector<int> boundary_of(const GraphHandle& h, const std::vector<int>& piece) {
    std::vector<char> in(h.n(), 0);
    for (int v : piece) in[v] = 1;
    auto adj = adjacency_lists(h);
    std::vector<int> b;
    for (int v : piece)
        for (int u : adj[v])
            if (!in[u]) {
                b.push_back(v);
                break;
            }
    return b;
}

}  // namespace

TEST(Patterns, EmptyBoundaryGivesOnePattern) {
    auto h = cycle_graph(12);
    auto piece = range(0, 12);
    auto T = compute_patterns(h, piece, boundary_rows(h, {}));
    EXPECT_EQ(T.size(), 1);
    EXPECT_TRUE(T.patterns[0].empty());
    for (int v = 0; v < 12; ++v) EXPECT_EQ(T.pattern_of[v], -1);
}

TEST(Patterns, EquidistantVerticesShareOnePattern) {
    // Star center 0 in the piece with boundary {0}: every outside vertex has
    // the all-zero offset vector.
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= 10; ++i) e.push_back({0, i});
    auto h = GraphHandle::of(SparseGraph::from_edges(11, e));
    auto T = compute_patterns(h, {0}, boundary_rows(h, {0}));
    EXPECT_EQ(T.size(), 1);
    EXPECT_EQ(T.patterns[0], std::vector<int>{0});
    EXPECT_EQ(T.far_base[0], 1);
}

TEST(Patterns, PathMiddleSegment) {
    // Piece [10, 20) of P_30: outside vertices to the left see offsets
    // (0, 9), those to the right (9, 0).
    auto h = path_graph(30);
    auto piece = range(10, 20);
    auto b = boundary_rows(h, boundary_of(h, piece));
    ASSERT_EQ(b.boundary, (std::vector<int>{10, 19}));
    auto T = compute_patterns(h, piece, b);
    EXPECT_EQ(T.size(), 2);
    EXPECT_EQ(T.patterns[T.pattern_of[0]], (std::vector<int>{0, 9}));
    EXPECT_EQ(T.patterns[T.pattern_of[29]], (std::vector<int>{9, 0}));
    EXPECT_EQ(T.base[0], 10);
    EXPECT_EQ(T.far_base[T.pattern_of[29]], 10);
}

TEST(Patterns, MissingRowsRejected) {
    auto h = path_graph(10);
    BoundaryRows b;
    b.boundary = {4};
    EXPECT_THROW(compute_patterns(h, range(0, 5), b), std::invalid_argument);
}

TEST(Patterns, EccOfSmallPiecesMatchesBruteForce) {
    for (auto cls : kAllClasses) {
        auto h = instance(cls, 400, 11);
        auto L = build_ldd(h, 16, LddMode::Force);
        auto want = ecc_bruteforce(h);
        long long total_patterns = 0;
        for (int p = 0; p < L.piece_count(); ++p) {
            auto rows = boundary_rows(h, L.boundary[p]);
            auto T = compute_patterns(h, L.pieces[p], rows);
            total_patterns += T.size();
            auto got = ecc_small_piece(h, L.pieces[p], rows, T);
            for (size_t i = 0; i < L.pieces[p].size(); ++i)
                ASSERT_EQ(got[i], want[L.pieces[p][i]]) << class_name(cls) << " piece " << p;
        }
        RecordProperty(std::string("patterns_") + class_name(cls), static_cast<int>(total_patterns));
        EXPECT_GT(L.piece_count(), 1) << class_name(cls);
    }
}

TEST(Patterns, SingleVertexPiece) {
    auto h = path_graph(7);
    auto rows = boundary_rows(h, {3});
    auto T = compute_patterns(h, {3}, rows);
    auto e = ecc_small_piece(h, {3}, rows, T);
    EXPECT_EQ(e, std::vector<int>{3});
    auto o = oracle_small_piece_build(h, {3}, rows, T);
    for (int t = 0; t < 7; ++t) EXPECT_EQ(oracle_small_piece_query(o, 3, t), std::abs(t - 3));
}

TEST(SmallOracle, AllPairsMatchBruteForce) {
    for (auto cls : kAllClasses) {
        auto h = instance(cls, 300, 4);
        auto L = build_ldd(h, 12, LddMode::Force);
        auto D = apsp_bruteforce(h);
        for (int p = 0; p < L.piece_count(); ++p) {
            auto rows = boundary_rows(h, L.boundary[p]);
            auto T = compute_patterns(h, L.pieces[p], rows);
            auto o = oracle_small_piece_build(h, L.pieces[p], rows, T);
            for (size_t k = 0; k < o.radii.size(); ++k) EXPECT_LE(o.radii[k].size(), L.boundary[p].size());
            for (int s : L.pieces[p])
                for (int t = 0; t < h.n(); ++t) ASSERT_EQ(oracle_small_piece_query(o, s, t), D[s][t]) << class_name(cls);
        }
    }
}

TEST(SmallOracle, SourceOutsidePieceRejected) {
    auto h = path_graph(8);
    auto rows = boundary_rows(h, {3});
    auto T = compute_patterns(h, {0, 1, 2, 3}, rows);
    auto o = oracle_small_piece_build(h, {0, 1, 2, 3}, rows, T);
    EXPECT_THROW(oracle_small_piece_query(o, 6, 0), std::invalid_argument);
    EXPECT_THROW(oracle_small_piece_query(o, 1, 99), std::out_of_range);
}
