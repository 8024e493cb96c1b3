#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"
#include "sqd/oracle.hpp"

using namespace sqd;
using namespace sqd::testing;

namespace {

Params forced(int delta, uint64_t seed, int small = -1) {
    Params p;
    p.delta = delta;
    p.ldd_mode = LddMode::Force;
    p.seed = seed;
    p.small_threshold = small;
    return p;
}

void expect_exact(const GraphHandle& h, const OracleBundle& B, const std::string& what) {
    auto D = apsp_bruteforce(h);
    for (int s = 0; s < h.n(); ++s)
        for (int t = 0; t < h.n(); ++t) ASSERT_EQ(oracle_query(B, s, t), D[s][t]) << what << " s=" << s << " t=" << t;
}

// Rewrites the trailing checksum so that a tampered header reaches the
// structural checks.
void reseal(std::string& buf) {
    uint64_t sum = detail::fnv1a(buf, buf.size() - 8);
    for (int i = 0; i < 8; ++i) buf[buf.size() - 8 + i] = static_cast<char>((sum >> (8 * i)) & 0xFF);
}

OracleFormatError::Kind load_error(const std::string& buf) {
    try {
        oracle_deserialize(buf);
    } catch (const OracleFormatError& e) {
        return e.kind;
    }
    ADD_FAILURE() << "load succeeded";
    return OracleFormatError::Kind::Header;
}

}  // namespace

TEST(Oracle, AllPairsPerClass) {
    for (auto cls : kAllClasses)
        for (uint64_t seed = 0; seed < 3; ++seed) {
            auto h = instance(cls, 200 + 60 * static_cast<int>(seed), seed);
            auto B = oracle_build(h, forced(4 + static_cast<int>(seed), seed, seed == 1 ? 8 : 0));
            expect_exact(h, B, class_name(cls));
            EXPECT_TRUE(oracle_store_invariants(h, B));
        }
}

TEST(Oracle, DefaultParameters) {
    for (auto cls : kAllClasses) {
        auto h = instance(cls, 300, 17);
        expect_exact(h, oracle_build(h), class_name(cls));
    }
}

TEST(Oracle, PathAndCycle) {
    auto p = path_graph(120);
    expect_exact(p, oracle_build(p, forced(6, 1, 0)), "path");
    auto c = cycle_graph(61);
    expect_exact(c, oracle_build(c, forced(6, 1, 0)), "cycle");
}

TEST(Oracle, QueryRangeChecked) {
    auto h = path_graph(10);
    auto B = oracle_build(h, forced(3, 0));
    EXPECT_THROW(oracle_query(B, -1, 0), std::out_of_range);
    EXPECT_THROW(oracle_query(B, 0, 10), std::out_of_range);
    EXPECT_EQ(oracle_query(B, 4, 4), 0);
}

TEST(Oracle, DisconnectedRejected) {
    auto h = GraphHandle::of(SparseGraph::from_edges(4, {{0, 1}, {2, 3}}));
    EXPECT_THROW(oracle_build(h), std::domain_error);
    EXPECT_THROW(wiener(h), std::domain_error);
}

TEST(Wiener, MatchesBruteForce) {
    for (auto cls : kAllClasses)
        for (uint64_t seed = 0; seed < 3; ++seed) {
            auto h = instance(cls, 250, 40 + seed);
            EXPECT_EQ(wiener(h, forced(5, seed, seed == 0 ? 0 : 8)), wiener_bruteforce(h)) << class_name(cls);
        }
    // P_n has Wiener index (n^3 - n) / 6
    EXPECT_EQ(wiener(path_graph(100), forced(7, 0, 0)), (100LL * 100 * 100 - 100) / 6);
    EXPECT_EQ(wiener(path_graph(1)), 0);
}

TEST(OracleFile, RoundTripIsByteIdentical) {
    for (auto cls : kAllClasses) {
        auto h = instance(cls, 220, 8);
        auto B = oracle_build(h, forced(5, 8, 6));
        std::stringstream a;
        oracle_save(B, a);
        auto L = oracle_load(a);
        std::stringstream b;
        oracle_save(L, b);
        EXPECT_EQ(a.str(), b.str()) << class_name(cls);
        expect_exact(h, L, class_name(cls));
        EXPECT_EQ(wiener_from_bundle(L), wiener_from_bundle(B));
    }
}

TEST(OracleFile, CorruptionIsReported) {
    auto h = instance(GraphClass::Sparse, 150, 3);
    std::string buf = oracle_serialize(oracle_build(h, forced(4, 3, 0)));
    using K = OracleFormatError::Kind;

    std::string bad = buf;
    bad[0] = 'X';
    EXPECT_EQ(load_error(bad), K::BadMagic);

    bad = buf;
    bad[4] = '2';
    EXPECT_EQ(load_error(bad), K::Version);

    EXPECT_EQ(load_error(buf.substr(0, buf.size() / 2)), K::Truncated);
    EXPECT_EQ(load_error(buf.substr(0, 7)), K::Truncated);

    bad = buf;
    bad[buf.size() / 2] ^= 0x40;
    EXPECT_EQ(load_error(bad), K::Checksum);

    // n field sits after magic, version, length and class tag
    bad = buf;
    bad[5 + 4 + 8 + 4] ^= 0x01;
    reseal(bad);
    EXPECT_EQ(load_error(bad), K::Header);
}
