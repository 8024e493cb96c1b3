#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sqd/sqd.hpp"

using namespace sqd;

namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code = -1;
    std::string out, err;
};

fs::path scratch() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("sqd_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome run(const std::string& args, const std::string& env = "") {
    fs::path err = scratch() / "stderr.txt";
    std::string cmd = env + (env.empty() ? "" : " ") + std::string(SQD_CLI_PATH) + " " + args + " 2>" + err.string();
    Outcome r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        if (!l.empty()) out.push_back(l);
    return out;
}

std::map<std::string, std::string> fields(const std::string& line) {
    std::map<std::string, std::string> m;
    std::istringstream in(line);
    for (std::string kv; in >> kv;) {
        auto eq = kv.find('=');
        if (eq != std::string::npos) m[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return m;
}

std::string write_file(const std::string& name, const std::string& text) {
    fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string gen_file(const std::string& kind, int n, int seed, const std::string& extra = "") {
    std::string path = (scratch() / (kind + "_" + std::to_string(n) + "_" + std::to_string(seed) + ".txt")).string();
    Outcome r = run("gen " + kind + " " + std::to_string(n) + " --seed " + std::to_string(seed) + " " + extra + " -o " + path);
    EXPECT_EQ(r.code, 0) << r.err;
    return path;
}

const char* kKinds[] = {"unit-disk", "unit-square", "square", "sparse-graph"};

}  // namespace

TEST(CliGen, SameSeedGivesIdenticalFiles) {
    Outcome a = run("gen unit-disk 100 --seed 7");
    Outcome b = run("gen unit-disk 100 --seed 7");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, run("gen unit-disk 100 --seed 8").out);
}

TEST(CliGen, TreeModeIsConnectedAndAcyclic) {
    auto path = gen_file("sparse-graph", 50, 3, "--mode tree");
    GraphHandle h = read_instance_file(path);
    ASSERT_EQ(h.n(), 50);
    long long m = 0;
    for (auto& a : h.sparse.adj) m += static_cast<long long>(a.size());
    EXPECT_EQ(m / 2, 49);
    EXPECT_TRUE(is_connected(h));
}

TEST(CliGen, DensityWithinTenPercentOfTarget) {
    for (const char* kind : {"unit-disk", "unit-square", "square", "sparse-graph"})
        for (double deg : {6.0, 12.0}) {
            std::ostringstream extra;
            extra << "--degree " << deg;
            GraphHandle h = read_instance_file(gen_file(kind, 2000, 11, extra.str()));
            auto adj = explicit_adjacency(h);
            double sum = 0;
            for (auto& a : adj) sum += static_cast<double>(a.size());
            double avg = sum / h.n();
            EXPECT_NEAR(avg, deg, 0.1 * deg) << kind;
            EXPECT_TRUE(is_connected(h)) << kind;
        }
}

TEST(CliGen, RoundTripKeepsEveryBit) {
    for (const char* kind : kKinds) {
        auto path = gen_file(kind, 200, 5);
        GraphHandle h = read_instance_file(path);
        EXPECT_EQ(instance_text(h), slurp(path)) << kind;
    }
}

TEST(CliRun, TrivialInstances) {
    auto one = write_file("one.txt", "unit-disk 1\n0.25 0.25\n");
    Outcome r = run("ecc " + one + " --verify --list");
    ASSERT_EQ(r.code, 0) << r.err;
    auto f = fields(r.out);
    EXPECT_EQ(f["diameter"], "0");
    EXPECT_EQ(f["ecc"], "0");
    auto pair = write_file("pair.txt", "square 2\n0 0 1\n1.5 0 0.5\n");
    r = run("diameter " + pair + " --verify");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(fields(r.out)["diameter"], "1");
    auto path3 = write_file("path3.txt", "sparse-graph 3\n2 1\n0 1\n1 2\n");
    r = run("ecc " + path3 + " --list");
    EXPECT_EQ(fields(r.out)["ecc"], "2,1,2");
    r = run("wiener " + path3 + " --verify");
    EXPECT_EQ(fields(r.out)["wiener"], "4");
}

TEST(CliRun, VerifyAgreesWithBruteForcePerClass) {
    for (const char* kind : kKinds)
        for (int seed : {1, 2}) {
            auto path = gen_file(kind, 250, seed);
            GraphHandle h = read_instance_file(path);
            auto truth = ecc_bruteforce(h);
            std::string flags = seed == 1 ? "--force-ldd --delta 3 --small-threshold 6" : "--force-ldd --delta 4 --small-threshold 0";
            Outcome r = run("ecc " + path + " --verify --list " + flags);
            ASSERT_EQ(r.code, 0) << kind << " " << r.err;
            auto f = fields(r.out);
            EXPECT_EQ(f["verified"], "yes");
            std::string want;
            for (size_t i = 0; i < truth.size(); ++i) want += (i ? "," : "") + std::to_string(truth[i]);
            EXPECT_EQ(f["ecc"], want) << kind;
            EXPECT_EQ(f["ecc_digest"], ecc_digest(truth));
            r = run("wiener " + path + " --verify " + flags);
            ASSERT_EQ(r.code, 0) << kind << " " << r.err;
            EXPECT_EQ(fields(r.out)["wiener"], std::to_string(wiener_bruteforce(h))) << kind;
        }
}

TEST(CliRun, NaiveMatchesBruteForce) {
    auto path = gen_file("unit-square", 300, 4);
    Outcome r = run("diameter " + path + " --naive");
    ASSERT_EQ(r.code, 0);
    auto f = fields(r.out);
    EXPECT_EQ(f["diameter"], std::to_string(diameter_bruteforce(read_instance_file(path))));
    EXPECT_EQ(f.count("time_ms"), 0u);
    EXPECT_EQ(f.count("naive_ms"), 1u);
}

TEST(CliRun, RecordFieldsAreStable) {
    auto path = gen_file("unit-disk", 120, 9);
    Outcome a = run("ecc " + path + " --seed 5");
    Outcome b = run("ecc " + path + " --seed 5");
    auto strip = [](std::string s) {
        auto at = s.find(" time_ms=");
        return s.substr(0, at);
    };
    EXPECT_EQ(strip(a.out), strip(b.out));
    EXPECT_EQ(a.out.rfind("command=ecc kind=unit-disk n=120 instance=", 0), 0u) << a.out;
    EXPECT_EQ(fields(a.out)["seed"], "5");
}

TEST(CliRun, SeedComesFromTheEnvironment) {
    auto path = gen_file("sparse-graph", 60, 2);
    Outcome r = run("diameter " + path, "SQD_SEED=4242");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(fields(r.out)["seed"], "4242");
    r = run("diameter " + path + " --seed 17", "SQD_SEED=4242");
    EXPECT_EQ(fields(r.out)["seed"], "17");
}

TEST(CliErrors, ParseErrorsCarryLineNumbers) {
    auto bad = write_file("bad.txt", "unit-disk 3\n0 0\n\n1 x\n0.5 0.5\n");
    Outcome r = run("ecc " + bad);
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("line 4"), std::string::npos) << r.err;
    auto short_file = write_file("short.txt", "square 3\n0 0 1\n1 1 1\n");
    r = run("diameter " + short_file);
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("line 4"), std::string::npos) << r.err;
    auto kind = write_file("kind.txt", "circle 2\n0 0\n1 1\n");
    r = run("diameter " + kind);
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("line 1"), std::string::npos);
    auto edge = write_file("edge.txt", "sparse-graph 3\n2 1\n0 1\n1 3\n");
    r = run("diameter " + edge);
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("line 4"), std::string::npos) << r.err;
    auto unequal = write_file("unequal.txt", "unit-square 2\n0 0 0.5\n1 0 0.25\n");
    EXPECT_EQ(run("diameter " + unequal).code, 3);
    EXPECT_EQ(run("diameter " + (scratch() / "missing.txt").string()).code, 3);
}

TEST(CliErrors, ParameterErrors) {
    auto path = gen_file("unit-disk", 50, 1);
    EXPECT_EQ(run("diameter " + path + " --delta -1").code, 4);
    EXPECT_EQ(run("diameter " + path + " --rho 0.5").code, 4);
    EXPECT_EQ(run("diameter " + path + " --no-such-flag").code, 4);
    EXPECT_EQ(run("gen circle 10").code, 4);
    EXPECT_EQ(run("gen unit-disk 0").code, 4);
    EXPECT_EQ(run("").code, 4);
    EXPECT_EQ(run("bench --kind unit-square --sizes 64,32").code, 4);
}

TEST(CliErrors, RetryExhaustionHasItsOwnCode) {
    auto path = gen_file("square", 200, 3);
    Outcome r = run("ecc " + path + " --force-ldd --delta 3 --stabbing-c 1e-12 --max-attempts 2");
    EXPECT_EQ(r.code, 5);
    EXPECT_NE(r.err.find("attempts"), std::string::npos);
}

TEST(CliOracle, BuildQueryWienerRoundTrip) {
    for (const char* kind : kKinds) {
        auto path = gen_file(kind, 150, 6);
        GraphHandle h = read_instance_file(path);
        std::string ofile = (scratch() / (std::string(kind) + ".oracle")).string();
        Outcome b = run("oracle build " + path + " -o " + ofile + " --verify --force-ldd --delta 3 --small-threshold 8");
        ASSERT_EQ(b.code, 0) << kind << b.err;
        EXPECT_EQ(fields(b.out)["verified"], "yes");

        auto d = apsp_bruteforce(h);
        std::string pairs;
        std::vector<std::pair<int, int>> qs;
        for (int i = 0; i < 200; ++i) {
            int s = (i * 37) % h.n(), t = (i * 91 + 5) % h.n();
            qs.push_back({s, t});
            pairs += std::to_string(s) + " " + std::to_string(t) + "\n";
        }
        auto qfile = write_file("pairs.txt", pairs);
        Outcome q = run("oracle query " + ofile + " --pairs " + qfile + " --verify-instance " + path);
        ASSERT_EQ(q.code, 0) << q.err;
        auto ls = lines(q.out);
        ASSERT_EQ(ls.size(), qs.size());
        for (size_t i = 0; i < qs.size(); ++i) {
            auto f = fields(ls[i]);
            EXPECT_EQ(f["dist"], std::to_string(d[qs[i].first][qs[i].second]));
            EXPECT_EQ(f["verified"], "yes");
        }
        Outcome w = run("oracle wiener " + ofile);
        ASSERT_EQ(w.code, 0);
        EXPECT_EQ(fields(w.out)["wiener"], std::to_string(wiener_bruteforce(h))) << kind;
    }
}

TEST(CliOracle, CorruptFilesAreRejected) {
    auto path = gen_file("unit-square", 80, 2);
    std::string ofile = (scratch() / "c.oracle").string();
    ASSERT_EQ(run("oracle build " + path + " -o " + ofile).code, 0);
    std::string blob = slurp(ofile);
    blob[blob.size() / 2] ^= 0x5a;
    auto broken = write_file("broken.oracle", blob);
    EXPECT_EQ(run("oracle wiener " + broken).code, 3);
    auto junk = write_file("junk.oracle", "not an oracle");
    EXPECT_EQ(run("oracle wiener " + junk).code, 3);
    auto bad_pairs = write_file("badpairs.txt", "0 1\n0\n");
    Outcome q = run("oracle query " + ofile + " --pairs " + bad_pairs);
    EXPECT_EQ(q.code, 3);
    EXPECT_NE(q.err.find("line 2"), std::string::npos);
}

TEST(CliStats, PiecesPartitionTheVertices) {
    auto path = gen_file("unit-disk", 400, 8);
    GraphHandle h = read_instance_file(path);
    Outcome r = run("stats " + path + " --force-ldd --delta 6");
    ASSERT_EQ(r.code, 0) << r.err;
    auto ls = lines(r.out);
    ASSERT_FALSE(ls.empty());
    auto top = fields(ls[0]);
    EXPECT_EQ(top["command"], "stats");
    long long size = 0, boundary = 0;
    int pieces = 0;
    for (size_t i = 1; i < ls.size(); ++i) {
        auto f = fields(ls[i]);
        size += std::stoll(f["size"]);
        boundary += std::stoll(f["boundary"]);
        EXPECT_LE(std::stoi(f["diameter"]), 6);
        EXPECT_LE(std::stoi(f["anchor_ecc"]), std::stoi(f["diameter"]));
        ++pieces;
    }
    EXPECT_EQ(size, h.n());
    EXPECT_EQ(std::to_string(pieces), top["pieces"]);
    EXPECT_EQ(std::to_string(boundary), top["boundary_total"]);
}

TEST(CliBench, SmallLadderReportsExponents) {
    Outcome r = run("bench --kind unit-square --sizes 64,128,256 --reps 3 --force-ldd --delta 4");
    ASSERT_EQ(r.code, 0) << r.err;
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 4u);
    for (int i = 0; i < 3; ++i) {
        auto f = fields(ls[i]);
        EXPECT_EQ(f["command"], "bench");
        EXPECT_EQ(f["reps"], "3");
        EXPECT_EQ(f["agree"], "yes");
    }
    auto s = fields(ls[3]);
    EXPECT_EQ(s["command"], "bench-summary");
    EXPECT_TRUE(s.count("pipeline_exponent"));
    EXPECT_TRUE(s.count("naive_exponent"));
}
