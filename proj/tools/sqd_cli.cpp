#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqd/sqd.hpp"

using namespace sqd;

namespace {

enum Exit { kOk = 0, kInternal = 1, kMismatch = 2, kParse = 3, kParam = 4, kRetry = 5 };

// Thrown for unreadable files; reported like a parse failure.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunFlags {
    int delta = 0;
    double rho = 0;
    long long small = -1;
    int block = 0;
    uint64_t seed = default_seed();
    bool verify = false;
    bool naive = false;
    bool force_ldd = false;
    bool list = false;
    double stabbing_c = 8.0;
    int max_attempts = 10;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
    app->add_option("--delta", f.delta, "LDD diameter parameter (0 = class default)");
    app->add_option("--rho", f.rho, "stabbing-path parameter (0 = class default)");
    app->add_option("--small-threshold", f.small, "pieces of at most this size use patterns (-1 = class default)");
    app->add_option("--block-size", f.block, "block size of the square cover structure (0 = default)");
    app->add_option("--seed", f.seed, "random seed (default: $SQD_SEED or built in)");
    app->add_flag("--verify", f.verify, "also run brute force and compare");
    app->add_flag("--naive", f.naive, "run brute force only");
    app->add_flag("--force-ldd", f.force_ldd, "run the decomposition even when delta is below its guarantee range");
    app->add_option("--stabbing-c", f.stabbing_c, "constant of the stabbing-path quality bound");
    app->add_option("--max-attempts", f.max_attempts, "stabbing-path resampling attempts");
}

Params to_params(const RunFlags& f) {
    Params p;
    p.delta = f.delta;
    p.rho = f.rho;
    p.small_threshold = f.small;
    p.block = f.block;
    p.seed = f.seed;
    if (f.force_ldd) p.ldd_mode = LddMode::Force;
    if (!(f.stabbing_c > 0)) throw ParameterError("stabbing constant must be positive");
    if (f.max_attempts < 1) throw ParameterError("max attempts must be positive");
    p.stabbing.c = f.stabbing_c;
    p.stabbing.max_attempts = f.max_attempts;
    check_params(p);
    if (f.small < -1) throw ParameterError("small threshold must be -1 or non-negative");
    return p;
}

GraphHandle load(const std::string& path) {
    if (path == "-") return read_instance(std::cin);
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return read_instance(in);
}

double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

// One key=value record per line, fields in insertion order.
struct Record {
    std::vector<std::pair<std::string, std::string>> f;
    Record& add(const std::string& k, const std::string& v) {
        f.push_back({k, v});
        return *this;
    }
    Record& add(const std::string& k, const char* v) { return add(k, std::string(v)); }
    template <class T>
    Record& add(const std::string& k, T v) {
        if constexpr (std::is_floating_point_v<T>) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.6g", static_cast<double>(v));
            return add(k, std::string(buf));
        } else {
            return add(k, std::to_string(v));
        }
    }
    void print() const {
        for (size_t i = 0; i < f.size(); ++i) std::cout << (i ? " " : "") << f[i].first << '=' << f[i].second;
        std::cout << '\n';
    }
};

Record header(const std::string& cmd, const GraphHandle& h, const RunFlags& f) {
    Record r;
    r.add("command", cmd).add("kind", class_name(h.cls)).add("n", h.n()).add("instance", instance_digest(h));
    r.add("seed", f.seed);
    return r;
}

void add_params(Record& r, const FrameworkReport& rep) {
    r.add("delta", rep.params.delta).add("rho", rep.params.rho).add("small_threshold", rep.params.A).add("block", rep.params.block);
    r.add("pieces", rep.pieces).add("large_pieces", rep.large_pieces).add("small_pieces", rep.small_pieces);
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

int cmd_run(const std::string& cmd, const std::string& file, const RunFlags& f) {
    GraphHandle h = load(file);
    Params p = to_params(f);
    Record r = header(cmd, h, f);
    bool fast = !f.naive, slow = f.naive || f.verify;
    int status = kOk;
    if (cmd == "wiener") {
        long long w = 0, wn = 0;
        double t0 = now_ms();
        if (fast) {
            auto B = oracle_build(h, p);
            w = wiener_from_bundle(B);
            add_params(r, B.report);
        }
        double t1 = now_ms();
        if (slow) wn = wiener_naive(h);
        double t2 = now_ms();
        r.add("wiener", fast ? w : wn);
        if (fast) r.add("time_ms", t1 - t0);
        if (slow) r.add("naive_ms", t2 - t1);
        if (f.verify) {
            r.add("verified", w == wn ? "yes" : "no");
            if (w != wn) {
                r.add("naive_wiener", wn);
                status = kMismatch;
            }
        }
        r.print();
        return status;
    }
    std::vector<int> e, en;
    int diam = 0;
    double t0 = now_ms();
    if (fast) {
        EccResult res = cmd == "diameter" ? diameter(h, p) : ecc_all(h, p);
        e = res.ecc;
        diam = res.diameter;
        add_params(r, res.report);
        for (auto& w : res.report.warnings) std::cerr << "warning: " << w << '\n';
    }
    double t1 = now_ms();
    if (slow) en = ecc_naive(h);
    double t2 = now_ms();
    const std::vector<int>& out = fast ? e : en;
    if (!fast) diam = en.empty() ? 0 : *std::max_element(en.begin(), en.end());
    r.add("diameter", diam);
    if (cmd == "ecc") r.add("ecc_digest", ecc_digest(out));
    if (fast) r.add("time_ms", t1 - t0);
    if (slow) r.add("naive_ms", t2 - t1);
    if (f.verify) {
        bool same = cmd == "ecc" ? e == en : diam == *std::max_element(en.begin(), en.end());
        r.add("verified", same ? "yes" : "no");
        if (!same) status = kMismatch;
    }
    if (cmd == "ecc" && f.list) r.add("ecc", join(out));
    r.print();
    return status;
}

int cmd_gen(const std::string& kind, int n, double degree, const std::string& mode, double min_half, double max_half,
            int vc_dim, uint64_t seed, const std::string& out_path) {
    GraphClass cls;
    if (!parse_kind(kind, cls)) throw ParameterError("unknown kind '" + kind + "'");
    GenParams gp;
    gp.avg_degree = degree;
    gp.sparse_mode = mode;
    gp.min_half = min_half;
    gp.max_half = max_half;
    gp.vc_dim = vc_dim;
    GraphHandle h;
    try {
        h = cls == GraphClass::Sparse ? GraphHandle::of(gen_sparse(n, seed, gp))
            : GraphHandle::of(gen_geometric(cls == GraphClass::UnitDisk     ? GeoKind::UnitDisk
                                             : cls == GraphClass::UnitSquare ? GeoKind::UnitSquare
                                                                              : GeoKind::Square,
                                             n, seed, gp));
    } catch (const std::invalid_argument& e) {
        throw ParameterError(e.what());
    }
    if (out_path.empty() || out_path == "-") {
        write_instance(h, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot write " + out_path);
        write_instance(h, out);
    }
    long long m = 0;
    for (auto& a : adjacency_lists(h)) m += static_cast<long long>(a.size());
    std::cerr << "generated kind=" << class_name(h.cls) << " n=" << h.n() << " avg_degree=" << (h.n() ? double(m) / h.n() : 0.0)
              << " seed=" << seed << '\n';
    return kOk;
}

OracleBundle load_oracle(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    return oracle_load(in);
}

int cmd_oracle_build(const std::string& file, const std::string& out_path, const RunFlags& f) {
    GraphHandle h = load(file);
    Params p = to_params(f);
    double t0 = now_ms();
    OracleBundle B = oracle_build(h, p);
    double t1 = now_ms();
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InputError("cannot write " + out_path);
    oracle_save(B, out);
    out.close();
    Record r = header("oracle-build", h, f);
    add_params(r, B.report);
    r.add("time_ms", t1 - t0).add("file", out_path);
    int status = kOk;
    if (f.verify) {
        // Every pair against BFS, through a reload of the written file.
        OracleBundle L = load_oracle(out_path);
        SparseGraph g;
        g.n = h.n();
        g.adj = adjacency_lists(h);
        long long bad = 0;
        for (int s = 0; s < g.n; ++s) {
            auto d = bfs_sparse(g, s);
            for (int t = 0; t < g.n; ++t) bad += oracle_query(L, s, t) != d[t];
        }
        r.add("verified", bad == 0 ? "yes" : "no").add("mismatches", bad);
        if (bad) status = kMismatch;
    }
    r.print();
    return status;
}

int cmd_oracle_query(const std::string& oracle_path, const std::string& pairs_path, const std::string& instance_path) {
    OracleBundle B = load_oracle(oracle_path);
    std::unique_ptr<SparseGraph> g;
    if (!instance_path.empty()) {
        GraphHandle h = load(instance_path);
        if (h.n() != B.n) throw ParameterError("instance size does not match the oracle");
        g = std::make_unique<SparseGraph>();
        g->n = h.n();
        g->adj = adjacency_lists(h);
    }
    std::ifstream file;
    std::istream* in = &std::cin;
    if (!pairs_path.empty() && pairs_path != "-") {
        file.open(pairs_path);
        if (!file) throw InputError("cannot open " + pairs_path);
        in = &file;
    }
    int status = kOk;
    int line_no = 0;
    for (std::string line; std::getline(*in, line);) {
        ++line_no;
        std::istringstream ls(line.substr(0, line.find('#')));
        long long s, t;
        if (!(ls >> s)) continue;
        std::string rest;
        if (!(ls >> t) || (ls >> rest)) throw ParseError(line_no, "query line must be 's t'");
        if (s < 0 || t < 0 || s >= B.n || t >= B.n) throw ParseError(line_no, "vertex id out of range");
        int d = oracle_query(B, static_cast<int>(s), static_cast<int>(t));
        Record r;
        r.add("s", s).add("t", t).add("dist", d);
        if (g) {
            int truth = bfs_sparse(*g, static_cast<int>(s))[t];
            r.add("verified", d == truth ? "yes" : "no");
            if (d != truth) status = kMismatch;
        }
        r.print();
    }
    return status;
}

int cmd_oracle_wiener(const std::string& oracle_path) {
    OracleBundle B = load_oracle(oracle_path);
    Record r;
    r.add("command", "oracle-wiener").add("kind", class_name(B.cls)).add("n", B.n).add("wiener", wiener_from_bundle(B));
    r.print();
    return kOk;
}

// Per-piece sizes, boundary counts and strong diameters of the decomposition
// the pipeline would use.
int cmd_stats(const std::string& file, const RunFlags& f, int exact_cap) {
    GraphHandle h = load(file);
    Params p = to_params(f);
    int vc = h.is_sparse() ? h.sparse.declared_vc_dim : 2;
    Resolved R = resolve_params(h.cls, h.n(), vc, Purpose::Ecc, p);
    LowDiameterDecomposition L = build_ldd(h, R.delta, f.force_ldd ? LddMode::Force : LddMode::Fallback);
    Record top = header("stats", h, f);
    top.add("delta", R.delta).add("pieces", L.piece_count()).add("boundary_total", L.boundary_total());
    top.add("whole_graph", L.whole_graph ? "yes" : "no");
    top.print();
    for (int i = 0; i < L.piece_count(); ++i) {
        const auto& P = L.pieces[i];
        Record r;
        r.add("piece", i).add("size", static_cast<long long>(P.size())).add("boundary", static_cast<long long>(L.boundary[i].size()));
        r.add("large", static_cast<long long>(P.size()) > R.A ? "yes" : "no");
        auto from_anchor = weighted_bfs(h, P, {{L.anchor[i], 0}});
        int ecc_anchor = 0;
        for (int v : P) ecc_anchor = std::max(ecc_anchor, from_anchor[v]);
        r.add("anchor_ecc", ecc_anchor);
        if (static_cast<int>(P.size()) <= exact_cap) {
            int diam = 0;
            for (int s : P) {
                auto d = weighted_bfs(h, P, {{s, 0}});
                for (int v : P) diam = std::max(diam, d[v]);
            }
            r.add("diameter", diam);
        }
        r.print();
    }
    return kOk;
}

double fit_exponent(const std::vector<double>& n, const std::vector<double>& t) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (size_t i = 0; i < n.size(); ++i) {
        if (!(t[i] > 0)) continue;
        double x = std::log(n[i]), y = std::log(t[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
        ++k;
    }
    if (k < 2) return NAN;
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int cmd_bench(const std::string& kind, std::vector<int> sizes, int reps, const RunFlags& f, long long naive_max, bool skip_pipeline) {
    GraphClass cls;
    if (!parse_kind(kind, cls)) throw ParameterError("unknown kind '" + kind + "'");
    if (sizes.empty()) throw ParameterError("empty size ladder");
    for (size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw ParameterError("size ladder must be ascending");
    if (reps < 1) throw ParameterError("repetitions must be positive");
    Params p = to_params(f);
    std::vector<double> ns, tp, tn, nn;
    for (int n : sizes) {
        GraphHandle h = cls == GraphClass::Sparse ? GraphHandle::of(gen_sparse(n, f.seed))
                        : GraphHandle::of(gen_geometric(cls == GraphClass::UnitDisk     ? GeoKind::UnitDisk
                                                         : cls == GraphClass::UnitSquare ? GeoKind::UnitSquare
                                                                                          : GeoKind::Square,
                                                         n, f.seed));
        std::vector<double> a, b;
        int dp = -1, dn = -1;
        for (int i = 0; i < reps; ++i) {
            if (!skip_pipeline) {
                double t0 = now_ms();
                dp = diameter(h, p).diameter;
                a.push_back(now_ms() - t0);
            }
            if (n <= naive_max) {
                double t0 = now_ms();
                auto e = ecc_naive(h);
                b.push_back(now_ms() - t0);
                dn = *std::max_element(e.begin(), e.end());
            }
        }
        Record r;
        r.add("command", "bench").add("kind", class_name(cls)).add("n", n).add("reps", reps).add("seed", f.seed);
        if (!a.empty()) {
            ns.push_back(n);
            tp.push_back(median(a));
            r.add("pipeline_ms", tp.back()).add("diameter", dp);
        }
        if (!b.empty()) {
            nn.push_back(n);
            tn.push_back(median(b));
            r.add("naive_ms", tn.back()).add("naive_diameter", dn);
        }
        if (!a.empty() && !b.empty()) r.add("agree", dp == dn ? "yes" : "no");
        r.print();
        std::cout.flush();
        if (!a.empty() && !b.empty() && dp != dn) return kMismatch;
    }
    Record s;
    s.add("command", "bench-summary").add("kind", class_name(cls));
    if (ns.size() >= 2) s.add("pipeline_exponent", fit_exponent(ns, tp));
    if (nn.size() >= 2) s.add("naive_exponent", fit_exponent(nn, tn));
    s.print();
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact diameter, eccentricities, Wiener index and distance oracles for geometric intersection graphs"};
    app.require_subcommand(1);

    std::string kind, out_path, mode = "gnm";
    int n = 0, vc_dim = 2;
    double degree = 8.0, min_half = 0.25, max_half = 1.5;
    uint64_t gen_seed = default_seed();
    auto* gen = app.add_subcommand("gen", "generate a random connected instance");
    gen->add_option("kind", kind, "unit-disk | unit-square | square | sparse-graph")->required();
    gen->add_option("n", n, "number of vertices")->required();
    gen->add_option("--degree", degree, "target average degree");
    gen->add_option("--mode", mode, "sparse-graph mode: gnm | tree | grid");
    gen->add_option("--min-half", min_half, "square: smallest half side");
    gen->add_option("--max-half", max_half, "square: largest half side");
    gen->add_option("--vc-dim", vc_dim, "sparse-graph: declared VC dimension");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("-o,--out", out_path, "output file (default stdout)");

    RunFlags rf;
    std::string file;
    std::vector<CLI::App*> runs;
    for (const char* name : {"diameter", "ecc", "wiener"}) {
        auto* c = app.add_subcommand(name, std::string("compute the ") + name);
        c->add_option("instance", file, "instance file, '-' for stdin")->required();
        add_run_flags(c, rf);
        if (std::string(name) == "ecc") c->add_flag("--list", rf.list, "include the full eccentricity array");
        runs.push_back(c);
    }

    auto* oracle = app.add_subcommand("oracle", "distance oracle");
    oracle->require_subcommand(1);
    std::string oracle_path, pairs_path, check_instance;
    auto* ob = oracle->add_subcommand("build", "build an oracle file");
    ob->add_option("instance", file, "instance file")->required();
    ob->add_option("-o,--out", oracle_path, "oracle file")->required();
    add_run_flags(ob, rf);
    auto* oq = oracle->add_subcommand("query", "answer 's t' pairs from a file or stdin");
    oq->add_option("oracle", oracle_path, "oracle file")->required();
    oq->add_option("--pairs", pairs_path, "query file (default stdin)");
    oq->add_option("--verify-instance", check_instance, "check answers against BFS on this instance");
    auto* ow = oracle->add_subcommand("wiener", "Wiener index from an oracle file");
    ow->add_option("oracle", oracle_path, "oracle file")->required();

    int exact_cap = 4000;
    auto* stats = app.add_subcommand("stats", "decomposition statistics");
    stats->add_option("instance", file, "instance file")->required();
    stats->add_option("--exact-cap", exact_cap, "exact piece diameters up to this size");
    add_run_flags(stats, rf);

    std::vector<int> sizes;
    int reps = 1, from = 0, to = 0;
    long long naive_max = 1LL << 20;
    bool skip_pipeline = false;
    std::string bench_kind = "unit-square";
    auto* bench = app.add_subcommand("bench", "time the pipeline and the naive BFS over a size ladder");
    bench->add_option("--kind", bench_kind, "instance kind");
    bench->add_option("--sizes", sizes, "ascending sizes")->delimiter(',');
    bench->add_option("--from-log2", from, "ladder 2^from .. 2^to");
    bench->add_option("--to-log2", to, "ladder 2^from .. 2^to");
    bench->add_option("--reps", reps, "repetitions per size (median reported)");
    bench->add_option("--naive-max", naive_max, "largest n for the naive timing");
    bench->add_flag("--naive-only", skip_pipeline, "time the naive pipeline only");
    add_run_flags(bench, rf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kParam;
    }

    try {
        if (gen->parsed()) return cmd_gen(kind, n, degree, mode, min_half, max_half, vc_dim, gen_seed, out_path);
        for (auto* c : runs)
            if (c->parsed()) return cmd_run(c->get_name(), file, rf);
        if (ob->parsed()) return cmd_oracle_build(file, oracle_path, rf);
        if (oq->parsed()) return cmd_oracle_query(oracle_path, pairs_path, check_instance);
        if (ow->parsed()) return cmd_oracle_wiener(oracle_path);
        if (stats->parsed()) return cmd_stats(file, rf, exact_cap);
        if (bench->parsed()) {
            if (sizes.empty() && to > 0)
                for (int k = from; k <= to; ++k) sizes.push_back(1 << k);
            return cmd_bench(bench_kind, sizes, reps, rf, naive_max, skip_pipeline);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const OracleFormatError& e) {
        std::cerr << "oracle file error: " << e.what() << '\n';
        return kParse;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kParse;
    } catch (const RetryExhausted& e) {
        std::cerr << "retry exhaustion: " << e.what() << '\n';
        return kRetry;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kParam;
    } catch (const std::domain_error& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kParam;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kOk;
}
