#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "diam_ecc.hpp"

namespace sqd {

// Adjusted balls of one large piece: for r in [r_lo, r_hi] and s in the
// piece, layers[r - r_lo][i] is N^r[s] = {t : d(s,t) <= w(t) + r} with
// w(t) = d(t, anchor), over paths[path_of[r - r_lo]].
struct LargeStore {
    int anchor = 0;
    int r_lo = 0, r_hi = 0;
    std::vector<int> piece;
    std::vector<int> weight;
    std::vector<std::shared_ptr<const StabbingPath>> paths;
    std::vector<int> path_of;
    std::vector<std::vector<IntervalRep>> layers;
};

struct OracleBundle {
    GraphClass cls = GraphClass::Sparse;
    int n = 0;
    int delta = 0;
    uint64_t seed = 0;
    std::vector<int> piece_of;   // vertex -> piece
    std::vector<int> local_of;   // vertex -> index inside its piece
    std::vector<char> large;     // per piece
    std::vector<int> store_of;   // per piece, index into large_stores or small_stores
    std::vector<LargeStore> large_stores;
    std::vector<SmallOracle> small_stores;
    FrameworkReport report;
};

inline OracleBundle oracle_build(const GraphHandle& h, const Params& params = {}) {
    if (h.n() == 0) throw std::invalid_argument("oracle_build: empty instance");
    if (!is_connected(h)) throw std::domain_error("oracle_build: graph is not connected");
    OracleBundle B;
    B.cls = h.cls;
    B.n = h.n();
    B.seed = params.seed;
    auto adj = std::make_shared<std::vector<std::vector<int>>>(adjacency_lists(h));
    FrameworkHooks hooks;
    hooks.make_driver = [&](const GraphHandle& g, const std::vector<PieceContext>& ctx, const std::vector<int>& large,
                            const Resolved& R) {
        NeighborUnion u = params.explicit_unions ? explicit_neighbor_union(*adj) : class_neighbor_union(g, R, adj);
        GrowthRule rule = params.explicit_unions ? GrowthRule::Cumulative : class_growth_rule(g);
        return default_driver(g, ctx, large, R, params, std::move(u), rule);
    };
    if (h.cls == GraphClass::UnitDisk && !params.explicit_unions) {
        // weighted typed balls: the type loop honours w through its {s} seed
        // and the boundary rows
        hooks.grow_override = [&](const PieceContext& c, std::shared_ptr<const StabbingPath> path) {
            auto st = grow_typed_balls(h, c, path, 0, nullptr, [&](const BallLayer& layer) { return hooks.on_layer(c, layer); });
            GrowthStats g = st.growth;
            g.structures = st.structures;
            g.max_envelope = st.max_envelope;
            return g;
        };
    }
    std::map<int, std::pair<bool, int>> where;  // piece -> (large, store)
    hooks.on_large_begin = [&](const PieceContext& c) {
        LargeStore S;
        S.anchor = c.anchor;
        S.r_lo = c.r_lo;
        S.r_hi = c.r_hi;
        S.piece = c.piece;
        S.weight = c.weight;
        where[c.index] = {true, static_cast<int>(B.large_stores.size())};
        B.large_stores.push_back(std::move(S));
    };
    hooks.on_layer = [&](const PieceContext& c, const BallLayer& layer) {
        LargeStore& S = B.large_stores.back();
        if (S.paths.empty() || S.paths.back() != layer.path) S.paths.push_back(layer.path);
        S.path_of.push_back(static_cast<int>(S.paths.size()) - 1);
        S.layers.push_back(layer.ball);
        return layer.r < c.r_hi;
    };
    hooks.on_small = [&](const PieceContext& c, const PatternTable& T) {
        where[c.index] = {false, static_cast<int>(B.small_stores.size())};
        B.small_stores.push_back(oracle_small_piece_build(h, c.piece, c.rows, T));
    };
    LowDiameterDecomposition L;
    B.report = run_framework(h, params, Purpose::Oracle, hooks, &L);
    B.delta = B.report.params.delta;
    B.piece_of = L.piece_of;
    B.local_of.assign(h.n(), -1);
    for (int p = 0; p < L.piece_count(); ++p)
        for (int i = 0; i < static_cast<int>(L.pieces[p].size()); ++i) B.local_of[L.pieces[p][i]] = i;
    for (int p = 0; p < L.piece_count(); ++p) {
        B.large.push_back(where.at(p).first ? 1 : 0);
        B.store_of.push_back(where.at(p).second);
    }
    return B;
}

// First layer holding t, by binary search over the nested balls.
inline int large_store_query(const LargeStore& S, int i, int t) {
    int lo = 0, hi = static_cast<int>(S.layers.size()) - 1;
    auto holds = [&](int k) { return contains(S.layers[k][i], *S.paths[S.path_of[k]], t); };
    if (!holds(hi)) throw std::logic_error("oracle: outermost ball misses a vertex");
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (holds(mid)) hi = mid;
        else lo = mid + 1;
    }
    return S.weight[t] + S.r_lo + lo;
}

inline int oracle_query(const OracleBundle& B, int s, int t) {
    if (s < 0 || t < 0 || s >= B.n || t >= B.n) throw std::out_of_range("oracle_query: vertex id out of range");
    if (s == t) return 0;
    int p = B.piece_of[s];
    if (B.large[p]) return large_store_query(B.large_stores[B.store_of[p]], B.local_of[s], t);
    return oracle_small_piece_query(B.small_stores[B.store_of[p]], s, t);
}

// Sum over all ordered pairs halved. Large pieces add, per source and layer,
// the weight mass and size of the new shell (prefix sums of w over path
// positions); small pieces use per-pattern counts.
inline long long wiener_from_bundle(const OracleBundle& B) {
    long long ordered = 0;
    for (const LargeStore& S : B.large_stores) {
        std::vector<std::vector<long long>> prefix;
        for (auto& p : S.paths) {
            std::vector<long long> pre(p->size() + 1, 0);
            for (int i = 0; i < p->size(); ++i) pre[i + 1] = pre[i] + S.weight[p->order[i]];
            prefix.push_back(std::move(pre));
        }
        for (size_t i = 0; i < S.piece.size(); ++i) {
            long long prev_mass = 0, prev_count = 0;
            for (size_t k = 0; k < S.layers.size(); ++k) {
                const auto& pre = prefix[S.path_of[k]];
                long long mass = 0, count = 0;
                for (auto iv : S.layers[k][i].iv) {
                    mass += pre[iv.hi + 1] - pre[iv.lo];
                    count += iv.hi - iv.lo + 1;
                }
                int r = S.r_lo + static_cast<int>(k);
                ordered += (mass - prev_mass) + static_cast<long long>(r) * (count - prev_count);
                prev_mass = mass;
                prev_count = count;
            }
        }
    }
    for (const SmallOracle& o : B.small_stores) {
        std::vector<long long> cnt(o.entry.size(), 0);
        long long base_sum = 0;
        for (int t = 0; t < B.n; ++t)
            if (o.local[t] < 0 && o.pattern_of[t] >= 0) {
                ++cnt[o.pattern_of[t]];
                base_sum += o.base[t];
            }
        for (size_t i = 0; i < o.piece.size(); ++i) {
            ordered += base_sum;
            for (int d : o.inside[i]) ordered += d;
            for (size_t p = 0; p < o.entry.size(); ++p) ordered += cnt[p] * o.entry[p][i];
        }
    }
    return ordered / 2;
}

inline long long wiener(const GraphHandle& h, const Params& params = {}) {
    if (!is_connected(h)) throw std::domain_error("wiener: graph is not connected");
    if (h.n() <= 1) return 0;
    return wiener_from_bundle(oracle_build(h, params));
}

// Materialized check of the window ends: the first layer is exactly the
// ball at r_lo (so the one below it adds nothing new), and the last layer is
// the whole vertex set.
inline bool oracle_store_invariants(const GraphHandle& h, const OracleBundle& B) {
    for (const LargeStore& S : B.large_stores) {
        if (S.r_lo != -S.r_hi || S.layers.empty()) return false;
        const StabbingPath& first = *S.paths[S.path_of.front()];
        const StabbingPath& last = *S.paths[S.path_of.back()];
        for (size_t i = 0; i < S.piece.size(); ++i) {
            if (!is_full(S.layers.back()[i], last)) return false;
            auto row = bfs(h, S.piece[i]);
            for (int t = 0; t < h.n(); ++t) {
                if (row[t] - S.weight[t] < S.r_lo) return false;
                if (contains(S.layers.front()[i], first, t) != (row[t] - S.weight[t] <= S.r_lo)) return false;
            }
        }
    }
    return true;
}

// ---- serialization ---------------------------------------------------------

struct OracleFormatError : std::runtime_error {
    enum class Kind { BadMagic, Version, Truncated, Checksum, Header };
    Kind kind;
    OracleFormatError(Kind k, const std::string& m) : std::runtime_error(m), kind(k) {}
};

namespace detail {

inline constexpr char kOracleMagic[5] = {'S', 'Q', 'D', 'O', '1'};
inline constexpr uint32_t kOracleVersion = 1;

inline uint64_t fnv1a(const std::string& s, size_t len) {
    uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(s[i]);
        h *= 1099511628211ull;
    }
    return h;
}

struct Writer {
    std::string buf;
    void u8(uint8_t v) { buf.push_back(static_cast<char>(v)); }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void i32(int v) { u32(static_cast<uint32_t>(v)); }
    void ints(const std::vector<int>& v) {
        u32(static_cast<uint32_t>(v.size()));
        for (int x : v) i32(x);
    }
};

struct Reader {
    const std::string& buf;
    size_t pos = 0, end = 0;
    Reader(const std::string& b, size_t e) : buf(b), end(e) {}
    void need(size_t k) {
        if (pos + k > end) throw OracleFormatError(OracleFormatError::Kind::Truncated, "oracle file is truncated");
    }
    uint8_t u8() {
        need(1);
        return static_cast<uint8_t>(buf[pos++]);
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
    int i32() { return static_cast<int>(u32()); }
    std::vector<int> ints() {
        uint32_t k = u32();
        need(static_cast<size_t>(k) * 4);
        std::vector<int> v(k);
        for (auto& x : v) x = i32();
        return v;
    }
};

inline void write_path(Writer& w, const StabbingPath& p) {
    w.ints(p.order);
    w.ints(p.class_at);
}

inline std::shared_ptr<const StabbingPath> read_path(Reader& r, int n) {
    auto order = r.ints();
    auto labels = r.ints();
    if (labels.size() != order.size()) throw OracleFormatError(OracleFormatError::Kind::Header, "path label count mismatch");
    for (int x : order)
        if (x < 0 || x >= n) throw OracleFormatError(OracleFormatError::Kind::Header, "path element out of range");
    try {
        return std::make_shared<const StabbingPath>(make_path(std::move(order), labels, n));
    } catch (const std::invalid_argument& e) {
        throw OracleFormatError(OracleFormatError::Kind::Header, std::string("bad path: ") + e.what());
    }
}

inline std::string large_block(const LargeStore& S) {
    Writer w;
    w.i32(S.anchor);
    w.i32(S.r_lo);
    w.i32(S.r_hi);
    w.ints(S.piece);
    w.ints(S.weight);
    w.u32(static_cast<uint32_t>(S.paths.size()));
    for (auto& p : S.paths) write_path(w, *p);
    w.ints(S.path_of);
    for (auto& layer : S.layers)
        for (auto& rep : layer) {
            w.u32(static_cast<uint32_t>(rep.iv.size()));
            for (auto iv : rep.iv) {
                w.i32(iv.lo);
                w.i32(iv.hi);
            }
        }
    return w.buf;
}

inline std::string small_block(const SmallOracle& o) {
    Writer w;
    w.ints(o.piece);
    for (auto& row : o.inside) w.ints(row);
    w.ints(o.pattern_of);
    w.ints(o.base);
    w.u32(static_cast<uint32_t>(o.radii.size()));
    for (auto& r : o.radii) w.ints(r);
    for (auto& e : o.entry) w.ints(e);
    return w.buf;
}

inline LargeStore read_large(Reader& r, int n) {
    LargeStore S;
    S.anchor = r.i32();
    S.r_lo = r.i32();
    S.r_hi = r.i32();
    S.piece = r.ints();
    S.weight = r.ints();
    if (static_cast<int>(S.weight.size()) != n) throw OracleFormatError(OracleFormatError::Kind::Header, "weight row length differs from n");
    uint32_t np = r.u32();
    for (uint32_t i = 0; i < np; ++i) S.paths.push_back(read_path(r, n));
    S.path_of = r.ints();
    for (int k : S.path_of)
        if (k < 0 || k >= static_cast<int>(np)) throw OracleFormatError(OracleFormatError::Kind::Header, "layer path index out of range");
    S.layers.resize(S.path_of.size());
    for (size_t k = 0; k < S.layers.size(); ++k) {
        const StabbingPath& p = *S.paths[S.path_of[k]];
        for (size_t i = 0; i < S.piece.size(); ++i) {
            IntervalRep rep{p.id, {}};
            uint32_t cnt = r.u32();
            r.need(static_cast<size_t>(cnt) * 8);
            for (uint32_t j = 0; j < cnt; ++j) {
                int lo = r.i32(), hi = r.i32();
                if (lo < 0 || hi < lo || hi >= p.size()) throw OracleFormatError(OracleFormatError::Kind::Header, "interval out of range");
                rep.iv.push_back({lo, hi});
            }
            S.layers[k].push_back(std::move(rep));
        }
    }
    return S;
}

inline SmallOracle read_small(Reader& r, int n) {
    SmallOracle o;
    o.piece = r.ints();
    o.local.assign(n, -1);
    for (int i = 0; i < static_cast<int>(o.piece.size()); ++i) {
        if (o.piece[i] < 0 || o.piece[i] >= n) throw OracleFormatError(OracleFormatError::Kind::Header, "piece vertex out of range");
        o.local[o.piece[i]] = i;
    }
    for (size_t i = 0; i < o.piece.size(); ++i) o.inside.push_back(r.ints());
    o.pattern_of = r.ints();
    o.base = r.ints();
    if (static_cast<int>(o.pattern_of.size()) != n || static_cast<int>(o.base.size()) != n)
        throw OracleFormatError(OracleFormatError::Kind::Header, "pattern rows differ from n");
    uint32_t np = r.u32();
    for (uint32_t i = 0; i < np; ++i) o.radii.push_back(r.ints());
    // whole-component pieces carry one empty pattern and no entry rows
    size_t rows = 0;
    for (int p : o.pattern_of) rows = std::max(rows, static_cast<size_t>(p + 1));
    for (size_t i = 0; i < rows; ++i) o.entry.push_back(r.ints());
    return o;
}

}  // namespace detail

inline std::string oracle_serialize(const OracleBundle& B) {
    detail::Writer w;
    w.buf.append(detail::kOracleMagic, 5);
    w.u32(detail::kOracleVersion);
    size_t length_at = w.buf.size();
    w.u64(0);  // total file length, patched below
    w.u32(static_cast<uint32_t>(B.cls));
    w.u32(static_cast<uint32_t>(B.n));
    w.u32(static_cast<uint32_t>(B.delta));
    w.u64(B.seed);
    int pieces = static_cast<int>(B.large.size());
    w.u32(static_cast<uint32_t>(pieces));
    std::vector<std::string> blocks;
    std::vector<std::vector<int>> members(pieces);
    for (int v = 0; v < B.n; ++v) members[B.piece_of[v]].push_back(v);
    for (int p = 0; p < pieces; ++p) {
        blocks.push_back(B.large[p] ? detail::large_block(B.large_stores[B.store_of[p]])
                                    : detail::small_block(B.small_stores[B.store_of[p]]));
        w.u8(B.large[p]);
        w.u32(static_cast<uint32_t>(members[p].size()));
        w.u64(blocks.back().size());
    }
    w.ints(B.piece_of);
    for (auto& b : blocks) {
        w.u64(b.size());
        w.buf += b;
    }
    uint64_t total = w.buf.size() + 8;
    for (int i = 0; i < 8; ++i) w.buf[length_at + i] = static_cast<char>((total >> (8 * i)) & 0xFF);
    uint64_t sum = detail::fnv1a(w.buf, w.buf.size());
    w.u64(sum);
    return w.buf;
}

inline OracleBundle oracle_deserialize(const std::string& buf) {
    using K = OracleFormatError::Kind;
    if (buf.size() < 5 || std::memcmp(buf.data(), detail::kOracleMagic, 4) != 0)
        throw OracleFormatError(K::BadMagic, "not an oracle file (bad magic)");
    if (buf[4] != detail::kOracleMagic[4]) throw OracleFormatError(K::Version, "unsupported oracle format version");
    detail::Reader head(buf, buf.size());
    head.pos = 5;
    uint32_t version = head.u32();
    if (version != detail::kOracleVersion) throw OracleFormatError(K::Version, "unsupported oracle format version");
    uint64_t total = head.u64();
    if (buf.size() < total) throw OracleFormatError(K::Truncated, "oracle file is truncated");
    if (buf.size() > total || total < static_cast<uint64_t>(head.pos) + 8) throw OracleFormatError(K::Header, "oracle file length does not match its header");
    size_t body = buf.size() - 8;
    detail::Reader tail(buf, buf.size());
    tail.pos = body;
    uint64_t want = tail.u64();
    if (detail::fnv1a(buf, body) != want) throw OracleFormatError(K::Checksum, "oracle checksum mismatch");
    detail::Reader r(buf, body);
    r.pos = head.pos;
    OracleBundle B;
    uint32_t cls = r.u32();
    if (cls > 3) throw OracleFormatError(K::Header, "unknown class tag");
    B.cls = static_cast<GraphClass>(cls);
    B.n = static_cast<int>(r.u32());
    B.delta = static_cast<int>(r.u32());
    B.seed = r.u64();
    uint32_t pieces = r.u32();
    std::vector<uint8_t> kinds(pieces);
    std::vector<uint32_t> sizes(pieces);
    std::vector<uint64_t> lens(pieces);
    long long piece_sum = 0;
    for (uint32_t p = 0; p < pieces; ++p) {
        kinds[p] = r.u8();
        sizes[p] = r.u32();
        lens[p] = r.u64();
        piece_sum += sizes[p];
    }
    if (piece_sum != B.n) throw OracleFormatError(K::Header, "header n does not match the piece table");
    B.piece_of = r.ints();
    if (static_cast<int>(B.piece_of.size()) != B.n) throw OracleFormatError(K::Header, "piece map length differs from n");
    std::vector<int> counted(pieces, 0);
    for (int p : B.piece_of) {
        if (p < 0 || p >= static_cast<int>(pieces)) throw OracleFormatError(K::Header, "piece id out of range");
        ++counted[p];
    }
    for (uint32_t p = 0; p < pieces; ++p)
        if (counted[p] != static_cast<int>(sizes[p])) throw OracleFormatError(K::Header, "piece sizes do not match the piece map");
    B.local_of.assign(B.n, -1);
    for (uint32_t p = 0; p < pieces; ++p) {
        uint64_t len = r.u64();
        if (len != lens[p]) throw OracleFormatError(K::Header, "block length differs from the piece table");
        r.need(len);
        detail::Reader sub(buf, r.pos + len);
        sub.pos = r.pos;
        B.large.push_back(kinds[p] ? 1 : 0);
        std::vector<int> piece;
        if (kinds[p]) {
            B.store_of.push_back(static_cast<int>(B.large_stores.size()));
            B.large_stores.push_back(detail::read_large(sub, B.n));
            piece = B.large_stores.back().piece;
        } else {
            B.store_of.push_back(static_cast<int>(B.small_stores.size()));
            B.small_stores.push_back(detail::read_small(sub, B.n));
            piece = B.small_stores.back().piece;
        }
        if (sub.pos != sub.end) throw OracleFormatError(K::Header, "trailing bytes in a piece block");
        if (piece.size() != sizes[p]) throw OracleFormatError(K::Header, "piece block size differs from the piece table");
        for (int i = 0; i < static_cast<int>(piece.size()); ++i) {
            if (B.piece_of[piece[i]] != static_cast<int>(p)) throw OracleFormatError(K::Header, "piece block lists a foreign vertex");
            B.local_of[piece[i]] = i;
        }
        r.pos += len;
    }
    if (r.pos != body) throw OracleFormatError(K::Header, "trailing bytes after the last block");
    return B;
}

inline void oracle_save(const OracleBundle& B, std::ostream& out) {
    std::string s = oracle_serialize(B);
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
    if (!out) throw std::runtime_error("oracle_save: write failed");
}

inline OracleBundle oracle_load(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return oracle_deserialize(ss.str());
}

}  // namespace sqd
