#pragma once

#include <algorithm>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "framework.hpp"
#include "geo_union.hpp"
#include "graph.hpp"
#include "ldd.hpp"
#include "patterns.hpp"
#include "stabbing.hpp"
#include "unitdisk.hpp"

namespace sqd {

struct FrameworkReport {
    Resolved params;
    int pieces = 0, large_pieces = 0, small_pieces = 0;
    bool whole_graph = false;
    long long boundary_total = 0;
    long long patterns_total = 0;
    int max_patterns = 0;
    long long rep_intervals = 0;
    long long union_queries = 0;
    long long structures = 0;
    int max_envelope = 0;
    int stabbing_attempts = 0;
    std::vector<std::string> warnings;

    void add(const FrameworkReport& o) {
        pieces += o.pieces;
        large_pieces += o.large_pieces;
        small_pieces += o.small_pieces;
        whole_graph = whole_graph || o.whole_graph;
        boundary_total += o.boundary_total;
        patterns_total += o.patterns_total;
        max_patterns = std::max(max_patterns, o.max_patterns);
        rep_intervals += o.rep_intervals;
        union_queries += o.union_queries;
        structures += o.structures;
        max_envelope = std::max(max_envelope, o.max_envelope);
        stabbing_attempts += o.stabbing_attempts;
        warnings.insert(warnings.end(), o.warnings.begin(), o.warnings.end());
    }
};

struct EccResult {
    std::vector<int> ecc;  // within the vertex's component
    int diameter = 0;      // max over components
    FrameworkReport report;
};

namespace detail {

inline uint64_t piece_salt(uint64_t seed, int piece) { return splitmix64(seed ^ (0x5151ull + static_cast<uint64_t>(piece) * 0x9E3779B97F4A7C15ull)); }

// Global ball system over V: every vertex s of a large piece contributes its
// balls N^r[s], r in the piece window. For sparse graphs each stands for
// deg(s) copies. One path for it is restricted to every piece.
inline SetSystem global_ball_system(const GraphHandle& h, const std::vector<PieceContext>& ctx,
                                    const std::vector<int>& large, int d, uint64_t seed) {
    struct Entry {
        int piece, s;
    };
    auto entries = std::make_shared<std::vector<Entry>>();
    auto first = std::make_shared<std::vector<size_t>>();
    for (int p : large)
        for (int s : ctx[p].piece) {
            first->push_back(0);
            entries->push_back({p, s});
        }
    // sets laid out per entry, one per radius of its window
    size_t total = 0;
    for (size_t e = 0; e < entries->size(); ++e) {
        (*first)[e] = total;
        total += static_cast<size_t>(ctx[(*entries)[e].piece].radii());
    }
    first->push_back(total);
    auto locate = [entries, first](size_t i) {
        size_t e = static_cast<size_t>(std::upper_bound(first->begin(), first->end(), i) - first->begin()) - 1;
        return std::make_pair(e, static_cast<int>(i - (*first)[e]));
    };
    SetSystem S;
    S.universe = h.n();
    S.ground.resize(h.n());
    std::iota(S.ground.begin(), S.ground.end(), 0);
    S.count = total;
    S.dual_dim = d;
    const auto& adj = h.sparse.adj;
    bool sparse = h.is_sparse();
    S.weight = [&adj, sparse, entries, locate](size_t i) {
        if (!sparse) return 1.0;
        return static_cast<double>(std::max<size_t>(1, adj[(*entries)[locate(i).first].s].size()));
    };
    S.m = 0;
    for (size_t i = 0; i < total; ++i) S.m += S.weight(i);
    S.key = [&ctx, entries, locate, seed](size_t i) {
        auto [e, off] = locate(i);
        const Entry& en = (*entries)[e];
        return ball_key(seed, en.s, ctx[en.piece].r_lo + off, 1);
    };
    S.report = [&h, &ctx, entries, locate](const std::vector<size_t>& ids,
                                           const std::function<void(size_t, const std::vector<int>&)>& f) {
        size_t i = 0;
        std::vector<int> members;
        while (i < ids.size()) {
            size_t e = locate(ids[i]).first;
            const Entry& en = (*entries)[e];
            const PieceContext& c = ctx[en.piece];
            auto row = bfs(h, en.s);
            for (; i < ids.size() && locate(ids[i]).first == e; ++i) {
                int r = c.r_lo + locate(ids[i]).second;
                members.clear();
                for (int t = 0; t < h.n(); ++t)
                    if (row[t] - c.weight[t] <= r) members.push_back(t);
                f(ids[i], members);
            }
        }
    };
    return S;
}

}  // namespace detail

// Everything the growth loop of one large piece needs from its class.
struct LargePieceDriver {
    // Path for the piece; may build it now or restrict a shared one.
    std::function<std::shared_ptr<const StabbingPath>(const PieceContext&, int& attempts)> path_for;
    NeighborUnion unite;
    GrowthRule rule = GrowthRule::Cumulative;
};

// Runs LDD + per-piece processing over a connected graph. `on_large` gets each
// emitted layer of each large piece; `on_small` gets small pieces with their
// boundary rows and patterns.
struct FrameworkHooks {
    std::function<LargePieceDriver(const GraphHandle&, const std::vector<PieceContext>&, const std::vector<int>& large,
                                   const Resolved&)>
        make_driver;
    std::function<bool(const PieceContext&, const BallLayer&)> on_layer;
    std::function<void(const PieceContext&, const PatternTable&)> on_small;
    std::function<void(const PieceContext&)> on_large_begin;
    // Replaces the generic growth loop for a large piece (used by the unit-disk type loop).
    std::function<GrowthStats(const PieceContext&, std::shared_ptr<const StabbingPath>)> grow_override;
};

inline FrameworkReport run_framework(const GraphHandle& h, const Params& params, Purpose purpose, const FrameworkHooks& hooks,
                                     LowDiameterDecomposition* keep_ldd = nullptr) {
    check_params(params);
    FrameworkReport rep;
    rep.params = resolve_params(h.cls, h.n(), h.vc_dim(), purpose, params);
    const Resolved& R = rep.params;
    LowDiameterDecomposition L = build_ldd(h, R.delta, params.ldd_mode);
    rep.pieces = L.piece_count();
    rep.whole_graph = L.whole_graph;
    rep.boundary_total = L.boundary_total();
    std::vector<PieceContext> ctx;
    ctx.reserve(L.piece_count());
    std::vector<int> large, small;
    for (int p = 0; p < L.piece_count(); ++p) {
        ctx.push_back(make_piece_context(h, L, p, purpose));
        if (static_cast<long long>(L.pieces[p].size()) <= R.A) small.push_back(p);
        else large.push_back(p);
    }
    rep.large_pieces = static_cast<int>(large.size());
    rep.small_pieces = static_cast<int>(small.size());
    for (int p : small) {
        auto T = compute_patterns(h, ctx[p].piece, ctx[p].rows);
        rep.patterns_total += T.size();
        rep.max_patterns = std::max(rep.max_patterns, T.size());
        hooks.on_small(ctx[p], T);
    }
    if (!large.empty()) {
        LargePieceDriver drv = hooks.make_driver(h, ctx, large, R);
        for (int p : large) {
            const PieceContext& c = ctx[p];
            if (hooks.on_large_begin) hooks.on_large_begin(c);
            int attempts = 0;
            GrowthStats st;
            auto path = drv.path_for(c, attempts);
            if (hooks.grow_override) st = hooks.grow_override(c, path);
            else st = grow_balls(h, c, path, drv.rule, drv.unite, [&](const BallLayer& layer) { return hooks.on_layer(c, layer); });
            rep.stabbing_attempts += attempts;
            rep.rep_intervals += st.rep_intervals;
            rep.union_queries += st.union_queries;
            rep.structures += st.structures;
            rep.max_envelope = std::max(rep.max_envelope, st.max_envelope);
        }
    }
    if (keep_ldd) *keep_ldd = std::move(L);
    return rep;
}

// Default drivers: a per-piece stabbing path for the piece ball system, or
// one global path restricted to each piece (sparse graphs, where it is
// degree-weighted, and the unit-disk diameter variant).
inline LargePieceDriver default_driver(const GraphHandle& h, const std::vector<PieceContext>& ctx,
                                       const std::vector<int>& large, const Resolved& R, const Params& params,
                                       NeighborUnion unite, GrowthRule rule, bool global_path = false) {
    LargePieceDriver drv;
    drv.unite = std::move(unite);
    drv.rule = rule;
    if (h.is_sparse() || global_path) {
        auto sys = std::make_shared<SetSystem>(detail::global_ball_system(h, ctx, large, h.vc_dim(), params.seed));
        // the system's callbacks hold references into ctx, which outlives the driver
        auto res = std::make_shared<StabbingResult>(build_stabbing_path(*sys, std::min(R.rho, std::max(1.0, sys->m)), params.seed, params.stabbing));
        bool counted = false;
        drv.path_for = [res, counted](const PieceContext& c, int& attempts) mutable {
            attempts = counted ? 0 : res->attempts;
            counted = true;
            std::vector<char> keep(res->path.pos.size(), 0);
            for (int t : c.ground) keep[t] = 1;
            auto rp = restrict_path(res->path, [&](int x) { return keep[x] != 0; });
            return std::make_shared<const StabbingPath>(std::move(rp.path));
        };
    } else {
        int d = h.vc_dim();
        drv.path_for = [&h, d, params, R](const PieceContext& c, int& attempts) {
            SetSystem sys = piece_ball_system(h, c, d, detail::piece_salt(params.seed, c.index));
            double rho = std::min(R.rho, std::max(1.0, sys.m));
            auto res = build_stabbing_path(sys, rho, detail::piece_salt(params.seed, c.index), params.stabbing);
            attempts = res.attempts;
            return std::make_shared<const StabbingPath>(std::move(res.path));
        };
    }
    return drv;
}

inline EccResult ecc_connected(const GraphHandle& h, const Params& params, Purpose purpose = Purpose::Ecc,
                               const TypedProbe* probe = nullptr) {
    EccResult out;
    out.ecc.assign(h.n(), -1);
    if (h.n() == 1) {
        out.ecc[0] = 0;
        return out;
    }
    auto adj = std::make_shared<std::vector<std::vector<int>>>(adjacency_lists(h));
    FrameworkHooks hooks;
    hooks.make_driver = [&](const GraphHandle& g, const std::vector<PieceContext>& ctx, const std::vector<int>& large,
                            const Resolved& R) {
        NeighborUnion u = params.explicit_unions ? explicit_neighbor_union(*adj) : class_neighbor_union(g, R, adj);
        GrowthRule rule = params.explicit_unions ? GrowthRule::Cumulative : class_growth_rule(g);
        bool global = g.cls == GraphClass::UnitDisk && purpose == Purpose::Diameter && !params.explicit_unions;
        return default_driver(g, ctx, large, R, params, std::move(u), rule, global);
    };
    if (h.cls == GraphClass::UnitDisk && !params.explicit_unions) {
        hooks.grow_override = [&](const PieceContext& c, std::shared_ptr<const StabbingPath> path) {
            auto st = grow_typed_balls(h, c, path, 0, probe, [&](const BallLayer& layer) { return hooks.on_layer(c, layer); });
            GrowthStats g = st.growth;
            g.structures = st.structures;
            g.max_envelope = st.max_envelope;
            return g;
        };
    }
    std::shared_ptr<EccTracker> tracker;
    hooks.on_large_begin = [&](const PieceContext& c) { tracker = std::make_shared<EccTracker>(static_cast<int>(c.piece.size())); };
    hooks.on_layer = [&](const PieceContext& c, const BallLayer& layer) {
        bool more = tracker->update(layer);
        if (!more || layer.r == c.r_hi) {
            for (size_t i = 0; i < c.piece.size(); ++i) {
                if (tracker->ecc[i] < 0) throw std::logic_error("framework: ball never became full");
                out.ecc[c.piece[i]] = tracker->ecc[i];
            }
        }
        return more;
    };
    hooks.on_small = [&](const PieceContext& c, const PatternTable& T) {
        auto e = ecc_small_piece(h, c.piece, c.rows, T);
        for (size_t i = 0; i < c.piece.size(); ++i) out.ecc[c.piece[i]] = e[i];
    };
    out.report = run_framework(h, params, purpose, hooks);
    out.diameter = *std::max_element(out.ecc.begin(), out.ecc.end());
    return out;
}

// Runs `fn` per connected component on the induced sub-instance and maps
// vertex results back.
template <class Fn>
EccResult per_component(const GraphHandle& h, Fn&& fn) {
    auto comps = components(h);
    if (comps.size() <= 1) return fn(h);
    EccResult out;
    out.ecc.assign(h.n(), 0);
    std::ostringstream w;
    w << "graph has " << comps.size() << " components; eccentricities are per component";
    out.report.warnings.push_back(w.str());
    for (auto& comp : comps) {
        GraphHandle sub = induced(h, comp);
        EccResult r = fn(sub);
        for (size_t i = 0; i < comp.size(); ++i) out.ecc[comp[i]] = r.ecc[i];
        out.diameter = std::max(out.diameter, r.diameter);
        out.report.add(r.report);
        out.report.params = r.report.params;
    }
    return out;
}

inline EccResult ecc_all(const GraphHandle& h, const Params& params = {}) {
    if (h.n() == 0) throw std::invalid_argument("ecc_all: empty instance");
    return per_component(h, [&](const GraphHandle& g) { return ecc_connected(g, params); });
}

inline EccResult ecc_sparse(const SparseGraph& g, const Params& params = {}) { return ecc_all(GraphHandle::of(g), params); }

namespace detail {
inline void require_class(const GraphHandle& h, GraphClass cls, const char* who) {
    if (h.cls != cls) throw std::invalid_argument(std::string(who) + ": instance of class " + class_name(h.cls));
    if (h.n() == 0) throw std::invalid_argument(std::string(who) + ": empty instance");
}
}  // namespace detail

inline EccResult ecc_square(const GraphHandle& h, const Params& params = {}) {
    detail::require_class(h, GraphClass::Square, "ecc_square");
    return ecc_all(h, params);
}

inline EccResult ecc_unitsquare(const GraphHandle& h, const Params& params = {}) {
    detail::require_class(h, GraphClass::UnitSquare, "ecc_unitsquare");
    return ecc_all(h, params);
}

// `probe` observes the type loop of every large piece.
inline EccResult ecc_unitdisk(const GraphHandle& h, const Params& params = {}, const TypedProbe* probe = nullptr) {
    detail::require_class(h, GraphClass::UnitDisk, "ecc_unitdisk");
    return per_component(h, [&](const GraphHandle& g) { return ecc_connected(g, params, Purpose::Ecc, probe); });
}

// Diameter parameters and one global path per component, restricted to the
// pieces. The eccentricities come along; the diameter is their maximum.
inline EccResult diameter_unitdisk(const GraphHandle& h, const Params& params = {}) {
    detail::require_class(h, GraphClass::UnitDisk, "diameter_unitdisk");
    return per_component(h, [&](const GraphHandle& g) { return ecc_connected(g, params, Purpose::Diameter); });
}

// Class dispatch for the diameter alone.
inline EccResult diameter(const GraphHandle& h, const Params& params = {}) {
    if (h.cls == GraphClass::UnitDisk) return diameter_unitdisk(h, params);
    return ecc_all(h, params);
}

}  // namespace sqd
