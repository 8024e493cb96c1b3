#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"

namespace sqd {

struct EnvelopeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lower circular arc seen in the local frame of a target cell, clamped to the
// padded cell like Pseudoline. `g` is the center in global coordinates; the
// exact membership test runs there so it matches intersects() bit for bit.
struct Arc {
    Point c;
    Point g;
    double r2 = kDiskR2;
    bool full = false;
    int owner = -1;

    double raw(double x) const {
        double t = x - c.x;
        double s = r2 - t * t;
        if (s < 0) return INFINITY;
        return c.y - std::sqrt(s);
    }
    double value(double x) const {
        return full ? Pseudoline::kLo : std::clamp(raw(x), Pseudoline::kLo, Pseudoline::kHi);
    }
    bool contains_global(Point q) const {
        double dx = q.x - g.x, dy = q.y - g.y;
        return dx * dx + dy * dy <= r2;
    }
};

inline Arc arc_of(const Pseudoline& p, Point global_center) {
    Arc a;
    a.c = p.c;
    a.g = global_center;
    a.full = p.full;
    a.owner = p.owner;
    return a;
}

enum class Side { Lower, Upper };

// x-monotone chain over the padded cell [kLo, kHi]. Piece i starts at x0 and
// runs to the next start; it follows arc `arc` (index into an arc table) or,
// when arc < 0, the constant k.
struct ChainPiece {
    double x0 = Pseudoline::kLo;
    int arc = -1;
    double k = 0;
};

struct Chain {
    std::vector<ChainPiece> p;

    static Chain constant(double k) { return Chain{{ChainPiece{Pseudoline::kLo, -1, k}}}; }
    static Chain single(int arc) { return Chain{{ChainPiece{Pseudoline::kLo, arc, 0}}}; }

    size_t size() const { return p.size(); }
    double end(size_t i) const { return i + 1 < p.size() ? p[i + 1].x0 : Pseudoline::kHi; }
    size_t piece_at(double x) const {
        size_t i = static_cast<size_t>(std::upper_bound(p.begin(), p.end(), x, [](double v, const ChainPiece& c) { return v < c.x0; }) -
                                       p.begin());
        return i == 0 ? 0 : i - 1;
    }
    double piece_value(size_t i, double x, const std::vector<Arc>& arcs) const {
        return p[i].arc < 0 ? p[i].k : arcs[p[i].arc].value(x);
    }
    double eval(double x, const std::vector<Arc>& arcs) const { return piece_value(piece_at(x), x, arcs); }
};

namespace detail {

// x where the raw lower arc takes height k.
inline void arc_level(const Arc& a, double k, std::vector<double>& out) {
    double dy = a.c.y - k;
    if (dy < 0) return;
    double s = a.r2 - dy * dy;
    if (s < 0) return;
    double t = std::sqrt(s);
    out.push_back(a.c.x - t);
    out.push_back(a.c.x + t);
}

// Crossings of two raw lower arcs. Two of them inside the padded cell break
// the pseudoline precondition.
inline void arc_arc(const Arc& a, const Arc& b, std::vector<double>& out) {
    double dx = b.c.x - a.c.x, dy = b.c.y - a.c.y;
    double d2 = dx * dx + dy * dy;
    if (d2 == 0) return;
    double d = std::sqrt(d2);
    double ra = std::sqrt(a.r2), rb = std::sqrt(b.r2);
    if (d > ra + rb || d < std::fabs(ra - rb)) return;
    double along = (a.r2 - b.r2 + d2) / (2 * d);
    double h2 = a.r2 - along * along;
    if (h2 < 0) h2 = 0;
    double h = std::sqrt(h2);
    double mx = a.c.x + along * dx / d, my = a.c.y + along * dy / d;
    int inside = 0;
    for (int sgn : {-1, 1}) {
        double px = mx + sgn * h * (-dy / d), py = my + sgn * h * (dx / d);
        if (py > a.c.y || py > b.c.y) continue;  // not on both lower arcs
        out.push_back(px);
        constexpr double lo = Pseudoline::kLo, hi = Pseudoline::kHi;
        if (h > 0 && px >= lo && px <= hi && py >= lo && py <= hi) ++inside;
    }
    if (inside > 1) throw EnvelopeError("envelope: two pseudo-segments cross more than once");
}

}  // namespace detail

// Pointwise min (Lower) or max (Upper) of two chains over the same arc table.
inline Chain merge_chains(const Chain& A, const Chain& B, Side side, const std::vector<Arc>& arcs) {
    Chain out;
    auto push = [&](double x0, const ChainPiece& src) {
        if (!out.p.empty() && out.p.back().arc == src.arc && (src.arc >= 0 || out.p.back().k == src.k)) return;
        out.p.push_back({x0, src.arc, src.k});
    };
    std::vector<double> cand;
    size_t i = 0, j = 0;
    double x = Pseudoline::kLo;
    while (true) {
        double ea = A.end(i), eb = B.end(j);
        double x1 = std::min(ea, eb);
        if (x1 > x) {
            const ChainPiece& pa = A.p[i];
            const ChainPiece& pb = B.p[j];
            cand.clear();
            bool same = pa.arc == pb.arc && (pa.arc >= 0 || pa.k == pb.k);
            if (!same) {
                auto level = [&](const ChainPiece& q, const ChainPiece& other) {
                    if (q.arc < 0 || arcs[q.arc].full) return;
                    detail::arc_level(arcs[q.arc], Pseudoline::kLo, cand);
                    detail::arc_level(arcs[q.arc], Pseudoline::kHi, cand);
                    if (other.arc < 0) detail::arc_level(arcs[q.arc], other.k, cand);
                };
                level(pa, pb);
                level(pb, pa);
                if (pa.arc >= 0 && pb.arc >= 0 && !arcs[pa.arc].full && !arcs[pb.arc].full)
                    detail::arc_arc(arcs[pa.arc], arcs[pb.arc], cand);
            }
            std::vector<double> cuts{x};
            for (double c : cand)
                if (c > x && c < x1) cuts.push_back(c);
            std::sort(cuts.begin(), cuts.end());
            cuts.push_back(x1);
            for (size_t k = 0; k + 1 < cuts.size(); ++k) {
                if (!(cuts[k + 1] > cuts[k])) continue;
                double mid = 0.5 * (cuts[k] + cuts[k + 1]);
                double fa = A.piece_value(i, mid, arcs), fb = B.piece_value(j, mid, arcs);
                bool take_a = side == Side::Lower ? fa <= fb : fa >= fb;
                push(cuts[k], take_a ? pa : pb);
            }
        }
        if (ea <= x1 && i + 1 < A.size()) ++i;
        if (eb <= x1 && j + 1 < B.size()) ++j;
        x = x1;
        if (x1 >= Pseudoline::kHi) break;
    }
    if (out.p.empty()) out.p.push_back(A.p[0]);
    out.p[0].x0 = Pseudoline::kLo;
    return out;
}

struct EnvelopeStats {
    long long merges = 0;
    long long pieces = 0;  // of the final chain
};

// Lower or upper envelope of the arcs `ids` by divide and conquer.
inline Chain envelope(const std::vector<Arc>& arcs, const std::vector<int>& ids, Side side, EnvelopeStats* st = nullptr) {
    if (ids.empty()) return Chain::constant(side == Side::Lower ? 1.0 : -1.0);
    auto rec = [&](auto&& self, size_t lo, size_t hi) -> Chain {
        if (hi - lo == 1) return Chain::single(ids[lo]);
        size_t mid = (lo + hi) / 2;
        Chain a = self(self, lo, mid), b = self(self, mid, hi);
        if (st) ++st->merges;
        return merge_chains(a, b, side, arcs);
    };
    Chain c = rec(rec, 0, ids.size());
    if (st) st->pieces = static_cast<long long>(c.size());
    return c;
}

inline Chain envelope(const std::vector<Arc>& arcs, Side side, EnvelopeStats* st = nullptr) {
    std::vector<int> ids(arcs.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    return envelope(arcs, ids, side, st);
}

}  // namespace sqd
