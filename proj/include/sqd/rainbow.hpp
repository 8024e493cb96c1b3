#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "geometry.hpp"

namespace sqd {

struct ColoredSquareSet {
    std::vector<AxisSquare> squares;
    std::vector<int> color;  // dense in [0, k)
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Linear forms of a lifted query (x, y, z), z being the query's inflated half
// side. Rows 0-3 are the face planes of the four cone faces, the rest carry the
// trapezoid edges (axis-parallel and diagonal).
inline constexpr int kLiftDims = 12;
inline constexpr int kLiftForm[kLiftDims][3] = {{1, 0, -1}, {-1, 0, -1}, {0, 1, -1}, {0, -1, -1},
                                                {1, 0, 0},  {-1, 0, 0},  {0, 1, 0},  {0, -1, 0},
                                                {1, 1, 0},  {-1, -1, 0}, {1, -1, 0}, {-1, 1, 0}};

using Lifted = std::array<double, kLiftDims>;

inline Lifted lift(double x, double y, double z) {
    Lifted q;
    for (int d = 0; d < kLiftDims; ++d) q[d] = kLiftForm[d][0] * x + kLiftForm[d][1] * y + kLiftForm[d][2] * z;
    return q;
}

inline int lift_dim(int gx, int gy, int gz) {
    for (int d = 0; d < kLiftDims; ++d)
        if (kLiftForm[d][0] == gx && kLiftForm[d][1] == gy && kLiftForm[d][2] == gz) return d;
    return -1;
}

// f(v) = slope * v + b on [lo, hi); b = +inf means unconstrained.
struct PlPiece {
    double lo, hi;
    int slope;
    double b;
};
using PlFunc = std::vector<PlPiece>;

inline double pl_eval(const PlPiece& p, double v) { return std::isinf(p.b) ? p.b : p.slope * v + p.b; }

inline double pl_rep(double lo, double hi) {
    if (std::isinf(lo) && std::isinf(hi)) return 0.0;
    if (std::isinf(lo)) return hi - 1.0;
    if (std::isinf(hi)) return lo + 1.0;
    return lo + (hi - lo) / 2;
}

inline void pl_push(PlFunc& out, double lo, double hi, int slope, double b) {
    if (!(lo < hi)) return;
    if (!out.empty() && out.back().slope == slope && out.back().b == b && out.back().hi == lo) {
        out.back().hi = hi;
        return;
    }
    out.push_back({lo, hi, slope, b});
}

inline PlFunc pl_min(const PlFunc& A, const PlFunc& B) {
    PlFunc out;
    size_t i = 0, j = 0;
    double cur = -kInf;
    while (i < A.size() && j < B.size()) {
        const PlPiece& a = A[i];
        const PlPiece& b = B[j];
        double hi = std::min(a.hi, b.hi);
        double cuts[3] = {cur, hi, hi};
        int nc = 2;
        if (!std::isinf(a.b) && !std::isinf(b.b) && a.slope != b.slope) {
            double x = (b.b - a.b) / (a.slope - b.slope);
            if (x > cur && x < hi) {
                cuts[1] = x;
                cuts[2] = hi;
                nc = 3;
            }
        }
        for (int k = 0; k + 1 < nc; ++k) {
            double m = pl_rep(cuts[k], cuts[k + 1]);
            const PlPiece& w = pl_eval(a, m) <= pl_eval(b, m) ? a : b;
            pl_push(out, cuts[k], cuts[k + 1], w.slope, w.b);
        }
        cur = hi;
        if (a.hi == hi) ++i;
        if (b.hi == hi) ++j;
    }
    return out;
}

// max(a, |v - vt| + e) with a >= e.
inline PlFunc pl_bathtub(double a, double vt, double e) {
    PlFunc f;
    double d = a - e;
    pl_push(f, -kInf, vt - d, -1, vt + e);
    pl_push(f, vt - d, vt + d, 0, a);
    pl_push(f, vt + d, kInf, 1, e - vt);
    if (f.empty()) f.push_back({-kInf, kInf, 0, kInf});
    return f;
}

// Max over [A, B] of a linear piece, with limits at infinite ends.
inline double line_sup(int slope, double b, double A, double B) {
    if (std::isinf(b)) return kInf;
    double best = -kInf;
    for (double x : {A, B}) {
        double v;
        if (std::isinf(x)) {
            if (slope == 0) v = b;
            else v = (slope > 0) == (x > 0) ? kInf : -kInf;
        } else {
            v = slope * x + b;
        }
        best = std::max(best, v);
    }
    return best;
}

// Segment tree over sites in key order holding max(u + r); finds the next
// position >= from whose value is >= c.
class MaxFinder {
public:
    explicit MaxFinder(const std::vector<double>& vals) : n_(static_cast<int>(vals.size())) {
        size_ = 1;
        while (size_ < std::max(n_, 1)) size_ *= 2;
        t_.assign(2 * size_, -kInf);
        for (int i = 0; i < n_; ++i) t_[size_ + i] = vals[i];
        for (int i = size_ - 1; i >= 1; --i) t_[i] = std::max(t_[2 * i], t_[2 * i + 1]);
    }
    int next(int from, double c) const { return from >= n_ ? -1 : find(1, 0, size_, from, c); }

private:
    int find(int node, int lo, int hi, int from, double c) const {
        if (hi <= from || t_[node] < c) return -1;
        if (hi - lo == 1) return lo < n_ ? lo : -1;
        int mid = (lo + hi) / 2;
        int r = find(2 * node, lo, mid, from, c);
        return r >= 0 ? r : find(2 * node + 1, mid, hi, from, c);
    }
    int n_, size_;
    std::vector<double> t_;
};

}  // namespace detail

// Colored intersection searching for axis-parallel squares. A query square q
// meets a square of color class S iff its lifted point (x_q, y_q, z_q) lies in
// the union of the cones z >= |p - c|_inf - r over S. That union's boundary is
// cut into trapezoids; each trapezoid becomes a 12-vector of thresholds on the
// lifted forms, and the query becomes an orthant query over those vectors.
class RainbowDS {
public:
    struct Stats {
        std::vector<int> faces;  // per color, nonempty cone faces
        std::vector<int> sites;  // per color, distinct squares
        long long trapezoids = 0;
    };

    RainbowDS() = default;

    explicit RainbowDS(const ColoredSquareSet& cs) {
        if (cs.squares.size() != cs.color.size()) throw std::invalid_argument("rainbow: one color per square required");
        for (int c : cs.color) {
            if (c < 0) throw std::invalid_argument("rainbow: negative color");
            k_ = std::max(k_, c + 1);
        }
        std::vector<std::vector<int>> by(k_);
        for (int i = 0; i < static_cast<int>(cs.squares.size()); ++i) by[cs.color[i]].push_back(i);
        stats_.faces.assign(k_, 0);
        stats_.sites.assign(k_, 0);
        double scale = 1.0;
        for (auto& s : cs.squares)
            scale = std::max({scale, std::fabs(s.center.x) + s.half_side, std::fabs(s.center.y) + s.half_side});
        slack_ = 1e-11 * scale;
        for (int c = 0; c < k_; ++c) {
            if (by[c].empty()) throw std::invalid_argument("rainbow: colors must be dense");
            build_color(cs, c, by[c]);
        }
        stats_.trapezoids = static_cast<long long>(pts_.size());
        order_.resize(pts_.size());
        std::iota(order_.begin(), order_.end(), 0);
        if (!pts_.empty()) build_tree(0, static_cast<int>(pts_.size()), 0);
    }

    int colors() const { return k_; }
    const Stats& stats() const { return stats_; }

    // True iff q meets a square of every color.
    bool query(const AxisSquare& q) const {
        if (k_ == 0) return true;
        auto Q = lift_query(q);
        std::vector<char> seen(k_, 0);
        int distinct = 0;
        if (!nodes_.empty()) collect(0, Q, seen, distinct);
        return distinct == k_;
    }

    // True iff q meets any stored square.
    bool any(const AxisSquare& q) const {
        if (nodes_.empty()) return false;
        auto Q = lift_query(q);
        return find_any(0, Q);
    }

    // Number of matched lifted points (one per color hit, up to boundary overlap).
    int count(const AxisSquare& q) const {
        if (nodes_.empty()) return 0;
        auto Q = lift_query(q);
        return count_in(0, Q);
    }

private:
    struct Node {
        int lo, hi;
        int left = -1, right = -1;
        detail::Lifted mn, mx;
    };

    static double inflated(double h) { return h * (1.0 + kRelEps); }

    detail::Lifted lift_query(const AxisSquare& q) const { return detail::lift(q.center.x, q.center.y, inflated(q.half_side)); }

    bool ok(double Qd, double Pd, int d) const { return Qd <= (d < 4 ? Pd : Pd + slack_); }

    void build_color(const ColoredSquareSet& cs, int color, std::vector<int> ids) {
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            auto& p = cs.squares[a];
            auto& q = cs.squares[b];
            return std::tie(p.center.x, p.center.y, p.half_side) < std::tie(q.center.x, q.center.y, q.half_side);
        });
        ids.erase(std::unique(ids.begin(), ids.end(),
                              [&](int a, int b) {
                                  auto& p = cs.squares[a];
                                  auto& q = cs.squares[b];
                                  return p.center.x == q.center.x && p.center.y == q.center.y && p.half_side == q.half_side;
                              }),
                  ids.end());
        int m = static_cast<int>(ids.size());
        stats_.sites[color] = m;
        std::vector<double> X(m), Y(m), R(m);
        for (int i = 0; i < m; ++i) {
            X[i] = cs.squares[ids[i]].center.x;
            Y[i] = cs.squares[ids[i]].center.y;
            R[i] = inflated(cs.squares[ids[i]].half_side);
        }
        // local frames: (u, v) as signed multiples of (x, y)
        static constexpr int kU[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        static constexpr int kV[4][2] = {{0, 1}, {0, 1}, {1, 0}, {1, 0}};
        std::vector<int> face_seen(m, 0);
        for (int dir = 0; dir < 4; ++dir) {
            std::vector<double> U(m), V(m);
            for (int i = 0; i < m; ++i) {
                U[i] = kU[dir][0] * X[i] + kU[dir][1] * Y[i];
                V[i] = kV[dir][0] * X[i] + kV[dir][1] * Y[i];
            }
            std::vector<int> ord(m);
            std::iota(ord.begin(), ord.end(), 0);
            std::sort(ord.begin(), ord.end(), [&](int a, int b) {
                double ka = U[a] - R[a], kb = U[b] - R[b];
                return ka != kb ? ka < kb : a < b;
            });
            std::vector<double> reach(m);
            for (int i = 0; i < m; ++i) reach[i] = U[ord[i]] + R[ord[i]];
            detail::MaxFinder finder(reach);
            for (int s = 0; s < m; ++s) {
                double c = U[s] + R[s];
                detail::PlFunc F{{-detail::kInf, detail::kInf, 0, detail::kInf}};
                double sup = detail::kInf, vlo = -detail::kInf, vhi = detail::kInf;
                for (int pos = finder.next(0, c); pos >= 0; pos = finder.next(pos + 1, c)) {
                    int t = ord[pos];
                    if (t == s) continue;
                    double tr = U[t] + R[t];
                    if (tr == c && t > s) continue;  // equal faces: the lower index owns the tie
                    double a = (U[t] - R[t] + c) / 2;
                    if (a >= sup) break;
                    double e = c - R[t];
                    if (!std::isinf(vlo) && !std::isinf(vhi)) {
                        double gap = std::max({0.0, vlo - V[t], V[t] - vhi});
                        if (std::max(a, gap + e) >= sup) continue;
                    }
                    F = detail::pl_min(F, detail::pl_bathtub(std::max(a, e), V[t], e));
                    sup = face_sup(F, U[s], V[s], &vlo, &vhi);
                    if (sup != -detail::kInf) clip(F, vlo, vhi);
                    if (sup == -detail::kInf) break;  // face already empty
                }
                int emitted = emit_face(F, U[s], V[s], c, kU[dir], kV[dir], color);
                if (emitted > 0) ++face_seen[s];
            }
        }
        for (int f : face_seen) stats_.faces[color] += f;
    }

    // Largest F value over the region where F exceeds W(v) = u_s + |v - v_s|
    // (-inf if that region is empty), and the region's extent in v.
    static double face_sup(const detail::PlFunc& F, double us, double vs, double* vlo, double* vhi) {
        double best = -detail::kInf;
        *vlo = detail::kInf;
        *vhi = -detail::kInf;
        for (auto& p : F)
            for (int side : {-1, 1}) {
                double L = side < 0 ? p.lo : std::max(p.lo, vs);
                double Rr = side < 0 ? std::min(p.hi, vs) : p.hi;
                if (!(L < Rr)) continue;
                auto [A, B] = above_w(p, side, us, vs, L, Rr);
                if (!(A < B)) continue;
                best = std::max(best, detail::line_sup(p.slope, p.b, A, B));
                *vlo = std::min(*vlo, A);
                *vhi = std::max(*vhi, B);
            }
        return best;
    }

    // The face region only shrinks as constraints are added, so F outside
    // [lo, hi] is replaced by a floor that never rises above W.
    static void clip(detail::PlFunc& F, double lo, double hi) {
        constexpr double kFloor = -1e300;
        detail::PlFunc out;
        if (!std::isinf(lo)) detail::pl_push(out, -detail::kInf, lo, 0, kFloor);
        for (auto& p : F) detail::pl_push(out, std::max(p.lo, lo), std::min(p.hi, hi), p.slope, p.b);
        if (!std::isinf(hi)) detail::pl_push(out, hi, detail::kInf, 0, kFloor);
        F.swap(out);
    }

    // Sub-interval of [L, R) where the piece lies strictly above W's branch.
    static std::pair<double, double> above_w(const detail::PlPiece& p, int side, double us, double vs, double L, double R) {
        if (std::isinf(p.b)) return {L, R};
        double bw = us - side * vs;
        int ds = p.slope - side;
        double db = p.b - bw;
        if (ds == 0) return db > 0 ? std::make_pair(L, R) : std::make_pair(R, R);
        double x0 = -db / ds;
        if (ds > 0) return {std::max(L, x0), R};
        return {L, std::min(R, x0)};
    }

    int emit_face(const detail::PlFunc& F, double us, double vs, double c, const int* Uc, const int* Vc, int color) {
        int emitted = 0;
        for (auto& p : F)
            for (int side : {-1, 1}) {
                double L = side < 0 ? p.lo : std::max(p.lo, vs);
                double R = side < 0 ? std::min(p.hi, vs) : p.hi;
                if (!(L < R)) continue;
                auto [A, B] = above_w(p, side, us, vs, L, R);
                if (!(A < B)) continue;
                detail::Lifted P;
                P.fill(detail::kInf);
                auto put = [&](int cu, int cv, int cz, bool upper, double k) {
                    int gx = cu * Uc[0] + cv * Vc[0], gy = cu * Uc[1] + cv * Vc[1], gz = cz;
                    if (!upper) {
                        gx = -gx, gy = -gy, gz = -gz;
                        k = -k;
                    }
                    int d = detail::lift_dim(gx, gy, gz);
                    if (d < 0) throw std::logic_error("rainbow: form outside the lifted basis");
                    P[d] = std::min(P[d], k);
                };
                if (!std::isinf(L)) put(0, 1, 0, false, L);
                if (!std::isinf(R)) put(0, 1, 0, true, R);
                put(1, -side, 0, false, us - side * vs);
                if (!std::isinf(p.b)) put(1, -p.slope, 0, true, p.b);
                put(1, 0, -1, true, c);
                // Redundant bounds from the vertices of a bounded trapezoid;
                // they leave membership unchanged but give the k-d boxes
                // finite extents in every planar form.
                if (!std::isinf(A) && !std::isinf(B) && !std::isinf(p.b)) {
                    double pad = 1e-9 * (1.0 + std::fabs(us) + std::fabs(vs) + std::fabs(c));
                    for (int d = 4; d < detail::kLiftDims; ++d) {
                        double mx = -detail::kInf;
                        for (double v : {A, B}) {
                            double w = us + side * (v - vs);
                            for (double u : {w, detail::pl_eval(p, v)}) {
                                double x = u * Uc[0] + v * Vc[0], y = u * Uc[1] + v * Vc[1];
                                mx = std::max(mx, detail::kLiftForm[d][0] * x + detail::kLiftForm[d][1] * y);
                            }
                        }
                        P[d] = std::min(P[d], mx + pad);
                    }
                }
                pts_.push_back(P);
                pcolor_.push_back(color);
                // k-d key: a point inside the trapezoid, clipped near the site
                double span = 4.0 * (1.0 + std::fabs(c - us));
                double vm = detail::pl_rep(std::max(A, vs - span), std::min(B, vs + span));
                double w = us + std::fabs(vm - vs);
                double f = std::isinf(p.b) ? w + span : std::min(detail::pl_eval(p, vm), w + span);
                double um = (w + f) / 2;
                pkey_.push_back({um * Uc[0] + vm * Vc[0], um * Uc[1] + vm * Vc[1]});
                ++emitted;
            }
        return emitted;
    }

    int build_tree(int lo, int hi, int depth) {
        Node nd;
        nd.lo = lo;
        nd.hi = hi;
        nd.mn.fill(detail::kInf);
        nd.mx.fill(-detail::kInf);
        for (int i = lo; i < hi; ++i)
            for (int d = 0; d < detail::kLiftDims; ++d) {
                nd.mn[d] = std::min(nd.mn[d], pts_[order_[i]][d]);
                nd.mx[d] = std::max(nd.mx[d], pts_[order_[i]][d]);
            }
        int id = static_cast<int>(nodes_.size());
        nodes_.push_back(nd);
        if (hi - lo > kLeaf) {
            int mid = (lo + hi) / 2;
            bool byx = depth % 2 == 0;
            std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi, [&](int a, int b) {
                return byx ? pkey_[a][0] < pkey_[b][0] : pkey_[a][1] < pkey_[b][1];
            });
            int l = build_tree(lo, mid, depth + 1);
            int r = build_tree(mid, hi, depth + 1);
            nodes_[id].left = l;
            nodes_[id].right = r;
        }
        return id;
    }

    // 1 all inside, -1 none, 0 mixed
    int classify(const Node& nd, const detail::Lifted& Q) const {
        bool all = true;
        for (int d = 0; d < detail::kLiftDims; ++d) {
            if (!ok(Q[d], nd.mx[d], d)) return -1;
            if (!ok(Q[d], nd.mn[d], d)) all = false;
        }
        return all ? 1 : 0;
    }

    bool match(int i, const detail::Lifted& Q) const {
        for (int d = 0; d < detail::kLiftDims; ++d)
            if (!ok(Q[d], pts_[i][d], d)) return false;
        return true;
    }

    bool find_any(int id, const detail::Lifted& Q) const {
        const Node& nd = nodes_[id];
        int c = classify(nd, Q);
        if (c < 0) return false;
        if (c > 0) return true;
        if (nd.left < 0) {
            for (int i = nd.lo; i < nd.hi; ++i)
                if (match(order_[i], Q)) return true;
            return false;
        }
        return find_any(nd.left, Q) || find_any(nd.right, Q);
    }

    int count_in(int id, const detail::Lifted& Q) const {
        const Node& nd = nodes_[id];
        int c = classify(nd, Q);
        if (c < 0) return 0;
        if (c > 0) return nd.hi - nd.lo;
        if (nd.left < 0) {
            int k = 0;
            for (int i = nd.lo; i < nd.hi; ++i) k += match(order_[i], Q);
            return k;
        }
        return count_in(nd.left, Q) + count_in(nd.right, Q);
    }

    // Distinct colors among matches; boundary overlaps of one color's faces
    // are counted once.
    void collect(int id, const detail::Lifted& Q, std::vector<char>& seen, int& distinct) const {
        const Node& nd = nodes_[id];
        int c = classify(nd, Q);
        if (c < 0) return;
        if (nd.left < 0 || c > 0) {
            for (int i = nd.lo; i < nd.hi; ++i) {
                int p = order_[i];
                if ((c > 0 || match(p, Q)) && !seen[pcolor_[p]]) {
                    seen[pcolor_[p]] = 1;
                    ++distinct;
                }
            }
            return;
        }
        collect(nd.left, Q, seen, distinct);
        collect(nd.right, Q, seen, distinct);
    }

    static constexpr int kLeaf = 8;
    int k_ = 0;
    double slack_ = 0;
    std::vector<detail::Lifted> pts_;
    std::vector<int> pcolor_;
    std::vector<std::array<double, 2>> pkey_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    Stats stats_;
};

inline RainbowDS rainbow_build(const ColoredSquareSet& cs) { return RainbowDS(cs); }
inline bool rainbow_query(const RainbowDS& ds, const AxisSquare& q) { return ds.query(q); }

}  // namespace sqd
