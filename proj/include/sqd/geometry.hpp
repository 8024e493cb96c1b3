#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sqd {

// Relative tolerance of every intersection predicate. Ties count as edges.
inline constexpr double kRelEps = 1e-9;
// Disk radius used by the center-disk model, with the tolerance folded in.
inline constexpr double kDiskR = 1.0 + kRelEps;
inline constexpr double kDiskR2 = kDiskR * kDiskR;

struct Point {
    double x = 0, y = 0;
};

struct UnitDisk {
    Point center;
};

struct AxisSquare {
    Point center;
    double half_side = 0.5;
};

enum class GeoKind { UnitDisk, UnitSquare, Square };

inline bool intersects(const UnitDisk& a, const UnitDisk& b) {
    double dx = a.center.x - b.center.x, dy = a.center.y - b.center.y;
    return dx * dx + dy * dy <= kDiskR2;
}

inline bool intersects(const AxisSquare& a, const AxisSquare& b) {
    double d = std::max(std::fabs(a.center.x - b.center.x), std::fabs(a.center.y - b.center.y));
    return d <= (a.half_side + b.half_side) * (1.0 + kRelEps);
}

// Mixed kinds are a caller bug; the overload set makes the typed versions the
// normal path and this one exists for generic code that holds both.
template <class A, class B>
bool intersects(const A&, const B&) {
    throw std::invalid_argument("intersects: objects of different kinds");
}

struct CellIndex {
    int64_t ix = 0, iy = 0;
    bool operator==(const CellIndex& o) const { return ix == o.ix && iy == o.iy; }
    bool operator!=(const CellIndex& o) const { return !(*this == o); }
    bool operator<(const CellIndex& o) const { return ix != o.ix ? ix < o.ix : iy < o.iy; }
};

struct CellHash {
    size_t operator()(const CellIndex& c) const {
        uint64_t h = static_cast<uint64_t>(c.ix) * 0x9E3779B97F4A7C15ull;
        h ^= static_cast<uint64_t>(c.iy) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
        return static_cast<size_t>(h);
    }
};

inline constexpr int kNumTypes = 36;

inline CellIndex cell_of(Point p) {
    return {static_cast<int64_t>(std::floor(2.0 * p.x)), static_cast<int64_t>(std::floor(2.0 * p.y))};
}

inline int64_t pos_mod(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// Types are numbered 1..36; the ordering (ix mod 6, iy mod 6) lexicographic is
// also the iteration order of the unit-disk inner loop.
inline int type_of(CellIndex c) {
    return 1 + 6 * static_cast<int>(pos_mod(c.ix, 6)) + static_cast<int>(pos_mod(c.iy, 6));
}

inline double cell_x0(CellIndex c) { return 0.5 * static_cast<double>(c.ix); }
inline double cell_y0(CellIndex c) { return 0.5 * static_cast<double>(c.iy); }

// A disk centered in c can only reach centers in the 5x5 block around c, as long
// as no center sits within kGridGuard of a cell line (see guard_grid_lines).
// Offsets span at most 4 < 6 in each coordinate, so types never repeat.
inline std::vector<CellIndex> relevant_cells(CellIndex c) {
    std::vector<CellIndex> out;
    out.reserve(25);
    for (int dx = -2; dx <= 2; ++dx)
        for (int dy = -2; dy <= 2; ++dy) out.push_back({c.ix + dx, c.iy + dy});
    return out;
}

// With the 1e-9 tolerance a center could be adjacent to a center three cells
// away if both sit right on cell lines. Instances are normalized so that no
// coordinate lies within this distance of a multiple of 1/2.
inline constexpr double kGridGuard = 4e-9;

inline double guard_coordinate(double v) {
    double k = std::round(2.0 * v);
    double line = 0.5 * k;
    double d = v - line;
    if (std::fabs(d) >= kGridGuard) return v;
    return d >= 0 ? line + kGridGuard : line - kGridGuard;
}

inline Point guard_grid_lines(Point p) { return {guard_coordinate(p.x), guard_coordinate(p.y)}; }

// One of the 8 symmetries of the square, applied about the center of a cell.
// map(p) = R * (p - center); inverse is the transpose.
struct Dihedral {
    int a = 1, b = 0, c = 0, d = 1;  // [[a b] [c d]]
    Point apply(Point p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
    Point inverse(Point p) const { return {a * p.x + c * p.y, b * p.x + d * p.y}; }
};

inline std::array<Dihedral, 8> all_dihedral() {
    return {{{1, 0, 0, 1}, {0, -1, 1, 0}, {-1, 0, 0, -1}, {0, 1, -1, 0},
             {-1, 0, 0, 1}, {1, 0, 0, -1}, {0, 1, 1, 0}, {0, -1, -1, 0}}};
}

// Symmetry that moves the offset (dx, dy) into the upper cone dy' >= |dx'|, dy' >= 1.
inline Dihedral orient_above(int64_t dx, int64_t dy) {
    for (const auto& t : all_dihedral()) {
        Point o = t.apply({static_cast<double>(dx), static_cast<double>(dy)});
        if (o.y >= std::fabs(o.x) && o.y >= 1) return t;
    }
    throw std::invalid_argument("orient_above: zero offset");
}

// Lower arc of the circle of radius kDiskR around an owner center, expressed in
// the rotated frame of a target cell whose center is the origin (the cell is
// [-1/4, 1/4]^2). The owner lies above the cell, so for points q of the cell,
// q is in the disk iff q.y >= value(q.x).
struct Pseudoline {
    int owner = -1;
    CellIndex cell;
    Point c;  // owner center in the rotated frame
    bool full = false;  // owner centered in the cell itself: covers all of it

    static constexpr double kHalf = 0.25;
    static constexpr double kPad = 1e-7;
    static constexpr double kLo = -kHalf - kPad;
    static constexpr double kHi = kHalf + kPad;

    // Raw arc value, +inf outside the circle's x-range.
    double raw(double x) const {
        double t = x - c.x;
        double s = kDiskR2 - t * t;
        if (s < 0) return INFINITY;
        return c.y - std::sqrt(s);
    }
    // Arc clamped to a slightly padded copy of the cell; the padding keeps the
    // predicate exact inside the cell while giving every arc finite values.
    double value(double x) const { return full ? kLo : std::clamp(raw(x), kLo, kHi); }
    bool below(Point q) const {
        double dx = q.x - c.x, dy = q.y - c.y;
        return dx * dx + dy * dy <= kDiskR2;
    }
};

struct CellFrame {
    CellIndex cell;
    Dihedral rot;
    Point center;
    Point to_local(Point p) const { return rot.apply({p.x - center.x, p.y - center.y}); }
};

inline CellFrame make_frame(CellIndex cell, CellIndex source) {
    CellFrame f;
    f.cell = cell;
    f.center = {cell_x0(cell) + 0.25, cell_y0(cell) + 0.25};
    if (cell == source) f.rot = Dihedral{};
    else f.rot = orient_above(source.ix - cell.ix, source.iy - cell.iy);
    return f;
}

inline std::vector<Pseudoline> pseudoline_view(const std::vector<UnitDisk>& disks, const std::vector<int>& ids,
                                               CellIndex cell, CellIndex source) {
    std::vector<Pseudoline> out;
    if (std::max(std::llabs(source.ix - cell.ix), std::llabs(source.iy - cell.iy)) > 2)
        throw std::invalid_argument("pseudoline_view: source cell is not relevant");
    CellFrame f = make_frame(cell, source);
    for (int id : ids) {
        if (cell_of(disks[id].center) != source) throw std::invalid_argument("pseudoline_view: disk outside source cell");
        Pseudoline pl;
        pl.owner = id;
        pl.cell = cell;
        pl.c = f.to_local(disks[id].center);
        pl.full = (cell == source);
        out.push_back(pl);
    }
    return out;
}

// Number of points where the two arcs cross inside the (unpadded) cell.
inline int arc_crossings_in_cell(const Pseudoline& a, const Pseudoline& b) {
    if (a.full || b.full) return 0;
    double dx = b.c.x - a.c.x, dy = b.c.y - a.c.y;
    double d2 = dx * dx + dy * dy;
    if (d2 == 0 || d2 > 4 * kDiskR2) return 0;
    double d = std::sqrt(d2);
    double h2 = kDiskR2 - d2 / 4;
    if (h2 < 0) return 0;
    double h = std::sqrt(h2);
    double mx = a.c.x + dx / 2, my = a.c.y + dy / 2;
    int cnt = 0;
    for (int sgn : {-1, 1}) {
        double px = mx + sgn * h * (-dy / d), py = my + sgn * h * (dx / d);
        if (px >= -Pseudoline::kHalf && px <= Pseudoline::kHalf && py >= -Pseudoline::kHalf && py <= Pseudoline::kHalf) ++cnt;
    }
    return cnt;
}

}  // namespace sqd
