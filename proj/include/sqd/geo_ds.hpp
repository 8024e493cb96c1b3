#pragma once

#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <vector>

#include "geometry.hpp"
#include "intervals.hpp"
#include "rainbow.hpp"

namespace sqd {

// Rent-or-buy switch for the intersection substructures: a structure answers
// by scanning its objects until the scanned work exceeds a fixed multiple of
// its size, then builds the indexed structure once and uses it from then on.
// Pipelines rebuild their structures at every radius and probe most nodes only
// a few times, so this keeps the total within a constant factor of the better
// of the two strategies. Answers are identical either way.
inline constexpr long long kBuildWorkFactor = 4096;

template <class Fast>
class RentOrBuy {
public:
    template <class Make>
    const Fast* get(long long size, long long scan_cost, Make&& make) const {
        if (ready_.load(std::memory_order_acquire)) return fast_.get();
        long long w = work_.fetch_add(scan_cost, std::memory_order_relaxed) + scan_cost;
        if (w < kBuildWorkFactor * size) return nullptr;
        std::call_once(once_, [&] {
            fast_ = std::make_unique<Fast>(make());
            ready_.store(true, std::memory_order_release);
        });
        return fast_.get();
    }
    bool built() const { return ready_.load(std::memory_order_acquire); }

private:
    mutable std::atomic<long long> work_{0};
    mutable std::atomic<bool> ready_{false};
    mutable std::once_flag once_;
    mutable std::unique_ptr<Fast> fast_;
};

// "Does q meet any of these squares": a one-color rainbow structure.
class SquareHit {
public:
    explicit SquareHit(const std::vector<AxisSquare>& squares, bool eager = false) : squares_(squares) {
        if (eager) lazy_.get(0, 1, [&] { return make(); });
    }
    bool any(const AxisSquare& q) const {
        long long n = static_cast<long long>(squares_.size());
        if (const RainbowDS* ds = lazy_.get(n, n, [&] { return make(); })) return ds->any(q);
        for (auto& s : squares_)
            if (intersects(q, s)) return true;
        return false;
    }
    bool indexed() const { return lazy_.built(); }

private:
    RainbowDS make() const { return RainbowDS(ColoredSquareSet{squares_, std::vector<int>(squares_.size(), 0)}); }
    std::vector<AxisSquare> squares_;
    RentOrBuy<RainbowDS> lazy_;
};

class SquareRainbow {
public:
    SquareRainbow(const std::vector<AxisSquare>& squares, const std::vector<int>& colors, bool eager = false)
        : cs_{squares, colors} {
        for (int c : colors) k_ = std::max(k_, c + 1);
        if (eager) lazy_.get(0, 1, [&] { return RainbowDS(cs_); });
    }
    bool query(const AxisSquare& q) const {
        long long n = static_cast<long long>(cs_.squares.size());
        if (const RainbowDS* ds = lazy_.get(n, n, [&] { return RainbowDS(cs_); })) return ds->query(q);
        std::vector<char> hit(k_, 0);
        int distinct = 0;
        for (size_t i = 0; i < cs_.squares.size(); ++i)
            if (!hit[cs_.color[i]] && intersects(q, cs_.squares[i])) {
                hit[cs_.color[i]] = 1;
                ++distinct;
            }
        return distinct == k_;
    }

private:
    ColoredSquareSet cs_;
    int k_ = 0;
    RentOrBuy<RainbowDS> lazy_;
};

using SquareObject = IntervalObject<AxisSquare>;
using SquareAvoidDS = AvoidDS<AxisSquare, SquareHit>;
using SquareCoverDS = CoverDS<AxisSquare, SquareHit, SquareRainbow>;

// `eager` builds every indexed substructure up front instead of on demand.
inline SquareAvoidDS avoid_build(const std::vector<SquareObject>& objs, bool eager = false) { return SquareAvoidDS(objs, eager); }
inline bool avoid_query(const SquareAvoidDS& ds, const AxisSquare& q, int l, int r) { return ds.query(q, l, r); }

inline int default_cover_block(int n) { return std::max(1, static_cast<int>(std::ceil(std::pow(std::max(n, 1), 1.0 / 12) - 1e-9))); }

inline SquareCoverDS cover_build(const std::vector<SquareObject>& objs, int block, bool eager = false) {
    return SquareCoverDS(objs, block, eager);
}
inline bool cover_query(const SquareCoverDS& ds, const AxisSquare& q, int l, int r) { return ds.query(q, l, r); }

// Union of the intervals of all squares meeting q.
inline IntervalRep interval_search(const SquareCoverDS& cover, const SquareAvoidDS& avoid, const AxisSquare& q, uint64_t path_id,
                                   long long* probes = nullptr) {
    return interval_search(
        cover.ranks(), q, [&](const AxisSquare& s, int l, int r) { return cover.query(s, l, r); },
        [&](const AxisSquare& s, int l, int r) { return avoid.query(s, l, r); }, path_id, probes);
}

}  // namespace sqd
