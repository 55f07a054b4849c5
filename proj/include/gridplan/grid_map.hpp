#ifndef GRIDPLAN_GRID_MAP_HPP
#define GRIDPLAN_GRID_MAP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gridplan/point.hpp"

namespace gridplan {

enum class BarrierAxis { horizontal, vertical };

// Axis-aligned obstacle, one cell wide. A horizontal barrier occupies cells
// (x, fixed) for lo <= x <= hi; a vertical one occupies (fixed, y). For
// continuous collision tests it is the zero-width segment between the cell
// centers at (lo, fixed) and (hi, fixed) (resp. transposed).
struct Barrier {
    BarrierAxis axis = BarrierAxis::horizontal;
    int fixed = 0;  // the y coordinate for horizontal, the x for vertical
    int lo = 0;
    int hi = 0;  // inclusive; lo <= hi

    Point end_a() const {
        return axis == BarrierAxis::horizontal ? Point{lo, fixed} : Point{fixed, lo};
    }
    Point end_b() const {
        return axis == BarrierAxis::horizontal ? Point{hi, fixed} : Point{fixed, hi};
    }
    bool covers(const Point& p) const {
        if (axis == BarrierAxis::horizontal) return p.y == fixed && p.x >= lo && p.x <= hi;
        return p.x == fixed && p.y >= lo && p.y <= hi;
    }
    bool operator==(const Barrier& o) const {
        return axis == o.axis && fixed == o.fixed && lo == o.lo && hi == o.hi;
    }
};

enum class Scenario { random, cross, bars };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

// Square N x N map with unit-width axis-aligned barriers. Immutable after
// construction; safe to share across concurrent planner runs.
class GridMap {
public:
    GridMap(int n, std::vector<Barrier> barriers, Scenario scenario, std::uint64_t seed);

    int n() const { return n_; }
    Scenario scenario() const { return scenario_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<Barrier>& barriers() const { return barriers_; }

    bool in_bounds(const Point& p) const {
        return p.x >= 0 && p.x < n_ && p.y >= 0 && p.y < n_;
    }

    // True iff p lies on a barrier cell. Throws std::out_of_range for
    // out-of-bounds points.
    bool is_blocked(const Point& p) const;

    // Unchecked variant for planner inner loops (p must be in bounds).
    bool blocked_unchecked(const Point& p) const {
        return occupancy_[static_cast<std::size_t>(p.y) * n_ + p.x] != 0;
    }

    // Default benchmark endpoints: (2,2) and (n-3,n-3), re-sampled uniformly
    // (seeded by the map seed) if a barrier happens to cover them.
    Point default_start() const;
    Point default_goal() const;

private:
    Point fallback_unblocked(Point preferred, std::uint64_t salt) const;

    int n_;
    Scenario scenario_;
    std::uint64_t seed_;
    std::vector<Barrier> barriers_;
    std::vector<std::uint8_t> occupancy_;
};

// Procedural generation. random: 3*(n/50)^2 barriers, axis uniform, length
// uniform in [10,50], position uniform in bounds. cross: the random set plus
// one cross centered between the default endpoints, arm length uniform in
// [0.5n, 0.6n]. bars: the random set plus 3 parallel bars, length uniform in
// [0.5n, 0.6n], evenly spaced. Pure function of (n, scenario, seed).
// Throws std::invalid_argument unless n >= 50 and n % 50 == 0.
GridMap generate_map(int n, Scenario scenario, std::uint64_t seed);

// JSON with keys n, scenario, seed, horizontal_barriers, vertical_barriers;
// barrier triples are [fixed, lo, hi]. serialize(parse(text)) is
// byte-identical for canonical text.
std::string serialize_map(const GridMap& map);
GridMap parse_map(const std::string& text);  // throws MapFormatError

}  // namespace gridplan

#endif
