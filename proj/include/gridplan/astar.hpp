#ifndef GRIDPLAN_ASTAR_HPP
#define GRIDPLAN_ASTAR_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gridplan/grid_map.hpp"
#include "gridplan/point.hpp"

namespace gridplan {

// Outcome of one planner invocation. An empty path with reached == false
// means no route exists (a value, not an error); timed_out distinguishes
// runs cut off by the wall-clock budget.
struct PlanResult {
    std::vector<Point> path;
    double length = 0.0;                 // sum of Euclidean step lengths
    std::int64_t search_time_ns = 0;     // search phase only
    std::int64_t peak_memory_units = 0;  // deterministic units, see memory_meter.hpp
    std::int64_t nodes_expanded = 0;
    std::int64_t broad_rejects = 0;
    std::int64_t precise_tests = 0;
    std::int64_t llm_latency_ns = 0;     // filled by the waypoint pipeline, 0 here
    bool reached = false;
    bool timed_out = false;
};

struct PlanOptions {
    int open_topk = 100;  // entries refreshed eagerly on a waypoint switch (Opt-A*)
    std::chrono::nanoseconds timeout{0};  // 0 = unlimited
};

// Extra counters for white-box tests of the lazy-update contract.
struct SearchDebug {
    std::int64_t stale_pop_refreshes = 0;  // entries re-keyed on pop (Case 2)
    std::int64_t stale_expansions = 0;     // must stay 0: never expand on a stale key
    std::int64_t epoch_switches = 0;
};

// f(s) = g + euclid(pos, goal) + euclid(pos, wp) with the waypoint term
// dropped when no waypoint is active.
double heuristic_f(double g, const Point& pos, const Point& goal, const Point* wp);

// Blocked waypoints snap to the nearest unblocked cell within Chebyshev
// radius 3 (out-of-bounds points are clamped first); returns nullopt when
// no such cell exists and the waypoint should be skipped.
std::optional<Point> snap_waypoint(const GridMap& map, Point p);

// Reference A* with the linear OPEN list (re-sorted every expansion), linear
// CLOSED list, and precise-only collision checks for waypoint line-of-sight.
PlanResult plan_baseline_astar(const GridMap& map, Point start, Point goal,
                               std::span<const Point> waypoints = {},
                               const PlanOptions& opts = {}, SearchDebug* dbg = nullptr);

// Same search semantics on fast structures: hash CLOSED set, binary-heap
// OPEN list with epoch-stamped lazy re-keying (top-k refresh on a waypoint
// switch, re-key on pop otherwise), two-stage collision checks.
PlanResult plan_opt_astar(const GridMap& map, Point start, Point goal,
                          std::span<const Point> waypoints = {},
                          const PlanOptions& opts = {}, SearchDebug* dbg = nullptr);

// Independent shortest-path oracle for tests and for the offline waypoint
// stub. Same movement rules as the planners, none of their machinery.
struct OraclePath {
    bool reachable = false;
    double length = 0.0;
    std::vector<Point> path;
};

OraclePath dijkstra_oracle_path(const GridMap& map, Point start, Point goal);

// Length-only convenience; nullopt when unreachable.
std::optional<double> dijkstra_oracle(const GridMap& map, Point start, Point goal);

}  // namespace gridplan

#endif
