#ifndef GRIDPLAN_SELECTION_HPP
#define GRIDPLAN_SELECTION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gridplan/grid_map.hpp"
#include "gridplan/llm_client.hpp"
#include "gridplan/point.hpp"

namespace gridplan {

enum class SelectionKind { start, goal, uniform, random };

std::string to_string(SelectionKind k);
SelectionKind selection_kind_from_string(const std::string& s);

struct SelectionPolicy {
    SelectionKind kind = SelectionKind::start;
    int k = 2;
    std::uint64_t seed = 0;  // random policy only
};

// Drops a leading point equal to start and a trailing point equal to goal;
// what remains are the usable interior waypoints.
std::vector<Point> strip_endpoints(const WaypointSet& ws, Point start, Point goal);

// Picks k interior waypoints. start/goal: the k nearest to that endpoint
// (ties by original index), re-emitted in original sequence order. uniform:
// evenly spaced indices floor(i*(m-1)/(k-1)), the first interior point for
// k == 1. random: k distinct seed-deterministic picks in original order.
// k is clamped to the available count; every policy returns a subsequence
// of the input order.
std::vector<Point> select_waypoints(std::span<const Point> interior, Point start, Point goal,
                                    const SelectionPolicy& policy);

// The default rule: all waypoints when there are at most 2, otherwise the
// two closest to the start.
std::vector<Point> default_select(std::span<const Point> interior, Point start);

// --- empirical selection study ---------------------------------------------

struct StudyRow {
    SelectionKind kind{};
    int k = 0;
    double memory_score = 0.0;  // normalized per scale, averaged across scales
    double time_score = 0.0;
    double path_length_pct = 0.0;  // mean over all trials and scales
};

struct StudyTable {
    std::vector<StudyRow> rows;
    std::string to_csv() const;
};

struct StudyConfig {
    std::vector<SelectionKind> kinds{SelectionKind::start, SelectionKind::goal,
                                     SelectionKind::uniform, SelectionKind::random};
    std::vector<int> ks{1, 2, 3, 4};
    int trials = 30;
    std::uint64_t seed = 1;
    PlanOptions plan_opts;
};

// Runs every (policy, k) combination over the maps, aggregates raw means per
// map scale, then normalizes time/memory per scale and averages the scores.
StudyTable run_selection_study(std::span<const GridMap> maps, LlmClient& client,
                               const StudyConfig& cfg = {});

}  // namespace gridplan

#endif
