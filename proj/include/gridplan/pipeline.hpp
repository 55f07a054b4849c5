#ifndef GRIDPLAN_PIPELINE_HPP
#define GRIDPLAN_PIPELINE_HPP

#include <cstdint>
#include <vector>

#include "gridplan/astar.hpp"
#include "gridplan/fewshot_repo.hpp"
#include "gridplan/grid_map.hpp"
#include "gridplan/llm_client.hpp"

namespace gridplan {

// Optional white-box view of one pipeline run.
struct PipelineDetail {
    WaypointSet waypoints;
    std::vector<Point> selected;
    bool llm_failed = false;
};

// iLLM pipeline: prompt from the repository, waypoints from the client,
// default selection (two nearest the start), Opt-A* with the selected
// waypoints. Model failures fall back to a plain Opt-A* search; the search
// metrics never include model latency (reported in llm_latency_ns).
PlanResult plan_illm(const GridMap& map, Point start, Point goal, LlmClient& client,
                     const FewShotRepo& repo, const PlanOptions& opts = {},
                     std::uint64_t variation = 0, PipelineDetail* detail = nullptr);

// The comparator composition: every parsed waypoint (no selection), baseline
// A* engine with precise-only collision checks. Same fallback rule.
PlanResult plan_llm_astar(const GridMap& map, Point start, Point goal, LlmClient& client,
                          const PlanOptions& opts = {}, std::uint64_t variation = 0,
                          PipelineDetail* detail = nullptr);

}  // namespace gridplan

#endif
