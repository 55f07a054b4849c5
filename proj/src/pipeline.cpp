#include "gridplan/pipeline.hpp"

#include <chrono>

#include "gridplan/selection.hpp"

namespace gridplan {

namespace {

// Shared waypoint acquisition: returns the interior waypoints (endpoints
// stripped) or nullopt when the client failed and the caller should fall
// back to an unguided search.
std::optional<std::vector<Point>> fetch_interior(const GridMap& map, Point start, Point goal,
                                                 LlmClient& client, const FewShotRepo& repo,
                                                 std::uint64_t variation,
                                                 std::int64_t& latency_ns, PipelineDetail* detail) {
    const PromptBundle bundle = render_prompt(repo, map, start, goal);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        WaypointSet ws = client.generate(bundle, map, start, goal, variation);
        latency_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
        std::vector<Point> interior = strip_endpoints(ws, start, goal);
        if (detail) detail->waypoints = std::move(ws);
        return interior;
    } catch (const std::exception&) {
        latency_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
        if (detail) detail->llm_failed = true;
        return std::nullopt;
    }
}

}  // namespace

PlanResult plan_illm(const GridMap& map, Point start, Point goal, LlmClient& client,
                     const FewShotRepo& repo, const PlanOptions& opts, std::uint64_t variation,
                     PipelineDetail* detail) {
    std::int64_t latency_ns = 0;
    std::vector<Point> selected;
    if (auto interior = fetch_interior(map, start, goal, client, repo, variation, latency_ns,
                                       detail)) {
        selected = default_select(*interior, start);
    }
    if (detail) detail->selected = selected;
    PlanResult res = plan_opt_astar(map, start, goal, selected, opts);
    res.llm_latency_ns = latency_ns;
    return res;
}

PlanResult plan_llm_astar(const GridMap& map, Point start, Point goal, LlmClient& client,
                          const PlanOptions& opts, std::uint64_t variation,
                          PipelineDetail* detail) {
    static const FewShotRepo empty_repo;
    std::int64_t latency_ns = 0;
    std::vector<Point> all;
    if (auto interior = fetch_interior(map, start, goal, client, empty_repo, variation,
                                       latency_ns, detail)) {
        all = std::move(*interior);
    }
    if (detail) detail->selected = all;
    PlanResult res = plan_baseline_astar(map, start, goal, all, opts);
    res.llm_latency_ns = latency_ns;
    return res;
}

}  // namespace gridplan
