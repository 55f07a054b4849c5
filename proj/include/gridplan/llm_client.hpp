#ifndef GRIDPLAN_LLM_CLIENT_HPP
#define GRIDPLAN_LLM_CLIENT_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gridplan/fewshot_repo.hpp"
#include "gridplan/grid_map.hpp"
#include "gridplan/point.hpp"

namespace gridplan {

// The prompt has three parts, concatenated in order: the static template,
// the rendered few-shot examples, and the task instructions for the current
// query.
struct PromptBundle {
    std::string template_text;
    std::vector<std::string> few_shots;
    std::string task_text;
};

std::string render_full_prompt(const PromptBundle& bundle);

// Waypoints as returned by the model (or the stub), plus the verbatim text
// they were extracted from. meets_min_points mirrors the >= 5 point
// constraint from the prompt; short lists are kept but flagged.
struct WaypointSet {
    std::vector<Point> points;
    std::string raw_text;
    bool meets_min_points = false;
};

// "[[x1, y1], [x2, y2], ...]" in the prompt's array style.
std::string format_points(std::span<const Point> pts);
std::string format_barriers(std::span<const std::array<int, 3>> triples);

// Builds the three prompt modules for the given query, with one few-shot
// block per repository example.
PromptBundle render_prompt(const FewShotRepo& repo, const GridMap& map, Point start, Point goal);

// Extracts the point list after the last "Generated Path:" marker.
// Throws LlmFormatError when no parseable list is present.
WaypointSet parse_generated_path(const std::string& raw);

// Deterministic offline substitute for the model: samples 5 points at arc
// length fractions {0, .25, .5, .75, 1} of the shortest path, then perturbs
// the interior points by a seed-deterministic Chebyshev offset (radius
// n/20 by default, 0 reproduces the optimal-path waypoints exactly).
// Throws std::runtime_error when start and goal are disconnected.
WaypointSet stub_generate(const GridMap& map, Point start, Point goal, std::uint64_t seed,
                          int perturb_radius = -1);

class LlmClient {
public:
    virtual ~LlmClient() = default;
    // variation decorrelates repeated queries on the same inputs (benchmark
    // trials); the HTTP client ignores it.
    virtual WaypointSet generate(const PromptBundle& bundle, const GridMap& map, Point start,
                                 Point goal, std::uint64_t variation) = 0;
    virtual std::string name() const = 0;
};

class StubClient final : public LlmClient {
public:
    explicit StubClient(std::uint64_t seed = 0, int perturb_radius = -1)
        : seed_(seed), perturb_radius_(perturb_radius) {}

    WaypointSet generate(const PromptBundle&, const GridMap& map, Point start, Point goal,
                         std::uint64_t variation) override;
    std::string name() const override { return "stub"; }

private:
    std::uint64_t seed_;
    int perturb_radius_;
};

struct HttpClientConfig {
    std::string base_url;  // e.g. http://localhost:8000/v1
    std::string model;
    std::string api_key;
    double temperature = 0.0;
    int timeout_s = 120;
    int max_retries = 3;
    std::string log_path;  // JSON-lines transcript, empty = no log
};

// Reads LLM_BASE_URL, LLM_MODEL, LLM_API_KEY.
HttpClientConfig http_config_from_env();

// Chat-completion client (POST {base_url}/chat/completions). Transport
// failures retry with exponential backoff, then raise LlmTransportError.
class HttpLlmClient final : public LlmClient {
public:
    explicit HttpLlmClient(HttpClientConfig cfg) : cfg_(std::move(cfg)) {}

    WaypointSet generate(const PromptBundle& bundle, const GridMap& map, Point start, Point goal,
                         std::uint64_t variation) override;
    std::string name() const override { return "live:" + cfg_.model; }

private:
    HttpClientConfig cfg_;
};

}  // namespace gridplan

#endif
