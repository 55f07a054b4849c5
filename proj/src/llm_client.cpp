#include "gridplan/llm_client.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <random>
#include <thread>

#include "gridplan/astar.hpp"
#include "gridplan/errors.hpp"
#include "gridplan/rng.hpp"

namespace gridplan {

namespace {

using nlohmann::json;

const char* const kTemplateText =
    "Module I: Static Prompt Template\n"
    "\n"
    "# Role\n"
    "You are an expert specializing in computational geometry and path planning.\n"
    "\n"
    "# Goal\n"
    "Generate an optimal path from start point to goal point based on the given start position, "
    "goal position, and obstacle information.\n"
    "\n"
    "# Constraints\n"
    "Strictly adhere to the following rules:\n"
    "1. Obstacle Avoidance: The path must not contact or intersect any obstacles in any form.\n"
    "2. Path Point Count: The final path must contain at least 5 coordinate points (including "
    "start and goal points). Interpolation Rules: If the initially calculated path contains "
    "fewer than 5 points, uniformly insert additional points between the longest path segments "
    "until the quantity requirement is satisfied. Inserted points should ensure path smoothness "
    "and avoid unnecessary sharp angles.\n"
    "3. Path Optimality: Under the premise of satisfying all above constraints, the generated "
    "path should approximate the geometrically shortest path.\n"
    "\n"
    "# Input and Output Format\n"
    "Input: Start point start: [x, y], Goal point goal: [x, y], Horizontal barriers "
    "horizontal_barriers: [[y, x_start, x_end], ...], Vertical barriers vertical_barriers: "
    "[[x, y_start, y_end], ...]\n"
    "Output: Must strictly follow the JSON array format: Generated Path: [[x1, y1], [x2, y2], "
    "..., [xN, yN]]\n"
    "\n"
    "# Workflow\n"
    "1. Initial Pathfinding: Based on A* algorithm logic, identify a shortest path that avoids "
    "all obstacles.\n"
    "2. Verification: Check the path point count. If fewer than 5 points, add intermediate "
    "points according to Core Constraint\n"
    "3. Final Validation: Before output, verify that the generated path completely satisfies "
    "all core constraints.";

const char* const kTaskInstruction =
    "Generate intermediate waypoints for the following input. If input data is ambiguous or "
    "constraint conditions contain logical conflicts, explicitly identify the problematic "
    "areas. Ensure the path generation is completely based on the provided input data. A path "
    "that perfectly follows all constraints will be considered a successful response.";

std::string format_point(const Point& p) {
    return "[" + std::to_string(p.x) + ", " + std::to_string(p.y) + "]";
}

std::vector<std::array<int, 3>> barrier_triples(const GridMap& map, BarrierAxis axis) {
    std::vector<std::array<int, 3>> out;
    for (const Barrier& b : map.barriers())
        if (b.axis == axis) out.push_back({b.fixed, b.lo, b.hi});
    return out;
}

std::string render_few_shot(const FewShotExample& ex) {
    std::string s;
    s += "Input:\n";
    s += "start: " + format_point(ex.start) + "\n";
    s += "goal: " + format_point(ex.goal) + "\n";
    s += "horizontal_barriers: " + format_barriers(ex.horizontal_barriers) + "\n";
    s += "vertical_barriers: " + format_barriers(ex.vertical_barriers) + "\n";
    s += "Output:\n";
    s += "Generated Path: " + format_points(ex.waypoints);
    return s;
}

}  // namespace

std::string format_points(std::span<const Point> pts) {
    std::string s = "[";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ", ";
        s += format_point(pts[i]);
    }
    return s + "]";
}

std::string format_barriers(std::span<const std::array<int, 3>> triples) {
    std::string s = "[";
    for (std::size_t i = 0; i < triples.size(); ++i) {
        if (i) s += ", ";
        s += "[" + std::to_string(triples[i][0]) + ", " + std::to_string(triples[i][1]) + ", " +
             std::to_string(triples[i][2]) + "]";
    }
    return s + "]";
}

PromptBundle render_prompt(const FewShotRepo& repo, const GridMap& map, Point start, Point goal) {
    PromptBundle bundle;
    bundle.template_text = kTemplateText;
    for (const FewShotExample& ex : repo.examples())
        bundle.few_shots.push_back(render_few_shot(ex));

    std::string task = "Module III: Task Instructions\n\n";
    task += kTaskInstruction;
    task += "\n\n";
    task += "Start Point: " + format_point(start) + "\n";
    task += "goal: " + format_point(goal) + "\n";
    task += "horizontal_barriers: " + format_barriers(barrier_triples(map, BarrierAxis::horizontal)) +
            "\n";
    task += "vertical_barriers: " + format_barriers(barrier_triples(map, BarrierAxis::vertical)) +
            "\n";
    task += "Generated Path:";
    bundle.task_text = std::move(task);
    return bundle;
}

std::string render_full_prompt(const PromptBundle& bundle) {
    std::string s = bundle.template_text;
    if (!bundle.few_shots.empty()) {
        s += "\n\nModule II: Dynamic Few-shot Examples";
        for (const std::string& block : bundle.few_shots) s += "\n\n" + block;
    }
    s += "\n\n" + bundle.task_text;
    return s;
}

WaypointSet parse_generated_path(const std::string& raw) {
    static const std::string marker = "Generated Path:";
    const std::size_t mpos = raw.rfind(marker);
    if (mpos == std::string::npos)
        throw LlmFormatError("no 'Generated Path:' marker in model output", raw);

    std::size_t i = raw.find('[', mpos + marker.size());
    if (i == std::string::npos)
        throw LlmFormatError("no array after 'Generated Path:' marker", raw);
    int depth = 0;
    std::size_t end = std::string::npos;
    for (std::size_t j = i; j < raw.size(); ++j) {
        if (raw[j] == '[') ++depth;
        else if (raw[j] == ']' && --depth == 0) {
            end = j;
            break;
        }
    }
    if (end == std::string::npos)
        throw LlmFormatError("unterminated array after 'Generated Path:' marker", raw);

    json arr;
    try {
        arr = json::parse(raw.substr(i, end - i + 1));
    } catch (const json::parse_error& e) {
        throw LlmFormatError(std::string("waypoint array is not valid JSON: ") + e.what(), raw);
    }
    if (!arr.is_array()) throw LlmFormatError("waypoint payload is not an array", raw);

    WaypointSet ws;
    ws.raw_text = raw;
    for (const auto& item : arr) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
            throw LlmFormatError("waypoint entry is not an [x, y] pair", raw);
        ws.points.push_back(Point{item[0].get<int>(), item[1].get<int>()});
    }
    ws.meets_min_points = ws.points.size() >= 5;
    return ws;
}

WaypointSet stub_generate(const GridMap& map, Point start, Point goal, std::uint64_t seed,
                          int perturb_radius) {
    const OraclePath oracle = dijkstra_oracle_path(map, start, goal);
    if (!oracle.reachable) throw std::runtime_error("stub: start and goal are disconnected");

    WaypointSet ws;
    if (start == goal) {
        ws.points = {start};
        ws.raw_text = "Generated Path: " + format_points(ws.points);
        ws.meets_min_points = false;
        return ws;
    }

    // Cumulative arc length along the oracle path.
    std::vector<double> cum(oracle.path.size(), 0.0);
    for (std::size_t i = 1; i < oracle.path.size(); ++i)
        cum[i] = cum[i - 1] + euclid(oracle.path[i - 1], oracle.path[i]);
    const double total = cum.back();

    const double fractions[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<Point> pts;
    for (double f : fractions) {
        const double target = f * total;
        std::size_t j = 0;
        while (j + 1 < cum.size() && cum[j] < target - 1e-9) ++j;
        pts.push_back(oracle.path[j]);
    }

    const int radius = perturb_radius >= 0 ? perturb_radius : map.n() / 20;
    std::mt19937_64 rng(mix64(seed, mix64(map.seed(), mix64(static_cast<std::uint64_t>(map.n()),
                                                            PointHash{}(start) ^ PointHash{}(goal)))));
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const int dx = static_cast<int>(uniform_int(rng, -radius, radius));
        const int dy = static_cast<int>(uniform_int(rng, -radius, radius));
        pts[i].x = std::clamp(pts[i].x + dx, 0, map.n() - 1);
        pts[i].y = std::clamp(pts[i].y + dy, 0, map.n() - 1);
    }

    ws.points = std::move(pts);
    ws.raw_text = "Generated Path: " + format_points(ws.points);
    ws.meets_min_points = ws.points.size() >= 5;
    return ws;
}

WaypointSet StubClient::generate(const PromptBundle&, const GridMap& map, Point start, Point goal,
                                 std::uint64_t variation) {
    return stub_generate(map, start, goal, mix64(seed_, variation), perturb_radius_);
}

HttpClientConfig http_config_from_env() {
    HttpClientConfig cfg;
    if (const char* v = std::getenv("LLM_BASE_URL")) cfg.base_url = v;
    if (const char* v = std::getenv("LLM_MODEL")) cfg.model = v;
    if (const char* v = std::getenv("LLM_API_KEY")) cfg.api_key = v;
    return cfg;
}

namespace {

void append_log(const std::string& path, const json& line) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::app);
    if (f) f << line.dump() << "\n";
}

}  // namespace

WaypointSet HttpLlmClient::generate(const PromptBundle& bundle, const GridMap&, Point, Point,
                                    std::uint64_t) {
    if (cfg_.base_url.empty() || cfg_.model.empty())
        throw LlmTransportError("live client needs LLM_BASE_URL and LLM_MODEL");

    // Split scheme://host[:port] from any path prefix (e.g. /v1).
    std::string root = cfg_.base_url;
    std::string prefix;
    const std::size_t scheme = root.find("://");
    const std::size_t slash = root.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash != std::string::npos) {
        prefix = root.substr(slash);
        root = root.substr(0, slash);
    }
    if (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

    json req{{"model", cfg_.model},
             {"temperature", cfg_.temperature},
             {"messages", json::array({json{{"role", "user"},
                                            {"content", render_full_prompt(bundle)}}})}};

    httplib::Client cli(root);
    cli.set_connection_timeout(cfg_.timeout_s, 0);
    cli.set_read_timeout(cfg_.timeout_s, 0);
    httplib::Headers headers;
    if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(500LL << (attempt - 1)));
        auto resp = cli.Post(prefix + "/chat/completions", headers, req.dump(), "application/json");
        if (!resp) {
            last_error = "no response: " + httplib::to_string(resp.error());
            continue;
        }
        if (resp->status >= 500) {
            last_error = "server status " + std::to_string(resp->status);
            continue;
        }
        if (resp->status != 200) {
            append_log(cfg_.log_path, json{{"request", req}, {"status", resp->status},
                                           {"body", resp->body}});
            throw LlmTransportError("endpoint returned status " + std::to_string(resp->status) +
                                    ": " + resp->body);
        }
        json body;
        try {
            body = json::parse(resp->body);
        } catch (const json::parse_error& e) {
            throw LlmFormatError(std::string("response body is not JSON: ") + e.what(),
                                 resp->body);
        }
        if (!body.contains("choices") || body["choices"].empty() ||
            !body["choices"][0].contains("message"))
            throw LlmFormatError("response has no choices[0].message", resp->body);
        const std::string content = body["choices"][0]["message"].value("content", "");
        append_log(cfg_.log_path, json{{"request", req}, {"response", content}});
        return parse_generated_path(content);
    }
    throw LlmTransportError("chat completion failed after " +
                            std::to_string(cfg_.max_retries + 1) + " attempts: " + last_error);
}

}  // namespace gridplan
