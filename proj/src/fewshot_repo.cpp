#include "gridplan/fewshot_repo.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gridplan/errors.hpp"
#include "gridplan/llm_client.hpp"
#include "gridplan/selection.hpp"

namespace gridplan {

namespace {

using nlohmann::json;

json point_to_json(const Point& p) { return json::array({p.x, p.y}); }

json triples_to_json(const std::vector<std::array<int, 3>>& ts) {
    json out = json::array();
    for (const auto& t : ts) out.push_back(json::array({t[0], t[1], t[2]}));
    return out;
}

std::vector<std::array<int, 3>> triples_from_json(const json& j) {
    std::vector<std::array<int, 3>> out;
    for (const auto& t : j) out.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    return out;
}

json example_to_json(const FewShotExample& ex) {
    json pts = json::array();
    for (const Point& p : ex.waypoints) pts.push_back(point_to_json(p));
    return json{{"start", point_to_json(ex.start)},
                {"goal", point_to_json(ex.goal)},
                {"horizontal_barriers", triples_to_json(ex.horizontal_barriers)},
                {"vertical_barriers", triples_to_json(ex.vertical_barriers)},
                {"waypoints", pts},
                {"metrics",
                 json{{"length_ratio", ex.metrics.length_ratio},
                      {"time_ratio", ex.metrics.time_ratio},
                      {"memory_ratio", ex.metrics.memory_ratio}}}};
}

FewShotExample example_from_json(const json& j) {
    FewShotExample ex;
    ex.start = {j.at("start").at(0).get<int>(), j.at("start").at(1).get<int>()};
    ex.goal = {j.at("goal").at(0).get<int>(), j.at("goal").at(1).get<int>()};
    ex.horizontal_barriers = triples_from_json(j.at("horizontal_barriers"));
    ex.vertical_barriers = triples_from_json(j.at("vertical_barriers"));
    for (const auto& p : j.at("waypoints"))
        ex.waypoints.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    if (j.contains("metrics")) {
        ex.metrics.length_ratio = j["metrics"].value("length_ratio", 0.0);
        ex.metrics.time_ratio = j["metrics"].value("time_ratio", 0.0);
        ex.metrics.memory_ratio = j["metrics"].value("memory_ratio", 0.0);
    }
    return ex;
}

}  // namespace

FewShotExample make_example(const GridMap& map, Point start, Point goal,
                            std::vector<Point> waypoints, const ExampleMetrics& metrics) {
    FewShotExample ex;
    ex.start = start;
    ex.goal = goal;
    for (const Barrier& b : map.barriers()) {
        const std::array<int, 3> t{b.fixed, b.lo, b.hi};
        if (b.axis == BarrierAxis::horizontal) ex.horizontal_barriers.push_back(t);
        else ex.vertical_barriers.push_back(t);
    }
    ex.waypoints = std::move(waypoints);
    ex.metrics = metrics;
    return ex;
}

bool gate_from_ratios(const ExampleMetrics& r, const ValidationThresholds& thr) {
    return r.length_ratio <= thr.length && r.time_ratio <= thr.time &&
           r.memory_ratio <= thr.memory;
}

ValidationOutcome validate_example(const PlanResult& plan_llm, const PlanResult& plan_base,
                                   const ValidationThresholds& thr) {
    ValidationOutcome out;
    const double lb = plan_base.length;
    if (lb == 0.0) {
        // start == goal baseline: the guided plan must also be zero-length
        out.ratios.length_ratio =
            plan_llm.length == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        out.ratios.length_ratio = std::abs(plan_llm.length - lb) / lb;
    }
    out.ratios.time_ratio = plan_base.search_time_ns > 0
                                ? static_cast<double>(plan_llm.search_time_ns) /
                                      static_cast<double>(plan_base.search_time_ns)
                                : std::numeric_limits<double>::infinity();
    out.ratios.memory_ratio = plan_base.peak_memory_units > 0
                                  ? static_cast<double>(plan_llm.peak_memory_units) /
                                        static_cast<double>(plan_base.peak_memory_units)
                                  : std::numeric_limits<double>::infinity();
    out.passed = gate_from_ratios(out.ratios, thr);
    return out;
}

FewShotRepo FewShotRepo::load(const std::string& path, std::size_t capacity,
                              ValidationThresholds thr) {
    FewShotRepo repo(capacity, thr);
    repo.persist_path_ = path;
    std::ifstream f(path);
    if (!f) return repo;  // absent file = empty repository
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            repo.examples_.push_back(example_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw MapFormatError("bad repository line " + std::to_string(lineno) + ": " +
                                 e.what());
        }
        while (repo.examples_.size() > repo.capacity_) repo.examples_.pop_front();
    }
    return repo;
}

void FewShotRepo::persist(const std::deque<FewShotExample>& staged) const {
    if (persist_path_.empty()) return;
    const std::string tmp = persist_path_ + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open repository file for writing: " + tmp);
        for (const FewShotExample& ex : staged) f << example_to_json(ex).dump() << "\n";
        f.flush();
        if (!f) throw std::runtime_error("write to repository file failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), persist_path_.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot replace repository file: " + persist_path_);
    }
}

bool FewShotRepo::update(const FewShotExample& ex, bool passed) {
    if (!passed) return false;
    std::deque<FewShotExample> staged = examples_;
    if (staged.size() >= capacity_) staged.pop_front();
    staged.push_back(ex);
    persist(staged);  // throws before any in-memory change
    examples_ = std::move(staged);
    return true;
}

void FewShotRepo::clear() {
    std::deque<FewShotExample> staged;
    persist(staged);
    examples_.clear();
}

TrainReport train(FewShotRepo& repo, std::span<const GridMap> maps, LlmClient& client,
                  const PlanOptions& opts) {
    TrainReport report;
    for (const GridMap& map : maps) {
        TrainRecord rec;
        rec.map_seed = map.seed();
        rec.n = map.n();
        const Point start = map.default_start();
        const Point goal = map.default_goal();

        WaypointSet ws;
        try {
            const PromptBundle bundle = render_prompt(repo, map, start, goal);
            ws = client.generate(bundle, map, start, goal, map.seed());
            rec.llm_ok = true;
        } catch (const std::exception&) {
            rec.llm_ok = false;  // skipped, training continues
            report.records.push_back(rec);
            continue;
        }

        const std::vector<Point> interior = strip_endpoints(ws, start, goal);
        const std::vector<Point> selected = default_select(interior, start);
        const PlanResult plan_llm = plan_opt_astar(map, start, goal, selected, opts);
        const PlanResult plan_base = plan_opt_astar(map, start, goal, {}, opts);
        if (!plan_llm.reached || !plan_base.reached) {
            report.records.push_back(rec);
            continue;
        }
        const ValidationOutcome v = validate_example(plan_llm, plan_base, repo.thresholds());
        rec.passed = v.passed;
        rec.ratios = v.ratios;
        if (repo.update(make_example(map, start, goal, ws.points, v.ratios), v.passed))
            ++report.admitted;
        report.records.push_back(rec);
    }
    return report;
}

}  // namespace gridplan
