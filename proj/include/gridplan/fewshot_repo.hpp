#ifndef GRIDPLAN_FEWSHOT_REPO_HPP
#define GRIDPLAN_FEWSHOT_REPO_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "gridplan/astar.hpp"
#include "gridplan/grid_map.hpp"
#include "gridplan/point.hpp"

namespace gridplan {

class LlmClient;

// Ratios of the waypoint-guided plan against the full-search plan:
// |L_llm - L_base| / L_base, T_llm / T_base, M_llm / M_base.
struct ExampleMetrics {
    double length_ratio = 0.0;
    double time_ratio = 0.0;
    double memory_ratio = 0.0;
};

// A validated (map inputs, generated waypoints) pair kept as an in-context
// demonstration. Waypoints are the full generated path including endpoints,
// exactly as they are rendered back into the prompt.
struct FewShotExample {
    Point start;
    Point goal;
    std::vector<std::array<int, 3>> horizontal_barriers;  // [y, x_start, x_end]
    std::vector<std::array<int, 3>> vertical_barriers;    // [x, y_start, y_end]
    std::vector<Point> waypoints;
    ExampleMetrics metrics;
};

FewShotExample make_example(const GridMap& map, Point start, Point goal,
                            std::vector<Point> waypoints, const ExampleMetrics& metrics);

struct ValidationThresholds {
    double length = 0.1;
    double time = 0.1;
    double memory = 0.1;
};

struct ValidationOutcome {
    bool passed = false;
    ExampleMetrics ratios;
};

// Pure threshold gate on precomputed ratios (all three must hold, inclusive).
bool gate_from_ratios(const ExampleMetrics& r, const ValidationThresholds& thr);

// Computes the three ratios from the two plans and applies the gate.
// Degenerate start==goal baselines (zero length) pass only when the guided
// plan also has zero length.
ValidationOutcome validate_example(const PlanResult& plan_llm, const PlanResult& plan_base,
                                   const ValidationThresholds& thr = {});

// Bounded FIFO store of validated examples. Mutations go through update();
// when a persist path is set, every change is written out (JSON lines,
// atomically via a temp file) before the in-memory state commits.
class FewShotRepo {
public:
    explicit FewShotRepo(std::size_t capacity = 10, ValidationThresholds thr = {})
        : capacity_(capacity), thresholds_(thr) {}

    static FewShotRepo load(const std::string& path, std::size_t capacity = 10,
                            ValidationThresholds thr = {});

    void set_persist_path(std::string path) { persist_path_ = std::move(path); }
    const std::string& persist_path() const { return persist_path_; }

    std::size_t capacity() const { return capacity_; }
    const ValidationThresholds& thresholds() const { return thresholds_; }
    const std::deque<FewShotExample>& examples() const { return examples_; }

    // Appends when passed (evicting the oldest at capacity); no-op when not.
    // Returns true iff the example was stored.
    bool update(const FewShotExample& ex, bool passed);

    void clear();

private:
    void persist(const std::deque<FewShotExample>& staged) const;

    std::size_t capacity_;
    ValidationThresholds thresholds_;
    std::deque<FewShotExample> examples_;
    std::string persist_path_;
};

struct TrainRecord {
    std::uint64_t map_seed = 0;
    int n = 0;
    bool llm_ok = false;
    bool passed = false;
    ExampleMetrics ratios;
};

struct TrainReport {
    std::vector<TrainRecord> records;
    int admitted = 0;
};

// One pass over the training maps: generate waypoints with the prompt built
// from the current repository, plan with them, plan the full-search baseline,
// validate, update. Per-map LLM failures are recorded and skipped.
TrainReport train(FewShotRepo& repo, std::span<const GridMap> maps, LlmClient& client,
                  const PlanOptions& opts = {});

}  // namespace gridplan

#endif
