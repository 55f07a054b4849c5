#ifndef GRIDPLAN_BENCH_HPP
#define GRIDPLAN_BENCH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gridplan/fewshot_repo.hpp"
#include "gridplan/grid_map.hpp"
#include "gridplan/llm_client.hpp"

namespace gridplan {

// Cost-type normalization: 1 at the per-scale minimum, 0 at the maximum,
// 1 when all strategies tie. Out-of-range inputs clamp with a warning.
double normalize_score(double x_current, double x_min, double x_max);

// Arithmetic mean of the per-scale normalized scores.
double final_scores(std::span<const double> per_scale_scores);

// 100 * length / optimal. Lengths below the optimum indicate a planner bug
// and throw.
double path_length_percent(double length, double oracle_length);

// Two-pass sample standard deviation (n-1 denominator), 0 for n < 2.
double sample_std(std::span<const double> xs);

enum class Method { baseline, opt, llmastar, illm };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct BenchConfig {
    std::vector<int> sizes{50, 100, 150, 200, 250, 300, 350, 400, 450};
    std::vector<Scenario> scenarios{Scenario::random};
    std::vector<Method> methods{Method::baseline, Method::opt, Method::llmastar, Method::illm};
    int trials = 30;
    double timeout_s = 600.0;        // per-trial search budget
    std::uint64_t eval_seed = 20250801;  // evaluation block; keep disjoint from training seeds
    std::uint64_t llm_seed = 1;
    int open_topk = 100;
    int jobs = 1;  // worker pool width; >1 perturbs wall-clock readings
};

struct BenchCell {
    Method method{};
    int n = 0;
    Scenario scenario{};
    int trials = 0;
    int completed = 0;
    int timeouts = 0;
    int failures = 0;
    double mean_path_pct = 0.0;
    double std_path_pct = 0.0;
    double mean_mem_units = 0.0;
    double mean_time_s = 0.0;
    double mean_llm_s = 0.0;
    std::vector<double> path_pct_samples;
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchCell> cells;

    // Timed-out cells render as "---". Timing columns come last so the
    // deterministic prefix can be compared across runs.
    std::string to_csv() const;
    std::string to_json() const;
    std::string cdf_csv(Method m) const;
};

// Runs trials with disjoint per-trial seeds for every (method, size,
// scenario) cell. Unsolvable instances count as failures; trials that
// exhaust the budget mark the whole cell timed out.
BenchReport run_benchmark(const BenchConfig& cfg, LlmClient& client,
                          const FewShotRepo* repo = nullptr);

// report.csv, report.json, cdf_<method>.csv under out_dir (created if absent).
void write_report(const BenchReport& report, const std::string& out_dir);

}  // namespace gridplan

#endif
