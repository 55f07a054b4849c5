#include "gridplan/bench.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include "gridplan/astar.hpp"
#include "gridplan/memory_meter.hpp"
#include "gridplan/pipeline.hpp"
#include "gridplan/rng.hpp"

namespace gridplan {

double normalize_score(double x_current, double x_min, double x_max) {
    if (x_max < x_min) throw std::invalid_argument("normalize_score: x_max < x_min");
    if (x_max == x_min) return 1.0;
    if (x_current < x_min || x_current > x_max) {
        std::cerr << "normalize_score: value " << x_current << " outside [" << x_min << ", "
                  << x_max << "], clamping\n";
        x_current = std::clamp(x_current, x_min, x_max);
    }
    return (x_max - x_current) / (x_max - x_min);
}

double final_scores(std::span<const double> per_scale_scores) {
    if (per_scale_scores.empty()) throw std::invalid_argument("final_scores: empty input");
    return std::accumulate(per_scale_scores.begin(), per_scale_scores.end(), 0.0) /
           static_cast<double>(per_scale_scores.size());
}

double path_length_percent(double length, double oracle_length) {
    if (oracle_length <= 0.0)
        throw std::invalid_argument("path_length_percent: non-positive optimal length");
    if (length < oracle_length * (1.0 - 1e-9))
        throw std::logic_error("path_length_percent: path shorter than the optimum");
    return 100.0 * length / oracle_length;
}

double sample_std(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(n - 1));
}

std::string to_string(Method m) {
    switch (m) {
        case Method::baseline: return "baseline";
        case Method::opt: return "opt";
        case Method::llmastar: return "llmastar";
        case Method::illm: return "illm";
    }
    return "baseline";
}

Method method_from_string(const std::string& s) {
    if (s == "baseline") return Method::baseline;
    if (s == "opt") return Method::opt;
    if (s == "llmastar") return Method::llmastar;
    if (s == "illm") return Method::illm;
    throw std::invalid_argument("unknown method: " + s);
}

namespace {

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void run_cell(BenchCell& cell, const BenchConfig& cfg, LlmClient& client,
              const FewShotRepo& repo) {
    PlanOptions opts;
    opts.open_topk = cfg.open_topk;
    opts.timeout = std::chrono::nanoseconds(
        static_cast<std::int64_t>(cfg.timeout_s * 1e9));

    std::vector<double> times, mems, llms;
    cell.trials = cfg.trials;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t map_seed =
            mix64(cfg.eval_seed, mix64(static_cast<std::uint64_t>(cell.n),
                                       mix64(static_cast<std::uint64_t>(cell.scenario),
                                             static_cast<std::uint64_t>(trial))));
        const GridMap map = generate_map(cell.n, cell.scenario, map_seed);
        const Point start = map.default_start();
        const Point goal = map.default_goal();
        const auto oracle = dijkstra_oracle(map, start, goal);
        if (!oracle) {
            ++cell.failures;
            continue;
        }
        const std::uint64_t variation = mix64(cfg.llm_seed, map_seed);

        PlanResult plan;
        switch (cell.method) {
            case Method::baseline:
                plan = plan_baseline_astar(map, start, goal, {}, opts);
                break;
            case Method::opt:
                plan = plan_opt_astar(map, start, goal, {}, opts);
                break;
            case Method::llmastar:
                plan = plan_llm_astar(map, start, goal, client, opts, variation);
                break;
            case Method::illm:
                plan = plan_illm(map, start, goal, client, repo, opts, variation);
                break;
        }
        if (plan.timed_out) {
            ++cell.timeouts;
            continue;
        }
        if (!plan.reached) {
            ++cell.failures;
            continue;
        }
        ++cell.completed;
        cell.path_pct_samples.push_back(path_length_percent(plan.length, *oracle));
        times.push_back(static_cast<double>(plan.search_time_ns) / 1e9);
        mems.push_back(static_cast<double>(plan.peak_memory_units));
        llms.push_back(static_cast<double>(plan.llm_latency_ns) / 1e9);
    }
    cell.mean_path_pct = mean_of(cell.path_pct_samples);
    cell.std_path_pct = sample_std(cell.path_pct_samples);
    cell.mean_time_s = mean_of(times);
    cell.mean_mem_units = mean_of(mems);
    cell.mean_llm_s = mean_of(llms);
}

}  // namespace

BenchReport run_benchmark(const BenchConfig& cfg, LlmClient& client, const FewShotRepo* repo) {
    static const FewShotRepo empty_repo;
    const FewShotRepo& use_repo = repo != nullptr ? *repo : empty_repo;

    BenchReport report;
    report.config = cfg;
    for (Method m : cfg.methods)
        for (Scenario sc : cfg.scenarios)
            for (int n : cfg.sizes) {
                BenchCell cell;
                cell.method = m;
                cell.n = n;
                cell.scenario = sc;
                report.cells.push_back(cell);
            }

    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (BenchCell& cell : report.cells) run_cell(cell, cfg, client, use_repo);
        return report;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= report.cells.size()) return;
                run_cell(report.cells[i], cfg, client, use_repo);
            }
        });
    }
    for (std::thread& t : pool) t.join();
    return report;
}

namespace {

std::string fmt(double v, int prec) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << v;
    return os.str();
}

}  // namespace

std::string BenchReport::to_csv() const {
    std::ostringstream os;
    os << "method,scenario,n,trials,completed,timeouts,failures,"
          "mean_path_length_pct,std_path_length_pct,mean_peak_memory_units,"
          "mean_search_time_s,mean_llm_latency_s\n";
    for (const BenchCell& c : cells) {
        os << to_string(c.method) << "," << to_string(c.scenario) << "," << c.n << ","
           << c.trials << "," << c.completed << "," << c.timeouts << "," << c.failures << ",";
        if (c.timeouts > 0 || c.completed == 0) {
            os << "---,---,---,---,---\n";
            continue;
        }
        os << fmt(c.mean_path_pct, 4) << "," << fmt(c.std_path_pct, 4) << ","
           << fmt(c.mean_mem_units, 1) << "," << fmt(c.mean_time_s, 6) << ","
           << fmt(c.mean_llm_s, 6) << "\n";
    }
    return os.str();
}

std::string BenchReport::to_json() const {
    nlohmann::ordered_json j;
    j["config"] = {
        {"sizes", config.sizes},
        {"scenarios", [&] {
             std::vector<std::string> v;
             for (Scenario s : config.scenarios) v.push_back(to_string(s));
             return v;
         }()},
        {"methods", [&] {
             std::vector<std::string> v;
             for (Method m : config.methods) v.push_back(to_string(m));
             return v;
         }()},
        {"trials", config.trials},
        {"timeout_s", config.timeout_s},
        {"eval_seed", config.eval_seed},
        {"llm_seed", config.llm_seed},
        {"open_topk", config.open_topk},
    };
    j["memory_units"] = {
        {"baseline_open_entry_bytes", kBaselineOpenEntryBytes},
        {"baseline_closed_entry_bytes", kBaselineClosedEntryBytes},
        {"opt_open_entry_bytes", kOptOpenEntryBytes},
        {"opt_closed_entry_bytes", kOptClosedEntryBytes},
    };
    auto& rows = j["cells"] = nlohmann::ordered_json::array();
    for (const BenchCell& c : cells) {
        rows.push_back({{"method", to_string(c.method)},
                        {"scenario", to_string(c.scenario)},
                        {"n", c.n},
                        {"trials", c.trials},
                        {"completed", c.completed},
                        {"timeouts", c.timeouts},
                        {"failures", c.failures},
                        {"mean_path_length_pct", c.mean_path_pct},
                        {"std_path_length_pct", c.std_path_pct},
                        {"mean_peak_memory_units", c.mean_mem_units},
                        {"mean_search_time_s", c.mean_time_s},
                        {"mean_llm_latency_s", c.mean_llm_s},
                        {"path_length_pct_samples", c.path_pct_samples}});
    }
    return j.dump(2) + "\n";
}

std::string BenchReport::cdf_csv(Method m) const {
    std::vector<double> samples;
    for (const BenchCell& c : cells) {
        if (c.method != m || c.timeouts > 0) continue;
        samples.insert(samples.end(), c.path_pct_samples.begin(), c.path_pct_samples.end());
    }
    std::sort(samples.begin(), samples.end());
    std::ostringstream os;
    os << "path_length_pct\n";
    for (double s : samples) os << fmt(s, 6) << "\n";
    return os.str();
}

void write_report(const BenchReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream f(fs::path(out_dir) / name, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + name + " under " + out_dir);
        f << text;
    };
    put("report.csv", report.to_csv());
    put("report.json", report.to_json());
    for (Method m : report.config.methods) put("cdf_" + to_string(m) + ".csv", report.cdf_csv(m));
}

}  // namespace gridplan
