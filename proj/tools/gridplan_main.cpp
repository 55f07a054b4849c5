#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gridplan/astar.hpp"
#include "gridplan/bench.hpp"
#include "gridplan/errors.hpp"
#include "gridplan/pipeline.hpp"
#include "gridplan/rng.hpp"
#include "gridplan/selection.hpp"

namespace {

using namespace gridplan;
using nlohmann::json;

Point parse_point(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("expected x,y but got '" + s + "'");
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

std::unique_ptr<LlmClient> make_client(const std::string& mode, std::uint64_t seed,
                                       int perturb, const std::string& log_path) {
    if (mode == "stub") return std::make_unique<StubClient>(seed, perturb);
    if (mode == "live") {
        HttpClientConfig cfg = http_config_from_env();
        cfg.log_path = log_path;
        return std::make_unique<HttpLlmClient>(std::move(cfg));
    }
    throw CLI::ValidationError("--llm must be live or stub");
}

json plan_to_json(const PlanResult& r) {
    json path = json::array();
    for (const Point& p : r.path) path.push_back({p.x, p.y});
    return json{{"path", std::move(path)},
                {"length", r.length},
                {"reached", r.reached},
                {"timed_out", r.timed_out},
                {"search_time_ns", r.search_time_ns},
                {"llm_latency_ns", r.llm_latency_ns},
                {"peak_memory_units", r.peak_memory_units},
                {"nodes_expanded", r.nodes_expanded},
                {"broad_rejects", r.broad_rejects},
                {"precise_tests", r.precise_tests}};
}

std::vector<GridMap> load_or_generate_maps(const std::string& maps_dir,
                                           const std::vector<int>& sizes, int per_size,
                                           std::uint64_t seed, Scenario scenario) {
    std::vector<GridMap> maps;
    if (!maps_dir.empty()) {
        namespace fs = std::filesystem;
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(maps_dir))
            if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) maps.push_back(parse_map(read_file(f.string())));
        return maps;
    }
    for (int n : sizes)
        for (int i = 0; i < per_size; ++i)
            maps.push_back(generate_map(
                n, scenario, mix64(seed, mix64(static_cast<std::uint64_t>(n),
                                               static_cast<std::uint64_t>(i)))));
    return maps;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid-map path planning engine and benchmark harness"};
    app.require_subcommand(1);

    // --- gen-map ------------------------------------------------------------
    auto* gen = app.add_subcommand("gen-map", "Generate a map and write it as JSON");
    int gen_n = 100;
    std::string gen_scenario = "random";
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--n", gen_n, "Edge length (multiple of 50)")->required();
    gen->add_option("--scenario", gen_scenario, "random|cross|bars");
    gen->add_option("--seed", gen_seed, "Generator seed")->required();
    gen->add_option("--out", gen_out, "Output path (default: stdout)");

    // --- plan ---------------------------------------------------------------
    auto* plan = app.add_subcommand("plan", "Plan a path on a map");
    std::string plan_map, plan_start = "", plan_goal = "", plan_engine = "opt";
    std::string plan_waypoints = "none", plan_llm = "stub", plan_json_out, plan_repo;
    std::string plan_llm_log;
    std::uint64_t plan_llm_seed = 0;
    int plan_topk = 100, plan_perturb = -1;
    double plan_timeout = 0.0;
    plan->add_option("--map", plan_map, "Map JSON path")->required();
    plan->add_option("--start", plan_start, "Start as x,y (default: map default)");
    plan->add_option("--goal", plan_goal, "Goal as x,y (default: map default)");
    plan->add_option("--engine", plan_engine, "baseline|opt|illm|llmastar");
    plan->add_option("--waypoints", plan_waypoints,
                     "JSON file with [[x,y],...] or 'none' (baseline/opt engines)");
    plan->add_option("--llm", plan_llm, "live|stub (illm/llmastar engines)");
    plan->add_option("--llm-seed", plan_llm_seed, "Stub seed");
    plan->add_option("--llm-perturb", plan_perturb, "Stub perturbation radius (-1 = n/20)");
    plan->add_option("--llm-log", plan_llm_log, "JSON-lines transcript for live requests");
    plan->add_option("--repo", plan_repo, "Few-shot repository file (illm engine)");
    plan->add_option("--open-topk", plan_topk, "OPEN entries refreshed per waypoint switch");
    plan->add_option("--timeout-s", plan_timeout, "Search budget in seconds (0 = none)");
    plan->add_option("--json-out", plan_json_out, "Write the plan result JSON here");

    // --- repo ---------------------------------------------------------------
    auto* repo_cmd = app.add_subcommand("repo", "Manage the few-shot repository");
    repo_cmd->require_subcommand(1);
    std::string repo_path = "fewshot_repo.jsonl";
    repo_cmd->add_option("--repo", repo_path, "Repository file (JSON lines)");

    auto* repo_train = repo_cmd->add_subcommand("train", "Run the incremental training loop");
    std::string rt_llm = "stub", rt_maps_dir;
    std::vector<int> rt_sizes{100, 200};
    int rt_count = 5, rt_perturb = -1;
    std::uint64_t rt_seed = 9000, rt_llm_seed = 0;
    double rt_theta_len = 0.1, rt_theta_time = 0.1, rt_theta_mem = 0.1;
    std::string rt_llm_log;
    repo_train->add_option("--llm", rt_llm, "live|stub");
    repo_train->add_option("--llm-seed", rt_llm_seed, "Stub seed");
    repo_train->add_option("--llm-perturb", rt_perturb, "Stub perturbation radius (-1 = n/20)");
    repo_train->add_option("--llm-log", rt_llm_log, "JSON-lines transcript for live requests");
    repo_train->add_option("--maps", rt_maps_dir, "Directory of map JSON files");
    repo_train->add_option("--train-sizes", rt_sizes, "Sizes for generated training maps");
    repo_train->add_option("--train-count", rt_count, "Maps per size when generating");
    repo_train->add_option("--train-seed", rt_seed, "Training map seed block");
    repo_train->add_option("--theta-length", rt_theta_len, "Length gate threshold");
    repo_train->add_option("--theta-time", rt_theta_time, "Time gate threshold");
    repo_train->add_option("--theta-memory", rt_theta_mem, "Memory gate threshold");

    auto* repo_show = repo_cmd->add_subcommand("show", "Print the stored examples");
    auto* repo_clear = repo_cmd->add_subcommand("clear", "Remove every stored example");

    // --- study --------------------------------------------------------------
    auto* study = app.add_subcommand("study", "Waypoint selection policy study");
    std::vector<int> st_sizes{100, 200};
    std::vector<std::string> st_policies{"start", "goal", "uniform", "random"};
    std::vector<int> st_ks{1, 2, 3, 4};
    int st_trials = 30, st_maps_per_size = 1, st_perturb = -1;
    std::uint64_t st_seed = 1;
    std::string st_llm = "stub", st_out, st_scenario = "random", st_llm_log;
    study->add_option("--sizes", st_sizes, "Map sizes");
    study->add_option("--maps-per-size", st_maps_per_size, "Maps per size");
    study->add_option("--scenario", st_scenario, "random|cross|bars");
    study->add_option("--policies", st_policies, "start goal uniform random");
    study->add_option("--k", st_ks, "Waypoint counts to test");
    study->add_option("--trials", st_trials, "Trials per combination");
    study->add_option("--seed", st_seed, "Study seed");
    study->add_option("--llm", st_llm, "live|stub");
    study->add_option("--llm-perturb", st_perturb, "Stub perturbation radius (-1 = n/20)");
    study->add_option("--llm-log", st_llm_log, "JSON-lines transcript for live requests");
    study->add_option("--out", st_out, "CSV output path (default: stdout)");

    // --- bench --------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Benchmark methods across map sizes");
    BenchConfig bcfg;
    std::vector<std::string> b_scenarios{"random"};
    std::vector<std::string> b_methods{"baseline", "opt", "llmastar", "illm"};
    std::string b_out = "report", b_llm = "stub", b_repo, b_llm_log;
    int b_perturb = -1;
    bench->add_option("--sizes", bcfg.sizes, "Map sizes");
    bench->add_option("--scenarios", b_scenarios, "random cross bars");
    bench->add_option("--methods", b_methods, "baseline opt llmastar illm");
    bench->add_option("--trials", bcfg.trials, "Trials per cell");
    bench->add_option("--timeout-s", bcfg.timeout_s, "Per-trial search budget");
    bench->add_option("--eval-seed", bcfg.eval_seed, "Evaluation seed block");
    bench->add_option("--llm", b_llm, "live|stub");
    bench->add_option("--llm-seed", bcfg.llm_seed, "Stub seed block");
    bench->add_option("--llm-perturb", b_perturb, "Stub perturbation radius (-1 = n/20)");
    bench->add_option("--llm-log", b_llm_log, "JSON-lines transcript for live requests");
    bench->add_option("--open-topk", bcfg.open_topk, "OPEN entries refreshed per switch");
    bench->add_option("--jobs", bcfg.jobs, "Worker pool width");
    bench->add_option("--repo", b_repo, "Few-shot repository for the illm method");
    bench->add_option("--out", b_out, "Report directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const GridMap map = generate_map(gen_n, scenario_from_string(gen_scenario), gen_seed);
            const std::string text = serialize_map(map);
            if (gen_out.empty()) std::cout << text;
            else write_file(gen_out, text);
            return 0;
        }

        if (*plan) {
            const GridMap map = parse_map(read_file(plan_map));
            const Point start = plan_start.empty() ? map.default_start() : parse_point(plan_start);
            const Point goal = plan_goal.empty() ? map.default_goal() : parse_point(plan_goal);
            PlanOptions opts;
            opts.open_topk = plan_topk;
            opts.timeout = std::chrono::nanoseconds(static_cast<std::int64_t>(plan_timeout * 1e9));

            PlanResult result;
            if (plan_engine == "baseline" || plan_engine == "opt") {
                std::vector<Point> wps;
                if (plan_waypoints != "none") {
                    const json arr = json::parse(read_file(plan_waypoints));
                    for (const auto& p : arr) wps.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
                }
                result = plan_engine == "baseline"
                             ? plan_baseline_astar(map, start, goal, wps, opts)
                             : plan_opt_astar(map, start, goal, wps, opts);
            } else if (plan_engine == "illm" || plan_engine == "llmastar") {
                auto client = make_client(plan_llm, plan_llm_seed, plan_perturb, plan_llm_log);
                if (plan_engine == "illm") {
                    FewShotRepo repo = plan_repo.empty() ? FewShotRepo{} : FewShotRepo::load(plan_repo);
                    result = plan_illm(map, start, goal, *client, repo, opts);
                } else {
                    result = plan_llm_astar(map, start, goal, *client, opts);
                }
            } else {
                throw CLI::ValidationError("--engine must be baseline|opt|illm|llmastar");
            }

            const std::string text = plan_to_json(result).dump(2) + "\n";
            if (plan_json_out.empty()) std::cout << text;
            else write_file(plan_json_out, text);
            return result.reached ? 0 : 2;
        }

        if (*repo_cmd) {
            if (*repo_train) {
                ValidationThresholds thr{rt_theta_len, rt_theta_time, rt_theta_mem};
                FewShotRepo repo = FewShotRepo::load(repo_path, 10, thr);
                repo.set_persist_path(repo_path);
                auto client = make_client(rt_llm, rt_llm_seed, rt_perturb, rt_llm_log);
                const std::vector<GridMap> maps = load_or_generate_maps(
                    rt_maps_dir, rt_sizes, rt_count, rt_seed, Scenario::random);
                const TrainReport rep = train(repo, maps, *client);
                std::cout << "maps: " << rep.records.size() << ", admitted: " << rep.admitted
                          << ", repo size: " << repo.examples().size() << "\n";
                for (const TrainRecord& r : rep.records) {
                    std::cout << "  n=" << r.n << " seed=" << r.map_seed
                              << (r.llm_ok ? "" : " [llm failed]")
                              << " pass=" << (r.passed ? "yes" : "no")
                              << " ratios=" << r.ratios.length_ratio << "/" << r.ratios.time_ratio
                              << "/" << r.ratios.memory_ratio << "\n";
                }
                return 0;
            }
            if (*repo_show) {
                const FewShotRepo repo = FewShotRepo::load(repo_path);
                std::cout << "examples: " << repo.examples().size() << "\n";
                for (const FewShotExample& ex : repo.examples()) {
                    std::cout << "  start=" << to_string(ex.start) << " goal=" << to_string(ex.goal)
                              << " waypoints=" << ex.waypoints.size()
                              << " ratios=" << ex.metrics.length_ratio << "/"
                              << ex.metrics.time_ratio << "/" << ex.metrics.memory_ratio << "\n";
                }
                return 0;
            }
            if (*repo_clear) {
                FewShotRepo repo = FewShotRepo::load(repo_path);
                repo.set_persist_path(repo_path);
                repo.clear();
                std::cout << "repository cleared\n";
                return 0;
            }
        }

        if (*study) {
            StudyConfig cfg;
            cfg.kinds.clear();
            for (const std::string& p : st_policies) cfg.kinds.push_back(selection_kind_from_string(p));
            cfg.ks = st_ks;
            cfg.trials = st_trials;
            cfg.seed = st_seed;
            auto client = make_client(st_llm, st_seed, st_perturb, st_llm_log);
            const std::vector<GridMap> maps = load_or_generate_maps(
                "", st_sizes, st_maps_per_size, mix64(st_seed, 0x57ddu),
                scenario_from_string(st_scenario));
            const StudyTable table = run_selection_study(maps, *client, cfg);
            if (st_out.empty()) std::cout << table.to_csv();
            else write_file(st_out, table.to_csv());
            return 0;
        }

        if (*bench) {
            bcfg.scenarios.clear();
            for (const std::string& s : b_scenarios) bcfg.scenarios.push_back(scenario_from_string(s));
            bcfg.methods.clear();
            for (const std::string& m : b_methods) bcfg.methods.push_back(method_from_string(m));
            auto client = make_client(b_llm, bcfg.llm_seed, b_perturb, b_llm_log);
            std::optional<FewShotRepo> repo;
            if (!b_repo.empty()) repo = FewShotRepo::load(b_repo);
            const BenchReport report =
                run_benchmark(bcfg, *client, repo ? &*repo : nullptr);
            write_report(report, b_out);
            std::cout << report.to_csv();
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
