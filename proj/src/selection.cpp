#include "gridplan/selection.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "gridplan/astar.hpp"
#include "gridplan/bench.hpp"
#include "gridplan/rng.hpp"

namespace gridplan {

std::string to_string(SelectionKind k) {
    switch (k) {
        case SelectionKind::start: return "start";
        case SelectionKind::goal: return "goal";
        case SelectionKind::uniform: return "uniform";
        case SelectionKind::random: return "random";
    }
    return "start";
}

SelectionKind selection_kind_from_string(const std::string& s) {
    if (s == "start") return SelectionKind::start;
    if (s == "goal") return SelectionKind::goal;
    if (s == "uniform") return SelectionKind::uniform;
    if (s == "random") return SelectionKind::random;
    throw std::invalid_argument("unknown selection policy: " + s);
}

std::vector<Point> strip_endpoints(const WaypointSet& ws, Point start, Point goal) {
    std::size_t lo = 0;
    std::size_t hi = ws.points.size();
    if (lo < hi && ws.points.front() == start) ++lo;
    if (lo < hi && ws.points.back() == goal) --hi;
    return {ws.points.begin() + static_cast<std::ptrdiff_t>(lo),
            ws.points.begin() + static_cast<std::ptrdiff_t>(hi)};
}

namespace {

// k indices nearest to ref by Euclidean distance, ties by index, returned
// sorted so the emitted points keep their original sequence order.
std::vector<std::size_t> nearest_indices(std::span<const Point> pts, const Point& ref,
                                         std::size_t k) {
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double da = euclid(pts[a], ref);
        const double db = euclid(pts[b], ref);
        if (da != db) return da < db;
        return a < b;
    });
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

std::vector<Point> select_waypoints(std::span<const Point> interior, Point start, Point goal,
                                    const SelectionPolicy& policy) {
    const std::size_t m = interior.size();
    if (m == 0) return {};
    const std::size_t k = static_cast<std::size_t>(std::clamp<int>(policy.k, 1, static_cast<int>(m)));

    std::vector<std::size_t> chosen;
    switch (policy.kind) {
        case SelectionKind::start:
            chosen = nearest_indices(interior, start, k);
            break;
        case SelectionKind::goal:
            chosen = nearest_indices(interior, goal, k);
            break;
        case SelectionKind::uniform: {
            if (k == 1) {
                chosen = {0};
            } else {
                for (std::size_t i = 0; i < k; ++i)
                    chosen.push_back(i * (m - 1) / (k - 1));
                chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
            }
            break;
        }
        case SelectionKind::random: {
            std::vector<std::size_t> pool(m);
            std::iota(pool.begin(), pool.end(), 0);
            std::mt19937_64 rng(mix64(policy.seed));
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j =
                    i + static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(m - i - 1)));
                std::swap(pool[i], pool[j]);
            }
            chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
            std::sort(chosen.begin(), chosen.end());
            break;
        }
    }

    std::vector<Point> out;
    out.reserve(chosen.size());
    for (std::size_t i : chosen) out.push_back(interior[i]);
    return out;
}

std::vector<Point> default_select(std::span<const Point> interior, Point start) {
    if (interior.size() <= 2) return {interior.begin(), interior.end()};
    return select_waypoints(interior, start, Point{}, {SelectionKind::start, 2, 0});
}

namespace {

struct RawCell {
    std::vector<double> times_s;
    std::vector<double> mems;
    std::vector<double> path_pcts;
};

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::string StudyTable::to_csv() const {
    std::ostringstream os;
    os << "policy,k,memory_score,time_score,path_length_pct\n";
    for (const StudyRow& r : rows) {
        os << to_string(r.kind) << "," << r.k << "," << r.memory_score << "," << r.time_score
           << "," << r.path_length_pct << "\n";
    }
    return os.str();
}

StudyTable run_selection_study(std::span<const GridMap> maps, LlmClient& client,
                               const StudyConfig& cfg) {
    // strategy index -> scale -> raw samples
    std::vector<std::pair<SelectionKind, int>> strategies;
    for (SelectionKind kind : cfg.kinds)
        for (int k : cfg.ks) strategies.emplace_back(kind, k);

    std::map<int, std::vector<RawCell>> by_scale;  // scale -> per-strategy cells
    FewShotRepo empty_repo;

    for (const GridMap& map : maps) {
        auto& cells = by_scale[map.n()];
        if (cells.empty()) cells.resize(strategies.size());
        const Point start = map.default_start();
        const Point goal = map.default_goal();
        const auto oracle = dijkstra_oracle(map, start, goal);
        if (!oracle) continue;  // unsolvable map contributes nothing

        for (int trial = 0; trial < cfg.trials; ++trial) {
            const std::uint64_t tv = mix64(cfg.seed, mix64(map.seed(), static_cast<std::uint64_t>(trial)));
            const PromptBundle bundle = render_prompt(empty_repo, map, start, goal);
            WaypointSet ws;
            try {
                ws = client.generate(bundle, map, start, goal, tv);
            } catch (const std::exception&) {
                continue;
            }
            const std::vector<Point> interior = strip_endpoints(ws, start, goal);

            for (std::size_t s = 0; s < strategies.size(); ++s) {
                SelectionPolicy policy{strategies[s].first, strategies[s].second, mix64(tv, s)};
                const std::vector<Point> sel = select_waypoints(interior, start, goal, policy);
                const PlanResult plan = plan_opt_astar(map, start, goal, sel, cfg.plan_opts);
                if (!plan.reached) continue;
                cells[s].times_s.push_back(static_cast<double>(plan.search_time_ns) / 1e9);
                cells[s].mems.push_back(static_cast<double>(plan.peak_memory_units));
                cells[s].path_pcts.push_back(path_length_percent(plan.length, *oracle));
            }
        }
    }

    StudyTable table;
    std::vector<std::vector<double>> time_scores(strategies.size());
    std::vector<std::vector<double>> mem_scores(strategies.size());
    std::vector<std::vector<double>> pct_all(strategies.size());

    for (const auto& [scale, cells] : by_scale) {
        std::vector<double> tmeans(strategies.size()), mmeans(strategies.size());
        for (std::size_t s = 0; s < strategies.size(); ++s) {
            tmeans[s] = mean_of(cells[s].times_s);
            mmeans[s] = mean_of(cells[s].mems);
            pct_all[s].insert(pct_all[s].end(), cells[s].path_pcts.begin(),
                              cells[s].path_pcts.end());
        }
        const auto [tmin, tmax] = std::minmax_element(tmeans.begin(), tmeans.end());
        const auto [mmin, mmax] = std::minmax_element(mmeans.begin(), mmeans.end());
        for (std::size_t s = 0; s < strategies.size(); ++s) {
            time_scores[s].push_back(normalize_score(tmeans[s], *tmin, *tmax));
            mem_scores[s].push_back(normalize_score(mmeans[s], *mmin, *mmax));
        }
    }

    for (std::size_t s = 0; s < strategies.size(); ++s) {
        StudyRow row;
        row.kind = strategies[s].first;
        row.k = strategies[s].second;
        row.time_score = time_scores[s].empty() ? 0.0 : final_scores(time_scores[s]);
        row.memory_score = mem_scores[s].empty() ? 0.0 : final_scores(mem_scores[s]);
        row.path_length_pct = mean_of(pct_all[s]);
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace gridplan
