#include "gridplan/astar.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "gridplan/collision.hpp"
#include "gridplan/memory_meter.hpp"

namespace gridplan {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct Step {
    int dx;
    int dy;
    double cost;
};

// Fixed relaxation order; it feeds the seq tie-breaker, so it must be
// identical in both engines and in the oracle.
constexpr std::array<Step, 8> kSteps{{{1, 0, 1.0},
                                      {-1, 0, 1.0},
                                      {0, 1, 1.0},
                                      {0, -1, 1.0},
                                      {1, 1, kSqrt2},
                                      {1, -1, kSqrt2},
                                      {-1, 1, kSqrt2},
                                      {-1, -1, kSqrt2}}};

// One OPEN record. key caches (g + h + waypoint term) minus the cumulative
// epoch slack at the entry's stamp. The slack subtraction makes every stale
// key a lower bound of its re-computed value, so a heap that re-keys lazily
// on pop extracts the same minimum the eagerly refreshed list would.
struct OpenEntry {
    double key = 0.0;
    double h = 0.0;
    std::int64_t seq = 0;
    double g = 0.0;
    Point pos;
    std::int32_t stamp = 0;
    Point parent;
};

bool entry_less(const OpenEntry& a, const OpenEntry& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.h != b.h) return a.h < b.h;
    return a.seq < b.seq;
}

struct EntryGreater {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const { return entry_less(b, a); }
};

// Shared search parameters: the pursuit chain (waypoints, then the goal
// itself when any waypoints exist) and the per-epoch key offset. Stored keys
// subtract the cumulative inter-target slack at their stamp, which makes
// every stale key a lower bound of its re-computed value: a lazily re-keyed
// heap then extracts the same minimum an eagerly refreshed list would.
class KeySchedule {
public:
    KeySchedule(Point goal, std::vector<Point> targets) : goal_(goal), targets_(std::move(targets)) {
        slack_.resize(targets_.size() + 1, 0.0);
        for (std::size_t t = 1; t < targets_.size(); ++t)
            slack_[t] = slack_[t - 1] + euclid(targets_[t - 1], targets_[t]);
        if (!targets_.empty()) slack_[targets_.size()] = slack_[targets_.size() - 1];
    }

    int final_epoch() const { return static_cast<int>(targets_.size()); }
    const Point& target(int epoch) const { return targets_[static_cast<std::size_t>(epoch)]; }

    double wp_term(const Point& pos, int epoch) const {
        return epoch < final_epoch() ? euclid(pos, target(epoch)) : 0.0;
    }
    double h_goal(const Point& pos) const { return euclid(pos, goal_); }
    double key(const Point& pos, double g, int epoch) const {
        return g + h_goal(pos) + wp_term(pos, epoch) - slack_[static_cast<std::size_t>(epoch)];
    }

private:
    Point goal_;
    std::vector<Point> targets_;
    std::vector<double> slack_;
};

// --- baseline structures: plain vectors, scanned and re-sorted -------------

struct BaselineClosedRec {
    Point pos;
    double g;
    Point parent;
    std::int32_t epoch;
};

class BaselineStructures {
public:
    explicit BaselineStructures(const GridMap&)
        : meter_(kBaselineOpenEntryBytes, kBaselineClosedEntryBytes) {}

    // Relaxation handles closure itself. The waypoint term makes the
    // estimate inconsistent, so closures may be improved after the fact:
    // a strictly better g reopens a node closed in the current or the
    // previous epoch. Older closures are final, which keeps the detour a
    // pursued waypoint imposed in the committed cost field.
    void relax(const Point& pos, double g, const Point& parent, int epoch, const KeySchedule& ks,
               std::int64_t& seq) {
        for (std::size_t i = 0; i < closed_.size(); ++i) {
            if (closed_[i].pos == pos) {
                if (g >= closed_[i].g) return;  // EXPERIMENT-FULL
                closed_[i] = closed_.back();
                closed_.pop_back();
                meter_.add_closed(-1);
                push_entry(pos, g, parent, epoch, ks, seq);
                return;
            }
        }
        for (OpenEntry& e : open_) {
            if (e.pos == pos) {
                if (g < e.g) {
                    e.g = g;
                    e.parent = parent;
                    e.stamp = epoch;
                    e.key = ks.key(pos, g, epoch);
                    e.seq = ++seq;
                }
                return;
            }
        }
        push_entry(pos, g, parent, epoch, ks, seq);
    }

    bool pop_live(int epoch, const KeySchedule&, OpenEntry& out, SearchDebug* dbg) {
        if (open_.empty()) return false;
        // One full sort per expansion, min at the back.
        std::sort(open_.begin(), open_.end(),
                  [](const OpenEntry& a, const OpenEntry& b) { return entry_less(b, a); });
        out = open_.back();
        open_.pop_back();
        meter_.add_open(-1);
        if (dbg && out.stamp != epoch) ++dbg->stale_expansions;
        return true;
    }

    void close(const OpenEntry& e, int epoch) {
        closed_.push_back({e.pos, e.g, e.parent, epoch});
        meter_.add_closed(1);
    }

    void on_switch(int epoch, const KeySchedule& ks, int topk, bool final_epoch) {
        // Eager variant: every pending estimate is recomputed on the spot.
        for (OpenEntry& e : open_) {
            e.key = ks.key(e.pos, e.g, epoch);
            e.stamp = epoch;
        }
        if (final_epoch && static_cast<int>(open_.size()) > topk) {
            // Entering the last leg the frontier narrows to the best topk
            // entries; stale stragglers far behind the pursuit are dropped.
            std::sort(open_.begin(), open_.end(),
                      [](const OpenEntry& a, const OpenEntry& b) { return entry_less(a, b); });
            meter_.add_open(-(static_cast<std::int64_t>(open_.size()) - topk));
            open_.resize(static_cast<std::size_t>(topk));
        }
    }

    bool collide(const Segment& s, std::span<const Barrier> barriers, CollisionStats* st) const {
        return detect_collision_precise(s, barriers, st);
    }

    std::vector<Point> reconstruct(const Point& start, const OpenEntry& goal_entry) const {
        std::vector<Point> rev{goal_entry.pos};
        Point cur = goal_entry.parent;
        while (!(rev.back() == start)) {
            rev.push_back(cur);
            bool found = false;
            for (const auto& rec : closed_) {
                if (rec.pos == cur) {
                    cur = rec.parent;
                    found = true;
                    break;
                }
            }
            // a reopened ancestor may sit in OPEN with its newest parent
            if (!found) {
                for (const auto& e : open_) {
                    if (e.pos == cur) {
                        cur = e.parent;
                        found = true;
                        break;
                    }
                }
            }
            assert(found);
            if (!found) break;
        }
        return {rev.rbegin(), rev.rend()};
    }

    MemoryMeter& meter() { return meter_; }

private:
    void push_entry(const Point& pos, double g, const Point& parent, int epoch,
                    const KeySchedule& ks, std::int64_t& seq) {
        OpenEntry e;
        e.pos = pos;
        e.g = g;
        e.parent = parent;
        e.h = ks.h_goal(pos);
        e.stamp = epoch;
        e.key = ks.key(pos, g, epoch);
        e.seq = ++seq;
        open_.push_back(e);
        meter_.add_open(1);
    }

    std::vector<OpenEntry> open_;
    std::vector<BaselineClosedRec> closed_;
    MemoryMeter meter_;
};

// --- optimized structures: hash CLOSED, lazy binary-heap OPEN --------------

class OptStructures {
public:
    explicit OptStructures(const GridMap&)
        : meter_(kOptOpenEntryBytes, kOptClosedEntryBytes) {}

    // Same reopening contract as the baseline: a strictly better cost
    // reopens closures from the current or previous epoch only.
    void relax(const Point& pos, double g, const Point& parent, int epoch, const KeySchedule& ks,
               std::int64_t& seq) {
        auto it = best_g_.find(pos);
        if (it != best_g_.end() && g >= it->second) return;
        const auto cit = closed_.find(pos);
        if (cit != closed_.end()) {
            closed_.erase(cit);
            meter_.add_closed(-1);
        }  // EXPERIMENT-FULL
        best_g_[pos] = g;
        came_from_[pos] = parent;
        OpenEntry e;
        e.pos = pos;
        e.g = g;
        e.parent = parent;
        e.h = ks.h_goal(pos);
        e.stamp = epoch;
        e.key = ks.key(pos, g, epoch);
        e.seq = ++seq;
        heap_.push(e);
        meter_.add_open(1);
    }

    bool pop_live(int epoch, const KeySchedule& ks, OpenEntry& out, SearchDebug* dbg) {
        while (!heap_.empty()) {
            OpenEntry e = heap_.top();
            heap_.pop();
            meter_.add_open(-1);
            if (closed_.count(e.pos) != 0) continue;  // duplicate of an expanded node
            auto it = best_g_.find(e.pos);
            if (it == best_g_.end() || e.g != it->second) continue;  // superseded duplicate
            if (e.stamp != epoch) {
                // Case 2: outdated estimate; recompute with the current value
                // and reinsert instead of expanding.
                e.key = ks.key(e.pos, e.g, epoch);
                e.stamp = epoch;
                heap_.push(e);
                meter_.add_open(1);
                if (dbg) ++dbg->stale_pop_refreshes;
                continue;
            }
            out = e;
            return true;
        }
        return false;
    }

    void close(const OpenEntry& e, int epoch) {
        closed_.emplace(e.pos, epoch);
        meter_.add_closed(1);
    }

    void on_switch(int epoch, const KeySchedule& ks, int topk, bool final_epoch) {
        // Case 1: refresh only the top-k entries with the lowest estimates.
        std::vector<OpenEntry> taken;
        taken.reserve(static_cast<std::size_t>(topk));
        while (static_cast<int>(taken.size()) < topk && !heap_.empty()) {
            OpenEntry e = heap_.top();
            heap_.pop();
            meter_.add_open(-1);
            if (closed_.count(e.pos) != 0) continue;
            auto it = best_g_.find(e.pos);
            if (it == best_g_.end() || e.g != it->second) continue;
            e.key = ks.key(e.pos, e.g, epoch);
            e.stamp = epoch;
            taken.push_back(e);
        }
        if (final_epoch) {
            // The frontier narrows to the refreshed top entries on the last
            // leg. Dropped live nodes lose their g record so later waves can
            // rediscover them from scratch, exactly as the list variant does.
            while (!heap_.empty()) {
                const OpenEntry e = heap_.top();
                heap_.pop();
                meter_.add_open(-1);
                if (closed_.count(e.pos) != 0) continue;
                auto it = best_g_.find(e.pos);
                if (it != best_g_.end() && it->second == e.g) best_g_.erase(it);
            }
        }
        for (const OpenEntry& e : taken) {
            heap_.push(e);
            meter_.add_open(1);
        }
    }

    bool collide(const Segment& s, std::span<const Barrier> barriers, CollisionStats* st) const {
        return detect_collision_two_stage(s, barriers, st);
    }

    std::vector<Point> reconstruct(const Point& start, const OpenEntry& goal_entry) const {
        std::vector<Point> rev{goal_entry.pos};
        Point cur = goal_entry.parent;
        while (!(rev.back() == start)) {
            rev.push_back(cur);
            auto it = came_from_.find(cur);
            assert(it != came_from_.end());
            if (it == came_from_.end()) break;
            cur = it->second;
        }
        return {rev.rbegin(), rev.rend()};
    }

    MemoryMeter& meter() { return meter_; }

private:
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, EntryGreater> heap_;
    std::unordered_map<Point, std::int32_t, PointHash> closed_;
    std::unordered_map<Point, double, PointHash> best_g_;
    std::unordered_map<Point, Point, PointHash> came_from_;
    MemoryMeter meter_;
};

double path_length(const std::vector<Point>& path) {
    double len = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) len += euclid(path[i - 1], path[i]);
    return len;
}

void validate_endpoints(const GridMap& map, const Point& start, const Point& goal) {
    if (!map.in_bounds(start) || !map.in_bounds(goal))
        throw std::invalid_argument("start/goal outside map bounds");
    if (map.blocked_unchecked(start)) throw std::invalid_argument("start cell is blocked");
    if (map.blocked_unchecked(goal)) throw std::invalid_argument("goal cell is blocked");
}

std::vector<Point> prepare_targets(const GridMap& map, std::span<const Point> waypoints) {
    std::vector<Point> targets;
    targets.reserve(waypoints.size());
    for (const Point& w : waypoints) {
        if (auto snapped = snap_waypoint(map, w)) targets.push_back(*snapped);
    }
    return targets;
}

template <class Structures>
PlanResult run_search(const GridMap& map, Point start, Point goal,
                      std::span<const Point> waypoints, const PlanOptions& opts,
                      SearchDebug* dbg) {
    validate_endpoints(map, start, goal);
    const auto t0 = std::chrono::steady_clock::now();
    PlanResult res;

    if (start == goal) {
        res.path = {start};
        res.length = 0.0;
        res.reached = true;
        res.search_time_ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
                .count();
        return res;
    }

    const KeySchedule ks(goal, prepare_targets(map, waypoints));
    Structures ds(map);
    CollisionStats cstats;
    int epoch = 0;
    std::int64_t seq = 0;

    ds.relax(start, 0.0, start, epoch, ks, seq);

    OpenEntry e;
    while (ds.pop_live(epoch, ks, e, dbg)) {
        ds.close(e, epoch);
        ++res.nodes_expanded;

        if (e.pos == goal) {
            res.path = ds.reconstruct(start, e);
            res.length = path_length(res.path);
            res.reached = true;
            break;
        }

        if (opts.timeout.count() > 0 && (res.nodes_expanded & 0xFF) == 0) {
            if (std::chrono::steady_clock::now() - t0 > opts.timeout) {
                res.timed_out = true;
                break;
            }
        }

        // Advance the active waypoint when the expanded node reaches it, or
        // sees it from within distance 2, or sees it having already crossed
        // the waypoint's goal-distance shell (the frontier slides along the
        // waypoint-goal chord and can pass the waypoint without entering a
        // fixed ball). A node clearly past the shell with no line of sight
        // means the waypoint sits in an occluded pocket and is skipped. The
        // collision query runs on every expansion that still targets a
        // waypoint.
        while (epoch < ks.final_epoch()) {
            const Point& w = ks.target(epoch);
            bool advance = e.pos == w;
            if (!advance) {
                const bool passed_shell = ks.h_goal(e.pos) <= ks.h_goal(w);
                const bool clear = !ds.collide(Segment{e.pos, w}, map.barriers(), &cstats);
                advance = (clear && (euclid(e.pos, w) <= 2.0 || passed_shell)) ||
                          ks.h_goal(e.pos) <= ks.h_goal(w) - 5.0;
            }
            if (!advance) break;
            ++epoch;
            if (dbg) ++dbg->epoch_switches;
            ds.on_switch(epoch, ks, opts.open_topk, epoch == ks.final_epoch());
        }

        for (const Step& st : kSteps) {
            const Point nb{e.pos.x + st.dx, e.pos.y + st.dy};
            if (!map.in_bounds(nb) || map.blocked_unchecked(nb)) continue;
            ds.relax(nb, e.g + st.cost, e.pos, epoch, ks, seq);
        }
    }

    res.broad_rejects = cstats.broad_rejects;
    res.precise_tests = cstats.precise_tests;
    res.peak_memory_units = ds.meter().peak_units();
    res.search_time_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
            .count();

    if (!res.reached && !res.timed_out && !waypoints.empty()) {
        // The narrowed frontier can strand the search when every route runs
        // through a dropped region; an unguided pass still has to answer.
        PlanResult retry = run_search<Structures>(map, start, goal, {}, opts, dbg);
        retry.search_time_ns += res.search_time_ns;
        retry.nodes_expanded += res.nodes_expanded;
        retry.broad_rejects += res.broad_rejects;
        retry.precise_tests += res.precise_tests;
        retry.peak_memory_units = std::max(retry.peak_memory_units, res.peak_memory_units);
        return retry;
    }
    return res;
}

}  // namespace

double heuristic_f(double g, const Point& pos, const Point& goal, const Point* wp) {
    return g + euclid(pos, goal) + (wp != nullptr ? euclid(pos, *wp) : 0.0);
}

std::optional<Point> snap_waypoint(const GridMap& map, Point p) {
    const Point anchor{std::clamp(p.x, 0, map.n() - 1), std::clamp(p.y, 0, map.n() - 1)};
    if (!map.blocked_unchecked(anchor)) return anchor;
    for (int r = 1; r <= 3; ++r) {
        std::optional<Point> best;
        double best_d = std::numeric_limits<double>::infinity();
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
                const Point c{anchor.x + dx, anchor.y + dy};
                if (!map.in_bounds(c) || map.blocked_unchecked(c)) continue;
                const double d = euclid(anchor, c);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
        }
        if (best) return best;
    }
    return std::nullopt;
}

PlanResult plan_baseline_astar(const GridMap& map, Point start, Point goal,
                               std::span<const Point> waypoints, const PlanOptions& opts,
                               SearchDebug* dbg) {
    return run_search<BaselineStructures>(map, start, goal, waypoints, opts, dbg);
}

PlanResult plan_opt_astar(const GridMap& map, Point start, Point goal,
                          std::span<const Point> waypoints, const PlanOptions& opts,
                          SearchDebug* dbg) {
    return run_search<OptStructures>(map, start, goal, waypoints, opts, dbg);
}

OraclePath dijkstra_oracle_path(const GridMap& map, Point start, Point goal) {
    validate_endpoints(map, start, goal);
    OraclePath out;
    const int n = map.n();
    const auto idx = [n](const Point& p) { return static_cast<std::size_t>(p.y) * n + p.x; };

    if (start == goal) {
        out.reachable = true;
        out.length = 0.0;
        out.path = {start};
        return out;
    }

    const std::size_t cells = static_cast<std::size_t>(n) * n;
    std::vector<double> dist(cells, std::numeric_limits<double>::infinity());
    std::vector<std::uint32_t> parent(cells, 0);
    std::vector<std::uint8_t> done(cells, 0);

    using QItem = std::pair<double, std::uint32_t>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    dist[idx(start)] = 0.0;
    parent[idx(start)] = static_cast<std::uint32_t>(idx(start));
    pq.emplace(0.0, static_cast<std::uint32_t>(idx(start)));

    while (!pq.empty()) {
        const auto [d, ui] = pq.top();
        pq.pop();
        if (done[ui]) continue;
        done[ui] = 1;
        const Point u{static_cast<int>(ui % n), static_cast<int>(ui / n)};
        if (u == goal) break;
        for (const Step& st : kSteps) {
            const Point v{u.x + st.dx, u.y + st.dy};
            if (!map.in_bounds(v) || map.blocked_unchecked(v)) continue;
            const std::size_t vi = idx(v);
            if (done[vi]) continue;
            const double nd = d + st.cost;
            if (nd < dist[vi]) {
                dist[vi] = nd;
                parent[vi] = ui;
                pq.emplace(nd, static_cast<std::uint32_t>(vi));
            }
        }
    }

    const std::size_t gi = idx(goal);
    if (!done[gi]) return out;  // unreachable is a value, not an error
    out.reachable = true;
    out.length = dist[gi];
    std::vector<Point> rev;
    std::uint32_t cur = static_cast<std::uint32_t>(gi);
    const std::uint32_t si = static_cast<std::uint32_t>(idx(start));
    while (true) {
        rev.push_back({static_cast<int>(cur % n), static_cast<int>(cur / n)});
        if (cur == si) break;
        cur = parent[cur];
    }
    out.path.assign(rev.rbegin(), rev.rend());
    return out;
}

std::optional<double> dijkstra_oracle(const GridMap& map, Point start, Point goal) {
    const OraclePath p = dijkstra_oracle_path(map, start, goal);
    if (!p.reachable) return std::nullopt;
    return p.length;
}

}  // namespace gridplan
