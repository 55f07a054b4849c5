#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "gridplan/astar.hpp"
#include "gridplan/collision.hpp"
#include "gridplan/llm_client.hpp"
#include "gridplan/rng.hpp"

using namespace gridplan;

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Enclose the lower-left corner: no 8-connected step leaves {x<=2, y<=2}.
GridMap walled_map() {
    return GridMap(20,
                   {Barrier{BarrierAxis::horizontal, 3, 0, 3},
                    Barrier{BarrierAxis::vertical, 3, 0, 3}},
                   Scenario::random, 0);
}

void check_path_valid(const GridMap& map, const PlanResult& r, Point start, Point goal) {
    REQUIRE(r.reached);
    REQUIRE_FALSE(r.path.empty());
    CHECK(r.path.front() == start);
    CHECK(r.path.back() == goal);
    double len = 0.0;
    for (std::size_t i = 0; i < r.path.size(); ++i) {
        CHECK_FALSE(map.is_blocked(r.path[i]));
        if (i == 0) continue;
        const int dx = std::abs(r.path[i].x - r.path[i - 1].x);
        const int dy = std::abs(r.path[i].y - r.path[i - 1].y);
        CHECK(std::max(dx, dy) == 1);  // 8-neighbor steps only
        len += euclid(r.path[i - 1], r.path[i]);
        CHECK_FALSE(detect_collision_two_stage({r.path[i - 1], r.path[i]}, map.barriers()));
    }
    CHECK(r.length == doctest::Approx(len).epsilon(1e-12));
}

}  // namespace

TEST_CASE("heuristic_f sums g, goal distance and waypoint distance") {
    CHECK(heuristic_f(0.0, {0, 0}, {3, 4}, nullptr) == doctest::Approx(5.0));
    const Point wp{0, 3};
    CHECK(heuristic_f(2.0, {0, 0}, {3, 4}, &wp) == doctest::Approx(10.0));
    const Point self{0, 0};
    CHECK(heuristic_f(1.5, {0, 0}, {3, 4}, &self) == doctest::Approx(1.5 + 5.0));
}

TEST_CASE("empty map diagonal is 9*sqrt(2) for both engines") {
    const GridMap m(10, {}, Scenario::random, 0);
    const PlanResult b = plan_baseline_astar(m, {0, 0}, {9, 9});
    const PlanResult o = plan_opt_astar(m, {0, 0}, {9, 9});
    CHECK(b.length == doctest::Approx(9.0 * kSqrt2).epsilon(1e-12));
    CHECK(o.length == doctest::Approx(9.0 * kSqrt2).epsilon(1e-12));
    check_path_valid(m, b, {0, 0}, {9, 9});
    check_path_valid(m, o, {0, 0}, {9, 9});
}

TEST_CASE("start equals goal yields the single-point path") {
    const GridMap m(10, {}, Scenario::random, 0);
    const PlanResult r = plan_baseline_astar(m, {4, 4}, {4, 4});
    REQUIRE(r.reached);
    CHECK(r.path.size() == 1);
    CHECK(r.length == 0.0);
}

TEST_CASE("blocked or out-of-bounds endpoints are input errors") {
    const GridMap m(10, {Barrier{BarrierAxis::horizontal, 5, 2, 8}}, Scenario::random, 0);
    CHECK_THROWS_AS(plan_opt_astar(m, {4, 5}, {9, 9}), std::invalid_argument);
    CHECK_THROWS_AS(plan_opt_astar(m, {0, 0}, {4, 5}), std::invalid_argument);
    CHECK_THROWS_AS(plan_baseline_astar(m, {-1, 0}, {9, 9}), std::invalid_argument);
}

TEST_CASE("unreachable goals return the failure value, not an error") {
    const GridMap m = walled_map();
    const PlanResult b = plan_baseline_astar(m, {1, 1}, {10, 10});
    const PlanResult o = plan_opt_astar(m, {1, 1}, {10, 10});
    CHECK_FALSE(b.reached);
    CHECK_FALSE(o.reached);
    CHECK(b.path.empty());
    CHECK(o.path.empty());
    CHECK_FALSE(dijkstra_oracle(m, {1, 1}, {10, 10}).has_value());
}

TEST_CASE("oracle trivial rows") {
    const GridMap m(5, {}, Scenario::random, 0);
    CHECK(*dijkstra_oracle(m, {0, 0}, {4, 0}) == doctest::Approx(4.0));
}

TEST_CASE("seed-3 random map matches the oracle exactly") {
    const GridMap m = generate_map(50, Scenario::random, 3);
    const Point s = m.default_start();
    const Point g = m.default_goal();
    const auto oracle = dijkstra_oracle(m, s, g);
    REQUIRE(oracle.has_value());
    const PlanResult b = plan_baseline_astar(m, s, g);
    CHECK(b.length == doctest::Approx(*oracle).epsilon(1e-12));
}

TEST_CASE("both engines equal the oracle on 30 random 50x50 maps") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const GridMap m = generate_map(50, Scenario::random, seed);
        const Point s = m.default_start();
        const Point g = m.default_goal();
        const auto oracle = dijkstra_oracle(m, s, g);
        if (!oracle) continue;
        const PlanResult b = plan_baseline_astar(m, s, g);
        const PlanResult o = plan_opt_astar(m, s, g);
        REQUIRE(std::abs(b.length - *oracle) < 1e-9);
        REQUIRE(std::abs(o.length - *oracle) < 1e-9);
        check_path_valid(m, b, s, g);
        check_path_valid(m, o, s, g);
    }
}

TEST_CASE("engine equivalence with waypoints over 200 random instances") {
    std::mt19937_64 rng(0xeaeau);
    int tested = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const GridMap m = generate_map(50, Scenario::random, seed);
        const Point s = m.default_start();
        const Point g = m.default_goal();
        if (!dijkstra_oracle(m, s, g)) continue;

        std::vector<Point> wps;
        if (seed % 2 == 0) {
            // plausible stub waypoints
            const WaypointSet ws = stub_generate(m, s, g, seed);
            wps.assign(ws.points.begin() + 1, ws.points.end() - 1);
        } else {
            // arbitrary (possibly blocked or out-of-bounds) waypoints
            const int k = 1 + static_cast<int>(seed % 4);
            for (int i = 0; i < k; ++i)
                wps.push_back({static_cast<int>(uniform_int(rng, -5, 54)),
                               static_cast<int>(uniform_int(rng, -5, 54))});
        }

        const PlanResult b = plan_baseline_astar(m, s, g, wps);
        const PlanResult o = plan_opt_astar(m, s, g, wps);
        REQUIRE(b.reached == o.reached);
        if (b.reached) {
            REQUIRE(std::abs(b.length - o.length) < 1e-9);
            check_path_valid(m, b, s, g);
            check_path_valid(m, o, s, g);
        }
        ++tested;
    }
    CHECK(tested >= 195);
}

TEST_CASE("waypoint snapping") {
    const GridMap m(20, {Barrier{BarrierAxis::horizontal, 5, 2, 8}}, Scenario::random, 0);
    // unblocked points stay put
    CHECK(*snap_waypoint(m, {4, 7}) == Point{4, 7});
    // blocked points move to the nearest unblocked cell
    const Point snapped = *snap_waypoint(m, {4, 5});
    CHECK_FALSE(m.is_blocked(snapped));
    CHECK(chebyshev(snapped, {4, 5}) <= 3);
    // out-of-bounds points clamp first
    CHECK(*snap_waypoint(m, {25, 7}) == Point{19, 7});
    // a fully walled neighborhood within radius 3 is dropped
    std::vector<Barrier> box;
    for (int d = 0; d <= 8; ++d) {
        box.push_back(Barrier{BarrierAxis::horizontal, 6 + d, 6, 14});
    }
    const GridMap dense(30, box, Scenario::random, 0);
    CHECK_FALSE(snap_waypoint(dense, {10, 10}).has_value());
}

TEST_CASE("lazy update contract: no stale expansions, epochs advance") {
    const GridMap m = generate_map(100, Scenario::random, 77);
    const Point s = m.default_start();
    const Point g = m.default_goal();
    const WaypointSet ws = stub_generate(m, s, g, 5);
    std::vector<Point> wps(ws.points.begin() + 1, ws.points.end() - 1);

    SearchDebug dbg;
    const PlanResult o = plan_opt_astar(m, s, g, wps, {}, &dbg);
    REQUIRE(o.reached);
    CHECK(dbg.stale_expansions == 0);
    CHECK(dbg.epoch_switches >= 1);
    CHECK(dbg.epoch_switches <= static_cast<std::int64_t>(wps.size()));
    CHECK(dbg.stale_pop_refreshes >= 0);

    SearchDebug bdbg;
    const PlanResult b = plan_baseline_astar(m, s, g, wps, {}, &bdbg);
    REQUIRE(b.reached);
    CHECK(bdbg.stale_expansions == 0);
    CHECK(b.length == doctest::Approx(o.length).epsilon(1e-12));
}

TEST_CASE("paths never repeat a node (monotone g)") {
    const GridMap m = generate_map(50, Scenario::random, 21);
    const Point s = m.default_start();
    const Point g = m.default_goal();
    const WaypointSet ws = stub_generate(m, s, g, 9);
    std::vector<Point> wps(ws.points.begin() + 1, ws.points.end() - 1);
    const PlanResult r = plan_opt_astar(m, s, g, wps);
    REQUIRE(r.reached);
    std::set<std::pair<int, int>> seen;
    for (const Point& p : r.path) CHECK(seen.insert({p.x, p.y}).second);
}

TEST_CASE("empty waypoint list behaves as plain A*") {
    const GridMap m = generate_map(50, Scenario::random, 4);
    const Point s = m.default_start();
    const Point g = m.default_goal();
    const PlanResult with_empty = plan_opt_astar(m, s, g, {});
    const auto oracle = dijkstra_oracle(m, s, g);
    REQUIRE(oracle.has_value());
    CHECK(with_empty.length == doctest::Approx(*oracle).epsilon(1e-9));
}

TEST_CASE("zero-perturbation waypoints keep the optimal length") {
    for (std::uint64_t seed = 300; seed < 330; ++seed) {
        for (int n : {50, 100}) {
            const GridMap m = generate_map(n, Scenario::random, seed);
            const Point s = m.default_start();
            const Point g = m.default_goal();
            const auto oracle = dijkstra_oracle(m, s, g);
            if (!oracle) continue;
            const WaypointSet ws = stub_generate(m, s, g, seed, 0);
            std::vector<Point> wps(ws.points.begin() + 1, ws.points.end() - 1);
            const PlanResult r = plan_opt_astar(m, s, g, wps);
            REQUIRE(r.reached);
            CHECK(std::abs(100.0 * r.length / *oracle - 100.0) < 1e-6);
        }
    }
}
