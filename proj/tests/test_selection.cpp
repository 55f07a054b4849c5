#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "gridplan/rng.hpp"
#include "gridplan/selection.hpp"

using namespace gridplan;

namespace {

std::vector<Point> random_interior(std::mt19937_64& rng, std::size_t m, int span) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < m; ++i)
        pts.push_back({static_cast<int>(uniform_int(rng, 0, span)),
                       static_cast<int>(uniform_int(rng, 0, span))});
    return pts;
}

bool is_subsequence(const std::vector<Point>& sub, std::span<const Point> seq) {
    std::size_t j = 0;
    for (const Point& p : seq) {
        if (j < sub.size() && sub[j] == p) ++j;
    }
    return j == sub.size();
}

// Independent reference for the start/goal policies: sort indices by
// distance (ties by index), take k, emit in index order.
std::vector<Point> brute_nearest(std::span<const Point> pts, Point ref, std::size_t k) {
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double da = euclid(pts[a], ref), db = euclid(pts[b], ref);
        return da != db ? da < db : a < b;
    });
    idx.resize(std::min(k, idx.size()));
    std::sort(idx.begin(), idx.end());
    std::vector<Point> out;
    for (std::size_t i : idx) out.push_back(pts[i]);
    return out;
}

}  // namespace

TEST_CASE("start policy picks the nearest points in sequence order") {
    const std::vector<Point> interior{{1, 1}, {5, 5}, {9, 9}};
    const auto sel = select_waypoints(interior, {0, 0}, {10, 10}, {SelectionKind::start, 2});
    CHECK(sel == std::vector<Point>{{1, 1}, {5, 5}});
}

TEST_CASE("goal policy is symmetric") {
    const std::vector<Point> interior{{1, 1}, {5, 5}, {9, 9}};
    const auto sel = select_waypoints(interior, {0, 0}, {10, 10}, {SelectionKind::goal, 1});
    CHECK(sel == std::vector<Point>{{9, 9}});
}

TEST_CASE("uniform policy spaces indices evenly") {
    const std::vector<Point> interior{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
    const auto sel = select_waypoints(interior, {0, 0}, {9, 9}, {SelectionKind::uniform, 2});
    CHECK(sel == std::vector<Point>{{0, 0}, {4, 0}});
    const auto sel3 = select_waypoints(interior, {0, 0}, {9, 9}, {SelectionKind::uniform, 3});
    CHECK(sel3 == std::vector<Point>{{0, 0}, {2, 0}, {4, 0}});
    const auto sel1 = select_waypoints(interior, {0, 0}, {9, 9}, {SelectionKind::uniform, 1});
    CHECK(sel1 == std::vector<Point>{{0, 0}});
}

TEST_CASE("random policy is deterministic per seed and picks distinct points") {
    std::mt19937_64 rng(31);
    const std::vector<Point> interior = random_interior(rng, 10, 50);
    const auto a = select_waypoints(interior, {0, 0}, {50, 50}, {SelectionKind::random, 4, 77});
    const auto b = select_waypoints(interior, {0, 0}, {50, 50}, {SelectionKind::random, 4, 77});
    CHECK(a == b);
    CHECK(a.size() == 4);
    CHECK(is_subsequence(a, interior));
}

TEST_CASE("k clamps to the available count; empty input selects nothing") {
    const std::vector<Point> interior{{1, 1}, {2, 2}};
    CHECK(select_waypoints(interior, {0, 0}, {9, 9}, {SelectionKind::start, 10}).size() == 2);
    CHECK(select_waypoints({}, {0, 0}, {9, 9}, {SelectionKind::start, 2}).empty());
}

TEST_CASE("every policy emits a subsequence of the input order") {
    std::mt19937_64 rng(8);
    for (int iter = 0; iter < 500; ++iter) {
        const std::size_t m = 1 + static_cast<std::size_t>(uniform_int(rng, 0, 9));
        const std::vector<Point> interior = random_interior(rng, m, 100);
        const Point start{static_cast<int>(uniform_int(rng, 0, 100)),
                          static_cast<int>(uniform_int(rng, 0, 100))};
        const Point goal{static_cast<int>(uniform_int(rng, 0, 100)),
                         static_cast<int>(uniform_int(rng, 0, 100))};
        for (SelectionKind kind : {SelectionKind::start, SelectionKind::goal,
                                   SelectionKind::uniform, SelectionKind::random}) {
            const int k = 1 + static_cast<int>(uniform_int(rng, 0, 4));
            const auto sel = select_waypoints(interior, start, goal, {kind, k, rng()});
            CHECK(is_subsequence(sel, interior));
        }
    }
}

TEST_CASE("default_select: everything up to 2, else the 2 nearest the start") {
    const std::vector<Point> two{{4, 4}, {6, 6}};
    CHECK(default_select(two, {0, 0}) == two);
    const std::vector<Point> one{{4, 4}};
    CHECK(default_select(one, {0, 0}) == one);
    CHECK(default_select({}, {0, 0}).empty());

    const std::vector<Point> five{{9, 9}, {1, 1}, {8, 8}, {2, 2}, {7, 7}};
    CHECK(default_select(five, {0, 0}) == std::vector<Point>{{1, 1}, {2, 2}});
}

TEST_CASE("default_select matches a brute-force distance sort on 10^4 random sets") {
    std::mt19937_64 rng(4096);
    for (int iter = 0; iter < 10000; ++iter) {
        const std::size_t m = static_cast<std::size_t>(uniform_int(rng, 0, 8));
        const std::vector<Point> interior = random_interior(rng, m, 200);
        const Point start{static_cast<int>(uniform_int(rng, 0, 200)),
                          static_cast<int>(uniform_int(rng, 0, 200))};
        const auto got = default_select(interior, start);
        if (m <= 2) {
            REQUIRE(got == interior);
        } else {
            REQUIRE(got == brute_nearest(interior, start, 2));
            REQUIRE(got.size() == 2);
        }
    }
}

TEST_CASE("start policy is permutation-invariant up to the tie rule") {
    std::mt19937_64 rng(15);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<Point> interior = random_interior(rng, 6, 40);
        const Point start{0, 0};
        const auto base = select_waypoints(interior, start, {40, 40}, {SelectionKind::start, 3});
        std::vector<Point> shuffled = interior;
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[uniform_int(rng, 0, static_cast<std::int64_t>(i) - 1)]);
        auto perm = select_waypoints(shuffled, start, {40, 40}, {SelectionKind::start, 3});
        // same multiset of distances regardless of order
        auto key = [&](std::vector<Point> v) {
            std::vector<double> d;
            for (const Point& p : v) d.push_back(euclid(p, start));
            std::sort(d.begin(), d.end());
            return d;
        };
        CHECK(key(base) == key(perm));
    }
}

TEST_CASE("selection study table has one row per policy-count pair") {
    std::vector<GridMap> maps{generate_map(50, Scenario::random, 1),
                              generate_map(100, Scenario::random, 2)};
    StubClient client(5);
    StudyConfig cfg;
    cfg.trials = 2;
    cfg.ks = {1, 2};
    const StudyTable table = run_selection_study(maps, client, cfg);
    REQUIRE(table.rows.size() == 4 * 2);
    for (const StudyRow& r : table.rows) {
        CHECK(r.memory_score >= 0.0);
        CHECK(r.memory_score <= 1.0);
        CHECK(r.time_score >= 0.0);
        CHECK(r.time_score <= 1.0);
        CHECK(r.path_length_pct >= 100.0 - 1e-9);
    }
    const std::string csv = table.to_csv();
    CHECK(csv.find("policy,k,memory_score,time_score,path_length_pct") == 0);
}
