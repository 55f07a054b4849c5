#include <doctest.h>

#include <chrono>
#include <thread>

#include "gridplan/collision.hpp"
#include "gridplan/errors.hpp"
#include "gridplan/pipeline.hpp"

using namespace gridplan;

namespace {

// A client that always fails, to exercise the fallback path.
class FailingClient final : public LlmClient {
public:
    WaypointSet generate(const PromptBundle&, const GridMap&, Point, Point,
                         std::uint64_t) override {
        throw LlmTransportError("synthetic outage");
    }
    std::string name() const override { return "failing"; }
};

}  // namespace

TEST_CASE("llm failure falls back to the plain optimized search") {
    const GridMap m = generate_map(100, Scenario::random, 31);
    const Point s = m.default_start();
    const Point g = m.default_goal();
    FailingClient bad;
    FewShotRepo repo;
    PipelineDetail detail;
    const PlanResult guided = plan_illm(m, s, g, bad, repo, {}, 0, &detail);
    CHECK(detail.llm_failed);
    REQUIRE(guided.reached);
    const PlanResult plain = plan_opt_astar(m, s, g);
    CHECK(guided.length == doctest::Approx(plain.length).epsilon(1e-12));
    CHECK(guided.nodes_expanded == plain.nodes_expanded);
}

TEST_CASE("llm-astar fallback equals the baseline engine") {
    const GridMap m = generate_map(50, Scenario::random, 13);
    const Point s = m.default_start();
    const Point g = m.default_goal();
    FailingClient bad;
    const PlanResult fell_back = plan_llm_astar(m, s, g, bad);
    const PlanResult plain = plan_baseline_astar(m, s, g);
    REQUIRE(fell_back.reached);
    CHECK(fell_back.length == doctest::Approx(plain.length).epsilon(1e-12));
}

TEST_CASE("pipeline results satisfy the path validity invariants") {
    StubClient client(3);
    FewShotRepo repo;
    for (std::uint64_t seed = 40; seed < 46; ++seed) {
        const GridMap m = generate_map(100, Scenario::random, seed);
        const Point s = m.default_start();
        const Point g = m.default_goal();
        PipelineDetail detail;
        const PlanResult r = plan_illm(m, s, g, client, repo, {}, seed, &detail);
        REQUIRE(r.reached);
        CHECK(r.path.front() == s);
        CHECK(r.path.back() == g);
        CHECK(detail.selected.size() <= 2);
        for (std::size_t i = 1; i < r.path.size(); ++i) {
            CHECK(chebyshev(r.path[i - 1], r.path[i]) == 1);
            CHECK_FALSE(m.is_blocked(r.path[i]));
            CHECK_FALSE(detect_collision_two_stage({r.path[i - 1], r.path[i]}, m.barriers()));
        }
    }
}

TEST_CASE("pipeline is deterministic under the stub") {
    StubClient client(9);
    FewShotRepo repo;
    const GridMap m = generate_map(100, Scenario::random, 51);
    const Point s = m.default_start();
    const Point g = m.default_goal();
    const PlanResult a = plan_illm(m, s, g, client, repo, {}, 7);
    const PlanResult b = plan_illm(m, s, g, client, repo, {}, 7);
    CHECK(a.path == b.path);
    CHECK(a.length == b.length);
    CHECK(a.nodes_expanded == b.nodes_expanded);
    CHECK(a.peak_memory_units == b.peak_memory_units);
    CHECK(a.broad_rejects == b.broad_rejects);
    CHECK(a.precise_tests == b.precise_tests);
}

TEST_CASE("search metrics exclude model latency") {
    class SlowStub final : public LlmClient {
    public:
        WaypointSet generate(const PromptBundle& b, const GridMap& m, Point s, Point g,
                             std::uint64_t v) override {
            std::this_thread::sleep_for(std::chrono::milliseconds(30));
            return inner_.generate(b, m, s, g, v);
        }
        std::string name() const override { return "slow-stub"; }

    private:
        StubClient inner_{1};
    };

    const GridMap m = generate_map(50, Scenario::random, 61);
    SlowStub client;
    FewShotRepo repo;
    const PlanResult r = plan_illm(m, m.default_start(), m.default_goal(), client, repo);
    REQUIRE(r.reached);
    CHECK(r.llm_latency_ns >= 30'000'000);
    CHECK(r.search_time_ns < r.llm_latency_ns);
}
