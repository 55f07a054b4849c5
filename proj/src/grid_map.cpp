#include "gridplan/grid_map.hpp"

#include <nlohmann/json.hpp>

#include <random>
#include <stdexcept>

#include "gridplan/errors.hpp"
#include "gridplan/rng.hpp"

namespace gridplan {

namespace {

constexpr int kMinBarrierLen = 10;
constexpr int kMaxBarrierLen = 50;
constexpr int kPlacementRetries = 1000;

using ordered_json = nlohmann::ordered_json;

}  // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::random: return "random";
        case Scenario::cross: return "cross";
        case Scenario::bars: return "bars";
    }
    return "random";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "random") return Scenario::random;
    if (s == "cross") return Scenario::cross;
    if (s == "bars") return Scenario::bars;
    throw std::invalid_argument("unknown scenario: " + s);
}

GridMap::GridMap(int n, std::vector<Barrier> barriers, Scenario scenario, std::uint64_t seed)
    : n_(n), scenario_(scenario), seed_(seed), barriers_(std::move(barriers)) {
    if (n <= 0) throw std::invalid_argument("map edge length must be positive");
    occupancy_.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (const Barrier& b : barriers_) {
        if (b.lo > b.hi) throw std::invalid_argument("barrier range lo > hi");
        const bool in =
            b.fixed >= 0 && b.fixed < n_ && b.lo >= 0 && b.hi < n_;
        if (!in) throw std::invalid_argument("barrier outside map bounds");
        for (int c = b.lo; c <= b.hi; ++c) {
            const Point p = b.axis == BarrierAxis::horizontal ? Point{c, b.fixed}
                                                              : Point{b.fixed, c};
            occupancy_[static_cast<std::size_t>(p.y) * n_ + p.x] = 1;
        }
    }
}

bool GridMap::is_blocked(const Point& p) const {
    if (!in_bounds(p)) {
        throw std::out_of_range("point " + to_string(p) + " outside map of edge " +
                                std::to_string(n_));
    }
    return blocked_unchecked(p);
}

Point GridMap::fallback_unblocked(Point preferred, std::uint64_t salt) const {
    if (!blocked_unchecked(preferred)) return preferred;
    std::mt19937_64 rng(mix64(seed_, salt));
    for (int i = 0; i < kPlacementRetries; ++i) {
        const Point p{static_cast<int>(uniform_int(rng, 0, n_ - 1)),
                      static_cast<int>(uniform_int(rng, 0, n_ - 1))};
        if (!blocked_unchecked(p)) return p;
    }
    throw std::runtime_error("no unblocked cell found for endpoint");
}

Point GridMap::default_start() const { return fallback_unblocked({2, 2}, 0x5741u); }

Point GridMap::default_goal() const { return fallback_unblocked({n_ - 3, n_ - 3}, 0x474cu); }

namespace {

bool covers_any(const Barrier& b, const Point& s, const Point& g) {
    return b.covers(s) || b.covers(g);
}

Barrier random_barrier(std::mt19937_64& rng, int n, const Point& start, const Point& goal) {
    for (int attempt = 0; attempt < kPlacementRetries; ++attempt) {
        Barrier b;
        b.axis = (rng() & 1u) ? BarrierAxis::vertical : BarrierAxis::horizontal;
        // a span of len covers len+1 cells, so len is capped at n-1
        const int len = static_cast<int>(
            uniform_int(rng, kMinBarrierLen, std::min(kMaxBarrierLen, n - 1)));
        b.fixed = static_cast<int>(uniform_int(rng, 0, n - 1));
        b.lo = static_cast<int>(uniform_int(rng, 0, n - 1 - len));
        b.hi = b.lo + len;
        if (!covers_any(b, start, goal)) return b;
    }
    throw std::runtime_error("could not place barrier clear of start/goal");
}

// Bar length in [0.5n, 0.6n], used by the cross arms and the long bars.
int giant_len(std::mt19937_64& rng, int n) {
    return static_cast<int>(uniform_int(rng, n / 2, 3 * n / 5));
}

Barrier centered_bar(BarrierAxis axis, int fixed, int center, int len, int n) {
    Barrier b;
    b.axis = axis;
    b.fixed = fixed;
    b.lo = std::max(0, center - len / 2);
    b.hi = std::min(n - 1, b.lo + len);
    return b;
}

}  // namespace

GridMap generate_map(int n, Scenario scenario, std::uint64_t seed) {
    if (n < 50 || n % 50 != 0) {
        throw std::invalid_argument("map edge length must be a positive multiple of 50, got " +
                                    std::to_string(n));
    }
    const Point start{2, 2};
    const Point goal{n - 3, n - 3};
    std::mt19937_64 rng(mix64(seed, mix64(static_cast<std::uint64_t>(n),
                                          static_cast<std::uint64_t>(scenario))));

    std::vector<Barrier> barriers;
    const int count = 3 * (n / 50) * (n / 50);
    barriers.reserve(static_cast<std::size_t>(count) + 4);
    for (int i = 0; i < count; ++i) barriers.push_back(random_barrier(rng, n, start, goal));

    if (scenario == Scenario::cross) {
        const Point center{(start.x + goal.x) / 2, (start.y + goal.y) / 2};
        for (int attempt = 0;; ++attempt) {
            const Barrier h = centered_bar(BarrierAxis::horizontal, center.y, center.x,
                                           giant_len(rng, n), n);
            const Barrier v = centered_bar(BarrierAxis::vertical, center.x, center.y,
                                           giant_len(rng, n), n);
            if (!covers_any(h, start, goal) && !covers_any(v, start, goal)) {
                barriers.push_back(h);
                barriers.push_back(v);
                break;
            }
            if (attempt >= kPlacementRetries)
                throw std::runtime_error("could not place cross obstacle");
        }
    } else if (scenario == Scenario::bars) {
        const BarrierAxis axis = (rng() & 1u) ? BarrierAxis::vertical : BarrierAxis::horizontal;
        for (int i = 1; i <= 3; ++i) {
            for (int attempt = 0;; ++attempt) {
                const Barrier b =
                    centered_bar(axis, i * n / 4, n / 2, giant_len(rng, n), n);
                if (!covers_any(b, start, goal)) {
                    barriers.push_back(b);
                    break;
                }
                if (attempt >= kPlacementRetries)
                    throw std::runtime_error("could not place bar obstacle");
            }
        }
    }
    return GridMap(n, std::move(barriers), scenario, seed);
}

std::string serialize_map(const GridMap& map) {
    ordered_json j;
    j["n"] = map.n();
    j["scenario"] = to_string(map.scenario());
    j["seed"] = map.seed();
    ordered_json h = ordered_json::array();
    ordered_json v = ordered_json::array();
    for (const Barrier& b : map.barriers()) {
        auto triple = ordered_json::array({b.fixed, b.lo, b.hi});
        if (b.axis == BarrierAxis::horizontal) h.push_back(std::move(triple));
        else v.push_back(std::move(triple));
    }
    j["horizontal_barriers"] = std::move(h);
    j["vertical_barriers"] = std::move(v);
    return j.dump(2) + "\n";
}

namespace {

void parse_barrier_list(const ordered_json& j, const char* key, BarrierAxis axis, int n,
                        std::vector<Barrier>& out) {
    if (!j.contains(key) || !j[key].is_array())
        throw MapFormatError(std::string("missing or non-array field: ") + key);
    std::size_t idx = 0;
    for (const auto& item : j[key]) {
        const std::string where = std::string(key) + "[" + std::to_string(idx) + "]";
        if (!item.is_array() || item.size() != 3 || !item[0].is_number_integer() ||
            !item[1].is_number_integer() || !item[2].is_number_integer())
            throw MapFormatError("barrier is not an integer triple: " + where);
        Barrier b;
        b.axis = axis;
        b.fixed = item[0].get<int>();
        b.lo = item[1].get<int>();
        b.hi = item[2].get<int>();
        if (b.lo > b.hi) throw MapFormatError("barrier range reversed: " + where);
        if (b.fixed < 0 || b.fixed >= n || b.lo < 0 || b.hi >= n)
            throw MapFormatError("barrier out of bounds: " + where);
        out.push_back(b);
        ++idx;
    }
}

}  // namespace

GridMap parse_map(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MapFormatError(std::string("malformed map JSON: ") + e.what());
    }
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw MapFormatError("missing or non-integer field: n");
    const int n = j["n"].get<int>();
    if (n <= 0) throw MapFormatError("field n must be positive");
    Scenario scenario = Scenario::random;
    if (j.contains("scenario")) {
        try {
            scenario = scenario_from_string(j["scenario"].get<std::string>());
        } catch (const std::exception&) {
            throw MapFormatError("unknown value in field: scenario");
        }
    }
    const std::uint64_t seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : 0;

    std::vector<Barrier> barriers;
    parse_barrier_list(j, "horizontal_barriers", BarrierAxis::horizontal, n, barriers);
    parse_barrier_list(j, "vertical_barriers", BarrierAxis::vertical, n, barriers);
    return GridMap(n, std::move(barriers), scenario, seed);
}

}  // namespace gridplan
