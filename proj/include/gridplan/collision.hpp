#ifndef GRIDPLAN_COLLISION_HPP
#define GRIDPLAN_COLLISION_HPP

#include <cstdint>
#include <span>

#include "gridplan/grid_map.hpp"
#include "gridplan/point.hpp"

namespace gridplan {

// Closed integer box. Touching boxes count as overlapping, which keeps the
// broad phase conservative: a false positive only costs one precise test.
struct Aabb {
    int min_x = 0;
    int min_y = 0;
    int max_x = 0;
    int max_y = 0;
};

struct Segment {
    Point a;
    Point b;  // a == b is the degenerate single-point segment
};

inline Aabb aabb_of_segment(const Segment& s) {
    return {std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y),
            std::max(s.a.x, s.b.x), std::max(s.a.y, s.b.y)};
}

inline Aabb aabb_of_barrier(const Barrier& b) {
    const Point pa = b.end_a();
    const Point pb = b.end_b();
    return {std::min(pa.x, pb.x), std::min(pa.y, pb.y),
            std::max(pa.x, pb.x), std::max(pa.y, pb.y)};
}

inline bool aabb_overlap(const Aabb& p, const Aabb& q) {
    return p.min_x <= q.max_x && q.min_x <= p.max_x &&
           p.min_y <= q.max_y && q.min_y <= p.max_y;
}

// Exact segment-vs-barrier intersection. The barrier is the zero-width
// segment through its cell centers; all coordinates are integers, so the
// orientation tests are exact (no epsilon). A degenerate segment collides
// iff its point lies on the barrier.
bool segment_intersects_barrier(const Segment& s, const Barrier& b);

// Per-query instrumentation for the two-stage detector.
struct CollisionStats {
    std::int64_t broad_rejects = 0;   // barriers discarded by the AABB stage
    std::int64_t precise_tests = 0;   // barriers that reached the exact stage

    CollisionStats& operator+=(const CollisionStats& o) {
        broad_rejects += o.broad_rejects;
        precise_tests += o.precise_tests;
        return *this;
    }
};

// AABB broad phase, then the exact test on survivors. Equivalent to
// OR-folding segment_intersects_barrier over all barriers.
bool detect_collision_two_stage(const Segment& s, std::span<const Barrier> barriers,
                                CollisionStats* stats = nullptr);

// Exact test on every barrier, no broad phase. The baseline planner's
// collision path.
bool detect_collision_precise(const Segment& s, std::span<const Barrier> barriers,
                              CollisionStats* stats = nullptr);

}  // namespace gridplan

#endif
