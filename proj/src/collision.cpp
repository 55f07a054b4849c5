#include "gridplan/collision.hpp"

namespace gridplan {

namespace {

// Sign of the cross product (b-a) x (c-a). Coordinates fit comfortably in
// 32 bits, so the 64-bit products cannot overflow.
int orientation(const Point& a, const Point& b, const Point& c) {
    const std::int64_t v = static_cast<std::int64_t>(b.x - a.x) * (c.y - a.y) -
                           static_cast<std::int64_t>(b.y - a.y) * (c.x - a.x);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
    return orientation(a, b, p) == 0 &&
           std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(q1, p1, p2)) return true;
    if (o2 == 0 && on_segment(q2, p1, p2)) return true;
    if (o3 == 0 && on_segment(p1, q1, q2)) return true;
    if (o4 == 0 && on_segment(p2, q1, q2)) return true;
    return false;
}

}  // namespace

bool segment_intersects_barrier(const Segment& s, const Barrier& b) {
    const Point ba = b.end_a();
    const Point bb = b.end_b();
    if (s.a == s.b) return on_segment(s.a, ba, bb);
    return segments_intersect(s.a, s.b, ba, bb);
}

bool detect_collision_two_stage(const Segment& s, std::span<const Barrier> barriers,
                                CollisionStats* stats) {
    const Aabb box = aabb_of_segment(s);
    bool hit = false;
    for (const Barrier& b : barriers) {
        if (!aabb_overlap(box, aabb_of_barrier(b))) {
            if (stats) ++stats->broad_rejects;
            continue;
        }
        if (stats) ++stats->precise_tests;
        if (segment_intersects_barrier(s, b)) {
            hit = true;
            break;
        }
    }
    return hit;
}

bool detect_collision_precise(const Segment& s, std::span<const Barrier> barriers,
                              CollisionStats* stats) {
    for (const Barrier& b : barriers) {
        if (stats) ++stats->precise_tests;
        if (segment_intersects_barrier(s, b)) return true;
    }
    return false;
}

}  // namespace gridplan
