#ifndef GRIDPLAN_POINT_HPP
#define GRIDPLAN_POINT_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

namespace gridplan {

// Integer cell coordinate on an N x N grid. Paths run between cell centers.
struct Point {
    int x = 0;
    int y = 0;

    bool operator==(const Point& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Point& o) const { return !(*this == o); }
    // Lexicographic, for ordered containers and canonical sorts.
    bool operator<(const Point& o) const { return x != o.x ? x < o.x : y < o.y; }
};

inline double euclid(const Point& a, const Point& b) {
    const double dx = static_cast<double>(a.x) - b.x;
    const double dy = static_cast<double>(a.y) - b.y;
    // std::sqrt is correctly rounded per IEEE-754; std::hypot is not pinned
    // across libm implementations, so results would not be reproducible.
    return std::sqrt(dx * dx + dy * dy);
}

inline int chebyshev(const Point& a, const Point& b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

inline std::string to_string(const Point& p) {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

struct PointHash {
    std::size_t operator()(const Point& p) const {
        // 2D -> 1D mix; grids are far smaller than 2^32 per axis.
        const std::uint64_t k =
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
            static_cast<std::uint32_t>(p.y);
        std::uint64_t h = k * 0x9e3779b97f4a7c15ull;
        h ^= h >> 32;
        return static_cast<std::size_t>(h);
    }
};

}  // namespace gridplan

#endif
