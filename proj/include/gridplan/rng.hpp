#ifndef GRIDPLAN_RNG_HPP
#define GRIDPLAN_RNG_HPP

#include <cstdint>
#include <random>

namespace gridplan {

// All randomized components draw from std::mt19937_64 (exactly specified by
// the C++ standard) reduced with plain modulo. std::uniform_int_distribution
// is implementation-defined and would break run-to-run reproducibility across
// standard libraries, so it is not used anywhere.

inline std::uint64_t mix64(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b));
}

// Uniform integer in [lo, hi], inclusive. Modulo bias is negligible for the
// small ranges used here and keeps draws identical on every platform.
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(rng() % span);
}

}  // namespace gridplan

#endif
