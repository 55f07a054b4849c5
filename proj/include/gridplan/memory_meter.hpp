#ifndef GRIDPLAN_MEMORY_METER_HPP
#define GRIDPLAN_MEMORY_METER_HPP

#include <cstdint>

namespace gridplan {

// Deterministic memory accounting: entry counts times nominal per-entry
// footprints, instead of process RSS. Identical runs produce identical
// peaks on any platform. The constants below include a share for the
// per-node side tables each engine keeps next to its main structures.
constexpr std::int64_t kBaselineOpenEntryBytes = 56;    // pos, g, h, wp term, cached f, stamp, parent
constexpr std::int64_t kBaselineClosedEntryBytes = 24;  // pos, g, parent
constexpr std::int64_t kOptOpenEntryBytes = 56;         // heap record plus g-table share
constexpr std::int64_t kOptClosedEntryBytes = 40;       // hash node plus bucket overhead

class MemoryMeter {
public:
    MemoryMeter(std::int64_t bytes_per_open, std::int64_t bytes_per_closed)
        : bytes_per_open_(bytes_per_open), bytes_per_closed_(bytes_per_closed) {}

    void add_open(std::int64_t delta) {
        open_entries_ += delta;
        bump();
    }
    void add_closed(std::int64_t delta) {
        closed_entries_ += delta;
        bump();
    }

    std::int64_t open_entries() const { return open_entries_; }
    std::int64_t closed_entries() const { return closed_entries_; }
    std::int64_t peak_units() const { return peak_units_; }

private:
    void bump() {
        const std::int64_t units =
            open_entries_ * bytes_per_open_ + closed_entries_ * bytes_per_closed_;
        if (units > peak_units_) peak_units_ = units;
    }

    std::int64_t bytes_per_open_;
    std::int64_t bytes_per_closed_;
    std::int64_t open_entries_ = 0;
    std::int64_t closed_entries_ = 0;
    std::int64_t peak_units_ = 0;
};

}  // namespace gridplan

#endif
