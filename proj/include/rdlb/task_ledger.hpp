#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rdlb {

using Count = std::int64_t;

enum class TaskState : std::uint8_t { Unscheduled, Scheduled, Finished };

/// Half-open range [start, start + size) of loop iterations.
struct IterationRange {
    Count start = 0;
    Count size = 0;

    Count end() const { return start + size; }
    friend bool operator==(const IterationRange&, const IterationRange&) = default;
};

struct ScheduledRange {
    IterationRange range;
    std::size_t pe = 0;
};

/// Per-iteration bookkeeping for robust rescheduling.
///
/// Iterations move Unscheduled -> Scheduled -> Finished. Once every iteration
/// has been scheduled, rdlb_select() hands out ranges that are scheduled but
/// not yet finished, in original scheduling order with a rotating cursor, so
/// that idle PEs duplicate outstanding work. The first completion report for a
/// range wins; later reports for the same range are ignored.
class TaskLedger {
public:
    explicit TaskLedger(Count n_total);

    Count n_total() const { return n_total_; }
    Count count(TaskState s) const { return counts_[static_cast<std::size_t>(s)]; }
    TaskState state(Count iteration) const;
    bool is_complete() const { return count(TaskState::Finished) == n_total_; }

    std::span<const ScheduledRange> scheduled_order() const { return order_; }

    /// First assignment of a range. Throws std::logic_error unless every
    /// iteration in the range is Unscheduled.
    void mark_scheduled(IterationRange range, std::size_t pe);

    /// Returns true when the report finished at least one iteration, false for
    /// a late duplicate. Throws std::logic_error if the range touches
    /// Unscheduled iterations or lies outside [0, n_total).
    bool report_completion(IterationRange range, std::size_t pe);

    /// Next scheduled-but-unfinished range for a duplicate assignment, or
    /// nullopt once complete. Throws std::logic_error while Unscheduled
    /// iterations remain.
    std::optional<IterationRange> rdlb_select();

private:
    void check_bounds(IterationRange range) const;
    bool range_finished(const ScheduledRange& r) const;

    Count n_total_;
    std::vector<TaskState> state_;
    std::vector<ScheduledRange> order_;
    std::array<Count, 3> counts_{};
    std::size_t cursor_ = 0;
};

}  // namespace rdlb
