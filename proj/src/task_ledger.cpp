#include <rdlb/task_ledger.hpp>

#include <stdexcept>
#include <string>

namespace rdlb {

namespace {

constexpr std::size_t idx(TaskState s) { return static_cast<std::size_t>(s); }

}  // namespace

TaskLedger::TaskLedger(Count n_total)
    : n_total_(n_total) {
    if (n_total < 0) throw std::invalid_argument("TaskLedger: negative iteration count");
    state_.assign(static_cast<std::size_t>(n_total), TaskState::Unscheduled);
    counts_[idx(TaskState::Unscheduled)] = n_total;
}

TaskState TaskLedger::state(Count iteration) const {
    return state_.at(static_cast<std::size_t>(iteration));
}

void TaskLedger::check_bounds(IterationRange range) const {
    if (range.size < 1 || range.start < 0 || range.end() > n_total_) {
        throw std::logic_error("TaskLedger: range [" + std::to_string(range.start) + ", " +
                               std::to_string(range.end()) + ") out of bounds");
    }
}

void TaskLedger::mark_scheduled(IterationRange range, std::size_t pe) {
    check_bounds(range);
    for (Count i = range.start; i < range.end(); ++i) {
        if (state_[static_cast<std::size_t>(i)] != TaskState::Unscheduled) {
            throw std::logic_error("TaskLedger: iteration " + std::to_string(i) +
                                   " scheduled twice");
        }
    }
    for (Count i = range.start; i < range.end(); ++i) {
        state_[static_cast<std::size_t>(i)] = TaskState::Scheduled;
    }
    counts_[idx(TaskState::Unscheduled)] -= range.size;
    counts_[idx(TaskState::Scheduled)] += range.size;
    order_.push_back({range, pe});
}

bool TaskLedger::report_completion(IterationRange range, std::size_t /*pe*/) {
    check_bounds(range);
    for (Count i = range.start; i < range.end(); ++i) {
        if (state_[static_cast<std::size_t>(i)] == TaskState::Unscheduled) {
            throw std::logic_error("TaskLedger: completion reported for unscheduled iteration " +
                                   std::to_string(i));
        }
    }
    Count newly_finished = 0;
    for (Count i = range.start; i < range.end(); ++i) {
        auto& s = state_[static_cast<std::size_t>(i)];
        if (s == TaskState::Scheduled) {
            s = TaskState::Finished;
            ++newly_finished;
        }
    }
    counts_[idx(TaskState::Scheduled)] -= newly_finished;
    counts_[idx(TaskState::Finished)] += newly_finished;
    return newly_finished > 0;
}

bool TaskLedger::range_finished(const ScheduledRange& r) const {
    for (Count i = r.range.start; i < r.range.end(); ++i) {
        if (state_[static_cast<std::size_t>(i)] != TaskState::Finished) return false;
    }
    return true;
}

std::optional<IterationRange> TaskLedger::rdlb_select() {
    if (count(TaskState::Unscheduled) > 0) {
        throw std::logic_error("TaskLedger: rdlb_select while iterations are unscheduled");
    }
    if (is_complete() || order_.empty()) return std::nullopt;

    const std::size_t n = order_.size();
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t i = (cursor_ + step) % n;
        if (!range_finished(order_[i])) {
            cursor_ = (i + 1) % n;
            return order_[i].range;
        }
    }
    return std::nullopt;
}

}  // namespace rdlb
