#pragma once

#include <rdlb/task_ledger.hpp>
#include <rdlb/technique.hpp>
#include <rdlb/workload.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace rdlb {

/// [start, end) window carrying a speed multiplier or an extra one-way delay.
struct TimeInterval {
    double start = 0.0;
    double end = std::numeric_limits<double>::infinity();
    double value = 1.0;
};

/// Failure and perturbation model of one worker PE.
struct PEModel {
    std::size_t id = 0;
    std::size_t node = 0;
    /// Fail-stop time; the PE is alive at time x iff x < fail_at.
    std::optional<double> fail_at;
    /// Multipliers in (0, 1]; overlapping intervals multiply.
    std::vector<TimeInterval> speed_schedule;
    /// Extra one-way delay (seconds) for messages to or from the PE; overlapping
    /// intervals add up. Evaluated at the send time.
    std::vector<TimeInterval> latency_schedule;
};

struct SimConfig {
    Count n = 0;
    std::size_t p = 1;
    Technique technique = Technique::SS;
    bool rdlb_enabled = false;
    /// Master time per assignment, seconds.
    double h = 0.0;
    /// One-way master <-> worker message delay, seconds.
    double base_latency = 0.0;
    WorkloadSpec workload;
    /// Pre-generated iteration times; generated from `workload` when null.
    std::shared_ptr<const std::vector<double>> iteration_times;
    /// One entry per worker, or empty for P unperturbed PEs.
    std::vector<PEModel> pe_models;
    std::size_t pes_per_node = 4;
    std::uint64_t seed = 0;
    /// Simulated time after which an unfinished run is declared hung.
    double hang_horizon = std::numeric_limits<double>::infinity();
    /// Record the event trace in the result.
    bool record_trace = true;
};

enum class EventKind : std::uint8_t {
    Failure,
    PerturbStart,
    PerturbEnd,
    ChunkCompletion,
    WorkRequest,
};

std::string_view to_string(EventKind k);

/// One trace record. For WorkRequest the chunk is the assignment made in reply
/// (size 0 for a "wait" reply); for ChunkCompletion it is the reported chunk.
struct TraceRecord {
    double time = 0.0;
    EventKind kind = EventKind::WorkRequest;
    std::size_t pe = 0;
    Count chunk_start = 0;
    Count chunk_size = 0;
    bool duplicate = false;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct SimResult {
    bool completed = false;
    /// Time of the report that finished the last iteration; +inf when not completed.
    double t_par = std::numeric_limits<double>::infinity();
    /// Time the simulation stopped (t_par, last event, or the hang horizon).
    double end_time = 0.0;
    std::vector<double> per_pe_busy;
    std::vector<double> per_pe_idle;
    /// Iterations whose computation finished (report sent) by end_time.
    std::vector<Count> per_pe_executed;
    Count n_chunks = 0;
    Count n_rescheduled = 0;
    /// Iterations executed more than once or lost to failure.
    Count n_wasted_iterations = 0;
    /// Chunks cut short by a failure of their assignee.
    Count n_lost_chunks = 0;
    std::vector<TraceRecord> trace;
};

/// Fills `pe_models` with P unperturbed PEs grouped into nodes of
/// `pes_per_node` if it is empty.
void ensure_pe_models(SimConfig& cfg);

/// Runs the master-worker protocol to completion or hang. Throws
/// std::invalid_argument for an invalid configuration.
SimResult run_simulation(const SimConfig& cfg);

/// Sets `count` distinct workers to fail uniformly in (0, baseline), where
/// baseline is the same-seed makespan with failures removed. Also sets the
/// hang horizon to 100 x baseline if it is unset. Throws for count >= P.
SimConfig inject_failures(SimConfig cfg, std::size_t count, std::uint64_t seed);
SimConfig inject_failures(SimConfig cfg, std::size_t count, std::uint64_t seed,
                          double baseline_makespan);

enum class PerturbationScenario : std::uint8_t { PE, Latency, Combined };

std::string_view to_string(PerturbationScenario s);

struct PerturbationParams {
    double speed_multiplier = 0.5;
    double extra_latency = 10.0;
    double start = 0.0;
    double end = std::numeric_limits<double>::infinity();
};

/// Slows every PE of `node` and/or delays its messages. No-op values
/// (multiplier 1, delay 0) leave the configuration unchanged.
SimConfig inject_perturbations(SimConfig cfg, PerturbationScenario scenario, std::size_t node,
                               const PerturbationParams& params = {});

/// Tab-separated: time, kind, pe, chunk_start, chunk_size, duplicate_flag.
void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace);

}  // namespace rdlb
