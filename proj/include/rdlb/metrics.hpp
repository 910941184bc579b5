#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rdlb {

// ---------------------------------------------------------------------------
// Cost model of rescheduling versus checkpointing for one fail-stop failure,
// n equal tasks per PE of duration t on q PEs.
// ---------------------------------------------------------------------------

struct TheoryParams {
    double n = 1.0;
    double q = 2.0;
    double t = 1.0;
    double lambda = 0.0;
    /// Checkpoint cost, seconds.
    double checkpoint_cost = 0.0;

    /// Failure-free makespan n * t.
    double makespan() const { return n * t; }
    /// Probability of a failure within the makespan, 1 - exp(-lambda * T).
    double failure_probability() const;
};

/// Throws std::invalid_argument unless n >= 1, q >= 2, t > 0, lambda >= 0, C >= 0.
void validate(const TheoryParams& p);

/// T + p_F (t / 2) (n + 1) / (q - 1).
double expected_time_one_failure(const TheoryParams& p);

/// T + lambda T (t / 2) (n + 1) / (q - 1).
double expected_time_first_order(const TheoryParams& p);

/// Relative overhead of rescheduling, (lambda t / 2) (n + 1) / (q - 1).
double overhead_rdlb(const TheoryParams& p);

/// Relative overhead of optimal periodic checkpointing, sqrt(2 lambda C).
double overhead_checkpoint(const TheoryParams& p);

struct CrossoverResult {
    /// Checkpoint cost at and above which rescheduling is cheaper:
    /// (lambda t^2 / 8) (n + 1)^2 / (q - 1)^2.
    double threshold = 0.0;
    /// overhead_rdlb <= overhead_checkpoint at the given C.
    bool rdlb_better = false;
    /// The first-order expansions assume C << 1 / lambda (here lambda C <= 0.1).
    bool first_order_regime = true;
};

CrossoverResult checkpoint_crossover(const TheoryParams& p);

/// Makespan max_i sum_j t_ij from per-PE task times (no-failure general case).
double makespan_from_task_times(std::span<const std::vector<double>> per_pe_times);

// ---------------------------------------------------------------------------
// Robustness radius and resilience / flexibility metric.
// ---------------------------------------------------------------------------

struct RobustnessEntry {
    std::string technique;
    double baseline = 0.0;
    double perturbed = 0.0;
    /// perturbed - baseline, clamped at 0; +inf if the perturbed run never finished.
    double radius = 0.0;
    /// radius / minimum radius; 1 marks the most robust technique.
    double rho = 1.0;
};

struct RobustnessReport {
    std::string scenario;
    std::vector<RobustnessEntry> entries;
    /// Minimum radius was zero (or no finite radius existed).
    bool degenerate = false;
    std::vector<std::string> warnings;
};

using TechniqueTimes = std::vector<std::pair<std::string, double>>;

/// Pairs techniques by name; throws std::invalid_argument if the two sets differ.
RobustnessReport robustness(std::string scenario, const TechniqueTimes& baselines,
                            const TechniqueTimes& perturbed);

/// CSV: technique,scenario,T_baseline,T_perturbed,radius,rho (header when asked).
void write_robustness_csv(std::ostream& out, std::span<const RobustnessReport> reports,
                          bool header = true);

}  // namespace rdlb
