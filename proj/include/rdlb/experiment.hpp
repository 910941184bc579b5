#pragma once

#include <rdlb/metrics.hpp>
#include <rdlb/simulator.hpp>
#include <rdlb/technique.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rdlb {

/// Bad flag, config line, technique or scenario name.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ScenarioKind : std::uint8_t { Baseline, Failures, PE, Latency, Combined };

/// One execution scenario of the experiment matrix.
///
/// Text form: `baseline`, `failures:K` with K a count, `half` (P/2) or `P-1`,
/// `pe[:NODE[:MULT]]`, `latency[:NODE[:DELAY]]`, `combined[:NODE[:MULT[:DELAY]]]`.
struct Scenario {
    enum class CountMode : std::uint8_t { Absolute, Half, AllButOne };

    ScenarioKind kind = ScenarioKind::Baseline;
    CountMode count_mode = CountMode::Absolute;
    std::size_t count = 0;
    std::size_t node = 0;
    double multiplier = 0.5;
    double delay = 10.0;

    /// Number of failures for P workers.
    std::size_t failures(std::size_t p) const;
    /// Canonical text form, used as the CSV scenario label.
    std::string label() const;
    bool is_failure() const { return kind == ScenarioKind::Failures; }
};

/// Throws UsageError on malformed input.
Scenario parse_scenario(std::string_view text);

enum class RdlbMode : std::uint8_t { Off, On, Both };

RdlbMode parse_rdlb_mode(std::string_view text);

/// Grid for the closed-form cost model table; every combination is emitted.
struct TheoryGrid {
    std::vector<double> n{5, 10, 50};
    std::vector<double> q{4, 16, 256};
    std::vector<double> t{1.0};
    std::vector<double> lambda{1e-3, 1e-2};
    std::vector<double> checkpoint_cost{1.0};
};

struct ExperimentMatrix {
    std::vector<Technique> techniques;
    std::vector<Scenario> scenarios;
    std::size_t trials = 20;
    std::uint64_t seed = 0;
    RdlbMode rdlb = RdlbMode::Both;
    /// Template; N, P, h, latency, workload and node size come from here.
    SimConfig sim;
    /// Hang horizon as a multiple of the same-seed baseline makespan.
    double hang_factor = 100.0;
    unsigned jobs = 1;
    std::filesystem::path out = "results.csv";
    std::optional<std::filesystem::path> robustness_out;
    std::optional<std::filesystem::path> trace_dir;
    /// Replay iteration times from a file instead of generating them.
    std::optional<std::filesystem::path> times_file;
    TheoryGrid theory;
};

/// Desk-scale template: P=16, N=10000, h=1e-4 s, base latency 1e-5 s,
/// constant 10 ms iterations, all techniques, baseline scenario only.
ExperimentMatrix default_matrix();

/// Applies `key = value` lines (see docs/config.md). Repeated `technique` and
/// `scenario` lines accumulate; the first one replaces the default list.
void apply_config(ExperimentMatrix& m, std::istream& in);
void load_config(ExperimentMatrix& m, const std::filesystem::path& path);

/// Throws UsageError if the matrix cannot run.
void validate(const ExperimentMatrix& m);

/// One simulated run.
struct TrialRecord {
    std::string technique;
    std::string scenario;
    std::size_t trial = 0;
    bool completed = false;
    double t_par = 0.0;
    Count n_rescheduled = 0;
    Count wasted_iterations = 0;
};

/// Aggregate over the trials of one (technique, rDLB, scenario) cell.
/// Time statistics use completed trials only.
struct CellSummary {
    std::string technique;
    std::string scenario;
    std::size_t trials = 0;
    double completion_rate = 0.0;
    double t_mean = 0.0;
    double t_std = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    double rescheduled_mean = 0.0;
    double rescheduled_std = 0.0;
    double wasted_mean = 0.0;
    double wasted_std = 0.0;
};

struct Cell {
    Technique technique = Technique::SS;
    bool rdlb = false;
    Scenario scenario;
    std::vector<TrialRecord> trials;
    CellSummary summary;
};

struct MatrixResult {
    /// Ordered by technique, then rDLB off/on, then scenario, then trial.
    std::vector<Cell> cells;
    /// One per (rDLB mode, non-baseline scenario), against baseline means.
    std::vector<RobustnessReport> robustness;
};

/// "GSS" or "GSS+rDLB".
std::string technique_label(Technique t, bool rdlb);

/// Simulation config of one run; `baseline_makespan` is required for failure
/// scenarios and sets the hang horizon.
SimConfig make_run_config(const ExperimentMatrix& m, Technique t, bool rdlb,
                          const Scenario& scenario, std::size_t trial,
                          std::optional<double> baseline_makespan);

MatrixResult run_matrix(const ExperimentMatrix& m);

CellSummary summarize(std::string technique, std::string scenario,
                      const std::vector<TrialRecord>& trials);

/// Header `technique,scenario,trial,completed,t_par,n_rescheduled,wasted_iters`,
/// per-trial rows, then rows with trial = mean, std, min, max per cell.
void write_results_csv(std::ostream& out, const MatrixResult& result);

/// Cost-model table over every combination of the grid.
void write_theory_csv(std::ostream& out, const TheoryGrid& grid);

}  // namespace rdlb
