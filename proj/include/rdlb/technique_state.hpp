#pragma once

#include <rdlb/task_ledger.hpp>
#include <rdlb/technique.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace rdlb {

// ---------------------------------------------------------------------------
// Closed-form chunk rules. Each is a pure function so it can be checked (and
// swapped) in isolation from the stateful dispatcher below.
// ---------------------------------------------------------------------------

/// Guided self-scheduling: max(1, ceil(R / P)).
Count chunk_gss(Count remaining, Count pes);

/// Fixed-size chunk from scheduling overhead `h` and iteration-time standard
/// deviation `sigma`:
///   max(1, round( (sqrt(2) N h / (sigma P sqrt(ln P)))^(2/3) ))
/// Throws std::invalid_argument for P < 2, h <= 0 or sigma <= 0.
Count chunk_fsc(Count n, Count pes, double h, double sigma);

/// Number of chunks practical factoring emits for (N, P).
Count fac_chunk_count(Count n, Count pes);

/// Modified FSC: N divided by the practical-FAC chunk count.
Count chunk_mfsc(Count n, Count pes);

/// Chunk taken from a factoring batch by a PE with relative weight `weight`.
Count chunk_weighted(Count batch, Count pes, double weight);

/// Factoring rule with per-PE estimates of the single-iteration mean and
/// standard deviation. `mu` and `sigma` cover all PEs.
Count chunk_af(Count remaining, std::span<const double> mu, std::span<const double> sigma,
               std::size_t pe);

/// Lower and upper bound of a RAND chunk.
struct RandBounds {
    Count lo;
    Count hi;
};
RandBounds rand_bounds(Count n, Count pes);

/// One measured chunk execution, as reported back to the master.
struct PerfSample {
    Count chunk_size = 0;
    double compute_seconds = 0.0;
    /// Time between the work request and receipt of the assignment.
    double overhead_seconds = 0.0;
};

/// New relative PE weights (sum == P) from per-PE performance samples.
///
/// The rate of PE i is iterations executed / time; -D and -E include the
/// scheduling overhead in the time. PEs without samples take the mean rate of
/// those with samples; with no samples at all the weights are uniform. A PE
/// whose measured time is zero gets the largest finite rate.
std::vector<double> update_weights(Technique variant,
                                   std::span<const std::vector<PerfSample>> samples);

/// Knobs that some techniques need at construction.
struct TechniqueParams {
    /// Scheduling overhead per assignment, seconds (FSC).
    double h = 0.0;
    /// Standard deviation of iteration execution times, seconds (FSC).
    double sigma = 0.0;
    /// Fixed WF weights; uniform when empty. Normalized to sum P.
    std::vector<double> wf_weights;
    /// RAND stream seed.
    std::uint64_t seed = 0;
};

/// Evolving scheduling state of one loop execution.
///
/// Not thread-safe; a state may be moved between threads but must not be
/// mutated concurrently.
class TechniqueState {
public:
    TechniqueState(Technique technique, Count n, Count pes, TechniqueParams params = {});

    Technique technique() const { return technique_; }
    Count n() const { return n_; }
    Count pes() const { return pes_; }
    Count remaining() const { return remaining_; }

    /// Size of the next chunk for `pe`, or nullopt when no iterations remain.
    /// Decrements remaining() by the returned size.
    std::optional<Count> next_chunk(std::size_t pe);

    /// Feeds a completed chunk's timings to the adaptive techniques.
    /// AWF-C/-E update weights immediately, AWF-B/-D at the next batch start,
    /// AF refreshes the PE's iteration-time estimates.
    void record_chunk(std::size_t pe, const PerfSample& sample);

    std::span<const double> weights() const { return weights_; }
    std::span<const std::vector<PerfSample>> perf_samples() const { return samples_; }

    /// AF estimates; nullopt until the PE has completed a chunk.
    std::optional<double> mu(std::size_t pe) const;
    std::optional<double> sigma(std::size_t pe) const;

    Count fsc_chunk() const { return fsc_chunk_; }
    /// Chunks still to be handed out from the current FAC/WF/AWF batch.
    Count batch_remaining() const { return batch_chunks_left_; }

private:
    struct RunningStats {
        Count count = 0;
        double mean = 0.0;
        double m2 = 0.0;

        void add(double x);
        double stddev() const;
    };

    Count chunk_static();
    Count chunk_tss();
    Count chunk_batched(std::size_t pe);
    Count chunk_rand();
    Count chunk_adaptive_factoring(std::size_t pe);

    Technique technique_;
    Count n_;
    Count pes_;
    Count remaining_;

    Count static_issued_ = 0;

    Count fsc_chunk_ = 1;

    double tss_next_ = 0.0;
    double tss_decrement_ = 0.0;

    Count batch_size_ = 0;
    Count batch_chunks_left_ = 0;
    bool weights_dirty_ = false;

    std::vector<double> weights_;
    std::vector<std::vector<PerfSample>> samples_;
    std::vector<RunningStats> af_stats_;

    std::mt19937_64 rng_;
};

}  // namespace rdlb
