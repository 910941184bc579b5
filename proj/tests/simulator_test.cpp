#include <rdlb/simulator.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

using namespace rdlb;

namespace {

SimConfig unit_tasks(Count n, std::size_t p, Technique t = Technique::SS) {
    SimConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.technique = t;
    cfg.workload.kind = WorkloadKind::Constant;
    cfg.workload.t = 1.0;
    return cfg;
}

SimConfig gaussian_setup(Technique t, std::uint64_t seed, Count n = 2000, std::size_t p = 8) {
    SimConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.technique = t;
    cfg.h = 1e-4;
    cfg.base_latency = 1e-5;
    cfg.workload.kind = WorkloadKind::Gaussian;
    cfg.workload.mean = 0.01;
    cfg.workload.sigma = 0.002;
    cfg.workload.seed = seed;
    cfg.seed = seed;
    return cfg;
}

Count total_executed(const SimResult& r) {
    return std::accumulate(r.per_pe_executed.begin(), r.per_pe_executed.end(), Count{0});
}

}  // namespace

TEST(Simulator, NineTasksThreePesNoFailure) {
    const auto r = run_simulation(unit_tasks(9, 3));
    ASSERT_TRUE(r.completed);
    EXPECT_DOUBLE_EQ(r.t_par, 3.0);
    EXPECT_EQ(r.per_pe_executed, (std::vector<Count>{3, 3, 3}));
    EXPECT_EQ(r.n_rescheduled, 0);
    EXPECT_EQ(r.n_wasted_iterations, 0);
    for (double b : r.per_pe_busy) EXPECT_DOUBLE_EQ(b, 3.0);
}

TEST(Simulator, FailureWithoutRescheduleHangs) {
    auto cfg = unit_tasks(9, 3);
    ensure_pe_models(cfg);
    cfg.pe_models[2].fail_at = 1.5;
    const auto r = run_simulation(cfg);
    EXPECT_FALSE(r.completed);
    EXPECT_TRUE(std::isinf(r.t_par));
    EXPECT_EQ(r.n_lost_chunks, 1);
}

TEST(Simulator, FailureWithRescheduleCompletes) {
    auto cfg = unit_tasks(9, 3);
    cfg.rdlb_enabled = true;
    ensure_pe_models(cfg);
    cfg.pe_models[2].fail_at = 1.5;
    const auto r = run_simulation(cfg);
    ASSERT_TRUE(r.completed);
    // PE2 lost iteration 5; at t=3 PE1 finds nothing unscheduled and re-runs it.
    EXPECT_DOUBLE_EQ(r.t_par, 4.0);
    EXPECT_GE(r.n_rescheduled, 1);
    const auto dup = std::find_if(r.trace.begin(), r.trace.end(), [](const TraceRecord& e) {
        return e.kind == EventKind::WorkRequest && e.duplicate;
    });
    ASSERT_NE(dup, r.trace.end());
    EXPECT_EQ(dup->chunk_start, 5);
    EXPECT_EQ(dup->pe, 1u);
    EXPECT_DOUBLE_EQ(dup->time, 3.0);
    const auto done = std::find_if(r.trace.begin(), r.trace.end(), [](const TraceRecord& e) {
        return e.kind == EventKind::ChunkCompletion && e.duplicate && e.chunk_start == 5;
    });
    ASSERT_NE(done, r.trace.end());
    EXPECT_EQ(done->pe, 1u);
}

TEST(Simulator, SchedulingOverheadSerializesMaster) {
    auto cfg = unit_tasks(3, 3);
    cfg.h = 0.25;
    const auto r = run_simulation(cfg);
    ASSERT_TRUE(r.completed);
    // Assignments leave at 0.25, 0.5, 0.75; last chunk ends at 1.75.
    EXPECT_DOUBLE_EQ(r.t_par, 1.75);
}

TEST(Simulator, LatencyPerturbationAddsTwentySecondsPerCycle) {
    auto cfg = unit_tasks(60, 2);
    cfg.pes_per_node = 1;
    cfg = inject_perturbations(cfg, PerturbationScenario::Latency, 1);
    const auto r = run_simulation(cfg);
    ASSERT_TRUE(r.completed);
    std::vector<double> requests;
    for (const auto& e : r.trace) {
        if (e.pe == 1 && e.kind == EventKind::WorkRequest && e.chunk_size > 0) {
            requests.push_back(e.time);
        }
    }
    ASSERT_GE(requests.size(), 2u);
    EXPECT_DOUBLE_EQ(requests[0], 10.0);
    // Unperturbed cycle is 1 s (compute only); perturbed is 1 + 2 x 10.
    EXPECT_DOUBLE_EQ(requests[1] - requests[0], 21.0);
}

TEST(Simulator, SpeedScheduleAppliesPiecewise) {
    auto cfg = unit_tasks(2, 1, Technique::Static);
    ensure_pe_models(cfg);
    cfg.pe_models[0].speed_schedule.push_back({1.0, 3.0, 0.5});
    const auto r = run_simulation(cfg);
    ASSERT_TRUE(r.completed);
    EXPECT_DOUBLE_EQ(r.t_par, 3.0);

    auto slow = unit_tasks(4, 1);
    slow = inject_perturbations(slow, PerturbationScenario::PE, 0);
    EXPECT_DOUBLE_EQ(run_simulation(slow).t_par, 8.0);
}

TEST(Simulator, NeutralPerturbationIsIdentical) {
    const auto base = gaussian_setup(Technique::FAC, 3);
    PerturbationParams neutral;
    neutral.speed_multiplier = 1.0;
    neutral.extra_latency = 0.0;
    const auto a = run_simulation(base);
    const auto b = run_simulation(inject_perturbations(base, PerturbationScenario::Combined, 0, neutral));
    EXPECT_EQ(a.t_par, b.t_par);
    EXPECT_EQ(a.trace, b.trace);
}

TEST(Simulator, CombinedIsComposition) {
    const auto base = gaussian_setup(Technique::GSS, 4);
    const auto both = inject_perturbations(base, PerturbationScenario::Combined, 1);
    const auto seq = inject_perturbations(inject_perturbations(base, PerturbationScenario::PE, 1),
                                          PerturbationScenario::Latency, 1);
    const auto a = run_simulation(both);
    const auto b = run_simulation(seq);
    EXPECT_EQ(a.t_par, b.t_par);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_THROW(inject_perturbations(base, PerturbationScenario::PE, 99), std::invalid_argument);
}

TEST(Simulator, Deterministic) {
    for (Technique t : {Technique::RAND, Technique::AWF_E, Technique::AF}) {
        auto cfg = inject_failures(gaussian_setup(t, 9), 3, 9);
        cfg.rdlb_enabled = true;
        const auto a = run_simulation(cfg);
        const auto b = run_simulation(cfg);
        EXPECT_EQ(a.t_par, b.t_par);
        EXPECT_EQ(a.trace, b.trace);
        EXPECT_EQ(a.per_pe_busy, b.per_pe_busy);
        std::ostringstream sa;
        std::ostringstream sb;
        write_trace(sa, a.trace);
        write_trace(sb, b.trace);
        EXPECT_EQ(sa.str(), sb.str());
    }
}

TEST(Simulator, TraceFormat) {
    auto cfg = unit_tasks(2, 1);
    const auto r = run_simulation(cfg);
    std::ostringstream os;
    write_trace(os, r.trace);
    EXPECT_EQ(os.str(),
              "0\tWorkRequest\t0\t0\t1\t0\n"
              "1\tChunkCompletion\t0\t0\t1\t0\n"
              "1\tWorkRequest\t0\t1\t1\t0\n"
              "2\tChunkCompletion\t0\t1\t1\t0\n");
}

TEST(Simulator, InvalidConfigRejected) {
    auto cfg = unit_tasks(4, 2);
    cfg.h = -1.0;
    EXPECT_THROW(run_simulation(cfg), std::invalid_argument);
    cfg = unit_tasks(4, 2);
    ensure_pe_models(cfg);
    cfg.pe_models[0].speed_schedule.push_back({2.0, 1.0, 0.5});
    EXPECT_THROW(run_simulation(cfg), std::invalid_argument);
    cfg = unit_tasks(4, 2);
    cfg.iteration_times = std::make_shared<const std::vector<double>>(3, 1.0);
    EXPECT_THROW(run_simulation(cfg), std::invalid_argument);
}

TEST(InjectFailures, CountsAndDeterminism) {
    const auto base = gaussian_setup(Technique::GSS, 1);
    const auto zero = inject_failures(base, 0, 5);
    EXPECT_TRUE(zero.pe_models.empty());
    EXPECT_THROW(inject_failures(base, base.p, 5), std::invalid_argument);

    const double baseline = run_simulation(base).t_par;
    const auto a = inject_failures(base, base.p - 1, 5);
    const auto b = inject_failures(base, base.p - 1, 5);
    std::size_t failed = 0;
    for (std::size_t i = 0; i < base.p; ++i) {
        EXPECT_EQ(a.pe_models[i].fail_at, b.pe_models[i].fail_at);
        if (a.pe_models[i].fail_at) {
            ++failed;
            EXPECT_GT(*a.pe_models[i].fail_at, 0.0);
            EXPECT_LT(*a.pe_models[i].fail_at, baseline);
        }
    }
    EXPECT_EQ(failed, base.p - 1);
    EXPECT_DOUBLE_EQ(a.hang_horizon, 100.0 * baseline);

    auto robust = a;
    robust.rdlb_enabled = true;
    EXPECT_TRUE(run_simulation(robust).completed);
}

TEST(SimulatorProperties, NoLostWorkUnderReschedule) {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 60; ++round) {
        const Technique t = kAllTechniques[rng() % kAllTechniques.size()];
        const std::size_t p = 2 + rng() % 11;
        const std::size_t k = rng() % p;
        const std::uint64_t seed = rng();
        auto cfg = gaussian_setup(t, seed, 300 + static_cast<Count>(rng() % 700), p);
        cfg.rdlb_enabled = true;
        cfg = inject_failures(cfg, k, seed);
        const auto r = run_simulation(cfg);
        ASSERT_TRUE(r.completed) << to_string(t) << " p=" << p << " k=" << k;
        EXPECT_LE(r.t_par, cfg.hang_horizon);
        EXPECT_GE(total_executed(r), cfg.n);
    }
}

TEST(SimulatorProperties, RescheduleIsFreeWithoutFailures) {
    for (Technique t : kAllTechniques) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            auto off = gaussian_setup(t, seed);
            auto on = off;
            on.rdlb_enabled = true;
            const auto a = run_simulation(off);
            const auto b = run_simulation(on);
            ASSERT_TRUE(a.completed);
            ASSERT_TRUE(b.completed);
            EXPECT_EQ(a.t_par, b.t_par) << to_string(t) << " seed " << seed;
            EXPECT_EQ(total_executed(a), off.n);
            EXPECT_EQ(a.n_wasted_iterations, 0);
        }
    }
}

TEST(SimulatorProperties, Causality) {
    for (Technique t : {Technique::SS, Technique::TSS, Technique::AWF_D, Technique::AF}) {
        auto cfg = gaussian_setup(t, 21);
        cfg.rdlb_enabled = true;
        cfg = inject_perturbations(cfg, PerturbationScenario::Latency, 1,
                                   PerturbationParams{0.5, 0.3, 0.0, 1e300});
        cfg = inject_failures(cfg, 2, 21);
        WorkloadSpec spec = cfg.workload;
        spec.n = cfg.n;
        const auto times = generate(spec);
        const auto r = run_simulation(cfg);
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
            const auto& done = r.trace[i];
            if (done.kind != EventKind::ChunkCompletion) continue;
            // Latest assignment of this range to this PE before the report.
            auto assign = std::find_if(
                std::make_reverse_iterator(r.trace.begin() + static_cast<std::ptrdiff_t>(i)),
                r.trace.rend(), [&](const TraceRecord& e) {
                    return e.kind == EventKind::WorkRequest && e.pe == done.pe &&
                           e.chunk_start == done.chunk_start && e.chunk_size == done.chunk_size;
                });
            ASSERT_NE(assign, r.trace.rend());
            double compute = 0.0;
            for (Count j = done.chunk_start; j < done.chunk_start + done.chunk_size; ++j) {
                compute += times[static_cast<std::size_t>(j)];
            }
            EXPECT_GE(done.time, assign->time + cfg.h + compute + 2 * cfg.base_latency - 1e-9);
        }
    }
}

TEST(SimulatorProperties, FailedHolderHangsWithoutReschedule) {
    int lost_runs = 0;
    for (Technique t : kDynamicTechniques) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto cfg = inject_failures(gaussian_setup(t, seed), 1, seed);
            const auto r = run_simulation(cfg);
            if (r.n_lost_chunks > 0) {
                ++lost_runs;
                EXPECT_FALSE(r.completed) << to_string(t) << " seed " << seed;
            } else {
                EXPECT_TRUE(r.completed);
            }
        }
    }
    EXPECT_GT(lost_runs, 0);
}

TEST(SimulatorProperties, BusyPlusIdleIsLifetime) {
    auto cfg = inject_failures(gaussian_setup(Technique::FAC, 2), 3, 2);
    cfg.rdlb_enabled = true;
    const auto r = run_simulation(cfg);
    ASSERT_TRUE(r.completed);
    for (std::size_t i = 0; i < cfg.p; ++i) {
        const double life = std::min(r.t_par, cfg.pe_models[i].fail_at.value_or(r.t_par));
        EXPECT_NEAR(r.per_pe_busy[i] + r.per_pe_idle[i], life, 1e-9);
    }
    EXPECT_GT(r.n_wasted_iterations, 0);
}
