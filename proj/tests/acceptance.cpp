// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "cost_oracle.hpp"

#include <rdlb/experiment.hpp>
#include <rdlb/metrics.hpp>
#include <rdlb/simulator.hpp>
#include <rdlb/technique_state.hpp>

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

using namespace rdlb;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void fail(std::string why) {
        if (pass) detail.clear();
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += std::move(why);
    }
};

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<Technique> dynamic_techniques() {
    return {kDynamicTechniques.begin(), kDynamicTechniques.end()};
}

ExperimentMatrix base_matrix() {
    ExperimentMatrix m = default_matrix();  // P=16, N=10000, constant 10 ms
    m.jobs = jobs();
    return m;
}

SimConfig gaussian(SimConfig cfg) {
    cfg.workload.kind = WorkloadKind::Gaussian;
    cfg.workload.mean = 0.01;
    cfg.workload.sigma = 0.001;
    return cfg;
}

const Cell& find_cell(const MatrixResult& r, Technique t, bool rdlb, const std::string& scenario) {
    for (const auto& c : r.cells) {
        if (c.technique == t && c.rdlb == rdlb && c.scenario.label() == scenario) return c;
    }
    throw std::logic_error("missing cell " + technique_label(t, rdlb) + " " + scenario);
}

Verdict fault_tolerance() {
    const auto start = std::chrono::steady_clock::now();
    ExperimentMatrix m = base_matrix();
    m.techniques = dynamic_techniques();
    m.scenarios = {parse_scenario("failures:1"), parse_scenario("failures:8"),
                   parse_scenario("failures:15")};
    m.trials = 10;
    m.rdlb = RdlbMode::On;
    const auto r = run_matrix(m);
    Verdict v;
    std::size_t runs = 0;
    for (const auto& c : r.cells) {
        runs += c.trials.size();
        if (c.summary.completion_rate != 1.0) {
            v.fail(fmt::format("{} {} completion {}", c.summary.technique, c.summary.scenario,
                               c.summary.completion_rate));
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60.0) v.fail(fmt::format("took {:.1f} s", secs));
    if (v.pass) v.detail = fmt::format("{} runs complete in {:.1f} s", runs, secs);
    return v;
}

Verdict hang_without_rdlb() {
    const ExperimentMatrix m = base_matrix();
    const Scenario one = parse_scenario("failures:1");
    Verdict v;
    std::size_t struck = 0;
    for (Technique t : kDynamicTechniques) {
        for (std::size_t seed = 0; seed < 10; ++seed) {
            auto base_cfg = make_run_config(m, t, false, Scenario{}, seed, std::nullopt);
            base_cfg.record_trace = false;
            const auto base = run_simulation(base_cfg);
            auto cfg = make_run_config(m, t, false, one, seed, base.t_par);
            cfg.record_trace = false;
            const auto r = run_simulation(cfg);
            if (r.n_lost_chunks == 0) continue;
            ++struck;
            if (r.completed) v.fail(fmt::format("{} seed {} completed", to_string(t), seed));
        }
    }
    if (struck == 0) v.fail("no trial lost a chunk");
    if (v.pass) v.detail = fmt::format("{} trials lost a chunk, none completed", struck);
    return v;
}

Verdict zero_overhead() {
    Verdict v;
    std::size_t pairs = 0;
    const ExperimentMatrix m = base_matrix();
    for (bool noisy : {false, true}) {
        for (Technique t : kAllTechniques) {
            for (std::size_t seed = 0; seed < 10; ++seed) {
                auto off = make_run_config(m, t, false, Scenario{}, seed, std::nullopt);
                if (noisy) off = gaussian(off);
                off.record_trace = false;
                auto on = off;
                on.rdlb_enabled = true;
                const auto a = run_simulation(off);
                const auto b = run_simulation(on);
                ++pairs;
                if (!(a.completed && b.completed && a.t_par == b.t_par)) {
                    v.fail(fmt::format("{} seed {}: {} vs {}", to_string(t), seed, a.t_par, b.t_par));
                }
            }
        }
    }
    if (v.pass) v.detail = fmt::format("{} on/off pairs identical", pairs);
    return v;
}

Verdict cost_model() {
    Verdict v;
    std::uint64_t seed = 1;
    double worst_z = 0.0;
    for (double n : {5.0, 10.0, 50.0}) {
        for (double q : {4.0, 16.0}) {
            for (double lambda : {1e-3, 1e-2}) {
                const TheoryParams p{n, q, 1.0, lambda, 1.0};
                const auto est = rdlb::oracle::monte_carlo_expected_time(p, 1'000'000, seed++);
                const double z = std::abs(expected_time_one_failure(p) - est.mean) / est.std_error;
                worst_z = std::max(worst_z, z);
                if (z > 3.0) v.fail(fmt::format("MC n={} q={} lambda={}: z={:.2f}", n, q, lambda, z));

                const double numeric = rdlb::oracle::bisect_crossover(p);
                const double rel = std::abs(checkpoint_crossover(p).threshold / numeric - 1.0);
                if (rel > 1e-9) v.fail(fmt::format("crossover n={} q={}: rel {}", n, q, rel));
            }
        }
    }
    double worst_fo = 0.0;
    for (double n : {5.0, 10.0, 50.0, 100.0}) {
        for (double q : {2.0, 4.0, 16.0, 256.0}) {
            for (double lambda_t : {1e-6, 1e-4, 1e-3, 5e-3, 1e-2}) {
                const TheoryParams p{n, q, 1.0, lambda_t / n, 1.0};
                const double exact = expected_time_one_failure(p) - p.makespan();
                const double approx = expected_time_first_order(p) - p.makespan();
                const double rel = std::abs(approx / exact - 1.0);
                worst_fo = std::max(worst_fo, rel);
                if (rel > 0.01) v.fail(fmt::format("first order n={} lambdaT={}: {}", n, lambda_t, rel));
            }
        }
    }
    if (v.pass) {
        v.detail = fmt::format("max |z| {:.2f}, first-order error {:.2g}", worst_z, worst_fo);
    }
    return v;
}

Verdict single_failure() {
    ExperimentMatrix m = base_matrix();
    m.sim = gaussian(m.sim);
    m.techniques = dynamic_techniques();
    m.scenarios = {Scenario{}, parse_scenario("failures:1")};
    m.trials = 20;
    m.rdlb = RdlbMode::On;
    const auto r = run_matrix(m);
    Verdict v;
    double worst = 0.0;
    std::string worst_name;
    for (Technique t : m.techniques) {
        const double base = find_cell(r, t, true, "baseline").summary.t_mean;
        const auto& hit = find_cell(r, t, true, "failures:1").summary;
        const double ratio = hit.completion_rate == 1.0 ? hit.t_mean / base : INFINITY;
        if (ratio > worst) {
            worst = ratio;
            worst_name = hit.technique;
        }
        if (ratio > 1.10) v.fail(fmt::format("{} {:.3f}x", hit.technique, ratio));
    }
    if (v.pass) v.detail = fmt::format("worst {} at {:.3f}x baseline", worst_name, worst);
    return v;
}

Verdict ss_most_resilient() {
    ExperimentMatrix m = base_matrix();
    m.techniques = {Technique::SS, Technique::GSS, Technique::TSS, Technique::FAC, Technique::mFSC};
    m.scenarios = {parse_scenario("failures:8")};
    m.trials = 20;
    m.rdlb = RdlbMode::On;
    const auto r = run_matrix(m);
    Verdict v;
    if (r.robustness.size() != 1) {
        v.fail("expected one robustness report");
        return v;
    }
    std::string summary;
    for (const auto& e : r.robustness[0].entries) {
        summary += fmt::format("{}{} {:.3g}", summary.empty() ? "" : ", ", e.technique, e.rho);
        if (e.technique == "SS+rDLB" && e.rho != 1.0) v.fail("SS rho " + fmt::format("{}", e.rho));
    }
    v.detail = v.pass ? "rho: " + summary : v.detail + " (rho: " + summary + ")";
    return v;
}

Verdict latency_perturbation() {
    ExperimentMatrix m = base_matrix();
    // Full 512 x 512 grid, escape counts up to 10^4, 1 us per inner step.
    m.sim.n = 512 * 512;
    m.sim.workload.kind = WorkloadKind::Mandelbrot;
    m.sim.workload.mandelbrot = MandelbrotParams{};
    m.techniques = dynamic_techniques();
    m.scenarios = {parse_scenario("latency:0:10")};
    m.trials = 20;
    m.rdlb = RdlbMode::Both;
    const auto r = run_matrix(m);
    Verdict v;
    std::size_t strict = 0;
    for (Technique t : m.techniques) {
        const auto& off = find_cell(r, t, false, "latency:0:10").summary;
        const auto& on = find_cell(r, t, true, "latency:0:10").summary;
        if (!(on.t_mean <= off.t_mean)) {
            v.fail(fmt::format("{}: on {:.4g} > off {:.4g}", to_string(t), on.t_mean, off.t_mean));
        }
        if (on.t_mean < off.t_mean) ++strict;
        if (is_adaptive(t) && !(on.t_mean < off.t_mean)) {
            v.fail(fmt::format("{}: not strictly faster ({:.4g} vs {:.4g})", to_string(t),
                               on.t_mean, off.t_mean));
        }
    }
    if (v.pass) v.detail = fmt::format("{}/{} strictly faster with rDLB", strict, m.techniques.size());
    return v;
}

Verdict chunk_sequences() {
    Verdict v;
    auto drain = [](Technique t, Count n, Count p, std::uint64_t seed) {
        TechniqueState s(t, n, p, {1e-4, 1e-3, {}, seed});
        std::vector<Count> seq;
        std::size_t pe = 0;
        while (auto k = s.next_chunk(pe)) {
            seq.push_back(*k);
            pe = (pe + 1) % static_cast<std::size_t>(p);
        }
        return seq;
    };
    const std::vector<std::pair<Technique, std::vector<Count>>> oracles{
        {Technique::GSS, {25, 19, 14, 11, 8, 6, 5, 3, 3, 2, 1, 1, 1, 1}},
        {Technique::TSS, {13, 12, 11, 10, 10, 9, 8, 7, 6, 5, 4, 4, 1}},
        {Technique::FAC, {13, 13, 13, 13, 6, 6, 6, 6, 3, 3, 3, 3, 2, 2, 2, 2, 1, 1, 1, 1}},
    };
    for (const auto& [t, expected] : oracles) {
        if (drain(t, 100, 4, 0) != expected) v.fail(fmt::format("{} sequence differs", to_string(t)));
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto seq = drain(Technique::RAND, 100, 4, seed);
        Count total = 0;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            total += seq[i];
            if (seq[i] < 1 || (i + 1 < seq.size() && seq[i] > 12)) v.fail("RAND chunk outside [1, 12]");
        }
        if (total != 100) v.fail("RAND sum");
        if (seq != drain(Technique::RAND, 100, 4, seed)) v.fail("RAND not reproducible");
    }
    std::mt19937_64 rng(8);
    for (Technique t : kAllTechniques) {
        for (int i = 0; i < 200; ++i) {
            const Count min_p = t == Technique::FSC ? 2 : 1;
            const Count n = std::uniform_int_distribution<Count>(min_p, 100'000)(rng);
            const Count p = std::uniform_int_distribution<Count>(min_p, std::min<Count>(n, 256))(rng);
            Count total = 0;
            for (Count k : drain(t, n, p, rng())) total += k;
            if (total != n) v.fail(fmt::format("{} N={} P={} sums to {}", to_string(t), n, p, total));
        }
    }
    if (v.pass) v.detail = "oracle sequences match; 2800 random (N, P) runs cover N";
    return v;
}

Verdict robustness_definition() {
    Verdict v;
    const auto r = robustness("synthetic", {{"A", 100}, {"B", 100}, {"C", 100}},
                              {{"A", 110}, {"B", 120}, {"C", 130}});
    const std::vector<double> expected{1, 2, 3};
    for (std::size_t i = 0; i < 3; ++i) {
        if (r.entries[i].rho != expected[i]) v.fail(fmt::format("rho[{}] = {}", i, r.entries[i].rho));
    }
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(1.0, 100.0);
    for (int k = 0; k < 1000; ++k) {
        TechniqueTimes base;
        TechniqueTimes pert;
        for (int i = 0; i < 5; ++i) {
            const double b = u(rng);
            base.emplace_back(fmt::format("T{}", i), b);
            pert.emplace_back(fmt::format("T{}", i), b + u(rng));
        }
        double lo = INFINITY;
        for (const auto& e : robustness("random", base, pert).entries) lo = std::min(lo, e.rho);
        if (lo != 1.0) v.fail(fmt::format("min rho {}", lo));
    }
    if (v.pass) v.detail = "rho = (1, 2, 3); min rho = 1 over 1000 random reports";
    return v;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict determinism() {
    ExperimentMatrix m = base_matrix();
    m.sim.n = 2000;
    m.sim = gaussian(m.sim);
    m.techniques = {Technique::SS, Technique::GSS, Technique::RAND, Technique::AWF_C, Technique::AF};
    m.scenarios = {Scenario{}, parse_scenario("failures:half"), parse_scenario("combined:1")};
    m.trials = 3;
    m.seed = 5;
    const auto root = std::filesystem::temp_directory_path() / "rdlb_acceptance_determinism";
    std::filesystem::remove_all(root);

    auto once = [&](const std::string& tag, unsigned j) {
        m.trace_dir = root / tag;
        m.jobs = j;
        const auto r = run_matrix(m);
        std::ostringstream os;
        write_results_csv(os, r);
        write_robustness_csv(os, r.robustness);
        return os.str();
    };
    const auto a = once("a", 1);
    const auto b = once("b", jobs() + 2);
    Verdict v;
    if (a != b) v.fail("CSV differs");
    std::size_t traces = 0;
    for (const auto& f : std::filesystem::directory_iterator(root / "a")) {
        ++traces;
        if (slurp(f.path()) != slurp(root / "b" / f.path().filename())) {
            v.fail("trace differs: " + f.path().filename().string());
        }
    }
    if (traces == 0) v.fail("no traces written");
    std::filesystem::remove_all(root);
    if (v.pass) v.detail = fmt::format("CSV and {} traces byte-identical", traces);
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"fault tolerance up to P-1 failures with rDLB", fault_tolerance},
        {"hang without rDLB when a chunk is lost", hang_without_rdlb},
        {"identical T_par with and without rDLB when nothing fails", zero_overhead},
        {"cost model vs Monte-Carlo, first-order and crossover", cost_model},
        {"one failure stays within 10% of baseline", single_failure},
        {"SS most resilient at P/2 failures", ss_most_resilient},
        {"rDLB helps under latency perturbation", latency_perturbation},
        {"chunk-sequence oracles and coverage", chunk_sequences},
        {"robustness metric normalization", robustness_definition},
        {"deterministic CSV and traces", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        fmt::print("{} criterion {}: {} [{}] ({:.1f} s)\n", v.pass ? "PASS" : "FAIL", i + 1,
                   criteria[i].first, v.detail, secs);
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
