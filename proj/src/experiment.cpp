#include <rdlb/experiment.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

namespace rdlb {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        parts.push_back(trim(s.substr(pos, next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

double parse_double(std::string_view text, std::string_view what) {
    const std::string s(trim(text));
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        throw UsageError(fmt::format("{}: '{}' is not a number", what, s));
    }
    return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
    const auto s = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw UsageError(fmt::format("{}: '{}' is not a non-negative integer", what, s));
    }
    return v;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    for (auto part : split(text, ',')) out.push_back(parse_double(part, what));
    if (out.empty()) throw UsageError(fmt::format("{}: empty list", what));
    return out;
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first error.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct Stats {
    double mean = 0.0;
    double std = 0.0;
    double min = 0.0;
    double max = 0.0;
};

Stats describe(const std::vector<double>& xs) {
    Stats s;
    if (xs.empty()) {
        // No completed run: makespan is unbounded, its spread undefined.
        s.mean = s.min = s.max = std::numeric_limits<double>::infinity();
        s.std = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    s.min = *std::min_element(xs.begin(), xs.end());
    s.max = *std::max_element(xs.begin(), xs.end());
    return s;
}

std::string sanitize(std::string s) {
    for (auto& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
    }
    return s;
}

}  // namespace

std::size_t Scenario::failures(std::size_t p) const {
    if (kind != ScenarioKind::Failures) return 0;
    switch (count_mode) {
    case CountMode::Absolute: return count;
    case CountMode::Half: return p / 2;
    case CountMode::AllButOne: return p == 0 ? 0 : p - 1;
    }
    return 0;
}

std::string Scenario::label() const {
    switch (kind) {
    case ScenarioKind::Baseline: return "baseline";
    case ScenarioKind::Failures:
        switch (count_mode) {
        case CountMode::Absolute: return fmt::format("failures:{}", count);
        case CountMode::Half: return "failures:half";
        case CountMode::AllButOne: return "failures:P-1";
        }
        break;
    case ScenarioKind::PE: return fmt::format("pe:{}:{}", node, multiplier);
    case ScenarioKind::Latency: return fmt::format("latency:{}:{}", node, delay);
    case ScenarioKind::Combined: return fmt::format("combined:{}:{}:{}", node, multiplier, delay);
    }
    return "?";
}

Scenario parse_scenario(std::string_view text) {
    const auto parts = split(trim(text), ':');
    const auto name = lower(parts[0]);
    Scenario s;
    auto expect_at_most = [&](std::size_t n) {
        if (parts.size() > n) throw UsageError(fmt::format("scenario '{}': too many fields", text));
    };
    if (name == "baseline") {
        expect_at_most(1);
        s.kind = ScenarioKind::Baseline;
    } else if (name == "failures") {
        expect_at_most(2);
        if (parts.size() < 2) throw UsageError("scenario 'failures' needs a count");
        s.kind = ScenarioKind::Failures;
        const auto c = lower(parts[1]);
        if (c == "half" || c == "p/2") {
            s.count_mode = Scenario::CountMode::Half;
        } else if (c == "p-1" || c == "pm1") {
            s.count_mode = Scenario::CountMode::AllButOne;
        } else {
            s.count = static_cast<std::size_t>(parse_u64(parts[1], "failure count"));
        }
    } else if (name == "pe") {
        expect_at_most(3);
        s.kind = ScenarioKind::PE;
        if (parts.size() > 1) s.node = static_cast<std::size_t>(parse_u64(parts[1], "node"));
        if (parts.size() > 2) s.multiplier = parse_double(parts[2], "speed multiplier");
    } else if (name == "latency") {
        expect_at_most(3);
        s.kind = ScenarioKind::Latency;
        if (parts.size() > 1) s.node = static_cast<std::size_t>(parse_u64(parts[1], "node"));
        if (parts.size() > 2) s.delay = parse_double(parts[2], "latency delay");
    } else if (name == "combined") {
        expect_at_most(4);
        s.kind = ScenarioKind::Combined;
        if (parts.size() > 1) s.node = static_cast<std::size_t>(parse_u64(parts[1], "node"));
        if (parts.size() > 2) s.multiplier = parse_double(parts[2], "speed multiplier");
        if (parts.size() > 3) s.delay = parse_double(parts[3], "latency delay");
    } else {
        throw UsageError(fmt::format("unknown scenario '{}'", text));
    }
    if (!(s.multiplier > 0.0) || s.multiplier > 1.0) {
        throw UsageError(fmt::format("scenario '{}': multiplier must be in (0, 1]", text));
    }
    if (s.delay < 0.0) throw UsageError(fmt::format("scenario '{}': delay must be >= 0", text));
    return s;
}

RdlbMode parse_rdlb_mode(std::string_view text) {
    const auto s = lower(trim(text));
    if (s == "on") return RdlbMode::On;
    if (s == "off") return RdlbMode::Off;
    if (s == "both") return RdlbMode::Both;
    throw UsageError(fmt::format("rdlb: expected on, off or both, got '{}'", text));
}

ExperimentMatrix default_matrix() {
    ExperimentMatrix m;
    m.techniques.assign(kAllTechniques.begin(), kAllTechniques.end());
    m.scenarios = {Scenario{}};
    m.sim.n = 10'000;
    m.sim.p = 16;
    m.sim.h = 1e-4;
    m.sim.base_latency = 1e-5;
    m.sim.pes_per_node = 4;
    m.sim.workload.kind = WorkloadKind::Constant;
    m.sim.workload.t = 0.01;
    m.sim.record_trace = false;
    return m;
}

void apply_config(ExperimentMatrix& m, std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    bool techniques_seen = false;
    bool scenarios_seen = false;
    std::optional<double> cv;
    std::optional<std::string> workload_name;
    bool width_set = false;

    while (std::getline(in, line)) {
        ++lineno;
        auto text = std::string_view(line);
        if (const auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError(fmt::format("config line {}: expected key = value", lineno));
        }
        const auto key = lower(trim(text.substr(0, eq)));
        const auto value = trim(text.substr(eq + 1));
        const auto what = fmt::format("config line {} ({})", lineno, key);

        if (key == "n") {
            m.sim.n = static_cast<Count>(parse_u64(value, what));
        } else if (key == "p") {
            m.sim.p = static_cast<std::size_t>(parse_u64(value, what));
        } else if (key == "h") {
            m.sim.h = parse_double(value, what);
        } else if (key == "base_latency") {
            m.sim.base_latency = parse_double(value, what);
        } else if (key == "pes_per_node") {
            m.sim.pes_per_node = static_cast<std::size_t>(parse_u64(value, what));
        } else if (key == "seed") {
            m.seed = parse_u64(value, what);
        } else if (key == "trials") {
            m.trials = static_cast<std::size_t>(parse_u64(value, what));
        } else if (key == "rdlb") {
            m.rdlb = parse_rdlb_mode(value);
        } else if (key == "jobs") {
            m.jobs = static_cast<unsigned>(parse_u64(value, what));
        } else if (key == "hang_factor") {
            m.hang_factor = parse_double(value, what);
        } else if (key == "out") {
            m.out = std::string(value);
        } else if (key == "robustness_out") {
            m.robustness_out = std::string(value);
        } else if (key == "trace_dir") {
            m.trace_dir = std::string(value);
        } else if (key == "technique") {
            if (!techniques_seen) m.techniques.clear();
            techniques_seen = true;
            const auto t = parse_technique(value);
            if (!t) throw UsageError(fmt::format("{}: unknown technique '{}'", what, value));
            m.techniques.push_back(*t);
        } else if (key == "scenario") {
            if (!scenarios_seen) m.scenarios.clear();
            scenarios_seen = true;
            m.scenarios.push_back(parse_scenario(value));
        } else if (key == "workload") {
            workload_name = lower(value);
        } else if (key == "workload.t") {
            m.sim.workload.t = parse_double(value, what);
        } else if (key == "workload.lo") {
            m.sim.workload.lo = parse_double(value, what);
        } else if (key == "workload.hi") {
            m.sim.workload.hi = parse_double(value, what);
        } else if (key == "workload.mean") {
            m.sim.workload.mean = parse_double(value, what);
        } else if (key == "workload.sigma") {
            m.sim.workload.sigma = parse_double(value, what);
        } else if (key == "workload.cv") {
            cv = parse_double(value, what);
        } else if (key == "workload.file") {
            m.times_file = std::string(value);
        } else if (key == "mandelbrot.width") {
            m.sim.workload.mandelbrot.width = static_cast<Count>(parse_u64(value, what));
            width_set = true;
        } else if (key == "mandelbrot.max_iter") {
            m.sim.workload.mandelbrot.max_iter = static_cast<Count>(parse_u64(value, what));
        } else if (key == "mandelbrot.cost") {
            m.sim.workload.mandelbrot.cost_per_iter = parse_double(value, what);
        } else if (key == "mandelbrot.re_min") {
            m.sim.workload.mandelbrot.re_min = parse_double(value, what);
        } else if (key == "mandelbrot.re_max") {
            m.sim.workload.mandelbrot.re_max = parse_double(value, what);
        } else if (key == "mandelbrot.im_min") {
            m.sim.workload.mandelbrot.im_min = parse_double(value, what);
        } else if (key == "mandelbrot.im_max") {
            m.sim.workload.mandelbrot.im_max = parse_double(value, what);
        } else if (key == "theory.n") {
            m.theory.n = parse_list(value, what);
        } else if (key == "theory.q") {
            m.theory.q = parse_list(value, what);
        } else if (key == "theory.t") {
            m.theory.t = parse_list(value, what);
        } else if (key == "theory.lambda") {
            m.theory.lambda = parse_list(value, what);
        } else if (key == "theory.c") {
            m.theory.checkpoint_cost = parse_list(value, what);
        } else {
            throw UsageError(fmt::format("config line {}: unknown key '{}'", lineno, key));
        }
    }

    if (workload_name) {
        auto& w = m.sim.workload;
        if (*workload_name == "constant") {
            w.kind = WorkloadKind::Constant;
        } else if (*workload_name == "uniform") {
            w.kind = WorkloadKind::Uniform;
        } else if (*workload_name == "gaussian") {
            w.kind = WorkloadKind::Gaussian;
        } else if (*workload_name == "mandelbrot") {
            w.kind = WorkloadKind::Mandelbrot;
        } else if (*workload_name == "psia") {
            const auto psia = psia_workload(m.sim.n, w.mean, w.seed);
            w.kind = psia.kind;
            w.lo = psia.lo;
            w.hi = psia.hi;
        } else {
            throw UsageError(fmt::format("unknown workload '{}'", *workload_name));
        }
    }
    if (cv) m.sim.workload.sigma = *cv * m.sim.workload.mean;
    if (m.sim.workload.kind == WorkloadKind::Mandelbrot && !width_set) {
        m.sim.workload.mandelbrot.width =
            static_cast<Count>(std::llround(std::sqrt(static_cast<double>(m.sim.n))));
    }
}

void load_config(ExperimentMatrix& m, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config " + path.string());
    apply_config(m, in);
}

void validate(const ExperimentMatrix& m) {
    if (m.trials < 1) throw UsageError("trials must be >= 1");
    if (m.techniques.empty()) throw UsageError("no techniques selected");
    if (m.scenarios.empty()) throw UsageError("no scenarios selected");
    if (m.sim.n < 1 || m.sim.p < 1) throw UsageError("N and P must be >= 1");
    if (m.sim.pes_per_node < 1) throw UsageError("pes_per_node must be >= 1");
    if (!(m.hang_factor > 1.0)) throw UsageError("hang_factor must be > 1");
    const std::size_t nodes = (m.sim.p + m.sim.pes_per_node - 1) / m.sim.pes_per_node;
    for (const auto& s : m.scenarios) {
        if (s.is_failure() && s.failures(m.sim.p) >= m.sim.p) {
            throw UsageError(fmt::format("scenario {}: at most P-1 = {} failures", s.label(),
                                         m.sim.p == 0 ? 0 : m.sim.p - 1));
        }
        if ((s.kind == ScenarioKind::PE || s.kind == ScenarioKind::Latency ||
             s.kind == ScenarioKind::Combined) &&
            s.node >= nodes) {
            throw UsageError(fmt::format("scenario {}: node {} does not exist ({} nodes)",
                                         s.label(), s.node, nodes));
        }
    }
    for (Technique t : m.techniques) {
        if (t == Technique::FSC && m.sim.p < 2) throw UsageError("FSC needs P >= 2");
    }
}

std::string technique_label(Technique t, bool rdlb) {
    return rdlb ? fmt::format("{}+rDLB", to_string(t)) : std::string(to_string(t));
}

SimConfig make_run_config(const ExperimentMatrix& m, Technique t, bool rdlb,
                          const Scenario& scenario, std::size_t trial,
                          std::optional<double> baseline_makespan) {
    SimConfig cfg = m.sim;
    const std::uint64_t seed = m.seed + trial;
    cfg.technique = t;
    cfg.rdlb_enabled = rdlb;
    cfg.seed = seed;
    cfg.workload.seed = seed;
    cfg.pe_models.clear();
    ensure_pe_models(cfg);
    if (baseline_makespan) cfg.hang_horizon = m.hang_factor * *baseline_makespan;

    switch (scenario.kind) {
    case ScenarioKind::Baseline:
        break;
    case ScenarioKind::Failures: {
        if (!baseline_makespan) throw std::logic_error("failure scenario without baseline");
        cfg = inject_failures(std::move(cfg), scenario.failures(cfg.p), seed, *baseline_makespan);
        break;
    }
    case ScenarioKind::PE:
    case ScenarioKind::Latency:
    case ScenarioKind::Combined: {
        PerturbationParams params;
        params.speed_multiplier = scenario.multiplier;
        params.extra_latency = scenario.delay;
        const auto which = scenario.kind == ScenarioKind::PE        ? PerturbationScenario::PE
                           : scenario.kind == ScenarioKind::Latency ? PerturbationScenario::Latency
                                                                    : PerturbationScenario::Combined;
        cfg = inject_perturbations(std::move(cfg), which, scenario.node, params);
        break;
    }
    }
    return cfg;
}

CellSummary summarize(std::string technique, std::string scenario,
                      const std::vector<TrialRecord>& trials) {
    CellSummary s;
    s.technique = std::move(technique);
    s.scenario = std::move(scenario);
    s.trials = trials.size();
    std::vector<double> times;
    std::vector<double> resched;
    std::vector<double> wasted;
    for (const auto& r : trials) {
        if (r.completed) times.push_back(r.t_par);
        resched.push_back(static_cast<double>(r.n_rescheduled));
        wasted.push_back(static_cast<double>(r.wasted_iterations));
    }
    s.completion_rate = trials.empty() ? 0.0
                                       : static_cast<double>(times.size()) /
                                             static_cast<double>(trials.size());
    const auto t = describe(times);
    s.t_mean = t.mean;
    s.t_std = t.std;
    s.t_min = t.min;
    s.t_max = t.max;
    const auto r = describe(resched);
    s.rescheduled_mean = r.mean;
    s.rescheduled_std = r.std;
    const auto w = describe(wasted);
    s.wasted_mean = w.mean;
    s.wasted_std = w.std;
    return s;
}

MatrixResult run_matrix(const ExperimentMatrix& m) {
    validate(m);

    struct Variant {
        Technique technique;
        bool rdlb;
    };
    std::vector<Variant> variants;
    for (Technique t : m.techniques) {
        if (m.rdlb != RdlbMode::On) variants.push_back({t, false});
        // STATIC never reschedules, so it is not paired with rDLB.
        if (m.rdlb != RdlbMode::Off && t != Technique::Static) variants.push_back({t, true});
    }
    if (variants.empty()) throw UsageError("no runnable technique (STATIC is excluded with rDLB)");

    // Workload is shared by every technique within a trial.
    std::vector<std::shared_ptr<const std::vector<double>>> workloads(m.trials);
    std::optional<std::vector<double>> replay;
    if (m.times_file) replay = load_times(*m.times_file);
    parallel_for(m.trials, m.jobs, [&](std::size_t trial) {
        if (replay) {
            if (replay->size() != static_cast<std::size_t>(m.sim.n)) {
                throw UsageError(fmt::format("times file has {} entries, N = {}", replay->size(),
                                             m.sim.n));
            }
            workloads[trial] = std::make_shared<const std::vector<double>>(*replay);
            return;
        }
        WorkloadSpec spec = m.sim.workload;
        spec.n = m.sim.n;
        spec.seed = m.seed + trial;
        workloads[trial] = std::make_shared<const std::vector<double>>(generate(spec));
    });

    const Scenario baseline_scenario{};
    const std::size_t nv = variants.size();

    auto run_one = [&](const Variant& v, const Scenario& s, std::size_t trial,
                       std::optional<double> baseline) {
        SimConfig cfg = make_run_config(m, v.technique, v.rdlb, s, trial, baseline);
        cfg.iteration_times = workloads[trial];
        cfg.record_trace = m.trace_dir.has_value();
        SimResult r = run_simulation(cfg);
        if (m.trace_dir) {
            const auto name = sanitize(fmt::format("{}_{}_{}.tsv", technique_label(v.technique, v.rdlb),
                                                   s.label(), trial));
            std::ofstream out(*m.trace_dir / name);
            if (!out) throw UsageError("cannot write trace into " + m.trace_dir->string());
            write_trace(out, r.trace);
        }
        return r;
    };

    // Baselines first: failure times and robustness radii are relative to them.
    std::vector<SimResult> baselines(nv * m.trials);
    if (m.trace_dir) std::filesystem::create_directories(*m.trace_dir);
    parallel_for(baselines.size(), m.jobs, [&](std::size_t i) {
        const auto& v = variants[i / m.trials];
        baselines[i] = run_one(v, baseline_scenario, i % m.trials, std::nullopt);
        if (!baselines[i].completed) {
            throw std::runtime_error(fmt::format("baseline run of {} did not complete",
                                                 technique_label(v.technique, v.rdlb)));
        }
    });

    const std::size_t ns = m.scenarios.size();
    std::vector<TrialRecord> records(nv * ns * m.trials);
    parallel_for(records.size(), m.jobs, [&](std::size_t i) {
        const std::size_t vi = i / (ns * m.trials);
        const std::size_t si = (i / m.trials) % ns;
        const std::size_t trial = i % m.trials;
        const auto& v = variants[vi];
        const auto& s = m.scenarios[si];
        const auto& base = baselines[vi * m.trials + trial];
        const SimResult r = s.kind == ScenarioKind::Baseline
                                ? base
                                : run_one(v, s, trial, base.t_par);
        records[i] = TrialRecord{technique_label(v.technique, v.rdlb), s.label(), trial,
                                 r.completed, r.t_par, r.n_rescheduled, r.n_wasted_iterations};
    });

    MatrixResult result;
    for (std::size_t vi = 0; vi < nv; ++vi) {
        for (std::size_t si = 0; si < ns; ++si) {
            Cell cell;
            cell.technique = variants[vi].technique;
            cell.rdlb = variants[vi].rdlb;
            cell.scenario = m.scenarios[si];
            const auto first = records.begin() + static_cast<std::ptrdiff_t>((vi * ns + si) * m.trials);
            cell.trials.assign(first, first + static_cast<std::ptrdiff_t>(m.trials));
            cell.summary = summarize(technique_label(cell.technique, cell.rdlb),
                                     cell.scenario.label(), cell.trials);
            result.cells.push_back(std::move(cell));
        }
    }

    // Robustness per (rDLB mode, scenario) against the same-technique baseline means.
    for (bool rdlb : {false, true}) {
        for (std::size_t si = 0; si < ns; ++si) {
            const auto& s = m.scenarios[si];
            if (s.kind == ScenarioKind::Baseline) continue;
            TechniqueTimes base_means;
            TechniqueTimes perturbed_means;
            for (std::size_t vi = 0; vi < nv; ++vi) {
                if (variants[vi].rdlb != rdlb) continue;
                std::vector<TrialRecord> base_trials;
                for (std::size_t trial = 0; trial < m.trials; ++trial) {
                    const auto& b = baselines[vi * m.trials + trial];
                    base_trials.push_back({"", "", trial, b.completed, b.t_par, 0, 0});
                }
                const auto label = technique_label(variants[vi].technique, rdlb);
                base_means.emplace_back(label, summarize("", "", base_trials).t_mean);
                const auto& cell = result.cells[vi * ns + si];
                const double perturbed = cell.summary.completion_rate < 1.0
                                             ? std::numeric_limits<double>::infinity()
                                             : cell.summary.t_mean;
                perturbed_means.emplace_back(label, perturbed);
            }
            if (base_means.empty()) continue;
            auto scenario_label = s.label();
            if (rdlb) scenario_label += "+rDLB";
            result.robustness.push_back(robustness(scenario_label, base_means, perturbed_means));
        }
    }
    return result;
}

void write_results_csv(std::ostream& out, const MatrixResult& result) {
    out << "technique,scenario,trial,completed,t_par,n_rescheduled,wasted_iters\n";
    for (const auto& cell : result.cells) {
        for (const auto& r : cell.trials) {
            out << fmt::format("{},{},{},{},{},{},{}\n", r.technique, r.scenario, r.trial,
                               r.completed ? 1 : 0, r.t_par, r.n_rescheduled,
                               r.wasted_iterations);
        }
        const auto& s = cell.summary;
        out << fmt::format("{},{},mean,{},{},{},{}\n", s.technique, s.scenario,
                           s.completion_rate, s.t_mean, s.rescheduled_mean, s.wasted_mean);
        out << fmt::format("{},{},std,,{},{},{}\n", s.technique, s.scenario, s.t_std,
                           s.rescheduled_std, s.wasted_std);
        out << fmt::format("{},{},min,,{},,\n", s.technique, s.scenario, s.t_min);
        out << fmt::format("{},{},max,,{},,\n", s.technique, s.scenario, s.t_max);
    }
}

void write_theory_csv(std::ostream& out, const TheoryGrid& grid) {
    out << "n,q,t,lambda,C,T,p_F,E_T,E_T_first_order,H_rdlb,H_checkpoint,C_threshold,"
           "rdlb_better,first_order_regime\n";
    for (double n : grid.n) {
        for (double q : grid.q) {
            for (double t : grid.t) {
                for (double lambda : grid.lambda) {
                    for (double c : grid.checkpoint_cost) {
                        const TheoryParams p{n, q, t, lambda, c};
                        const auto cross = checkpoint_crossover(p);
                        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", n, q, t,
                                           lambda, c, p.makespan(), p.failure_probability(),
                                           expected_time_one_failure(p),
                                           expected_time_first_order(p), overhead_rdlb(p),
                                           overhead_checkpoint(p), cross.threshold,
                                           cross.rdlb_better ? 1 : 0,
                                           cross.first_order_regime ? 1 : 0);
                    }
                }
            }
        }
    }
}

}  // namespace rdlb
