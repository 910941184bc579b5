#include <rdlb/simulator.hpp>
#include <rdlb/technique_state.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <random>
#include <stdexcept>

namespace rdlb {

std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::Failure: return "Failure";
    case EventKind::PerturbStart: return "PerturbStart";
    case EventKind::PerturbEnd: return "PerturbEnd";
    case EventKind::ChunkCompletion: return "ChunkCompletion";
    case EventKind::WorkRequest: return "WorkRequest";
    }
    return "?";
}

std::string_view to_string(PerturbationScenario s) {
    switch (s) {
    case PerturbationScenario::PE: return "pe";
    case PerturbationScenario::Latency: return "latency";
    case PerturbationScenario::Combined: return "combined";
    }
    return "?";
}

void ensure_pe_models(SimConfig& cfg) {
    if (!cfg.pe_models.empty()) return;
    const std::size_t per_node = std::max<std::size_t>(1, cfg.pes_per_node);
    cfg.pe_models.resize(cfg.p);
    for (std::size_t i = 0; i < cfg.p; ++i) {
        cfg.pe_models[i].id = i;
        cfg.pe_models[i].node = i / per_node;
    }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const SimConfig& cfg, std::size_t n_times) {
    if (cfg.n < 1) throw std::invalid_argument("simulation: N must be >= 1");
    if (cfg.p < 1) throw std::invalid_argument("simulation: P must be >= 1");
    if (cfg.h < 0.0 || cfg.base_latency < 0.0) {
        throw std::invalid_argument("simulation: h and base_latency must be >= 0");
    }
    if (n_times != static_cast<std::size_t>(cfg.n)) {
        throw std::invalid_argument(
            fmt::format("simulation: {} iteration times for N={}", n_times, cfg.n));
    }
    if (cfg.pe_models.size() != cfg.p) {
        throw std::invalid_argument("simulation: pe_models must have one entry per PE");
    }
    for (const auto& pe : cfg.pe_models) {
        if (pe.fail_at && !(*pe.fail_at >= 0.0)) {
            throw std::invalid_argument("simulation: fail_at must be >= 0");
        }
        for (const auto& iv : pe.speed_schedule) {
            if (!(iv.start < iv.end) || !(iv.value > 0.0) || iv.value > 1.0) {
                throw std::invalid_argument("simulation: bad speed interval");
            }
        }
        for (const auto& iv : pe.latency_schedule) {
            if (!(iv.start < iv.end) || !(iv.value >= 0.0)) {
                throw std::invalid_argument("simulation: bad latency interval");
            }
        }
    }
}

bool active(const TimeInterval& iv, double t) { return iv.start <= t && t < iv.end; }

struct Assignment {
    IterationRange range;
    bool duplicate = false;
    double request_sent = 0.0;
    double receipt = 0.0;
    double compute_end = 0.0;
};

struct QueuedEvent {
    double time = 0.0;
    EventKind kind = EventKind::WorkRequest;
    std::size_t pe = 0;
    std::uint64_t seq = 0;
    Assignment chunk;
};

struct LaterFirst {
    bool operator()(const QueuedEvent& a, const QueuedEvent& b) const {
        if (a.time != b.time) return a.time > b.time;
        if (a.kind != b.kind) return a.kind > b.kind;
        if (a.pe != b.pe) return a.pe > b.pe;
        return a.seq > b.seq;
    }
};

/// Piecewise-constant speed of one PE.
class SpeedProfile {
public:
    explicit SpeedProfile(const std::vector<TimeInterval>& schedule)
        : schedule_(schedule) {
        for (const auto& iv : schedule_) {
            breaks_.push_back(iv.start);
            if (std::isfinite(iv.end)) breaks_.push_back(iv.end);
        }
        std::sort(breaks_.begin(), breaks_.end());
        breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
    }

    /// Time at which `work` seconds of nominal compute starting at `start` finish.
    double finish_time(double start, double work) const {
        if (schedule_.empty()) return start + work;
        double now = start;
        double left = work;
        auto next = std::upper_bound(breaks_.begin(), breaks_.end(), now);
        while (true) {
            const double m = multiplier(now);
            const double boundary = next == breaks_.end() ? kInf : *next;
            const double capacity = (boundary - now) * m;
            if (capacity >= left) return now + left / m;
            left -= capacity;
            now = boundary;
            ++next;
        }
    }

private:
    double multiplier(double t) const {
        double m = 1.0;
        for (const auto& iv : schedule_) {
            if (active(iv, t)) m *= iv.value;
        }
        return m;
    }

    std::vector<TimeInterval> schedule_;
    std::vector<double> breaks_;
};

class Engine {
public:
    Engine(const SimConfig& cfg, const std::vector<double>& times)
        : cfg_(cfg),
          ledger_(cfg.n),
          state_(cfg.technique, cfg.n, static_cast<Count>(cfg.p),
                 TechniqueParams{cfg.h, stats(times).stddev, {}, cfg.seed}),
          executions_(cfg.p) {
        prefix_.resize(times.size() + 1, 0.0);
        for (std::size_t i = 0; i < times.size(); ++i) prefix_[i + 1] = prefix_[i] + times[i];
        for (const auto& pe : cfg.pe_models) speed_.emplace_back(pe.speed_schedule);
    }

    SimResult run() {
        seed_events();
        while (!queue_.empty()) {
            QueuedEvent ev = queue_.top();
            queue_.pop();
            if (ev.time > cfg_.hang_horizon) {
                result_.end_time = cfg_.hang_horizon;
                break;
            }
            result_.end_time = ev.time;
            if (dispatch(ev)) break;
        }
        finalize();
        return std::move(result_);
    }

private:
    void push(double time, EventKind kind, std::size_t pe, Assignment chunk = {}) {
        queue_.push({time, kind, pe, seq_++, chunk});
    }

    void trace(double time, EventKind kind, std::size_t pe, IterationRange r = {},
               bool duplicate = false) {
        if (!cfg_.record_trace) return;
        result_.trace.push_back({time, kind, pe, r.start, r.size, duplicate});
    }

    bool alive(std::size_t pe, double t) const {
        const auto& f = cfg_.pe_models[pe].fail_at;
        return !f || t < *f;
    }

    double fail_time(std::size_t pe) const {
        const auto& f = cfg_.pe_models[pe].fail_at;
        return f ? *f : kInf;
    }

    double latency(std::size_t pe, double t) const {
        double d = cfg_.base_latency;
        for (const auto& iv : cfg_.pe_models[pe].latency_schedule) {
            if (active(iv, t)) d += iv.value;
        }
        return d;
    }

    double work(IterationRange r) const {
        return prefix_[static_cast<std::size_t>(r.end())] -
               prefix_[static_cast<std::size_t>(r.start)];
    }

    void seed_events() {
        for (std::size_t pe = 0; pe < cfg_.p; ++pe) {
            const auto& model = cfg_.pe_models[pe];
            if (model.fail_at) push(*model.fail_at, EventKind::Failure, pe);
            auto perturb = [&](const std::vector<TimeInterval>& schedule) {
                for (const auto& iv : schedule) {
                    push(iv.start, EventKind::PerturbStart, pe);
                    if (std::isfinite(iv.end)) push(iv.end, EventKind::PerturbEnd, pe);
                }
            };
            perturb(model.speed_schedule);
            perturb(model.latency_schedule);

            if (alive(pe, 0.0)) {
                Assignment request;
                request.request_sent = 0.0;
                push(latency(pe, 0.0), EventKind::WorkRequest, pe, request);
            }
        }
    }

    /// Returns true when the loop is complete.
    bool dispatch(const QueuedEvent& ev) {
        switch (ev.kind) {
        case EventKind::Failure:
        case EventKind::PerturbStart:
        case EventKind::PerturbEnd:
            trace(ev.time, ev.kind, ev.pe);
            return false;
        case EventKind::ChunkCompletion: {
            const auto& c = ev.chunk;
            trace(ev.time, ev.kind, ev.pe, c.range, c.duplicate);
            ledger_.report_completion(c.range, ev.pe);
            state_.record_chunk(ev.pe, PerfSample{c.range.size, c.compute_end - c.receipt,
                                                  c.receipt - c.request_sent});
            if (ledger_.is_complete()) {
                result_.completed = true;
                result_.t_par = ev.time;
                return true;
            }
            serve_request(ev.time, ev.pe, c.compute_end);
            return false;
        }
        case EventKind::WorkRequest:
            serve_request(ev.time, ev.pe, ev.chunk.request_sent);
            return false;
        }
        return false;
    }

    void serve_request(double now, std::size_t pe, double request_sent) {
        Assignment a;
        a.request_sent = request_sent;
        if (state_.remaining() > 0) {
            const Count start = cfg_.n - state_.remaining();
            const Count size = *state_.next_chunk(pe);
            a.range = {start, size};
            ledger_.mark_scheduled(a.range, pe);
        } else if (cfg_.rdlb_enabled) {
            const auto dup = ledger_.rdlb_select();
            if (!dup) return;
            a.range = *dup;
            a.duplicate = true;
            ++result_.n_rescheduled;
        } else {
            // Worker blocks until the loop ends.
            trace(now, EventKind::WorkRequest, pe);
            return;
        }
        trace(now, EventKind::WorkRequest, pe, a.range, a.duplicate);
        ++result_.n_chunks;

        const double depart = std::max(now, master_free_) + cfg_.h;
        master_free_ = depart;
        a.receipt = depart + latency(pe, depart);
        a.compute_end = speed_[pe].finish_time(a.receipt, work(a.range));
        executions_[pe].push_back(a);

        if (alive(pe, a.compute_end)) {
            push(a.compute_end + latency(pe, a.compute_end), EventKind::ChunkCompletion, pe, a);
        }
    }

    void finalize() {
        const double end = result_.completed ? result_.t_par : result_.end_time;
        result_.per_pe_busy.assign(cfg_.p, 0.0);
        result_.per_pe_idle.assign(cfg_.p, 0.0);
        result_.per_pe_executed.assign(cfg_.p, 0);
        Count executed = 0;
        Count lost = 0;
        for (std::size_t pe = 0; pe < cfg_.p; ++pe) {
            const double fail = fail_time(pe);
            const double horizon = std::min(end, fail);
            double busy = 0.0;
            for (const auto& a : executions_[pe]) {
                const double lo = std::min(a.receipt, horizon);
                const double hi = std::min(a.compute_end, horizon);
                busy += std::max(0.0, hi - lo);
                if (a.compute_end < fail && a.compute_end <= end) {
                    result_.per_pe_executed[pe] += a.range.size;
                } else if (fail <= a.compute_end && fail < end) {
                    ++result_.n_lost_chunks;
                    lost += a.range.size;
                }
            }
            result_.per_pe_busy[pe] = busy;
            result_.per_pe_idle[pe] = std::max(0.0, horizon - busy);
            executed += result_.per_pe_executed[pe];
        }
        result_.n_wasted_iterations =
            std::max<Count>(0, executed - ledger_.count(TaskState::Finished)) + lost;
    }

    const SimConfig& cfg_;
    TaskLedger ledger_;
    TechniqueState state_;
    std::vector<double> prefix_;
    std::vector<SpeedProfile> speed_;
    std::vector<std::vector<Assignment>> executions_;
    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, LaterFirst> queue_;
    std::uint64_t seq_ = 0;
    double master_free_ = 0.0;
    SimResult result_;
};

}  // namespace

SimResult run_simulation(const SimConfig& input) {
    SimConfig cfg = input;
    ensure_pe_models(cfg);
    std::shared_ptr<const std::vector<double>> times = cfg.iteration_times;
    if (!times) {
        WorkloadSpec spec = cfg.workload;
        spec.n = cfg.n;
        times = std::make_shared<const std::vector<double>>(generate(spec));
    }
    validate(cfg, times->size());
    return Engine(cfg, *times).run();
}

SimConfig inject_failures(SimConfig cfg, std::size_t count, std::uint64_t seed) {
    if (count == 0) return cfg;
    if (count >= cfg.p) {
        throw std::invalid_argument(
            fmt::format("inject_failures: {} failures leave no worker among P={}", count, cfg.p));
    }
    SimConfig baseline = cfg;
    ensure_pe_models(baseline);
    for (auto& pe : baseline.pe_models) pe.fail_at.reset();
    baseline.record_trace = false;
    const SimResult base = run_simulation(baseline);
    if (!base.completed) throw std::runtime_error("inject_failures: baseline did not complete");
    return inject_failures(std::move(cfg), count, seed, base.t_par);
}

SimConfig inject_failures(SimConfig cfg, std::size_t count, std::uint64_t seed,
                          double baseline_makespan) {
    if (count == 0) return cfg;
    if (count >= cfg.p) {
        throw std::invalid_argument(
            fmt::format("inject_failures: {} failures leave no worker among P={}", count, cfg.p));
    }
    if (!(baseline_makespan > 0.0) || !std::isfinite(baseline_makespan)) {
        throw std::invalid_argument("inject_failures: baseline makespan must be positive");
    }
    ensure_pe_models(cfg);

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> ids(cfg.p);
    for (std::size_t i = 0; i < cfg.p; ++i) ids[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, cfg.p - 1);
        std::swap(ids[i], ids[pick(rng)]);
    }
    std::uniform_real_distribution<double> when(0.0, baseline_makespan);
    for (std::size_t i = 0; i < count; ++i) {
        double t = 0.0;
        do {
            t = when(rng);
        } while (!(t > 0.0));
        cfg.pe_models[ids[i]].fail_at = t;
    }
    if (!std::isfinite(cfg.hang_horizon)) cfg.hang_horizon = 100.0 * baseline_makespan;
    return cfg;
}

SimConfig inject_perturbations(SimConfig cfg, PerturbationScenario scenario, std::size_t node,
                               const PerturbationParams& params) {
    ensure_pe_models(cfg);
    const bool node_exists = std::any_of(cfg.pe_models.begin(), cfg.pe_models.end(),
                                         [&](const PEModel& pe) { return pe.node == node; });
    if (!node_exists) {
        throw std::invalid_argument(fmt::format("inject_perturbations: no PE on node {}", node));
    }
    if (!(params.start < params.end)) {
        throw std::invalid_argument("inject_perturbations: empty interval");
    }
    if (!(params.speed_multiplier > 0.0) || params.speed_multiplier > 1.0) {
        throw std::invalid_argument("inject_perturbations: multiplier must be in (0, 1]");
    }
    if (params.extra_latency < 0.0) {
        throw std::invalid_argument("inject_perturbations: delay must be >= 0");
    }
    const bool slow = scenario != PerturbationScenario::Latency && params.speed_multiplier != 1.0;
    const bool delay = scenario != PerturbationScenario::PE && params.extra_latency != 0.0;
    for (auto& pe : cfg.pe_models) {
        if (pe.node != node) continue;
        if (slow) pe.speed_schedule.push_back({params.start, params.end, params.speed_multiplier});
        if (delay) pe.latency_schedule.push_back({params.start, params.end, params.extra_latency});
    }
    return cfg;
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace) {
    for (const auto& r : trace) {
        out << fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", r.time, to_string(r.kind), r.pe,
                           r.chunk_start, r.chunk_size, r.duplicate ? 1 : 0);
    }
}

}  // namespace rdlb
