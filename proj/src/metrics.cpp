#include <rdlb/metrics.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace rdlb {

double TheoryParams::failure_probability() const { return -std::expm1(-lambda * makespan()); }

void validate(const TheoryParams& p) {
    if (!(p.n >= 1.0)) throw std::invalid_argument("theory: n must be >= 1");
    if (!(p.q >= 2.0)) throw std::invalid_argument("theory: q must be >= 2");
    if (!(p.t > 0.0)) throw std::invalid_argument("theory: t must be > 0");
    if (!(p.lambda >= 0.0)) throw std::invalid_argument("theory: lambda must be >= 0");
    if (!(p.checkpoint_cost >= 0.0)) throw std::invalid_argument("theory: C must be >= 0");
}

namespace {

/// (t / 2) (n + 1) / (q - 1): mean extra time to redistribute a failed PE's tasks.
double redistribution_cost(const TheoryParams& p) { return p.t / 2.0 * (p.n + 1.0) / (p.q - 1.0); }

}  // namespace

double expected_time_one_failure(const TheoryParams& p) {
    validate(p);
    return p.makespan() + p.failure_probability() * redistribution_cost(p);
}

double expected_time_first_order(const TheoryParams& p) {
    validate(p);
    return p.makespan() + p.lambda * p.makespan() * redistribution_cost(p);
}

double overhead_rdlb(const TheoryParams& p) {
    validate(p);
    return p.lambda * redistribution_cost(p);
}

double overhead_checkpoint(const TheoryParams& p) {
    validate(p);
    return std::sqrt(2.0 * p.lambda * p.checkpoint_cost);
}

CrossoverResult checkpoint_crossover(const TheoryParams& p) {
    validate(p);
    const double ratio = (p.n + 1.0) / (p.q - 1.0);
    CrossoverResult r;
    r.threshold = p.lambda * p.t * p.t / 8.0 * ratio * ratio;
    r.rdlb_better = overhead_rdlb(p) <= overhead_checkpoint(p);
    r.first_order_regime = p.lambda * p.checkpoint_cost <= 0.1;
    return r;
}

double makespan_from_task_times(std::span<const std::vector<double>> per_pe_times) {
    double best = 0.0;
    for (const auto& pe : per_pe_times) {
        best = std::max(best, std::accumulate(pe.begin(), pe.end(), 0.0));
    }
    return best;
}

RobustnessReport robustness(std::string scenario, const TechniqueTimes& baselines,
                            const TechniqueTimes& perturbed) {
    if (baselines.size() != perturbed.size()) {
        throw std::invalid_argument("robustness: technique sets differ");
    }
    RobustnessReport report;
    report.scenario = std::move(scenario);

    for (const auto& [name, base] : baselines) {
        const auto it = std::find_if(perturbed.begin(), perturbed.end(),
                                     [&](const auto& e) { return e.first == name; });
        if (it == perturbed.end()) {
            throw std::invalid_argument("robustness: no perturbed time for " + name);
        }
        RobustnessEntry e{name, base, it->second, it->second - base, 1.0};
        if (!std::isfinite(e.perturbed)) {
            e.radius = std::numeric_limits<double>::infinity();
        } else if (e.radius < 0.0) {
            report.warnings.push_back(fmt::format(
                "{}: perturbed time {} below baseline {}; radius clamped to 0", name,
                e.perturbed, e.baseline));
            e.radius = 0.0;
        }
        report.entries.push_back(std::move(e));
    }

    double r_min = std::numeric_limits<double>::infinity();
    for (const auto& e : report.entries) r_min = std::min(r_min, e.radius);

    if (!std::isfinite(r_min)) {
        report.degenerate = true;
        for (auto& e : report.entries) e.rho = 1.0;
    } else if (r_min == 0.0) {
        report.degenerate = true;
        for (auto& e : report.entries) {
            e.rho = e.radius == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        }
    } else {
        for (auto& e : report.entries) e.rho = e.radius / r_min;
    }
    return report;
}

void write_robustness_csv(std::ostream& out, std::span<const RobustnessReport> reports,
                          bool header) {
    if (header) out << "technique,scenario,T_baseline,T_perturbed,radius,rho\n";
    for (const auto& r : reports) {
        for (const auto& e : r.entries) {
            out << fmt::format("{},{},{},{},{},{}\n", e.technique, r.scenario, e.baseline,
                               e.perturbed, e.radius, e.rho);
        }
    }
}

}  // namespace rdlb
