// rdlb-sim: runs technique x scenario x trial matrices of the simulated
// master-worker loop scheduler and writes CSV reports.

#include <rdlb/experiment.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

namespace {

int run(int argc, char** argv) {
    CLI::App app{"Simulated dynamic loop scheduling with robust rescheduling (rDLB)"};

    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> out;
    std::optional<std::string> robustness_out;
    std::optional<std::string> trace_dir;
    std::vector<std::string> techniques;
    std::vector<std::string> scenarios;
    std::optional<std::string> rdlb;
    std::optional<unsigned> jobs;
    bool theory = false;

    app.add_option("--config", config, "key=value configuration file (see docs/config.md)")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "base seed; trial k uses seed + k");
    app.add_option("--trials", trials, "repetitions per cell");
    app.add_option("--out", out, "results CSV path, '-' for stdout");
    app.add_option("--robustness-out", robustness_out,
                   "robustness CSV path (default: <out stem>.robustness.csv)");
    app.add_option("--trace-dir", trace_dir, "write one event trace per run into this directory");
    app.add_option("--technique", techniques, "technique name, repeatable (default: all)");
    app.add_option("--scenario", scenarios,
                   "baseline | failures:K|half|P-1 | pe[:NODE[:MULT]] | latency[:NODE[:DELAY]] | "
                   "combined[:NODE[:MULT[:DELAY]]], repeatable");
    app.add_option("--rdlb", rdlb, "on, off or both");
    app.add_option("--jobs", jobs, "parallel simulations");
    app.add_flag("--theory", theory, "emit the closed-form cost model table instead of simulating");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    rdlb::ExperimentMatrix m = rdlb::default_matrix();
    if (!config.empty()) rdlb::load_config(m, config);
    if (seed) m.seed = *seed;
    if (trials) m.trials = *trials;
    if (out) m.out = *out;
    if (robustness_out) m.robustness_out = *robustness_out;
    if (trace_dir) m.trace_dir = *trace_dir;
    if (rdlb) m.rdlb = rdlb::parse_rdlb_mode(*rdlb);
    if (jobs) m.jobs = *jobs;
    if (!techniques.empty()) {
        m.techniques.clear();
        for (const auto& name : techniques) {
            const auto t = rdlb::parse_technique(name);
            if (!t) throw rdlb::UsageError(fmt::format("unknown technique '{}'", name));
            m.techniques.push_back(*t);
        }
    }
    if (!scenarios.empty()) {
        m.scenarios.clear();
        for (const auto& s : scenarios) m.scenarios.push_back(rdlb::parse_scenario(s));
    }

    const bool to_stdout = m.out == "-";
    std::ofstream file;
    if (!to_stdout) {
        file.open(m.out);
        if (!file) throw rdlb::UsageError("cannot write " + m.out.string());
    }
    std::ostream& os = to_stdout ? std::cout : file;

    if (theory) {
        rdlb::write_theory_csv(os, m.theory);
        return 0;
    }

    const auto result = rdlb::run_matrix(m);
    rdlb::write_results_csv(os, result);

    if (!result.robustness.empty()) {
        std::filesystem::path path;
        if (m.robustness_out) {
            path = *m.robustness_out;
        } else if (!to_stdout) {
            path = m.out;
            path.replace_extension(".robustness.csv");
        }
        if (!path.empty()) {
            std::ofstream rob(path);
            if (!rob) throw rdlb::UsageError("cannot write " + path.string());
            rdlb::write_robustness_csv(rob, result.robustness);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const rdlb::UsageError& e) {
        std::cerr << "rdlb-sim: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "rdlb-sim: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "rdlb-sim: error: " << e.what() << '\n';
        return 1;
    }
}
