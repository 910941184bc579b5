#include <rdlb/workload.hpp>

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace rdlb {

std::string_view to_string(WorkloadKind k) {
    switch (k) {
    case WorkloadKind::Constant: return "constant";
    case WorkloadKind::Uniform: return "uniform";
    case WorkloadKind::Gaussian: return "gaussian";
    case WorkloadKind::Mandelbrot: return "mandelbrot";
    }
    return "?";
}

WorkloadSpec psia_workload(Count n, double mean, std::uint64_t seed) {
    // Uniform on [m(1 - a), m(1 + a)] has CV a / sqrt(3).
    const double half_width = 0.1 * std::sqrt(3.0);
    WorkloadSpec spec;
    spec.kind = WorkloadKind::Uniform;
    spec.n = n;
    spec.lo = mean * (1.0 - half_width);
    spec.hi = mean * (1.0 + half_width);
    spec.seed = seed;
    return spec;
}

Count mandelbrot_escape_count(double re, double im, Count max_iter) {
    double zr = 0.0;
    double zi = 0.0;
    Count k = 0;
    while (k < max_iter) {
        const double zr2 = zr * zr;
        const double zi2 = zi * zi;
        if (zr2 + zi2 > 4.0) break;
        zi = 2.0 * zr * zi + im;
        zr = zr2 - zi2 + re;
        ++k;
    }
    return std::max<Count>(k, 1);
}

std::vector<double> generate(const WorkloadSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("workload: N must be >= 1");
    const auto n = static_cast<std::size_t>(spec.n);
    std::vector<double> times(n);
    std::mt19937_64 rng(spec.seed);

    switch (spec.kind) {
    case WorkloadKind::Constant:
        if (!(spec.t > 0.0)) throw std::invalid_argument("workload: constant t must be > 0");
        std::fill(times.begin(), times.end(), spec.t);
        break;
    case WorkloadKind::Uniform: {
        if (!(spec.lo > 0.0) || !(spec.hi >= spec.lo)) {
            throw std::invalid_argument("workload: uniform needs 0 < lo <= hi");
        }
        std::uniform_real_distribution<double> dist(spec.lo, spec.hi);
        for (auto& x : times) x = spec.lo == spec.hi ? spec.lo : dist(rng);
        break;
    }
    case WorkloadKind::Gaussian: {
        if (!(spec.mean > 0.0) || spec.sigma < 0.0) {
            throw std::invalid_argument("workload: gaussian needs mean > 0, sigma >= 0");
        }
        std::normal_distribution<double> dist(spec.mean, spec.sigma);
        for (auto& x : times) {
            do {
                x = spec.sigma == 0.0 ? spec.mean : dist(rng);
            } while (!(x > 0.0));
        }
        break;
    }
    case WorkloadKind::Mandelbrot: {
        const auto& m = spec.mandelbrot;
        if (m.width < 1 || m.width * m.width != spec.n) {
            throw std::invalid_argument(fmt::format(
                "workload: mandelbrot N={} does not match a {}x{} grid", spec.n, m.width, m.width));
        }
        if (m.max_iter < 1 || !(m.cost_per_iter > 0.0)) {
            throw std::invalid_argument("workload: mandelbrot needs max_iter >= 1, cost > 0");
        }
        const double dre = (m.re_max - m.re_min) / static_cast<double>(m.width);
        const double dim = (m.im_max - m.im_min) / static_cast<double>(m.width);
        for (Count i = 0; i < spec.n; ++i) {
            const Count row = i / m.width;
            const Count col = i % m.width;
            const double re = m.re_min + (static_cast<double>(col) + 0.5) * dre;
            const double im = m.im_min + (static_cast<double>(row) + 0.5) * dim;
            times[static_cast<std::size_t>(i)] =
                static_cast<double>(mandelbrot_escape_count(re, im, m.max_iter)) * m.cost_per_iter;
        }
        break;
    }
    }
    return times;
}

WorkloadStats stats(const std::vector<double>& times) {
    WorkloadStats s;
    if (times.empty()) return s;
    double sum = 0.0;
    for (double x : times) sum += x;
    s.mean = sum / static_cast<double>(times.size());
    double ss = 0.0;
    for (double x : times) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(times.size()));
    return s;
}

void write_times(std::ostream& out, const std::vector<double>& times) {
    for (double x : times) out << fmt::format("{}\n", x);
}

std::vector<double> read_times(std::istream& in) {
    std::vector<double> times;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(line.substr(first), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(fmt::format("times file line {}: not a number", lineno));
        }
        if (!(x > 0.0)) {
            throw std::invalid_argument(fmt::format("times file line {}: time must be > 0", lineno));
        }
        times.push_back(x);
    }
    return times;
}

void save_times(const std::filesystem::path& path, const std::vector<double>& times) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_times(out, times);
}

std::vector<double> load_times(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return read_times(in);
}

}  // namespace rdlb
