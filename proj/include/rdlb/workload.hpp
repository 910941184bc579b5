#pragma once

#include <rdlb/task_ledger.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace rdlb {

enum class WorkloadKind : std::uint8_t { Constant, Uniform, Gaussian, Mandelbrot };

std::string_view to_string(WorkloadKind k);

/// Escape-count grid over a rectangle of the complex plane. Iteration i is
/// pixel (i / width, i % width); N must equal width * width.
struct MandelbrotParams {
    Count width = 512;
    Count max_iter = 10'000;
    double re_min = -2.0;
    double re_max = 0.5;
    double im_min = -1.25;
    double im_max = 1.25;
    /// Seconds charged per inner z -> z^2 + c step.
    double cost_per_iter = 1e-6;
};

struct WorkloadSpec {
    WorkloadKind kind = WorkloadKind::Constant;
    Count n = 0;
    /// constant
    double t = 1.0;
    /// uniform
    double lo = 0.9;
    double hi = 1.1;
    /// gaussian (truncated to strictly positive values)
    double mean = 1.0;
    double sigma = 0.1;
    MandelbrotParams mandelbrot;
    std::uint64_t seed = 0;
};

/// Low-variability stand-in for the spin-image kernel: uniform times with the
/// given mean and coefficient of variation 0.1.
WorkloadSpec psia_workload(Count n, double mean, std::uint64_t seed);

/// Per-iteration execution times in seconds, all strictly positive.
/// Throws std::invalid_argument on invalid parameters, including a mandelbrot
/// N that does not match the grid.
std::vector<double> generate(const WorkloadSpec& spec);

/// Escape count of c = (re, im), at least 1 and at most max_iter.
Count mandelbrot_escape_count(double re, double im, Count max_iter);

struct WorkloadStats {
    double mean = 0.0;
    double stddev = 0.0;
    double cv() const { return mean > 0.0 ? stddev / mean : 0.0; }
};

/// Population mean and standard deviation.
WorkloadStats stats(const std::vector<double>& times);

/// One time per line, full round-trip precision.
void write_times(std::ostream& out, const std::vector<double>& times);
std::vector<double> read_times(std::istream& in);
void save_times(const std::filesystem::path& path, const std::vector<double>& times);
std::vector<double> load_times(const std::filesystem::path& path);

}  // namespace rdlb
