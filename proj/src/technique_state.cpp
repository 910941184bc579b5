#include <rdlb/technique_state.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rdlb {

namespace {

Count ceil_div(Count a, Count b) { return (a + b - 1) / b; }

Count clamp_chunk(Count k, Count remaining) { return std::clamp<Count>(k, 1, remaining); }

void normalize_to(std::vector<double>& w, double total) {
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    // Already normalized up to rounding: rescaling would only add ulp noise
    // that ceil() later turns into a whole extra iteration.
    if (std::abs(sum - total) <= 1e-12 * total) return;
    for (auto& x : w) x = x * total / sum;
}

}  // namespace

Count chunk_gss(Count remaining, Count pes) {
    if (remaining < 1 || pes < 1) throw std::invalid_argument("chunk_gss: R and P must be >= 1");
    return std::max<Count>(1, ceil_div(remaining, pes));
}

Count chunk_fsc(Count n, Count pes, double h, double sigma) {
    if (pes < 2) throw std::invalid_argument("chunk_fsc: P must be >= 2");
    if (!(h > 0.0) || !(sigma > 0.0)) {
        throw std::invalid_argument("chunk_fsc: h and sigma must be positive");
    }
    const double p = static_cast<double>(pes);
    const double base = std::sqrt(2.0) * static_cast<double>(n) * h /
                        (sigma * p * std::sqrt(std::log(p)));
    const double k = std::round(std::pow(base, 2.0 / 3.0));
    if (!(k >= 1.0)) return 1;
    if (k >= static_cast<double>(n)) return std::max<Count>(1, n);
    return static_cast<Count>(k);
}

Count fac_chunk_count(Count n, Count pes) {
    Count remaining = n;
    Count chunks = 0;
    while (remaining > 0) {
        const Count chunk = std::max<Count>(1, ceil_div(ceil_div(remaining, 2), pes));
        for (Count i = 0; i < pes && remaining > 0; ++i) {
            remaining -= std::min(chunk, remaining);
            ++chunks;
        }
    }
    return chunks;
}

Count chunk_mfsc(Count n, Count pes) {
    const Count chunks = fac_chunk_count(n, pes);
    return std::max<Count>(1, std::llround(static_cast<double>(n) / static_cast<double>(chunks)));
}

Count chunk_weighted(Count batch, Count pes, double weight) {
    const double k = std::ceil(static_cast<double>(batch) / static_cast<double>(pes) * weight);
    return std::max<Count>(1, static_cast<Count>(k));
}

Count chunk_af(Count remaining, std::span<const double> mu, std::span<const double> sigma,
               std::size_t pe) {
    double d = 0.0;
    double inv_mu_sum = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        d += sigma[j] * sigma[j] / mu[j];
        inv_mu_sum += 1.0 / mu[j];
    }
    const double t = static_cast<double>(remaining) / inv_mu_sum;
    double k = 0.0;
    if (d == 0.0) {
        k = std::floor(t / mu[pe]);
    } else {
        k = std::floor((d + 2.0 * t - std::sqrt(d * d + 4.0 * d * t)) / (2.0 * mu[pe]));
    }
    if (!(k >= 1.0)) return 1;
    if (k >= static_cast<double>(remaining)) return remaining;
    return static_cast<Count>(k);
}

RandBounds rand_bounds(Count n, Count pes) {
    return {std::max<Count>(1, n / (100 * pes)), std::max<Count>(1, n / (2 * pes))};
}

std::vector<double> update_weights(Technique variant,
                                   std::span<const std::vector<PerfSample>> samples) {
    const bool with_overhead = variant == Technique::AWF_D || variant == Technique::AWF_E;
    const std::size_t pes = samples.size();

    std::vector<std::optional<double>> rate(pes);
    double max_finite = 0.0;
    for (std::size_t i = 0; i < pes; ++i) {
        if (samples[i].empty()) continue;
        double iters = 0.0;
        double time = 0.0;
        for (const auto& s : samples[i]) {
            iters += static_cast<double>(s.chunk_size);
            time += s.compute_seconds + (with_overhead ? s.overhead_seconds : 0.0);
        }
        if (time > 0.0) {
            rate[i] = iters / time;
            max_finite = std::max(max_finite, *rate[i]);
        } else {
            rate[i] = std::numeric_limits<double>::infinity();
        }
    }

    std::vector<double> w(pes, 1.0);
    double known_sum = 0.0;
    std::size_t known = 0;
    for (auto& r : rate) {
        if (!r) continue;
        if (std::isinf(*r)) r = max_finite;
        if (*r > 0.0) {
            known_sum += *r;
            ++known;
        } else {
            r.reset();
        }
    }
    if (known == 0) return w;

    const double fill = known_sum / static_cast<double>(known);
    for (std::size_t i = 0; i < pes; ++i) w[i] = rate[i] ? *rate[i] : fill;
    normalize_to(w, static_cast<double>(pes));
    return w;
}

void TechniqueState::RunningStats::add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

double TechniqueState::RunningStats::stddev() const {
    if (count < 2) return 0.0;
    return std::sqrt(std::max(0.0, m2 / static_cast<double>(count - 1)));
}

TechniqueState::TechniqueState(Technique technique, Count n, Count pes, TechniqueParams params)
    : technique_(technique),
      n_(n),
      pes_(pes),
      remaining_(n),
      weights_(static_cast<std::size_t>(std::max<Count>(pes, 0)), 1.0),
      samples_(weights_.size()),
      af_stats_(weights_.size()),
      rng_(params.seed) {
    if (n < 1 || pes < 1) throw std::invalid_argument("TechniqueState: N and P must be >= 1");

    switch (technique) {
    case Technique::FSC:
        if (pes < 2) throw std::invalid_argument("FSC requires P >= 2");
        if (params.h < 0.0 || params.sigma < 0.0) {
            throw std::invalid_argument("FSC requires h >= 0 and sigma >= 0");
        }
        if (params.h == 0.0) {
            fsc_chunk_ = 1;
        } else if (params.sigma == 0.0) {
            fsc_chunk_ = ceil_div(n, pes);
        } else {
            fsc_chunk_ = chunk_fsc(n, pes, params.h, params.sigma);
        }
        break;
    case Technique::mFSC:
        fsc_chunk_ = chunk_mfsc(n, pes);
        break;
    case Technique::TSS: {
        const Count first = ceil_div(n, 2 * pes);
        const Count last = 1;
        const Count chunks = ceil_div(2 * n, first + last);
        tss_next_ = static_cast<double>(first);
        tss_decrement_ = chunks > 1 ? static_cast<double>(first - last) /
                                          static_cast<double>(chunks - 1)
                                    : 0.0;
        break;
    }
    case Technique::WF:
        if (!params.wf_weights.empty()) {
            if (params.wf_weights.size() != static_cast<std::size_t>(pes)) {
                throw std::invalid_argument("WF weights must have one entry per PE");
            }
            for (double x : params.wf_weights) {
                if (!(x > 0.0)) throw std::invalid_argument("WF weights must be positive");
            }
            weights_ = params.wf_weights;
            normalize_to(weights_, static_cast<double>(pes));
        }
        break;
    default:
        break;
    }
}

std::optional<Count> TechniqueState::next_chunk(std::size_t pe) {
    if (pe >= weights_.size()) throw std::out_of_range("next_chunk: PE index out of range");
    if (remaining_ == 0) return std::nullopt;

    Count k = 1;
    switch (technique_) {
    case Technique::Static: k = chunk_static(); break;
    case Technique::SS: k = 1; break;
    case Technique::FSC:
    case Technique::mFSC: k = fsc_chunk_; break;
    case Technique::GSS: k = chunk_gss(remaining_, pes_); break;
    case Technique::TSS: k = chunk_tss(); break;
    case Technique::FAC:
    case Technique::WF:
    case Technique::AWF_B:
    case Technique::AWF_C:
    case Technique::AWF_D:
    case Technique::AWF_E: k = chunk_batched(pe); break;
    case Technique::RAND: k = chunk_rand(); break;
    case Technique::AF: k = chunk_adaptive_factoring(pe); break;
    }
    k = clamp_chunk(k, remaining_);
    remaining_ -= k;
    return k;
}

Count TechniqueState::chunk_static() {
    // Balanced blocks: the first N mod P blocks carry one extra iteration.
    const Count base = n_ / pes_;
    const Count extra = n_ % pes_;
    const Count k = base + (static_issued_ < extra ? 1 : 0);
    ++static_issued_;
    return std::max<Count>(1, k);
}

Count TechniqueState::chunk_tss() {
    const Count k = std::max<Count>(1, std::llround(tss_next_));
    tss_next_ = std::max(1.0, tss_next_ - tss_decrement_);
    return k;
}

Count TechniqueState::chunk_batched(std::size_t pe) {
    if (batch_chunks_left_ == 0) {
        batch_size_ = ceil_div(remaining_, 2);
        batch_chunks_left_ = pes_;
        if (weights_dirty_) {
            weights_ = update_weights(technique_, samples_);
            weights_dirty_ = false;
        }
    }
    --batch_chunks_left_;
    return chunk_weighted(batch_size_, pes_, weights_[pe]);
}

Count TechniqueState::chunk_rand() {
    const auto [lo, hi] = rand_bounds(n_, pes_);
    std::uniform_int_distribution<Count> dist(lo, hi);
    return dist(rng_);
}

Count TechniqueState::chunk_adaptive_factoring(std::size_t pe) {
    if (af_stats_[pe].count == 0) {
        return std::max<Count>(1, ceil_div(n_, 2 * pes_ * pes_));
    }
    double mu_sum = 0.0;
    double sigma_sum = 0.0;
    std::size_t known = 0;
    for (const auto& s : af_stats_) {
        if (s.count == 0) continue;
        mu_sum += s.mean;
        sigma_sum += s.stddev();
        ++known;
    }
    const double mu_fill = mu_sum / static_cast<double>(known);
    const double sigma_fill = sigma_sum / static_cast<double>(known);

    std::vector<double> mu(af_stats_.size());
    std::vector<double> sigma(af_stats_.size());
    for (std::size_t j = 0; j < af_stats_.size(); ++j) {
        const bool has = af_stats_[j].count > 0;
        mu[j] = has ? af_stats_[j].mean : mu_fill;
        sigma[j] = has ? af_stats_[j].stddev() : sigma_fill;
    }
    // Zero-time chunks would make mu vanish; fall back to the bootstrap size.
    if (std::any_of(mu.begin(), mu.end(), [](double m) { return !(m > 0.0); })) {
        return std::max<Count>(1, ceil_div(n_, 2 * pes_ * pes_));
    }
    return chunk_af(remaining_, mu, sigma, pe);
}

void TechniqueState::record_chunk(std::size_t pe, const PerfSample& sample) {
    if (pe >= weights_.size()) throw std::out_of_range("record_chunk: PE index out of range");
    if (sample.chunk_size < 1) return;

    switch (technique_) {
    case Technique::AWF_B:
    case Technique::AWF_D:
        samples_[pe].push_back(sample);
        weights_dirty_ = true;
        break;
    case Technique::AWF_C:
    case Technique::AWF_E:
        samples_[pe].push_back(sample);
        weights_ = update_weights(technique_, samples_);
        break;
    case Technique::AF:
        samples_[pe].push_back(sample);
        af_stats_[pe].add(sample.compute_seconds / static_cast<double>(sample.chunk_size));
        break;
    default:
        break;
    }
}

std::optional<double> TechniqueState::mu(std::size_t pe) const {
    const auto& s = af_stats_.at(pe);
    if (s.count == 0) return std::nullopt;
    return s.mean;
}

std::optional<double> TechniqueState::sigma(std::size_t pe) const {
    const auto& s = af_stats_.at(pe);
    if (s.count == 0) return std::nullopt;
    return s.stddev();
}

}  // namespace rdlb
