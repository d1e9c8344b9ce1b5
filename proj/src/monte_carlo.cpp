#include "statsum/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace statsum {

namespace {

// Power table z^k, k = 0..n; underflow to 0 is harmless for the sum.
std::vector<double> power_table(double z, long long n) {
    std::vector<double> t(std::size_t(n) + 1);
    const double lnz = std::log(z);
    for (long long k = 0; k <= n; ++k) t[std::size_t(k)] = std::exp(double(k) * lnz);
    return t;
}

double draw_sum(const SumSpec& spec, Xoshiro256ss& rng, const std::vector<double>& pow_z) {
    double sum = 0.0, c = 0.0;  // Kahan
    for (long long j = 0; j < spec.M; ++j) {
        const long long w = sample_binomial_half(rng, spec.n);
        const double y = pow_z[std::size_t(w)] - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

long long num_chunks(long long trials, long long chunk) { return (trials + chunk - 1) / chunk; }

McEstimate finalize_tail(long long hits, long long trials) {
    const double p = double(hits) / double(trials);
    const double se = std::sqrt(p * (1.0 - p) / double(trials));
    const double lp = hits > 0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    return {p, se, lp, trials};
}

bool tail_hit(double s, double threshold, TailDirection dir) {
    if (rel_eq(s, threshold, kWindowTol)) return true;  // atoms count toward both tails
    return dir == TailDirection::UpperTail ? s >= threshold : s <= threshold;
}

}  // namespace

double sample_statsum(const SumSpec& spec, Xoshiro256ss& rng) {
    spec.reject_degenerate();
    return draw_sum(spec, rng, power_table(spec.z, spec.n));
}

McEstimate estimate_tail(const TailQuery& q, const McConfig& cfg) {
    q.validate();
    q.spec.reject_degenerate();
    cfg.validate();
    const auto pow_z = power_table(q.spec.z, q.spec.n);
    const double threshold = double(q.spec.M) * q.A;
    const long long chunks = num_chunks(cfg.trials, cfg.chunk_size);
    std::vector<long long> hits(std::size_t(chunks), 0);

#pragma omp parallel for schedule(static)
    for (long long c = 0; c < chunks; ++c) {
        Xoshiro256ss rng = make_substream(cfg.seed, std::uint64_t(c));
        const long long begin = c * cfg.chunk_size;
        const long long end = std::min(cfg.trials, begin + cfg.chunk_size);
        long long h = 0;
        for (long long t = begin; t < end; ++t)
            if (tail_hit(draw_sum(q.spec, rng, pow_z), threshold, q.direction)) ++h;
        hits[std::size_t(c)] = h;
    }
    long long total = 0;
    for (long long h : hits) total += h;
    return finalize_tail(total, cfg.trials);
}

McEstimate estimate_tail_serial(const TailQuery& q, const McConfig& cfg) {
    q.validate();
    q.spec.reject_degenerate();
    cfg.validate();
    const auto pow_z = power_table(q.spec.z, q.spec.n);
    const double threshold = double(q.spec.M) * q.A;
    const long long chunks = num_chunks(cfg.trials, cfg.chunk_size);
    long long total = 0;
    for (long long c = 0; c < chunks; ++c) {
        Xoshiro256ss rng = make_substream(cfg.seed, std::uint64_t(c));
        const long long begin = c * cfg.chunk_size;
        const long long end = std::min(cfg.trials, begin + cfg.chunk_size);
        for (long long t = begin; t < end; ++t)
            if (tail_hit(draw_sum(q.spec, rng, pow_z), threshold, q.direction)) ++total;
    }
    return finalize_tail(total, cfg.trials);
}

MeanEstimate estimate_mean(const SumSpec& spec, const McConfig& cfg) {
    spec.reject_degenerate();
    cfg.validate();
    const auto pow_z = power_table(spec.z, spec.n);
    const long long chunks = num_chunks(cfg.trials, cfg.chunk_size);
    std::vector<double> sums(std::size_t(chunks), 0.0), sqsums(std::size_t(chunks), 0.0);

#pragma omp parallel for schedule(static)
    for (long long c = 0; c < chunks; ++c) {
        Xoshiro256ss rng = make_substream(cfg.seed, std::uint64_t(c));
        const long long begin = c * cfg.chunk_size;
        const long long end = std::min(cfg.trials, begin + cfg.chunk_size);
        double s = 0.0, s2 = 0.0;
        for (long long t = begin; t < end; ++t) {
            const double x = draw_sum(spec, rng, pow_z);
            s += x;
            s2 += x * x;
        }
        sums[std::size_t(c)] = s;
        sqsums[std::size_t(c)] = s2;
    }
    double s = 0.0, s2 = 0.0;
    for (long long c = 0; c < chunks; ++c) {
        s += sums[std::size_t(c)];
        s2 += sqsums[std::size_t(c)];
    }
    const double mean = s / double(cfg.trials);
    const double var = std::max(0.0, s2 / double(cfg.trials) - mean * mean);
    return {mean, std::sqrt(var / double(cfg.trials)), cfg.trials};
}

MeanEstimate estimate_mean_serial(const SumSpec& spec, const McConfig& cfg) {
    spec.reject_degenerate();
    cfg.validate();
    const auto pow_z = power_table(spec.z, spec.n);
    const long long chunks = num_chunks(cfg.trials, cfg.chunk_size);
    double s = 0.0, s2 = 0.0;
    for (long long c = 0; c < chunks; ++c) {
        Xoshiro256ss rng = make_substream(cfg.seed, std::uint64_t(c));
        const long long begin = c * cfg.chunk_size;
        const long long end = std::min(cfg.trials, begin + cfg.chunk_size);
        double cs = 0.0, cs2 = 0.0;
        for (long long t = begin; t < end; ++t) {
            const double x = draw_sum(spec, rng, pow_z);
            cs += x;
            cs2 += x * x;
        }
        s += cs;
        s2 += cs2;
    }
    const double mean = s / double(cfg.trials);
    const double var = std::max(0.0, s2 / double(cfg.trials) - mean * mean);
    return {mean, std::sqrt(var / double(cfg.trials)), cfg.trials};
}

ConcentrationReport concentration_experiment(const SumSpec& spec, long long runs,
                                             const McConfig& cfg) {
    spec.reject_degenerate();
    if (runs < 1) throw DomainError("concentration_experiment: runs must be >= 1");
    const auto pow_z = power_table(spec.z, spec.n);
    const double threshold =
        std::sqrt(double(spec.n) * std::log(double(spec.n) + 1.0)) * std::abs(std::log(spec.z));
    const double log_center = std::log(double(spec.M)) + 0.5 * double(spec.n) * std::log(spec.z);
    const long long chunks = num_chunks(runs, cfg.chunk_size);
    std::vector<long long> viol(std::size_t(chunks), 0);

#pragma omp parallel for schedule(static)
    for (long long c = 0; c < chunks; ++c) {
        Xoshiro256ss rng = make_substream(cfg.seed, std::uint64_t(c));
        const long long begin = c * cfg.chunk_size;
        const long long end = std::min(runs, begin + cfg.chunk_size);
        long long v = 0;
        for (long long r = begin; r < end; ++r) {
            const double s = draw_sum(spec, rng, pow_z);
            if (std::abs(std::log(s) - log_center) >= threshold) ++v;
        }
        viol[std::size_t(c)] = v;
    }
    long long total = 0;
    for (long long v : viol) total += v;
    return {total, threshold, -double(spec.M) * std::log(double(spec.n) + 1.0), runs};
}

ConcentrationReport concentration_experiment_serial(const SumSpec& spec, long long runs,
                                                    const McConfig& cfg) {
    spec.reject_degenerate();
    if (runs < 1) throw DomainError("concentration_experiment: runs must be >= 1");
    const auto pow_z = power_table(spec.z, spec.n);
    const double threshold =
        std::sqrt(double(spec.n) * std::log(double(spec.n) + 1.0)) * std::abs(std::log(spec.z));
    const double log_center = std::log(double(spec.M)) + 0.5 * double(spec.n) * std::log(spec.z);
    const long long chunks = num_chunks(runs, cfg.chunk_size);
    long long total = 0;
    for (long long c = 0; c < chunks; ++c) {
        Xoshiro256ss rng = make_substream(cfg.seed, std::uint64_t(c));
        const long long begin = c * cfg.chunk_size;
        const long long end = std::min(runs, begin + cfg.chunk_size);
        for (long long r = begin; r < end; ++r) {
            const double s = draw_sum(spec, rng, pow_z);
            if (std::abs(std::log(s) - log_center) >= threshold) ++total;
        }
    }
    return {total, threshold, -double(spec.M) * std::log(double(spec.n) + 1.0), runs};
}

}  // namespace statsum
