#pragma once

#include <cstdint>
#include <vector>

#include "statsum/rng.hpp"
#include "statsum/types.hpp"

namespace statsum {

struct McConfig {
    std::uint64_t seed = 0;
    long long trials = 1;
    long long chunk_size = 4096;

    void validate() const {
        if (trials < 1) throw DomainError("McConfig: trials must be >= 1");
        if (chunk_size < 1) throw DomainError("McConfig: chunk_size must be >= 1");
    }
};

struct McEstimate {
    double point;      // hit frequency in [0,1]
    double stderr_;    // sqrt(point (1-point) / trials)
    double log_point;  // ln(point), -inf on zero hits
    long long trials;
};

struct MeanEstimate {
    double mean;
    double stderr_;
    long long trials;
};

struct ConcentrationReport {
    long long violations;
    double threshold;  // sqrt(n ln(n+1)) |ln z|
    double bound_log;  // -M ln(n+1)
    long long runs;
};

/// One draw of S(z,M,n) from the given stream.
double sample_statsum(const SumSpec& spec, Xoshiro256ss& rng);

/// Monte Carlo tail frequency. Deterministic in (seed, trials, chunk_size)
/// for any parallelism degree: trials are split into fixed chunks with
/// substreams hash(seed, chunk), tallies reduced in chunk order.
McEstimate estimate_tail(const TailQuery& q, const McConfig& cfg);
/// Sequential reference implementation with identical output.
McEstimate estimate_tail_serial(const TailQuery& q, const McConfig& cfg);

/// Sample mean of S with its standard error; same chunking scheme.
MeanEstimate estimate_mean(const SumSpec& spec, const McConfig& cfg);
MeanEstimate estimate_mean_serial(const SumSpec& spec, const McConfig& cfg);

/// Counts realizations of S violating the concentration threshold
/// |ln(S/(M z^{n/2}))| >= sqrt(n ln(n+1)) |ln z| over `runs` draws.
ConcentrationReport concentration_experiment(const SumSpec& spec, long long runs,
                                             const McConfig& cfg);
ConcentrationReport concentration_experiment_serial(const SumSpec& spec, long long runs,
                                                    const McConfig& cfg);

}  // namespace statsum
