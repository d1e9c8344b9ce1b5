#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "statsum/rng.hpp"
#include "statsum/types.hpp"

namespace statsum {

// BSC(p) with 0 < p < 1/2; q = 1-p, likelihood-ratio base z = p/q in (0,1).
struct ChannelParams {
    double p;
    double q;
    double z;

    explicit ChannelParams(double crossover) : p(crossover), q(1.0 - crossover), z(p / q) {
        if (!(p > 0.0 && p < 0.5))
            throw DomainError("ChannelParams: crossover probability must lie in (0, 1/2)");
    }

    // Capacity in nats: ln 2 - h(p).
    double capacity() const;
};

// Rate R in nats per symbol with M = round(e^{Rn}) messages.
struct CodeSetup {
    long long n;
    double R;
    long long M;

    CodeSetup(double rate, long long block_length);
};

// Per-message disagreement counts and posteriors after k channel uses.
struct PosteriorState {
    long long k = 0;
    std::vector<long long> distances;
    std::vector<double> posteriors;

    static PosteriorState uniform(long long num_messages);
};

/// n ln q + d(y,x) ln z, d the Hamming distance.
double log_likelihood(std::span<const std::uint8_t> y, std::span<const std::uint8_t> x,
                      const ChannelParams& ch);

/// Advances the state by one received bit: messages whose code bit disagrees
/// gain one vote; posteriors recomputed stably (min distance subtracted).
PosteriorState posterior_update(const PosteriorState& state, std::uint8_t received_bit,
                                std::span<const std::uint8_t> codebook_column,
                                const ChannelParams& ch);

/// Log-odds ln[z_eval^{d_i} / sum_{j != i} z_eval^{d_j}]; z_eval = ch.z gives
/// the true posterior odds, other bases the tilted statistic.
double odds_statistic(const PosteriorState& state, long long i, double z_eval);

// One random-coding transmission through BSC(p).
struct FeedbackRun {
    bool error;                          // max-posterior decode failed (ties count as errors)
    std::vector<double> pi_true;         // posterior of the true message, k = 0..n
    std::vector<double> log_odds_true;   // log-odds of the true message, k = 0..n
    double max_normalization_dev;        // max |sum_i pi_i - 1| over all steps
};

/// Fresh uniform codebook (M x n fair bits), true message uniform, posterior
/// updated per symbol. M <= 2^20.
FeedbackRun simulate_feedback_run(const CodeSetup& setup, const ChannelParams& ch,
                                  Xoshiro256ss& rng);

// Aggregate over independent runs (chunked substreams; deterministic).
struct FeedbackExperiment {
    long long errors;
    long long runs;
    double error_rate;
    std::vector<double> mean_pi_true;    // per step k = 0..n
    std::vector<double> mean_log_odds;   // per step k = 0..n
    double max_normalization_dev;
};

FeedbackExperiment feedback_experiment(const CodeSetup& setup, const ChannelParams& ch,
                                       long long runs, std::uint64_t seed,
                                       long long chunk_size = 64);
FeedbackExperiment feedback_experiment_serial(const CodeSetup& setup, const ChannelParams& ch,
                                              long long runs, std::uint64_t seed,
                                              long long chunk_size = 64);

// Solved rate/exponent point on the sphere-packing curve.
struct RateSolution {
    double rho;       // in [p, 1/2]
    double R;         // nats
    double E_sp;      // nats
    double residual;  // |ln2 - h(rho) - R|
};

/// Solves ln2 - h(rho) = R on [p, 1/2] by bisection, then evaluates
/// E_sp = rho ln(rho/p) + (1-rho) ln((1-rho)/q).
RateSolution sphere_packing(double R, const ChannelParams& ch);

// Tangent segment from the zero-rate exponent to the sphere-packing curve.
struct CriticalTangent {
    double lambda0;
    double R_crit;
    double rho_crit;
    double residual;
};

/// Solves E0 - lambda ln2 + (1+lambda) ln[p^{1/(1+lambda)} + q^{1/(1+lambda)}] = 0
/// for lambda >= 0. Throws NumericError (with endpoint values) when the
/// bracket shows no sign change; that happens whenever E0 >= E_sp(0,p).
CriticalTangent critical_tangent(const ChannelParams& ch, double E0);

/// Piecewise bound: E0 - lambda0 R for R <= R_crit, else E_sp(R,p).
double f_upper_bound(double R, const ChannelParams& ch, double E0);

struct Rho1Root {
    double rho1;
    double residual;
};

/// Root of (1/2 - rho) ln(q/p) = ln2 - h(rho) on (0, 1/2), when a sign
/// change exists; absence is a value, not an error.
std::optional<Rho1Root> rho1_matching(const ChannelParams& ch);

/// z1 = exp(-R/(1/2 - rho)) with rho solved from R = ln2 - h(rho);
/// requires 0 < R < C(p) and the solved rho >= p.
double z1_of_rate(double R, const ChannelParams& ch);

/// Tail exponent of the odds statistic under the concentration
/// approximation S ~ M z^{n/2}: D(a0 || p) = -ln q - a0 ln z - h(a0) with
/// a0 = 1/2 + (R+c)/ln z. Valid for a0 in [p, 1].
double odds_tail_exponent(const ChannelParams& ch, double R, double c);

}  // namespace statsum
