#include "statsum/bsc_feedback.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "statsum/entropy.hpp"

namespace statsum {

namespace {

constexpr long long kMessageCap = 1LL << 20;
constexpr double kSolverTol = 1e-12;
constexpr int kSolverIters = 200;

std::vector<double> posteriors_from_distances(const std::vector<long long>& d, double z) {
    const long long dmin = *std::min_element(d.begin(), d.end());
    const double lnz = std::log(z);
    std::vector<double> pi(d.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        pi[i] = std::exp(double(d[i] - dmin) * lnz);
        sum += pi[i];
    }
    for (double& x : pi) x /= sum;
    return pi;
}

// Bisection for a continuous function with f(lo) and f(hi) of opposite sign.
template <typename F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    for (int it = 0; it < kSolverIters && hi - lo > kSolverTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;  // interval no longer splittable
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double esp_at(double rho, const ChannelParams& ch) {
    double e = 0.0;
    if (rho > 0.0) e += rho * std::log(rho / ch.p);
    if (rho < 1.0) e += (1.0 - rho) * std::log((1.0 - rho) / ch.q);
    return e;
}

double tangent_lhs(double lambda, const ChannelParams& ch, double E0) {
    const double s = 1.0 / (1.0 + lambda);
    return E0 - lambda * std::log(2.0) +
           (1.0 + lambda) * std::log(std::pow(ch.p, s) + std::pow(ch.q, s));
}

}  // namespace

double ChannelParams::capacity() const { return std::log(2.0) - binary_entropy(p); }

CodeSetup::CodeSetup(double rate, long long block_length) : n(block_length), R(rate) {
    if (n < 1) throw DomainError("CodeSetup: n must be >= 1");
    if (!(R >= 0.0 && R <= std::log(2.0)))
        throw DomainError("CodeSetup: rate must lie in [0, ln 2] nats");
    M = std::llround(std::exp(R * double(n)));
    if (M > kMessageCap)
        throw DomainError("CodeSetup: M = round(e^{Rn}) exceeds the 2^20 message cap");
}

PosteriorState PosteriorState::uniform(long long num_messages) {
    if (num_messages < 1) throw DomainError("PosteriorState: need at least one message");
    PosteriorState s;
    s.k = 0;
    s.distances.assign(std::size_t(num_messages), 0);
    s.posteriors.assign(std::size_t(num_messages), 1.0 / double(num_messages));
    return s;
}

double log_likelihood(std::span<const std::uint8_t> y, std::span<const std::uint8_t> x,
                      const ChannelParams& ch) {
    if (y.size() != x.size()) throw DomainError("log_likelihood: length mismatch");
    long long d = 0;
    for (std::size_t i = 0; i < y.size(); ++i) d += (y[i] != x[i]);
    return double(y.size()) * std::log(ch.q) + double(d) * std::log(ch.z);
}

PosteriorState posterior_update(const PosteriorState& state, std::uint8_t received_bit,
                                std::span<const std::uint8_t> codebook_column,
                                const ChannelParams& ch) {
    if (codebook_column.size() != state.distances.size())
        throw DomainError("posterior_update: column size does not match message count");
    PosteriorState next;
    next.k = state.k + 1;
    next.distances = state.distances;
    for (std::size_t i = 0; i < codebook_column.size(); ++i)
        next.distances[i] += (codebook_column[i] != received_bit);
    next.posteriors = posteriors_from_distances(next.distances, ch.z);
    return next;
}

double odds_statistic(const PosteriorState& state, long long i, double z_eval) {
    const long long M = (long long)state.distances.size();
    if (M < 2) throw DomainError("odds_statistic: competitor set is empty (M < 2)");
    if (i < 0 || i >= M) throw DomainError("odds_statistic: message index out of range");
    if (!(z_eval > 0.0)) throw DomainError("odds_statistic: z_eval must be > 0");
    const double lnz = std::log(z_eval);
    double emax = -std::numeric_limits<double>::infinity();
    for (long long j = 0; j < M; ++j)
        if (j != i) emax = std::max(emax, double(state.distances[std::size_t(j)]) * lnz);
    double sum = 0.0;
    for (long long j = 0; j < M; ++j)
        if (j != i) sum += std::exp(double(state.distances[std::size_t(j)]) * lnz - emax);
    return double(state.distances[std::size_t(i)]) * lnz - (emax + std::log(sum));
}

FeedbackRun simulate_feedback_run(const CodeSetup& setup, const ChannelParams& ch,
                                  Xoshiro256ss& rng) {
    const long long M = setup.M;
    const long long n = setup.n;
    if (M < 2) throw DomainError("simulate_feedback_run: need M >= 2 messages");

    const long long true_idx = (long long)rng.uniform_below(std::uint64_t(M));

    // Fresh uniform codebook, message-major layout.
    std::vector<std::uint8_t> code(std::size_t(M) * std::size_t(n));
    {
        std::uint64_t word = 0;
        int bits_left = 0;
        for (auto& b : code) {
            if (bits_left == 0) {
                word = rng.next();
                bits_left = 64;
            }
            b = std::uint8_t(word & 1u);
            word >>= 1;
            --bits_left;
        }
    }

    FeedbackRun out;
    out.pi_true.reserve(std::size_t(n) + 1);
    out.log_odds_true.reserve(std::size_t(n) + 1);
    out.max_normalization_dev = 0.0;

    PosteriorState state = PosteriorState::uniform(M);
    std::vector<std::uint8_t> column(static_cast<std::size_t>(M));
    const auto record = [&] {
        out.pi_true.push_back(state.posteriors[std::size_t(true_idx)]);
        out.log_odds_true.push_back(odds_statistic(state, true_idx, ch.z));
        double s = 0.0;
        for (double x : state.posteriors) s += x;
        out.max_normalization_dev = std::max(out.max_normalization_dev, std::abs(s - 1.0));
    };
    record();
    for (long long k = 0; k < n; ++k) {
        for (long long i = 0; i < M; ++i)
            column[std::size_t(i)] = code[std::size_t(i) * std::size_t(n) + std::size_t(k)];
        const std::uint8_t sent = column[std::size_t(true_idx)];
        const std::uint8_t received = std::uint8_t(sent ^ (rng.uniform() < ch.p ? 1u : 0u));
        state = posterior_update(state, received, column, ch);
        record();
    }

    // Max-posterior decoding on final distances; ties are errors.
    const long long d_true = state.distances[std::size_t(true_idx)];
    bool error = false;
    for (long long j = 0; j < M; ++j)
        if (j != true_idx && state.distances[std::size_t(j)] <= d_true) error = true;
    out.error = error;
    return out;
}

namespace {

FeedbackExperiment run_experiment(const CodeSetup& setup, const ChannelParams& ch, long long runs,
                                  std::uint64_t seed, long long chunk_size, bool parallel) {
    if (runs < 1) throw DomainError("feedback_experiment: runs must be >= 1");
    if (chunk_size < 1) throw DomainError("feedback_experiment: chunk_size must be >= 1");
    const long long chunks = (runs + chunk_size - 1) / chunk_size;
    const std::size_t steps = std::size_t(setup.n) + 1;

    const std::size_t nchunks = static_cast<std::size_t>(chunks);
    std::vector<long long> errors(nchunks, 0);
    std::vector<double> norm_dev(nchunks, 0.0);
    std::vector<std::vector<double>> pi_sums(nchunks);
    std::vector<std::vector<double>> odds_sums(nchunks);

#pragma omp parallel for schedule(static) if (parallel)
    for (long long c = 0; c < chunks; ++c) {
        Xoshiro256ss rng = make_substream(seed, std::uint64_t(c));
        const long long begin = c * chunk_size;
        const long long end = std::min(runs, begin + chunk_size);
        std::vector<double> ps(steps, 0.0), os(steps, 0.0);
        long long err = 0;
        double dev = 0.0;
        for (long long r = begin; r < end; ++r) {
            const FeedbackRun run = simulate_feedback_run(setup, ch, rng);
            err += run.error ? 1 : 0;
            dev = std::max(dev, run.max_normalization_dev);
            for (std::size_t k = 0; k < steps; ++k) {
                ps[k] += run.pi_true[k];
                os[k] += run.log_odds_true[k];
            }
        }
        errors[std::size_t(c)] = err;
        norm_dev[std::size_t(c)] = dev;
        pi_sums[std::size_t(c)] = std::move(ps);
        odds_sums[std::size_t(c)] = std::move(os);
    }

    FeedbackExperiment out;
    out.runs = runs;
    out.errors = 0;
    out.max_normalization_dev = 0.0;
    out.mean_pi_true.assign(steps, 0.0);
    out.mean_log_odds.assign(steps, 0.0);
    for (long long c = 0; c < chunks; ++c) {
        out.errors += errors[std::size_t(c)];
        out.max_normalization_dev = std::max(out.max_normalization_dev, norm_dev[std::size_t(c)]);
        for (std::size_t k = 0; k < steps; ++k) {
            out.mean_pi_true[k] += pi_sums[std::size_t(c)][k];
            out.mean_log_odds[k] += odds_sums[std::size_t(c)][k];
        }
    }
    for (std::size_t k = 0; k < steps; ++k) {
        out.mean_pi_true[k] /= double(runs);
        out.mean_log_odds[k] /= double(runs);
    }
    out.error_rate = double(out.errors) / double(runs);
    return out;
}

}  // namespace

FeedbackExperiment feedback_experiment(const CodeSetup& setup, const ChannelParams& ch,
                                       long long runs, std::uint64_t seed, long long chunk_size) {
    return run_experiment(setup, ch, runs, seed, chunk_size, true);
}

FeedbackExperiment feedback_experiment_serial(const CodeSetup& setup, const ChannelParams& ch,
                                              long long runs, std::uint64_t seed,
                                              long long chunk_size) {
    return run_experiment(setup, ch, runs, seed, chunk_size, false);
}

RateSolution sphere_packing(double R, const ChannelParams& ch) {
    const double C = ch.capacity();
    if (!(R >= -kWindowTol && R <= C * (1.0 + kWindowTol)))
        throw WindowError("sphere_packing: R must lie in [0, C(p)] = [0, " + std::to_string(C) +
                          "], got " + std::to_string(R));
    const double target = std::min(std::max(R, 0.0), C);
    // ln2 - h(rho) decreases from C at rho=p to 0 at rho=1/2.
    const double rho = bisect(
        [&](double r) { return (std::log(2.0) - binary_entropy(r)) - target; }, ch.p, 0.5);
    const double residual = std::abs(std::log(2.0) - binary_entropy(rho) - target);
    return {rho, R, esp_at(rho, ch), residual};
}

CriticalTangent critical_tangent(const ChannelParams& ch, double E0) {
    if (!(E0 > 0.0)) throw DomainError("critical_tangent: E0 must be > 0");
    const double lambda_max = 1e6;
    const double f_lo = tangent_lhs(0.0, ch, E0);
    const double f_hi = tangent_lhs(lambda_max, ch, E0);
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw NumericError(
            "critical_tangent: no sign change on [0, 1e6]; endpoint values f(0)=" +
            std::to_string(f_lo) + ", f(1e6)=" + std::to_string(f_hi) +
            " (no tangent exists when E0 >= E_sp(0,p)=" + std::to_string(esp_at(0.5, ch)) + ")");
    const double lambda0 = bisect([&](double l) { return tangent_lhs(l, ch, E0); }, 0.0, lambda_max);
    const double rho_crit = 1.0 / (1.0 + std::pow(ch.q / ch.p, 1.0 / (1.0 + lambda0)));
    const double R_crit = std::log(2.0) - binary_entropy(rho_crit);
    return {lambda0, R_crit, rho_crit, std::abs(tangent_lhs(lambda0, ch, E0))};
}

double f_upper_bound(double R, const ChannelParams& ch, double E0) {
    const double C = ch.capacity();
    if (!(R >= -kWindowTol && R <= C * (1.0 + kWindowTol)))
        throw WindowError("f_upper_bound: R must lie in [0, C(p)]");
    const CriticalTangent ct = critical_tangent(ch, E0);
    if (R <= ct.R_crit) return E0 - ct.lambda0 * R;
    return sphere_packing(R, ch).E_sp;
}

std::optional<Rho1Root> rho1_matching(const ChannelParams& ch) {
    const double lqp = std::log(ch.q / ch.p);
    const auto f = [&](double rho) {
        return (0.5 - rho) * lqp - (std::log(2.0) - binary_entropy(rho));
    };
    // Grid scan for a sign change on (0, 1/2).
    constexpr int kGrid = 1000;
    double prev_x = 1e-9;
    double prev_f = f(prev_x);
    for (int i = 1; i <= kGrid; ++i) {
        const double x = 0.5 * double(i) / double(kGrid + 1);
        const double fx = f(x);
        if ((fx <= 0.0) != (prev_f <= 0.0)) {
            const double rho1 = bisect(f, prev_x, x);
            return Rho1Root{rho1, std::abs(f(rho1))};
        }
        prev_x = x;
        prev_f = fx;
    }
    return std::nullopt;
}

double z1_of_rate(double R, const ChannelParams& ch) {
    const double C = ch.capacity();
    if (!(R > 0.0 && R < C))
        throw WindowError("z1_of_rate: R must lie in (0, C(p))");
    const RateSolution sol = sphere_packing(R, ch);
    if (sol.rho < ch.p * (1.0 - kWindowTol))
        throw WindowError("z1_of_rate: solved rho < p, outside the validity window");
    return std::exp(-R / (0.5 - sol.rho));
}

double odds_tail_exponent(const ChannelParams& ch, double R, double c) {
    if (!(R >= 0.0)) throw DomainError("odds_tail_exponent: R must be >= 0");
    const double lnz = std::log(ch.z);
    const double a0 = 0.5 + (R + c) / lnz;
    if (!(a0 >= ch.p - kWindowTol && a0 <= 1.0 + kWindowTol))
        throw WindowError("odds_tail_exponent: a0 = " + std::to_string(a0) +
                          " outside the validity window [p, 1]");
    const double a = std::min(1.0, std::max(ch.p, a0));
    return -std::log(ch.q) - a * lnz - binary_entropy(a);
}

}  // namespace statsum
