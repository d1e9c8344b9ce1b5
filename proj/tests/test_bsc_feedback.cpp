#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "statsum/bsc_feedback.hpp"
#include "statsum/entropy.hpp"
#include "statsum/rng.hpp"
#include "statsum/types.hpp"

using namespace statsum;

TEST_CASE("channel parameters") {
    const ChannelParams ch(0.1);
    CHECK(ch.z == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(ch.capacity() == doctest::Approx(std::log(2.0) - binary_entropy(0.1)).epsilon(1e-15));
    CHECK(ch.capacity() == doctest::Approx(0.36806).epsilon(1e-4));
    CHECK_THROWS_AS(ChannelParams(0.0), DomainError);
    CHECK_THROWS_AS(ChannelParams(0.5), DomainError);
}

TEST_CASE("code setup sizes the message set from the rate") {
    const CodeSetup s(std::log(2.0), 10);  // 1 bit/symbol -> 1024 messages
    CHECK(s.M == 1024);
    CHECK_THROWS_AS(CodeSetup(-0.1, 10), DomainError);
    CHECK_THROWS_AS(CodeSetup(std::log(2.0), 30), DomainError);  // M > 2^20
}

TEST_CASE("single-step posterior: hand-checked 2/3 vs 1/3") {
    // p = 1/3 gives z = 1/2; one disagreement halves the posterior weight.
    const ChannelParams ch(1.0 / 3.0);
    PosteriorState st = PosteriorState::uniform(2);
    const std::uint8_t column[] = {0, 1};
    st = posterior_update(st, 0, column, ch);
    CHECK(st.k == 1);
    CHECK(st.distances[0] == 0);
    CHECK(st.distances[1] == 1);
    CHECK(st.posteriors[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(st.posteriors[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("sequential updates equal the batch likelihood computation") {
    const ChannelParams ch(0.12);
    const long long M = 5, n = 14;
    Xoshiro256ss rng(31);
    std::vector<std::vector<std::uint8_t>> code(M, std::vector<std::uint8_t>(n));
    std::vector<std::uint8_t> y(n);
    for (auto& row : code)
        for (auto& b : row) b = std::uint8_t(rng.next() & 1);
    for (auto& b : y) b = std::uint8_t(rng.next() & 1);

    PosteriorState st = PosteriorState::uniform(M);
    for (long long k = 0; k < n; ++k) {
        std::vector<std::uint8_t> column(M);
        for (long long i = 0; i < M; ++i) column[i] = code[i][k];
        st = posterior_update(st, y[k], column, ch);
    }
    // batch: softmax of the full-word log-likelihoods
    std::vector<double> ll(M);
    double best = -1e300;
    for (long long i = 0; i < M; ++i) {
        ll[i] = log_likelihood(y, code[i], ch);
        best = std::max(best, ll[i]);
    }
    double norm = 0.0;
    for (double v : ll) norm += std::exp(v - best);
    double total = 0.0;
    for (long long i = 0; i < M; ++i) {
        CHECK(st.posteriors[i] == doctest::Approx(std::exp(ll[i] - best) / norm).epsilon(1e-12));
        total += st.posteriors[i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("odds statistic at the true base is the posterior odds") {
    const ChannelParams ch(0.2);
    PosteriorState st = PosteriorState::uniform(4);
    const std::uint8_t c0[] = {0, 1, 1, 0};
    const std::uint8_t c1[] = {1, 0, 1, 1};
    st = posterior_update(st, 0, c0, ch);
    st = posterior_update(st, 1, c1, ch);
    for (long long i = 0; i < 4; ++i) {
        const double pi = st.posteriors[i];
        CHECK(odds_statistic(st, i, ch.z) ==
              doctest::Approx(std::log(pi / (1.0 - pi))).epsilon(1e-12));
    }
    CHECK_THROWS_AS(odds_statistic(PosteriorState::uniform(1), 0, 0.5), DomainError);
}

TEST_CASE("feedback experiment: determinism and normalization") {
    const ChannelParams ch(0.05);
    const CodeSetup setup(0.2, 8);
    const FeedbackExperiment par = feedback_experiment(setup, ch, 300, 17);
    const FeedbackExperiment ser = feedback_experiment_serial(setup, ch, 300, 17);
    CHECK(par.errors == ser.errors);
    CHECK(par.max_normalization_dev == ser.max_normalization_dev);
    REQUIRE(par.mean_pi_true.size() == 9);
    for (std::size_t k = 0; k < 9; ++k) {
        CHECK(par.mean_pi_true[k] == ser.mean_pi_true[k]);
        CHECK(par.mean_log_odds[k] == ser.mean_log_odds[k]);
    }
    CHECK(par.max_normalization_dev <= 1e-10);
    // posterior of the true message starts uniform and grows on average
    CHECK(par.mean_pi_true[0] == doctest::Approx(1.0 / double(setup.M)).epsilon(1e-12));
    CHECK(par.mean_pi_true[8] > par.mean_pi_true[0]);
}

TEST_CASE("sphere packing curve") {
    const ChannelParams ch(0.1);
    // R = C: exponent vanishes at rho = p.
    const RateSolution at_c = sphere_packing(ch.capacity(), ch);
    CHECK(at_c.rho == doctest::Approx(0.1).epsilon(1e-10));
    CHECK(std::abs(at_c.E_sp) <= 1e-10);
    // R = 0: rho = 1/2, E_sp(0,p) known in closed form.
    const RateSolution at_0 = sphere_packing(0.0, ch);
    CHECK(at_0.rho == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(at_0.E_sp == doctest::Approx(0.51082562376599072).epsilon(1e-10));
    // round trip: ln2 - h(rho) = R
    for (double frac : {0.1, 0.5, 0.9}) {
        const double R = frac * ch.capacity();
        const RateSolution s = sphere_packing(R, ch);
        CHECK(std::log(2.0) - binary_entropy(s.rho) == doctest::Approx(R).epsilon(1e-9));
        CHECK(s.residual <= 1e-10);
    }
    CHECK_THROWS_AS(sphere_packing(-0.01, ch), DomainError);
    CHECK_THROWS_AS(sphere_packing(ch.capacity() + 0.01, ch), DomainError);
}

TEST_CASE("tangent to the sphere-packing curve") {
    const ChannelParams ch(0.1);
    // feasible zero-rate exponent: a root exists and sits on the curve
    const CriticalTangent ct = critical_tangent(ch, 0.2);
    CHECK(ct.residual <= 1e-10);
    CHECK(ct.lambda0 > 0.0);
    CHECK(ct.R_crit > 0.0);
    CHECK(ct.R_crit < ch.capacity());
    // the piecewise bound is continuous at R_crit
    const double left = f_upper_bound(ct.R_crit * (1.0 - 1e-9), ch, 0.2);
    const double right = f_upper_bound(ct.R_crit * (1.0 + 1e-9), ch, 0.2);
    CHECK(left == doctest::Approx(right).epsilon(1e-6));
    // infeasible: E0 at/above the zero-rate sphere-packing value has no tangent
    CHECK_THROWS_AS(critical_tangent(ch, 1.0), NumericError);
}

TEST_CASE("rho1 matching condition") {
    // p = 0.4: (1/2 - rho) ln(q/p) crosses ln2 - h(rho) inside (0, 1/2)
    const auto root = rho1_matching(ChannelParams(0.4));
    REQUIRE(root.has_value());
    CHECK(root->residual <= 1e-10);
    CHECK(root->rho1 > 0.0);
    CHECK(root->rho1 < 0.5);
    // p = 0.1: the slope is too steep, no interior crossing
    CHECK_FALSE(rho1_matching(ChannelParams(0.1)).has_value());
}

TEST_CASE("z1 of rate") {
    const ChannelParams ch(0.1);
    // R = ln2 - h(0.3) gives rho = 0.3 and z1 = exp(-R/0.2)
    const double R = std::log(2.0) - binary_entropy(0.3);
    CHECK(z1_of_rate(R, ch) == doctest::Approx(std::exp(-R / 0.2)).epsilon(1e-6));
    CHECK_THROWS_AS(z1_of_rate(0.0, ch), DomainError);
    CHECK_THROWS_AS(z1_of_rate(ch.capacity(), ch), DomainError);
}

TEST_CASE("odds tail exponent is the divergence at the shifted argument") {
    const ChannelParams ch(0.1);
    const double R = 0.05, c = 0.0;
    const double a0 = 0.5 + (R + c) / std::log(ch.z);
    CHECK(a0 == doctest::Approx(0.477244).epsilon(1e-4));
    const double kl = a0 * std::log(a0 / ch.p) + (1.0 - a0) * std::log((1.0 - a0) / ch.q);
    CHECK(odds_tail_exponent(ch, R, c) == doctest::Approx(kl).epsilon(1e-12));
    CHECK(odds_tail_exponent(ch, R, c) == doctest::Approx(0.46185).epsilon(1e-3));
    // a0 below p leaves the divergence's validity region
    CHECK_THROWS_AS(odds_tail_exponent(ch, 1.0, 0.0), WindowError);
}
