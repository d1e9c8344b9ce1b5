#include <cmath>

#include <doctest.h>

#include "statsum/exact_oracle.hpp"
#include "statsum/monte_carlo.hpp"
#include "statsum/rng.hpp"
#include "statsum/types.hpp"

using namespace statsum;

TEST_CASE("binomial(n,1/2) sampler has the right first moments") {
    Xoshiro256ss rng(12345);
    const long long n = 9;
    const long long draws = 40000;
    double sum = 0.0, sumsq = 0.0;
    for (long long i = 0; i < draws; ++i) {
        const long long w = sample_binomial_half(rng, n);
        REQUIRE(w >= 0);
        REQUIRE(w <= n);
        sum += double(w);
        sumsq += double(w) * double(w);
    }
    const double mean = sum / double(draws);
    const double var = sumsq / double(draws) - mean * mean;
    CHECK(mean == doctest::Approx(4.5).epsilon(0.02));    // exact 4.5, se ~ 0.0075
    CHECK(var == doctest::Approx(2.25).epsilon(0.05));
}

TEST_CASE("substreams are decorrelated and reproducible") {
    CHECK(substream_seed(1, 0) != substream_seed(1, 1));
    CHECK(substream_seed(1, 0) != substream_seed(2, 0));
    CHECK(substream_seed(7, 3) == substream_seed(7, 3));
}

TEST_CASE("parallel and serial estimators agree bit-for-bit") {
    const TailQuery q{{0.5, 2, 10}, 0.125, TailDirection::UpperTail};
    for (long long trials : {1LL, 100LL, 4096LL, 10000LL, 12289LL}) {
        const McConfig cfg{42, trials, 4096};
        const McEstimate par = estimate_tail(q, cfg);
        const McEstimate ser = estimate_tail_serial(q, cfg);
        CHECK(par.point == ser.point);
        CHECK(par.stderr_ == ser.stderr_);
        CHECK(par.trials == ser.trials);
    }
    const SumSpec spec{0.7, 3, 12};
    const McConfig cfg{99, 20000, 1024};
    const MeanEstimate pm = estimate_mean(spec, cfg);
    const MeanEstimate sm = estimate_mean_serial(spec, cfg);
    CHECK(pm.mean == sm.mean);
    CHECK(pm.stderr_ == sm.stderr_);
    const ConcentrationReport pc = concentration_experiment(spec, 5000, {5, 5000, 256});
    const ConcentrationReport sc = concentration_experiment_serial(spec, 5000, {5, 5000, 256});
    CHECK(pc.violations == sc.violations);
    CHECK(pc.threshold == sc.threshold);
}

TEST_CASE("same seed reproduces, different seed varies") {
    const TailQuery q{{0.5, 1, 8}, 0.25, TailDirection::UpperTail};
    const McEstimate a = estimate_tail(q, {11, 50000});
    const McEstimate b = estimate_tail(q, {11, 50000});
    const McEstimate c = estimate_tail(q, {12, 50000});
    CHECK(a.point == b.point);
    CHECK(a.point != c.point);  // astronomically unlikely to collide
}

TEST_CASE("tail frequency matches the exact law within 5 sigma") {
    const TailQuery q{{0.5, 2, 6}, 0.25, TailDirection::UpperTail};
    const double truth = std::exp(exact_tail(q));
    const McEstimate e = estimate_tail(q, {2024, 200000});
    const double sigma = std::sqrt(truth * (1.0 - truth) / double(e.trials));
    CHECK(std::abs(e.point - truth) <= 5.0 * sigma);
    CHECK(e.log_point == doctest::Approx(std::log(e.point)).epsilon(1e-14));
}

TEST_CASE("sample mean matches the closed form within 5 sigma") {
    const SumSpec spec{0.3, 4, 15};
    const MeanEstimate e = estimate_mean(spec, {77, 200000});
    CHECK(std::abs(e.mean - exact_mean(spec)) <= 5.0 * e.stderr_);
}

TEST_CASE("certain and impossible events") {
    // S >= M z^n always; S >= M never strictly exceeded... use A at extremes.
    const double zn = std::pow(0.5, 8.0);
    const McEstimate sure =
        estimate_tail({{0.5, 2, 8}, zn, TailDirection::UpperTail}, {3, 1000});
    CHECK(sure.point == 1.0);
    const McEstimate never =
        estimate_tail({{0.5, 2, 8}, 1.5, TailDirection::UpperTail}, {3, 1000});
    CHECK(never.point == 0.0);
    CHECK(std::isinf(never.log_point));
}

TEST_CASE("config validation") {
    const TailQuery q{{0.5, 1, 4}, 0.5, TailDirection::UpperTail};
    CHECK_THROWS_AS(estimate_tail(q, {1, 0}), DomainError);
    CHECK_THROWS_AS(estimate_tail(q, {1, 10, 0}), DomainError);
}
