#include <cmath>

#include <doctest.h>

#include "statsum/exact_oracle.hpp"
#include "statsum/exponent.hpp"
#include "statsum/types.hpp"

using namespace statsum;

namespace {
TailQuery upper_q(double z, long long M, long long n, double A) {
    return {{z, M, n}, A, TailDirection::UpperTail};
}
TailQuery lower_q(double z, long long M, long long n, double A) {
    return {{z, M, n}, A, TailDirection::LowerTail};
}
}  // namespace

TEST_CASE("entropy argument reference point") {
    // z = 0.5, n = 10, A = z^3: a0 = 3/10.
    CHECK(entropy_argument(upper_q(0.5, 1, 10, 0.125)) == doctest::Approx(0.3).epsilon(1e-13));
    // z = 2, n = 10, A = z^7: a1 = 1 - 7/10.
    CHECK(entropy_argument(upper_q(2.0, 1, 10, 128.0)) == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("sandwich gap identity") {
    for (double z : {0.3, 0.5, 0.8}) {
        for (long long n : {10LL, 20LL, 40LL}) {
            for (double a : {0.1, 0.25, 0.4}) {
                const double A = std::pow(z, a * double(n));
                const ExponentSandwich s = thm1_upper_tail_sandwich(upper_q(z, 1, n, A));
                const double gap = (std::log(double(n)) + std::log(double(n + 1))) / double(n);
                CHECK(s.upper - s.lower == doctest::Approx(gap).epsilon(1e-12));
                CHECK(s.slack_lower == doctest::Approx(std::log(double(n + 1)) / n).epsilon(1e-13));
                CHECK(s.slack_upper == doctest::Approx(std::log(double(n)) / n).epsilon(1e-13));
                CHECK(s.a_star == doctest::Approx(a).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("window enforcement") {
    CHECK_THROWS_AS(thm1_upper_tail_sandwich(upper_q(0.5, 1, 10, 2.0)), WindowError);
    CHECK_THROWS_AS(thm1_upper_tail_sandwich(upper_q(0.5, 1, 10, 0.01)), WindowError);
    CHECK_THROWS_AS(thm1_lower_tail_bound(lower_q(0.5, 1, 10, 0.9)), WindowError);
    CHECK_THROWS_AS(thm1_upper_tail_sandwich(upper_q(2.0, 1, 10, 0.5)), DomainError);
    CHECK_THROWS_AS(thm2_upper_tail_sandwich(upper_q(0.5, 1, 10, 0.125)), DomainError);
    // endpoints are inside the window
    CHECK_NOTHROW(thm1_upper_tail_sandwich(upper_q(0.5, 1, 10, std::pow(0.5, 5.0))));
    CHECK_NOTHROW(thm1_upper_tail_sandwich(upper_q(0.5, 1, 10, 1.0)));
}

TEST_CASE("duality delegation is exact") {
    // z > 1 queries must reproduce the transformed z < 1 computation bit-for-bit.
    const double z = 2.5;
    const long long n = 12;
    const double A = std::pow(z, 0.75 * n);
    const ExponentSandwich direct = thm2_upper_tail_sandwich(upper_q(z, 2, n, A));
    const ExponentSandwich transformed =
        thm1_upper_tail_sandwich(upper_q(1.0 / z, 2, n, A * std::pow(z, -double(n))));
    CHECK(direct.lower == transformed.lower);
    CHECK(direct.upper == transformed.upper);
    CHECK(direct.a_star == transformed.a_star);
}

TEST_CASE("stationary tilt parameter: closed form vs envelope minimizer") {
    // z = 0.5, n = 10, A = z^3: lambda = ln(7/3)/(-A ln z).
    const TailQuery q = upper_q(0.5, 1, 10, 0.125);
    const double expect = std::log(7.0 / 3.0) / (0.125 * std::log(2.0));
    CHECK(stationary_lambda(q) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(stationary_lambda(q) == doctest::Approx(9.7791).epsilon(1e-4));
    const ChernoffCurve env = chernoff_envelope(q);
    CHECK(env.lambda_star == doctest::Approx(stationary_lambda(q)).epsilon(1e-6));
    CHECK(env.a_at_optimum == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("numeric Chernoff bound dominates the exact probability") {
    for (double z : {0.3, 0.5, 0.8}) {
        for (long long n : {10LL, 16LL}) {
            for (double a : {0.1, 0.2, 0.3, 0.4}) {
                const TailQuery q = upper_q(z, 1, n, std::pow(z, a * double(n)));
                const ChernoffCurve c = chernoff_numeric(q);
                CHECK(c.value <= 0.0 + 1e-15);
                CHECK(exact_tail(q) / double(n) <= c.value + 1e-10);
            }
        }
    }
}

TEST_CASE("concentration bound constants") {
    const ConcentrationBound b = corollary1_bound({0.5, 3, 20});
    CHECK(b.deviation_threshold ==
          doctest::Approx(std::sqrt(20.0 * std::log(21.0)) * std::log(2.0)).epsilon(1e-13));
    CHECK(b.log_probability_bound == doctest::Approx(-3.0 * std::log(21.0)).epsilon(1e-13));
}

TEST_CASE("lower-tail bound sign and window") {
    const double b = thm1_lower_tail_bound(lower_q(0.5, 2, 10, std::pow(0.5, 7.0)));
    // h(0.7) - ln 2 + ln 11 / 10
    const double expect = 0.61086430205489354 - std::log(2.0) + std::log(11.0) / 10.0;
    CHECK(b == doctest::Approx(expect).epsilon(1e-12));
}
