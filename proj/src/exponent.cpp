#include "statsum/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "statsum/entropy.hpp"

namespace statsum {

namespace {

constexpr double kLambdaCap = 1e9;

std::string window_msg(const char* what, double A, double lo, double hi) {
    return std::string(what) + ": A=" + std::to_string(A) + " outside validity window [" +
           std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

void check_window(const char* what, double A, double lo, double hi) {
    if (A < lo * (1.0 - kWindowTol) || A > hi * (1.0 + kWindowTol))
        throw WindowError(window_msg(what, A, lo, hi));
}

double clampd(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

// Tilted log-sum and its statistics for the exact moment bound.
struct TiltedSum {
    double log_sum;       // ln sum_l C(n,l) e^{s lambda z^l}
    double mean_zl;       // tilted mean of z^l
    double mean_l;        // tilted mean of l
};

TiltedSum tilted(double lambda, double sign, double z, long long n,
                 const std::vector<double>& log_c, const std::vector<double>& zpow) {
    const std::size_t m = std::size_t(n) + 1;
    std::vector<double> e(m);
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < m; ++l) {
        e[l] = log_c[l] + sign * lambda * zpow[l];
        emax = std::max(emax, e[l]);
    }
    double sum = 0.0, szl = 0.0, sl = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
        const double w = std::exp(e[l] - emax);
        sum += w;
        szl += w * zpow[l];
        sl += w * double(l);
    }
    return {emax + std::log(sum), szl / sum, sl / sum};
}

}  // namespace

double entropy_argument(const TailQuery& q) {
    q.validate();
    q.spec.reject_degenerate();
    const double z = q.spec.z;
    const double n = double(q.spec.n);
    // Overall window where the entropy argument lands in [0,1].
    if (z < 1.0)
        check_window("entropy_argument", q.A, std::pow(z, n), 1.0);
    else
        check_window("entropy_argument", q.A, 1.0, std::pow(z, n));
    const double ratio = std::log(q.A) / (n * std::log(z));
    const double a = (z < 1.0) ? ratio : 1.0 - ratio;
    return clampd(a, 0.0, 1.0);
}

ExponentSandwich thm1_upper_tail_sandwich(const TailQuery& q) {
    q.validate();
    q.spec.reject_degenerate();
    if (!(q.spec.z < 1.0))
        throw DomainError("thm1_upper_tail_sandwich: requires 0 < z < 1");
    if (q.direction != TailDirection::UpperTail)
        throw DomainError("thm1_upper_tail_sandwich: requires UpperTail direction");
    const double n = double(q.spec.n);
    check_window("thm1_upper_tail_sandwich", q.A, std::pow(q.spec.z, n / 2.0), 1.0);
    const double a0 = clampd(entropy_argument(q), 0.0, 0.5);
    const double center = binary_entropy(a0) - std::log(2.0);
    const double sl = std::log(n + 1.0) / n;
    const double su = std::log(n) / n;
    return {center - sl, center + su, a0, sl, su};
}

double thm1_lower_tail_bound(const TailQuery& q) {
    q.validate();
    q.spec.reject_degenerate();
    if (!(q.spec.z < 1.0))
        throw DomainError("thm1_lower_tail_bound: requires 0 < z < 1");
    if (q.direction != TailDirection::LowerTail)
        throw DomainError("thm1_lower_tail_bound: requires LowerTail direction");
    const double n = double(q.spec.n);
    check_window("thm1_lower_tail_bound", q.A, std::pow(q.spec.z, n), std::pow(q.spec.z, n / 2.0));
    const double a0 = clampd(entropy_argument(q), 0.5, 1.0);
    return binary_entropy(a0) - std::log(2.0) + std::log(n + 1.0) / n;
}

ExponentSandwich thm2_upper_tail_sandwich(const TailQuery& q) {
    q.validate();
    q.spec.reject_degenerate();
    if (!(q.spec.z > 1.0))
        throw DomainError("thm2_upper_tail_sandwich: requires z > 1");
    if (q.direction != TailDirection::UpperTail)
        throw DomainError("thm2_upper_tail_sandwich: requires UpperTail direction");
    const double n = double(q.spec.n);
    check_window("thm2_upper_tail_sandwich", q.A, std::pow(q.spec.z, n / 2.0),
                 std::pow(q.spec.z, n));
    // S(z,M,n) and z^n S(1/z,M,n) share the same law.
    TailQuery dual = q;
    dual.spec.z = 1.0 / q.spec.z;
    dual.A = q.A * std::pow(q.spec.z, -n);
    return thm1_upper_tail_sandwich(dual);
}

double thm2_lower_tail_bound(const TailQuery& q) {
    q.validate();
    q.spec.reject_degenerate();
    if (!(q.spec.z > 1.0))
        throw DomainError("thm2_lower_tail_bound: requires z > 1");
    if (q.direction != TailDirection::LowerTail)
        throw DomainError("thm2_lower_tail_bound: requires LowerTail direction");
    const double n = double(q.spec.n);
    check_window("thm2_lower_tail_bound", q.A, 1.0, std::pow(q.spec.z, n / 2.0));
    const double a1 = clampd(entropy_argument(q), 0.5, 1.0);
    return binary_entropy(a1) - std::log(2.0) + std::log(n + 1.0) / n;
}

ConcentrationBound corollary1_bound(const SumSpec& spec) {
    spec.reject_degenerate();
    const double n = double(spec.n);
    const double thr = std::sqrt(n * std::log(n + 1.0)) * std::abs(std::log(spec.z));
    return {thr, -double(spec.M) * std::log(n + 1.0)};
}

ChernoffCurve chernoff_numeric(const TailQuery& q) {
    q.validate();
    q.spec.reject_degenerate();
    const double z = q.spec.z;
    const long long n = q.spec.n;
    const double A = q.A;
    const double sign = (q.direction == TailDirection::UpperTail) ? 1.0 : -1.0;

    std::vector<double> log_c(std::size_t(n) + 1), zpow(std::size_t(n) + 1);
    for (long long l = 0; l <= n; ++l) {
        log_c[std::size_t(l)] = log_binomial(n, l);
        zpow[std::size_t(l)] = std::exp(double(l) * std::log(z));
    }

    const auto value_at = [&](double lam) {
        const TiltedSum t = tilted(lam, sign, z, n, log_c, zpow);
        return (-sign * lam * A + t.log_sum) / double(n) - std::log(2.0);
    };
    // d/dlambda of the objective, up to the positive factor 1/n:
    // upper tail: tilted mean of z^l minus A; lower tail: A minus tilted mean.
    const auto deriv_at = [&](double lam) {
        const TiltedSum t = tilted(lam, sign, z, n, log_c, zpow);
        return sign * (t.mean_zl - A);
    };

    if (deriv_at(0.0) >= 0.0) {
        const TiltedSum t0 = tilted(0.0, sign, z, n, log_c, zpow);
        return {0.0, 0.0, t0.mean_l / double(n)};
    }
    double lo = 0.0, hi = 1.0;
    while (deriv_at(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > kLambdaCap)
            throw NumericError(
                "chernoff_numeric: minimization does not bracket (derivative stays negative up to "
                "lambda=1e9); event may lie outside the support");
    }
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;  // floating-point resolution
        if (deriv_at(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double lam = 0.5 * (lo + hi);
    const TiltedSum t = tilted(lam, sign, z, n, log_c, zpow);
    return {lam, std::min(0.0, value_at(lam)), t.mean_l / double(n)};
}

ChernoffCurve chernoff_envelope(const TailQuery& q) {
    q.validate();
    q.spec.reject_degenerate();
    if (!(q.spec.z < 1.0))
        throw DomainError("chernoff_envelope: requires 0 < z < 1");
    if (q.direction != TailDirection::UpperTail)
        throw DomainError("chernoff_envelope: requires UpperTail direction");
    const double z = q.spec.z;
    const double n = double(q.spec.n);
    const double A = q.A;
    const double lnz = std::log(z);
    check_window("chernoff_envelope", A, std::pow(z, n / 2.0), 1.0);

    // Power-moment (Chebyshev) relaxation: P{S >= MA} <= (MA)^{-mu} E S^mu
    // with E (z^w)^mu = 2^{-n} (1+z^mu)^n, written in the tilt variable
    // lambda = mu / A so that the curve's minimizer is the stationary tilt:
    //   m(lambda) = [-lambda A ln A + n ln(1 + z^{lambda A})]/n - ln 2.
    const double a0 = std::log(A) / (n * lnz);  // in [0, 1/2] inside the window
    // d m/d lambda has the sign of sigma(lambda) - a0 flipped by ln z < 0,
    // where sigma = z^{lambda A}/(1 + z^{lambda A}) decreases from 1/2 to 0.
    const auto sigma_at = [&](double lam) {
        const double t = std::exp(lam * A * lnz);
        return t / (1.0 + t);
    };
    const auto value_at = [&](double lam) {
        return (-lam * A * std::log(A) + n * std::log1p(std::exp(lam * A * lnz))) / n -
               std::log(2.0);
    };

    if (sigma_at(0.0) <= a0) return {0.0, value_at(0.0), sigma_at(0.0)};
    double lo = 0.0, hi = 1.0;
    while (sigma_at(hi) > a0) {
        lo = hi;
        hi *= 2.0;
        if (hi > kLambdaCap)
            throw NumericError("chernoff_envelope: no bracket up to lambda=1e9");
    }
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;  // floating-point resolution
        if (sigma_at(mid) > a0)
            lo = mid;
        else
            hi = mid;
    }
    const double lam = 0.5 * (lo + hi);
    return {lam, value_at(lam), sigma_at(lam)};
}

double stationary_lambda(const TailQuery& q) {
    q.validate();
    q.spec.reject_degenerate();
    if (!(q.spec.z < 1.0))
        throw DomainError("stationary_lambda: requires 0 < z < 1");
    const double z = q.spec.z;
    const double n = double(q.spec.n);
    const double mid = std::pow(z, n / 2.0);
    if (q.direction == TailDirection::UpperTail) {
        check_window("stationary_lambda (upper branch)", q.A, mid, 1.0);
        const double a = clampd(entropy_argument(q), 0.0, 0.5);
        if (a == 0.5) return 0.0;
        return std::log((1.0 - a) / a) / (-q.A * std::log(z));
    }
    check_window("stationary_lambda (lower branch)", q.A, std::pow(z, n), mid);
    const double a = clampd(entropy_argument(q), 0.5, 1.0);
    if (a == 0.5) return 0.0;
    return std::log((1.0 - a) / a) / (q.A * std::log(z));
}

}  // namespace statsum
