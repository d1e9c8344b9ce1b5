#include "statsum/entropy.hpp"

#include <cmath>
#include <string>

#include "statsum/types.hpp"

namespace statsum {

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("binary_entropy: argument must lie in [0,1], got " + std::to_string(x));
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
}

double log_binomial(long long n, long long k) {
    if (k < 0 || k > n)
        throw DomainError("log_binomial: need 0 <= k <= n");
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

BinomBounds binom_bounds(long long n, long long k) {
    if (k < 0 || k > n)
        throw DomainError("binom_bounds: need 0 <= k <= n, got k=" + std::to_string(k) +
                          " n=" + std::to_string(n));
    const double nh = double(n) * binary_entropy(double(k) / double(n));
    const double upper = std::exp(nh);
    return {upper / (double(n) + 1.0), upper};
}

std::pair<double, double> entropy_quadratic_gap(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 0.5))
        throw DomainError("entropy_quadratic_gap: epsilon must lie in [0, 1/2]");
    const double lhs = binary_entropy(0.5 - epsilon);
    const double rhs = std::log(2.0) - 2.0 * epsilon * epsilon;
    return {lhs, rhs};
}

}  // namespace statsum
