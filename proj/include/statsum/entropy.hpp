#pragma once

#include <utility>

namespace statsum {

/// Binary entropy h(x) = -x ln x - (1-x) ln(1-x) in nats, with h(0)=h(1)=0.
double binary_entropy(double x);

/// log C(n,k) via lgamma; valid for 0 <= k <= n.
double log_binomial(long long n, long long k);

/// Entropy-based bounds on the binomial coefficient:
/// e^{n h(k/n)}/(n+1) <= C(n,k) <= e^{n h(k/n)}.
struct BinomBounds {
    double lower;
    double upper;
};
BinomBounds binom_bounds(long long n, long long k);

/// Evaluates both sides of h(1/2-eps) <= ln2 - 2 eps^2 for eps in [0, 1/2].
std::pair<double, double> entropy_quadratic_gap(double epsilon);

}  // namespace statsum
