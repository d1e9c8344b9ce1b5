#pragma once

#include <vector>

#include "statsum/types.hpp"

namespace statsum {

// Exact Binomial(n, 1/2) pmf, probs[k] = C(n,k) 2^{-n}.
struct WeightPmf {
    long long n;
    std::vector<double> probs;
};

/// Pascal-recurrence pmf; exact up to floating rounding. 1 <= n <= 1000.
WeightPmf weight_pmf(long long n);

// Exact finite law of S: strictly increasing support with aligned
// probabilities. Support points within 1e-12 relative are merged.
struct DiscreteDistribution {
    std::vector<double> support;
    std::vector<double> probs;

    double total_probability() const;
    double mean() const;
};

/// Law of S(z,M,n) by M-fold convolution of the law of z^w.
/// Budget: (n+1)^M <= 1e7.
DiscreteDistribution exact_sum_distribution(const SumSpec& spec);

/// ln P{S >= MA} (UpperTail) or ln P{S <= MA} (LowerTail); atoms at MA
/// count toward both directions (1e-12 relative comparison). -inf for an
/// empty event.
double exact_tail(const TailQuery& q);

/// Closed-form mean M 2^{-n} (1+z)^n.
double exact_mean(const SumSpec& spec);

/// ln E e^{lambda z^w} by log-sum-exp; defined for all real lambda.
double exact_log_mgf(double lambda, double z, long long n);

// Outcome of checking that S(z,M,n) and z^n S(1/z,M,n) share one law.
struct DualityReport {
    bool ok;
    double max_support_dev;  // max relative support deviation
    double max_prob_dev;     // max absolute probability deviation
};

/// Enumerates both sides independently; supports must agree within 1e-10
/// relative and probabilities within 1e-12 absolute.
DualityReport duality_transform_check(const SumSpec& spec);

}  // namespace statsum
