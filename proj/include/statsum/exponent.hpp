#pragma once

#include "statsum/types.hpp"

namespace statsum {

// Matching lower/upper bounds on (1/(Mn)) ln P, in nats per (M*n).
// upper - lower = (ln n + ln(n+1))/n for every valid query.
struct ExponentSandwich {
    double lower;
    double upper;
    double a_star;        // entropy argument a0 or a1
    double slack_lower;   // ln(n+1)/n
    double slack_upper;   // ln(n)/n
};

// Result of a 1-D minimization over the exponential-tilt parameter.
struct ChernoffCurve {
    double lambda_star;
    double value;          // normalized log-probability bound, nats per (M*n)
    double a_at_optimum;   // dominating weight fraction at the optimum
};

/// Entropy argument of a tail query: a0 = ln A/(n ln z) for z < 1,
/// a1 = 1 - ln A/(n ln z) for z > 1. Clamped to [0,1] inside the window.
double entropy_argument(const TailQuery& q);

/// Upper-tail sandwich for 0 < z < 1, z^{n/2} <= A <= 1:
/// (1/(Mn)) ln P{S >= MA} in [h(a0)-ln2-ln(n+1)/n, h(a0)-ln2+ln(n)/n].
ExponentSandwich thm1_upper_tail_sandwich(const TailQuery& q);

/// Lower-tail bound for 0 < z < 1, z^n <= A <= z^{n/2}:
/// (1/(Mn)) ln P{S <= MA} <= h(a0) - ln2 + ln(n+1)/n.
double thm1_lower_tail_bound(const TailQuery& q);

/// Upper-tail sandwich for z > 1, z^{n/2} <= A <= z^n. Delegates to the
/// z < 1 case on the transformed query (1/z, A z^{-n}).
ExponentSandwich thm2_upper_tail_sandwich(const TailQuery& q);

/// Lower-tail bound for z > 1, 1 <= A <= z^{n/2}.
double thm2_lower_tail_bound(const TailQuery& q);

// Deviation threshold and log-probability bound of the concentration
// inequality: P{|ln(S/(M z^{n/2}))| >= threshold} <= (n+1)^{-M}.
struct ConcentrationBound {
    double deviation_threshold;  // sqrt(n ln(n+1)) |ln z|
    double log_probability_bound;  // -M ln(n+1)
};
ConcentrationBound corollary1_bound(const SumSpec& spec);

/// Numerically minimizes over lambda >= 0 the exact moment bound
/// (1/n)[ -+ lambda A + ln sum_l C(n,l) e^{+- lambda z^l} ] - ln 2
/// (upper sign for UpperTail). Log-sum-exp accumulation throughout.
/// The value is a valid bound on (1/(Mn)) ln P for every M.
ChernoffCurve chernoff_numeric(const TailQuery& q);

/// Numerically minimizes over lambda the power-moment (Chebyshev) curve
/// [-lambda A ln A + n ln(1 + z^{lambda A})]/n - ln 2, i.e. the bound
/// P{S >= MA} <= (MA)^{-mu} E S^mu written in the tilt variable
/// lambda = mu/A (upper tail, 0 < z < 1). Its minimizer is the stationary
/// tilt parameter and its minimum equals h(a0) - ln 2, so it serves as the
/// independent cross-check of both closed forms.
ChernoffCurve chernoff_envelope(const TailQuery& q);

/// Closed-form stationary tilt parameter: lambda = ln((1-a)/a)/(-+ A ln z),
/// a the entropy argument. Upper branch needs z^{n/2} <= A <= 1, lower
/// branch z^n <= A <= z^{n/2}; 0 < z < 1 only.
double stationary_lambda(const TailQuery& q);

}  // namespace statsum
