#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace statsum {

// Argument/domain/window violations map to CLI exit code 2.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A value outside the validity window of a bound or solver.
struct WindowError : DomainError {
    using DomainError::DomainError;
};

// z = 1 collapses the sum to a constant; rejected everywhere.
struct DegenerateError : DomainError {
    using DomainError::DomainError;
};

// Enumeration budget exceeded; CLI exit code 3.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric failure (no bracket, no root); CLI exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool rel_eq(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// The triple (z, M, n): sum of M i.i.d. terms z^w, w ~ Binomial(n, 1/2).
struct SumSpec {
    double z = 0.5;
    long long M = 1;
    long long n = 1;

    void validate() const {
        if (!(z > 0.0)) throw DomainError("SumSpec: z must be > 0, got " + std::to_string(z));
        if (M < 1) throw DomainError("SumSpec: M must be >= 1, got " + std::to_string(M));
        if (n < 1) throw DomainError("SumSpec: n must be >= 1, got " + std::to_string(n));
    }
    // z = 1 makes S identically M.
    bool degenerate() const { return z == 1.0; }
    void reject_degenerate() const {
        validate();
        if (degenerate()) throw DegenerateError("degenerate z=1: S(1,M,n) is identically M");
    }
};

enum class TailDirection { UpperTail, LowerTail };

// Tail event {S >= M*A} (upper) or {S <= M*A} (lower).
struct TailQuery {
    SumSpec spec;
    double A = 1.0;
    TailDirection direction = TailDirection::UpperTail;

    void validate() const {
        spec.validate();
        if (!(A > 0.0)) throw DomainError("TailQuery: A must be > 0, got " + std::to_string(A));
    }
};

// Tolerance used when comparing A against window endpoints computed in
// floating point (e.g. A = z^{n/2}).
inline constexpr double kWindowTol = 1e-12;

}  // namespace statsum
