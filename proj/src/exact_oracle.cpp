#include "statsum/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "statsum/entropy.hpp"

namespace statsum {

namespace {

constexpr double kMergeTol = 1e-12;      // relative, support merging
constexpr double kEnumBudget = 1e7;      // cap on (n+1)^M
constexpr long long kPmfCap = 1000;

// Compensated (Kahan) accumulator.
struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

void check_budget(const SumSpec& spec) {
    const double log_states = double(spec.M) * std::log(double(spec.n) + 1.0);
    if (log_states > std::log(kEnumBudget) * (1.0 + 1e-12))
        throw BudgetError("enumeration budget exceeded: (n+1)^M = (" + std::to_string(spec.n + 1) +
                          ")^" + std::to_string(spec.M) + " > 1e7");
}

}  // namespace

WeightPmf weight_pmf(long long n) {
    if (n < 1 || n > kPmfCap)
        throw DomainError("weight_pmf: n must lie in [1, 1000], got " + std::to_string(n));
    std::vector<double> p{1.0};
    for (long long i = 1; i <= n; ++i) {
        std::vector<double> q(std::size_t(i) + 1, 0.0);
        for (std::size_t k = 0; k < p.size(); ++k) {
            q[k] += 0.5 * p[k];
            q[k + 1] += 0.5 * p[k];
        }
        p = std::move(q);
    }
    return {n, std::move(p)};
}

double DiscreteDistribution::total_probability() const {
    Kahan k;
    for (double p : probs) k.add(p);
    return k.sum;
}

double DiscreteDistribution::mean() const {
    Kahan k;
    for (std::size_t i = 0; i < probs.size(); ++i) k.add(support[i] * probs[i]);
    return k.sum;
}

DiscreteDistribution exact_sum_distribution(const SumSpec& spec) {
    spec.reject_degenerate();
    check_budget(spec);

    const WeightPmf pmf = weight_pmf(spec.n);
    const double lnz = std::log(spec.z);

    // Law of a single term z^w, support ascending.
    DiscreteDistribution base;
    base.support.reserve(pmf.probs.size());
    base.probs.reserve(pmf.probs.size());
    if (spec.z < 1.0) {
        for (long long k = spec.n; k >= 0; --k) {
            base.support.push_back(std::exp(double(k) * lnz));
            base.probs.push_back(pmf.probs[std::size_t(k)]);
        }
    } else {
        for (long long k = 0; k <= spec.n; ++k) {
            base.support.push_back(std::exp(double(k) * lnz));
            base.probs.push_back(pmf.probs[std::size_t(k)]);
        }
    }

    DiscreteDistribution cur = base;
    for (long long j = 1; j < spec.M; ++j) {
        std::vector<std::pair<double, double>> atoms;
        atoms.reserve(cur.support.size() * base.support.size());
        for (std::size_t a = 0; a < cur.support.size(); ++a)
            for (std::size_t b = 0; b < base.support.size(); ++b)
                atoms.emplace_back(cur.support[a] + base.support[b],
                                   cur.probs[a] * base.probs[b]);
        std::sort(atoms.begin(), atoms.end());

        DiscreteDistribution next;
        Kahan acc;
        double v = atoms.front().first;
        for (const auto& [value, prob] : atoms) {
            if (rel_eq(value, v, kMergeTol)) {
                acc.add(prob);
            } else {
                next.support.push_back(v);
                next.probs.push_back(acc.sum);
                acc = Kahan{};
                acc.add(prob);
                v = value;
            }
        }
        next.support.push_back(v);
        next.probs.push_back(acc.sum);
        cur = std::move(next);
    }
    return cur;
}

double exact_tail(const TailQuery& q) {
    q.validate();
    const DiscreteDistribution d = exact_sum_distribution(q.spec);
    const double threshold = double(q.spec.M) * q.A;
    Kahan sum;
    if (q.direction == TailDirection::UpperTail) {
        for (std::size_t i = d.support.size(); i-- > 0;) {
            const double v = d.support[i];
            if (v > threshold || rel_eq(v, threshold, kMergeTol))
                sum.add(d.probs[i]);
            else
                break;
        }
    } else {
        for (std::size_t i = 0; i < d.support.size(); ++i) {
            const double v = d.support[i];
            if (v < threshold || rel_eq(v, threshold, kMergeTol))
                sum.add(d.probs[i]);
            else
                break;
        }
    }
    if (sum.sum <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::min(1.0, sum.sum));
}

double exact_mean(const SumSpec& spec) {
    spec.validate();
    return double(spec.M) * std::exp(double(spec.n) * std::log((1.0 + spec.z) / 2.0));
}

double exact_log_mgf(double lambda, double z, long long n) {
    if (!(z > 0.0)) throw DomainError("exact_log_mgf: z must be > 0");
    if (n < 1 || n > kPmfCap) throw DomainError("exact_log_mgf: n must lie in [1, 1000]");
    const double lnz = std::log(z);
    double emax = -std::numeric_limits<double>::infinity();
    std::vector<double> e(std::size_t(n) + 1);
    for (long long l = 0; l <= n; ++l) {
        e[std::size_t(l)] =
            log_binomial(n, l) - double(n) * std::log(2.0) + lambda * std::exp(double(l) * lnz);
        emax = std::max(emax, e[std::size_t(l)]);
    }
    Kahan sum;
    for (double x : e) sum.add(std::exp(x - emax));
    return emax + std::log(sum.sum);
}

DualityReport duality_transform_check(const SumSpec& spec) {
    spec.reject_degenerate();
    const DiscreteDistribution lhs = exact_sum_distribution(spec);
    SumSpec dual = spec;
    dual.z = 1.0 / spec.z;
    const DiscreteDistribution rhs = exact_sum_distribution(dual);
    const double scale = std::exp(double(spec.n) * std::log(spec.z));

    const double inf = std::numeric_limits<double>::infinity();
    if (lhs.support.size() != rhs.support.size()) return {false, inf, inf};
    double sdev = 0.0, pdev = 0.0;
    for (std::size_t i = 0; i < lhs.support.size(); ++i) {
        const double v = rhs.support[i] * scale;
        sdev = std::max(sdev, std::abs(v - lhs.support[i]) /
                                  std::max(std::abs(v), std::abs(lhs.support[i])));
        pdev = std::max(pdev, std::abs(rhs.probs[i] - lhs.probs[i]));
    }
    return {sdev <= 1e-10 && pdev <= 1e-12, sdev, pdev};
}

}  // namespace statsum
