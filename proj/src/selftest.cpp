#include "statsum/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "statsum/bsc_feedback.hpp"
#include "statsum/entropy.hpp"
#include "statsum/exact_oracle.hpp"
#include "statsum/exponent.hpp"
#include "statsum/monte_carlo.hpp"
#include "statsum/types.hpp"

namespace statsum::selftest {

namespace {

constexpr double kZGrid[] = {0.3, 0.5, 0.8};
constexpr long long kNGrid[] = {10, 20, 40};
constexpr long long kMGrid[] = {1, 2};
constexpr double kAGridUpper[] = {0.1, 0.2, 0.3, 0.4};
constexpr double kAGridLower[] = {0.6, 0.7, 0.8, 0.9};

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& msg) {
        if (!pass) detail << "; ";
        pass = false;
        detail << msg;
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

TailQuery make_query(double z, long long M, long long n, double a, TailDirection dir) {
    return {{z, M, n}, std::pow(z, a * double(n)), dir};
}

// --- criterion bodies ------------------------------------------------------

// Upper-tail sandwich containment over the 72-point grid.
CriterionResult criterion_1() {
    Check c;
    for (double z : kZGrid)
        for (long long n : kNGrid)
            for (long long M : kMGrid)
                for (double a : kAGridUpper) {
                    const TailQuery q = make_query(z, M, n, a, TailDirection::UpperTail);
                    const ExponentSandwich s = thm1_upper_tail_sandwich(q);
                    const double x = exact_tail(q) / (double(M) * double(n));
                    if (!(x >= s.lower - 1e-12 && x <= s.upper + 1e-12))
                        c.fail("z=" + fmt(z) + " n=" + std::to_string(n) + " M=" +
                               std::to_string(M) + " a=" + fmt(a) + ": exact " + fmt(x) +
                               " outside [" + fmt(s.lower) + ", " + fmt(s.upper) + "]");
                }
    if (!c.pass)
        c.detail << " -- the sandwich upper bound is not attainable for M >= 2 when a single "
                    "dominant term drives the tail (counterexample verified by exact "
                    "enumeration); the bound holds at every M=1 point";
    return {1, "upper-tail sandwich containment (72-point grid)", c.pass, false, c.detail.str(),
            0};
}

// Lower-tail bounds on the mirrored grid.
CriterionResult criterion_2() {
    Check c;
    for (double z : kZGrid)
        for (long long n : kNGrid)
            for (long long M : kMGrid)
                for (double a : kAGridLower) {
                    const TailQuery q = make_query(z, M, n, a, TailDirection::LowerTail);
                    const double bound = thm1_lower_tail_bound(q);
                    const double x = exact_tail(q) / (double(M) * double(n));
                    if (!(x <= bound + 1e-12))
                        c.fail("z=" + fmt(z) + " n=" + std::to_string(n) + " M=" +
                               std::to_string(M) + " a=" + fmt(a) + ": exact " + fmt(x) + " > " +
                               fmt(bound));
                }
    return {2, "lower-tail upper bounds (mirrored grid)", c.pass, false, c.detail.str(), 0};
}

CriterionResult criterion_3() {
    Check c;
    const SumSpec specs[] = {{1.0 / 3.0, 2, 4}, {0.5, 1, 1}, {0.7, 3, 3}};
    for (const SumSpec& s : specs) {
        const DualityReport r = duality_transform_check(s);
        if (!r.ok)
            c.fail("z=" + fmt(s.z) + " M=" + std::to_string(s.M) + " n=" + std::to_string(s.n) +
                   ": support dev " + fmt(r.max_support_dev) + ", prob dev " +
                   fmt(r.max_prob_dev));
    }
    return {3, "duality of S(z,M,n) and z^n S(1/z,M,n)", c.pass, false, c.detail.str(), 0};
}

// Chernoff dominance chain plus the stationary-lambda cross-check.
CriterionResult criterion_4() {
    Check c;
    for (double z : kZGrid)
        for (long long n : kNGrid)
            for (double a : kAGridUpper) {
                const TailQuery q = make_query(z, 1, n, a, TailDirection::UpperTail);
                const double exact = exact_tail(q) / double(n);
                const ChernoffCurve num = chernoff_numeric(q);
                const double analytic = binary_entropy(a) - std::log(2.0);
                const double cap = analytic + std::log(double(n) + 1.0) / double(n);
                if (!(exact <= num.value + 1e-12))
                    c.fail("z=" + fmt(z) + " n=" + std::to_string(n) + " a=" + fmt(a) +
                           ": exact " + fmt(exact) + " > chernoff " + fmt(num.value));
                // The optimized moment curve must dominate the truth and land
                // within the analytic slack (its minimum is h(a0) - ln 2).
                const ChernoffCurve env = chernoff_envelope(q);
                if (!(exact <= env.value + 1e-12))
                    c.fail("z=" + fmt(z) + " n=" + std::to_string(n) + " a=" + fmt(a) +
                           ": exact " + fmt(exact) + " > moment bound " + fmt(env.value));
                if (!(env.value <= cap + 1e-12))
                    c.fail("z=" + fmt(z) + " n=" + std::to_string(n) + " a=" + fmt(a) +
                           ": moment bound " + fmt(env.value) + " > analytic+slack " + fmt(cap));
                // Independent 1-D minimization of the moment curve must
                // recover the closed-form stationary tilt. (The minimizer of
                // the exponential-tilt bound is a different point; see the
                // envelope/stationary distinction in exponent.hpp.)
                const double lam = stationary_lambda(q);
                if (!(std::abs(env.lambda_star - lam) <= 1e-6 * std::abs(lam)))
                    c.fail("z=" + fmt(z) + " n=" + std::to_string(n) + " a=" + fmt(a) +
                           ": envelope lambda " + fmt(env.lambda_star) + " vs stationary " +
                           fmt(lam));
            }
    return {4, "Chernoff dominance chain and stationary-tilt cross-check", c.pass, false,
            c.detail.str(), 0};
}

CriterionResult criterion_5() {
    Check c;
    for (double z : kZGrid)
        for (long long n : kNGrid)
            for (long long M : kMGrid) {
                const SumSpec s{z, M, n};
                const double closed = exact_mean(s);
                const double enumerated = exact_sum_distribution(s).mean();
                if (!rel_eq(closed, enumerated, 1e-12))
                    c.fail("z=" + fmt(z) + " n=" + std::to_string(n) + " M=" + std::to_string(M) +
                           ": closed " + fmt(closed) + " vs enumerated " + fmt(enumerated));
            }
    for (double z : {0.3, 0.9, 2.0}) {
        const SumSpec s{z, 10, 20};
        const MeanEstimate mc = estimate_mean(s, {42, 1000000});
        const double mean = exact_mean(s);
        if (!(std::abs(mc.mean - mean) <= 5.0 * mc.stderr_))
            c.fail("z=" + fmt(z) + ": MC mean " + fmt(mc.mean) + " vs exact " + fmt(mean) +
                   " (5 sigma = " + fmt(5.0 * mc.stderr_) + ")");
    }
    return {5, "moment identity (closed form, enumeration, Monte Carlo)", c.pass, false,
            c.detail.str(), 0};
}

double exact_deviation_probability(const SumSpec& s) {
    const ConcentrationBound b = corollary1_bound(s);
    const DiscreteDistribution d = exact_sum_distribution(s);
    const double log_center =
        std::log(double(s.M)) + 0.5 * double(s.n) * std::log(s.z);
    double p = 0.0;
    for (std::size_t i = 0; i < d.support.size(); ++i)
        if (std::abs(std::log(d.support[i]) - log_center) >= b.deviation_threshold)
            p += d.probs[i];
    return p;
}

CriterionResult criterion_6() {
    Check c;
    const double p8 = exact_deviation_probability({0.5, 2, 8});
    if (!(p8 == 0.0 && p8 <= std::pow(9.0, -2.0)))
        c.fail("(0.5,2,8): exact deviation probability " + fmt(p8) + ", expected 0");
    const double p12 = exact_deviation_probability({0.5, 2, 12});
    if (!(p12 <= std::pow(13.0, -2.0)))
        c.fail("(0.5,2,12): exact deviation probability " + fmt(p12) + " > 13^-2");
    return {6, "concentration bound at enumerable scale", c.pass, false, c.detail.str(), 0};
}

CriterionResult criterion_7() {
    Check c;
    const ConcentrationReport r = concentration_experiment({0.5, 100000, 30}, 1000, {1, 1000});
    if (r.violations != 0)
        c.fail("violations = " + std::to_string(r.violations) + " (threshold " +
               fmt(r.threshold) + ")");
    return {7, "concentration experiment, zero violations", c.pass, false, c.detail.str(), 0};
}

CriterionResult criterion_8() {
    Check c;
    const TailQuery queries[] = {
        {{0.5, 2, 2}, 0.5, TailDirection::UpperTail},
        {{0.5, 2, 10}, std::pow(0.5, 5.0), TailDirection::UpperTail},
    };
    for (const TailQuery& q : queries) {
        const double exact = std::exp(exact_tail(q));
        for (std::uint64_t seed : {7, 8, 9}) {
            const McEstimate e = estimate_tail(q, {seed, 1000000});
            if (!(std::abs(e.point - exact) <= 4.0 * e.stderr_))
                c.fail("seed " + std::to_string(seed) + " n=" + std::to_string(q.spec.n) +
                       ": point " + fmt(e.point) + " vs exact " + fmt(exact));
        }
    }
    return {8, "Monte Carlo tail estimates vs exact oracle", c.pass, false, c.detail.str(), 0};
}

CriterionResult criterion_9() {
    Check c;
    for (double p : {0.01, 0.1, 0.25, 0.4}) {
        const ChannelParams ch(p);
        const RateSolution at_c = sphere_packing(ch.capacity(), ch);
        if (!(std::abs(at_c.E_sp) <= 1e-12))
            c.fail("p=" + fmt(p) + ": E_sp(C) = " + fmt(at_c.E_sp));
        for (int i = 1; i <= 9; ++i) {
            const double R = ch.capacity() * double(i) / 10.0;
            const RateSolution sol = sphere_packing(R, ch);
            const double back = std::log(2.0) - binary_entropy(sol.rho);
            if (!(std::abs(back - R) <= 1e-10))
                c.fail("p=" + fmt(p) + " R=" + fmt(R) + ": round trip off by " +
                       fmt(std::abs(back - R)));
        }
    }
    const auto root = rho1_matching(ChannelParams(0.4));
    if (!root || root->residual > 1e-10)
        c.fail("p=0.4: expected a rate-matching root with residual <= 1e-10");
    if (rho1_matching(ChannelParams(0.1)))
        c.fail("p=0.1: expected no rate-matching root");
    const ChannelParams ch01(0.1);
    const double z1 = z1_of_rate(std::log(2.0) - binary_entropy(0.3), ch01);
    const double expected = std::exp(-0.0822829 / 0.2);
    if (!rel_eq(z1, expected, 1e-6))
        c.fail("z1 = " + fmt(z1) + " vs expected " + fmt(expected));
    return {9, "rate solvers (sphere packing, rho1, z1)", c.pass, false, c.detail.str(), 0};
}

CriterionResult criterion_10() {
    Check c;
    const ChannelParams ch(0.1);
    const double E0 = 1.0;
    try {
        const CriticalTangent ct = critical_tangent(ch, E0);
        if (!(ct.residual <= 1e-10)) c.fail("residual " + fmt(ct.residual) + " > 1e-10");
        const double line = E0 - ct.lambda0 * ct.R_crit;
        const double curve = sphere_packing(ct.R_crit, ch).E_sp;
        if (!(std::abs(line - curve) <= 1e-8))
            c.fail("discontinuity at R_crit: " + fmt(std::abs(line - curve)));
    } catch (const NumericError& e) {
        c.fail(std::string("no tangent solution: ") + e.what() +
               " -- E0=1.0 exceeds E_sp(0, 0.1)=0.510826, so the tangency equation has no "
               "root for lambda >= 0 (its left side decreases monotonically from E0 to "
               "E0 - E_sp(0,p) > 0); a tangent from (0, E0) to the sphere-packing curve "
               "exists only for E0 < E_sp(0,p)");
    }
    return {10, "tangency continuity at R_crit (E0=1.0, p=0.1)", c.pass, false, c.detail.str(),
            0};
}

CriterionResult criterion_11() {
    Check c;
    const ChannelParams ch(0.05);
    {
        const CodeSetup setup(0.1, 16);
        const FeedbackExperiment e = feedback_experiment(setup, ch, 1000, 3);
        if (!(e.max_normalization_dev <= 1e-10))
            c.fail("posterior normalization dev " + fmt(e.max_normalization_dev) + " > 1e-10");
    }
    double prev = 2.0;
    for (long long n : {8, 12, 16}) {
        const CodeSetup setup(0.1, n);
        const FeedbackExperiment e = feedback_experiment(setup, ch, 10000, 1000 + n);
        if (!(e.error_rate < prev))
            c.fail("error rate " + fmt(e.error_rate) + " at n=" + std::to_string(n) +
                   " not below " + fmt(prev));
        prev = e.error_rate;
    }
    return {11, "feedback-simulation sanity (normalization, error decay)", c.pass, false,
            c.detail.str(), 0};
}

std::string capture(const std::string& cmd) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return "<popen failed>";
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    pclose(pipe);
    return out;
}

CriterionResult criterion_12(const std::string& cli_path) {
    if (cli_path.empty())
        return {12, "end-to-end determinism of CLI output", false, true,
                "skipped: no CLI binary path provided", 0};
    Check c;
    const std::string cmds[] = {
        " tail --mode mc --z 0.5 --M 2 --n 2 --A 0.5 --direction upper --trials 100000 --seed 7",
        " concentration --z 0.5 --M 1000 --n 20 --runs 1000 --seed 1",
        " feedback-sim --p 0.05 --R 0.1 --n 12 --trials 200 --seed 3",
    };
    for (const std::string& args : cmds) {
        const std::string first = capture("'" + cli_path + "'" + args);
        const std::string second = capture("'" + cli_path + "'" + args);
        if (first.empty() || first != second) c.fail("output differs for:" + args);
    }
    return {12, "end-to-end determinism of CLI output", c.pass, false, c.detail.str(), 0};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const Options& opt) {
    const bool heavy = !opt.fast_only;
    std::vector<CriterionResult> results;
    const auto want = [&](int id) {
        return opt.only.empty() ||
               std::find(opt.only.begin(), opt.only.end(), id) != opt.only.end();
    };
    const auto push = [&](CriterionResult r, auto start) {
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(std::move(r));
    };
    const auto run = [&](int id, auto&& body) {
        if (!want(id)) return;
        const auto start = std::chrono::steady_clock::now();
        push(body(), start);
    };
    run(1, [] { return criterion_1(); });
    run(2, [] { return criterion_2(); });
    run(3, [] { return criterion_3(); });
    run(4, [] { return criterion_4(); });
    if (heavy) run(5, [] { return criterion_5(); });
    run(6, [] { return criterion_6(); });
    if (heavy) run(7, [] { return criterion_7(); });
    if (heavy) run(8, [] { return criterion_8(); });
    run(9, [] { return criterion_9(); });
    run(10, [] { return criterion_10(); });
    if (heavy) run(11, [] { return criterion_11(); });
    run(12, [&] { return criterion_12(opt.cli_path); });
    return results;
}

std::string format_results(const std::vector<CriterionResult>& results) {
    std::ostringstream out;
    for (const CriterionResult& r : results) {
        out << "criterion " << (r.id < 10 ? " " : "") << r.id << "  "
            << (r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL")) << "  " << r.name << "  ("
            << fmt(r.seconds) << " s)";
        if (!r.detail.empty()) out << "\n             " << r.detail;
        out << "\n";
    }
    return out.str();
}

}  // namespace statsum::selftest
