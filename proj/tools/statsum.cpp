// Command-line front end: every operation exposed with machine-readable
// (JSON or CSV) output for plotting and regression baselines.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "statsum/bsc_feedback.hpp"
#include "statsum/entropy.hpp"
#include "statsum/exact_oracle.hpp"
#include "statsum/exponent.hpp"
#include "statsum/monte_carlo.hpp"
#include "statsum/record.hpp"
#include "statsum/selftest.hpp"
#include "statsum/types.hpp"

namespace {

using namespace statsum;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;   // argument/domain/window errors
constexpr int kExitNumeric = 3;  // budget exceeded or solver failure

struct Emit {
    std::string format = "json";
    std::string out_file;

    void operator()(const OutputRecord& rec) const {
        const std::string text = format == "csv" ? rec.to_csv() : rec.to_json();
        if (out_file.empty()) {
            std::fputs(text.c_str(), stdout);
        } else {
            std::ofstream f(out_file, std::ios::binary);
            if (!f) throw DomainError("cannot open output file: " + out_file);
            f << text;
        }
    }
};

TailDirection parse_direction(const std::string& s) {
    if (s == "upper") return TailDirection::UpperTail;
    if (s == "lower") return TailDirection::LowerTail;
    throw DomainError("direction must be 'upper' or 'lower', got '" + s + "'");
}

void add_common(CLI::App* cmd, Emit& emit) {
    cmd->add_option("--format", emit.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--out", emit.out_file, "Write the record to FILE instead of stdout");
}

// --- exponent ---------------------------------------------------------------

int cmd_exponent(double z, long long n, double A, const std::string& direction,
                 const std::string& method, const Emit& emit) {
    OutputRecord rec("exponent");
    rec.add_input("z", z);
    rec.add_input("n", n);
    rec.add_input("A", A);
    rec.add_input("direction", direction);
    rec.add_input("method", method);

    const TailQuery q{{z, 1, n}, A, parse_direction(direction)};
    q.validate();
    q.spec.reject_degenerate();

    if (method == "analytic" || method == "both") {
        if (q.direction == TailDirection::UpperTail) {
            const ExponentSandwich s =
                z < 1.0 ? thm1_upper_tail_sandwich(q) : thm2_upper_tail_sandwich(q);
            rec.add_output("a_star", s.a_star);
            rec.add_output("lower", s.lower);
            rec.add_output("upper", s.upper);
            rec.add_output("slack_lower", s.slack_lower);
            rec.add_output("slack_upper", s.slack_upper);
        } else {
            const double b = z < 1.0 ? thm1_lower_tail_bound(q) : thm2_lower_tail_bound(q);
            rec.add_output("a_star", entropy_argument(q));
            rec.add_output("bound", b);
        }
    }
    if (method == "chernoff" || method == "both") {
        const ChernoffCurve num = chernoff_numeric(q);
        rec.add_output("chernoff_lambda", num.lambda_star);
        rec.add_output("chernoff_value", num.value);
        rec.add_output("chernoff_a", num.a_at_optimum);
        if (z < 1.0) {
            // Stationary tilt and its independent envelope cross-check are
            // only defined inside the theorem windows.
            try {
                rec.add_output("stationary_lambda", stationary_lambda(q));
                if (q.direction == TailDirection::UpperTail) {
                    const ChernoffCurve env = chernoff_envelope(q);
                    rec.add_output("envelope_lambda", env.lambda_star);
                    rec.add_output("envelope_value", env.value);
                }
            } catch (const WindowError&) {
                rec.add_output("stationary_lambda", std::string("outside-window"));
            }
        }
    }
    emit(rec);
    return kExitOk;
}

// --- tail -------------------------------------------------------------------

int cmd_tail(double z, long long M, long long n, double A, const std::string& direction,
             const std::string& mode, long long trials, std::optional<std::uint64_t> seed,
             const Emit& emit) {
    OutputRecord rec("tail");
    rec.add_input("z", z);
    rec.add_input("M", M);
    rec.add_input("n", n);
    rec.add_input("A", A);
    rec.add_input("direction", direction);
    rec.add_input("mode", mode);

    const TailQuery q{{z, M, n}, A, parse_direction(direction)};
    if (mode == "exact") {
        rec.add_output("log_probability", exact_tail(q));
    } else {
        if (!seed) throw DomainError("--seed is required in mc mode");
        rec.add_input("trials", trials);
        rec.add_input("seed", (long long)*seed);
        const McEstimate e = estimate_tail(q, {*seed, trials});
        rec.add_output("point", e.point);
        rec.add_output("stderr", e.stderr_);
        rec.add_output("log_point", e.log_point);
        if (e.point == 0.0)
            rec.add_output("note", std::string("zero hits; heuristic one-sided upper bound ") +
                                       format_double(3.0 / double(trials)));
    }
    emit(rec);
    return kExitOk;
}

// --- concentration ----------------------------------------------------------

int cmd_concentration(double z, long long M, long long n, long long runs, std::uint64_t seed,
                      const Emit& emit) {
    OutputRecord rec("concentration");
    rec.add_input("z", z);
    rec.add_input("M", M);
    rec.add_input("n", n);
    rec.add_input("runs", runs);
    rec.add_input("seed", (long long)seed);
    const ConcentrationReport r = concentration_experiment({z, M, n}, runs, {seed, runs});
    rec.add_output("violations", r.violations);
    rec.add_output("threshold", r.threshold);
    rec.add_output("bound_log", r.bound_log);
    emit(rec);
    return kExitOk;
}

// --- rates ------------------------------------------------------------------

int cmd_rates(double p, std::optional<double> R, std::optional<double> E0,
              std::optional<double> c, bool bits, const Emit& emit) {
    OutputRecord rec("rates");
    rec.add_input("p", p);
    const ChannelParams ch(p);
    if (bits && R) *R *= std::log(2.0);  // rates accepted in bits, reported in nats
    if (R) rec.add_input("R", *R);
    if (E0) rec.add_input("E0", *E0);
    if (c) rec.add_input("c", *c);

    rec.add_output("capacity", ch.capacity());
    rec.add_output("z", ch.z);

    if (R) {
        const RateSolution sol = sphere_packing(*R, ch);
        rec.add_output("rho", sol.rho);
        rec.add_output("E_sp", sol.E_sp);
        rec.add_output("residual", sol.residual);
        if (*R > 0.0 && *R < ch.capacity()) rec.add_output("z1", z1_of_rate(*R, ch));
        if (c) rec.add_output("odds_tail_exponent", odds_tail_exponent(ch, *R, *c));
    }
    if (E0) {
        const CriticalTangent ct = critical_tangent(ch, *E0);
        rec.add_output("lambda0", ct.lambda0);
        rec.add_output("R_crit", ct.R_crit);
        rec.add_output("rho_crit", ct.rho_crit);
        rec.add_output("tangent_residual", ct.residual);
        if (R) rec.add_output("F_upper", f_upper_bound(*R, ch, *E0));
    }
    if (const auto root = rho1_matching(ch)) {
        rec.add_output("rho1", root->rho1);
        rec.add_output("rho1_residual", root->residual);
    } else {
        rec.add_output("rho1", std::string("none"));
    }
    emit(rec);
    return kExitOk;
}

// --- feedback-sim -----------------------------------------------------------

int cmd_feedback_sim(double p, double R, long long n, long long trials, std::uint64_t seed,
                     const std::string& traj_out, const Emit& emit) {
    OutputRecord rec("feedback-sim");
    rec.add_input("p", p);
    rec.add_input("R", R);
    rec.add_input("n", n);
    rec.add_input("trials", trials);
    rec.add_input("seed", (long long)seed);

    const ChannelParams ch(p);
    const CodeSetup setup(R, n);
    const FeedbackExperiment e = feedback_experiment(setup, ch, trials, seed);
    rec.add_output("M", setup.M);
    rec.add_output("errors", e.errors);
    rec.add_output("error_rate", e.error_rate);
    rec.add_output("max_normalization_dev", e.max_normalization_dev);

    if (!traj_out.empty()) {
        std::ofstream f(traj_out, std::ios::binary);
        if (!f) throw DomainError("cannot open trajectory file: " + traj_out);
        f << "k,mean_pi_true,mean_log_odds\n";
        for (std::size_t k = 0; k < e.mean_pi_true.size(); ++k)
            f << k << ',' << format_double(e.mean_pi_true[k]) << ','
              << format_double(e.mean_log_odds[k]) << '\n';
        rec.add_output("trajectory_file", traj_out);
    }
    emit(rec);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail bounds, exact enumeration and Monte Carlo for the statistical sum "
                 "S(z,M,n), with BSC rate/exponent solvers"};
    app.require_subcommand(1);

    Emit emit;

    // exponent
    double z = 0.5, A = 1.0;
    long long n = 1, M = 1;
    std::string direction = "upper", method = "analytic", mode = "exact";
    auto* exponent = app.add_subcommand("exponent", "Analytic and numeric tail exponents");
    exponent->add_option("--z", z, "Scale base z > 0, z != 1")->required();
    exponent->add_option("--n", n, "Vector length")->required();
    exponent->add_option("--A", A, "Tail threshold")->required();
    exponent->add_option("--direction", direction, "upper or lower")->required();
    exponent->add_option("--method", method, "analytic, chernoff or both")
        ->check(CLI::IsMember({"analytic", "chernoff", "both"}))
        ->capture_default_str();
    add_common(exponent, emit);

    // tail
    long long trials = 1000000, runs = 1000;
    std::optional<std::uint64_t> seed_opt;
    auto* tail = app.add_subcommand("tail", "Exact or Monte Carlo tail probability");
    tail->add_option("--z", z)->required();
    tail->add_option("--M", M)->required();
    tail->add_option("--n", n)->required();
    tail->add_option("--A", A)->required();
    tail->add_option("--direction", direction)->required();
    tail->add_option("--mode", mode, "exact or mc")
        ->check(CLI::IsMember({"exact", "mc"}))
        ->capture_default_str();
    tail->add_option("--trials", trials, "Monte Carlo trials (mc mode)");
    tail->add_option("--seed", seed_opt, "RNG seed (required in mc mode)");
    add_common(tail, emit);

    // concentration
    std::uint64_t seed = 0;
    auto* conc = app.add_subcommand("concentration", "Concentration-threshold experiment");
    conc->add_option("--z", z)->required();
    conc->add_option("--M", M)->required();
    conc->add_option("--n", n)->required();
    conc->add_option("--runs", runs)->required();
    conc->add_option("--seed", seed)->required();
    add_common(conc, emit);

    // rates
    double p = 0.1;
    std::optional<double> rate, E0, cexp;
    bool bits = false;
    auto* rates = app.add_subcommand("rates", "BSC rate/exponent solvers");
    rates->add_option("--p", p, "Crossover probability in (0, 1/2)")->required();
    rates->add_option("--R", rate, "Rate (nats, or bits with --bits)");
    rates->add_option("--E0", E0, "Zero-rate exponent for the tangent bound");
    rates->add_option("--c", cexp, "Odds threshold exponent (A = e^{cn})");
    rates->add_flag("--bits", bits, "Interpret --R in bits");
    add_common(rates, emit);

    // feedback-sim
    double fR = 0.1;
    std::string traj_out;
    auto* fsim = app.add_subcommand("feedback-sim", "Random-coding posterior simulation");
    fsim->add_option("--p", p)->required();
    fsim->add_option("--R", fR, "Rate in nats")->required();
    fsim->add_option("--n", n)->required();
    fsim->add_option("--trials", trials)->required();
    fsim->add_option("--seed", seed)->required();
    fsim->add_option("--traj-out", traj_out, "Write per-step trajectory CSV to FILE");
    add_common(fsim, emit);

    // selftest
    bool full = false;
    auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
    selftest->add_flag("--full", full, "Include the statistically heavy criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitDomain;
    }

    try {
        if (exponent->parsed()) return cmd_exponent(z, n, A, direction, method, emit);
        if (tail->parsed()) return cmd_tail(z, M, n, A, direction, mode, trials, seed_opt, emit);
        if (conc->parsed()) return cmd_concentration(z, M, n, runs, seed, emit);
        if (rates->parsed()) return cmd_rates(p, rate, E0, cexp, bits, emit);
        if (fsim->parsed()) return cmd_feedback_sim(p, fR, n, trials, seed, traj_out, emit);
        if (selftest->parsed()) {
            selftest::Options opt;
            opt.fast_only = !full;
            opt.cli_path = argv[0];
            const auto results = selftest::run_acceptance(opt);
            std::fputs(selftest::format_results(results).c_str(), stdout);
            for (const auto& r : results)
                if (!r.pass && !r.skipped) return 1;
            return kExitOk;
        }
    } catch (const BudgetError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    }
    return kExitOk;
}
