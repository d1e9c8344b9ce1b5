// Timing harness comparing the parallel Monte Carlo kernels with their
// sequential reference implementations. Also asserts identical results,
// since the whole point of the chunked-substream design is that threading
// never changes the numbers.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "statsum/bsc_feedback.hpp"
#include "statsum/monte_carlo.hpp"
#include "statsum/types.hpp"

namespace {

template <typename F>
double time_seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-24s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n", name, serial,
                parallel, serial / parallel, identical ? "results identical" : "RESULTS DIFFER");
    if (!identical) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
    const long long scale = argc > 1 ? std::atoll(argv[1]) : 1;
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; parallel kernels run sequentially\n");
#endif

    {
        const statsum::TailQuery q{{0.5, 4, 64}, 0.0625, statsum::TailDirection::UpperTail};
        const statsum::McConfig cfg{1234, 2000000 * scale};
        statsum::McEstimate ser{}, par{};
        const double ts = time_seconds([&] { ser = statsum::estimate_tail_serial(q, cfg); });
        const double tp = time_seconds([&] { par = statsum::estimate_tail(q, cfg); });
        report("tail estimate", ts, tp, ser.point == par.point && ser.stderr_ == par.stderr_);
    }
    {
        const statsum::SumSpec spec{0.5, 1000, 30};
        const long long runs = 2000 * scale;
        statsum::ConcentrationReport ser{}, par{};
        const double ts = time_seconds(
            [&] { ser = statsum::concentration_experiment_serial(spec, runs, {1, runs}); });
        const double tp =
            time_seconds([&] { par = statsum::concentration_experiment(spec, runs, {1, runs}); });
        report("concentration", ts, tp, ser.violations == par.violations);
    }
    {
        const statsum::ChannelParams ch(0.05);
        const statsum::CodeSetup setup(0.15, 24);
        const long long runs = 4000 * scale;
        statsum::FeedbackExperiment ser{}, par{};
        const double ts = time_seconds(
            [&] { ser = statsum::feedback_experiment_serial(setup, ch, runs, 9); });
        const double tp =
            time_seconds([&] { par = statsum::feedback_experiment(setup, ch, runs, 9); });
        report("feedback simulation", ts, tp,
               ser.errors == par.errors &&
                   ser.max_normalization_dev == par.max_normalization_dev);
    }
    return 0;
}
