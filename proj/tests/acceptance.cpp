// Acceptance-suite driver: runs one criterion (or all) and reports
// PASS/FAIL/SKIP per line. Exit 0 iff nothing failed.
//
// usage: acceptance [criterion-id] [cli-binary-path]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "statsum/selftest.hpp"

int main(int argc, char** argv) {
    statsum::selftest::Options opt;
    if (argc > 1) opt.only.push_back(std::atoi(argv[1]));
    if (argc > 2) opt.cli_path = argv[2];

    const auto results = statsum::selftest::run_acceptance(opt);
    std::fputs(statsum::selftest::format_results(results).c_str(), stdout);
    if (results.empty()) {
        std::fputs("no such criterion\n", stderr);
        return 2;
    }
    for (const auto& r : results)
        if (!r.pass && !r.skipped) return 1;
    return 0;
}
