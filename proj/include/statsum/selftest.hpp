#pragma once

#include <string>
#include <vector>

namespace statsum::selftest {

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    bool skipped;        // not runnable in this context (e.g. no CLI path)
    std::string detail;  // human-readable evidence, filled on failure or interest
    double seconds;
};

struct Options {
    bool fast_only = false;   // skip the statistically heavy criteria
    std::string cli_path;     // binary used by the end-to-end determinism check
    std::vector<int> only;    // empty = all
};

/// Runs the acceptance criteria and returns one result per criterion.
std::vector<CriterionResult> run_acceptance(const Options& opt);

/// Formats "criterion NN PASS/FAIL name [detail]" lines.
std::string format_results(const std::vector<CriterionResult>& results);

}  // namespace statsum::selftest
