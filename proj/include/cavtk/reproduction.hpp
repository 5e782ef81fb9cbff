#pragma once

// Built-in reference suite: recomputes the headline numbers of the
// fiber-microcavity experiment this toolkit models and compares them
// against the published values with pinned tolerance bands. Each
// criterion bundles several checks plus its runtime budget; failures
// are reported, never masked.

#include <string>
#include <vector>

namespace cavtk::reproduction {

struct Check {
    std::string name;
    double value = 0.0;
    std::string target;  // human-readable band, e.g. "in [36, 46]"
    bool pass = false;
};

struct CriterionResult {
    int number = 0;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0.0;
    bool pass() const;
};

struct Options {
    // criterion numbers to run; empty means all (1..8)
    std::vector<int> criteria;
};

std::vector<CriterionResult> run_reference_checks(const Options& opts = {});

}  // namespace cavtk::reproduction
