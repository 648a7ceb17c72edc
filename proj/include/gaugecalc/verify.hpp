#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace gaugecalc {

/// One named measurement with its admissible interval [lo, hi].
struct CheckResult {
    std::string suite;
    std::string name;
    double value = 0.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    bool pass() const { return value >= lo && value <= hi; }
};

struct SuiteOptions {
    int grid = 32;
    std::uint64_t seed = 7;
    int steps = 1000;
};

std::vector<CheckResult> verify_algebra(const SuiteOptions& opt);
std::vector<CheckResult> verify_grid_forms(const SuiteOptions& opt);
std::vector<CheckResult> verify_gauge(const SuiteOptions& opt);
std::vector<CheckResult> verify_curves(const SuiteOptions& opt);
std::vector<CheckResult> verify_holonomy(const SuiteOptions& opt);

/// All suites in module order.
std::vector<CheckResult> run_verify_suite(const SuiteOptions& opt);

}  // namespace gaugecalc
