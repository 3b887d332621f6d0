#pragma once
// The acceptance battery: twelve criteria, each reduced to one verdict.
//
// The fast level keeps to d <= 2 and n <= 64 and skips the criteria that only
// make sense in d = 3 (the linear rate table and the nonlinear run). The full
// level runs everything. A skipped criterion is reported but does not count
// as a failure.
#include <functional>
#include <string>
#include <vector>

namespace gps {

enum class AcceptanceLevel { fast, full };
const char* to_string(AcceptanceLevel l);
AcceptanceLevel acceptance_level_from_string(const std::string& s);

struct AcceptanceOptions {
    AcceptanceLevel level = AcceptanceLevel::fast;
    // Flip the sign of B4 in the Z equation. Used to check that the battery
    // notices a broken symbol.
    bool mutate_B4 = false;
    std::vector<int> only;  // criterion ids to run; empty runs all
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
    double seconds = 0;
    double budget_s = 0;  // stated runtime limit; exceeding it fails the criterion
};

// Runs the battery in order, calling on_result after each criterion.
std::vector<CriterionResult> acceptance_suite(const AcceptanceOptions& opt,
                                              const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS  4 linear dispersive rates (61.2 s): ..." style line.
std::string format_result(const CriterionResult& r);

// All run criteria pass (skips ignored).
bool all_pass(const std::vector<CriterionResult>& rs);

}  // namespace gps
