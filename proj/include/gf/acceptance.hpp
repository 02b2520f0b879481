#pragma once

#include <string>
#include <vector>

namespace gf {

struct CriterionResult {
    int id;
    std::string module_tag;
    std::string description;
    bool pass;
    std::string detail;
    double seconds;
};

// Runs the acceptance criteria (optionally filtered by module tag substring)
// and prints one pass/fail line per criterion to stdout.
std::vector<CriterionResult> run_acceptance(const std::string& only = "", int threads = 1);

bool all_passed(const std::vector<CriterionResult>& rs);

} // namespace gf
