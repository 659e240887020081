#pragma once
// Acceptance criteria 1-10, shared by the acceptance test binary and the
// `validate` task.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace curvecp {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string measured; // deterministic; goes into the report body
    double seconds = 0.0; // wall time, log only
};

struct AcceptanceOptions {
    std::filesystem::path cache_dir;
    int jobs = 1;
    std::ostream* log = nullptr;
};

// Cache directory: $CURVECP_CACHE if set, else `fallback`.
std::filesystem::path resolve_cache_dir(const std::filesystem::path& fallback);

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);

// Runs criteria in order; criterion 10 reruns the fast criteria and compares
// their report lines with the first pass.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

std::string report_line(const CriterionResult& r);

} // namespace curvecp
