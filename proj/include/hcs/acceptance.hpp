#pragma once

// The ten acceptance criteria as a library, shared by the acceptance binary
// and the CLI selftest. Tolerances are pinned here. Wall-clock runtimes are
// measured but kept out of the JSON report, which stays byte-identical for a
// fixed profile and seed.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hcs/common.hpp"

namespace hcs {

struct AcceptanceOptions {
    // "full": default Bolza mesh (resolution 4) and full sample counts.
    // "quick": resolution 3, reduced counts and smoke-level spectral gap.
    std::string profile = "full";
    std::uint64_t seed = 1;
    // Criteria to run (1..10); empty means all.
    std::vector<int> only;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;       // numeric checks only
    json measured = json::object();
    json limits = json::object();
    std::string error;       // module error that aborted the criterion, if any
    double seconds = 0.0;
    double time_limit = 0.0;  // seconds; 0 means none

    bool runtime_ok() const { return time_limit <= 0.0 || seconds <= time_limit; }
    json to_json() const;  // excludes timings
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_done = {});
json acceptance_report(const AcceptanceOptions& opt, const std::vector<CriterionResult>& results);
// "AC<id> PASS|FAIL <title> (<seconds>s) <measured>" for the acceptance binary.
std::string criterion_line(const CriterionResult& r);

}  // namespace hcs
