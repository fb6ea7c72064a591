#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kaclab/config.hpp"

namespace kaclab {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 42;
    int workers = 1;
    /// Per-criterion outputs go to out_dir/criterion_NN/<run>/; nothing is written when empty.
    std::string out_dir;
    /// Criteria to run; all ten when empty.
    std::vector<int> only;
    /// Trial cap for the worker-count determinism reruns.
    long determinism_trials = 200;
};

/// The experiment configs a criterion runs, labelled by output subdirectory.
std::vector<std::pair<std::string, ExperimentConfig>> criterion_runs(int id, std::uint64_t seed, int workers);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// `criterion NN PASS|FAIL title [t s / limit s]: detail`
std::string format_criterion(const CriterionResult& r);

}  // namespace kaclab
