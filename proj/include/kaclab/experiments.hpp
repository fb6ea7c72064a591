#pragma once

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kaclab/config.hpp"
#include "kaclab/records.hpp"
#include "kaclab/root_engine.hpp"

namespace kaclab {

/// Collects the records of one trial.
class TrialSink {
public:
    TrialSink(std::string_view experiment, std::string_view law, long trial, std::vector<TrialRecord>& out)
        : experiment_(experiment), law_(law), trial_(trial), out_(out)
    {
    }
    long trial() const { return trial_; }
    void add(long n, std::string observable, double value, double aux1 = 0.0, double aux2 = 0.0)
    {
        out_.push_back({std::string(experiment_), std::string(law_), n, trial_, std::move(observable), value, aux1,
                        aux2});
    }

private:
    std::string_view experiment_, law_;
    long trial_;
    std::vector<TrialRecord>& out_;
};

using TrialFn = std::function<void(TrialSink&)>;

/// Observable written in place of a trial's records when the trial is excluded:
/// value 1 for an unresolved root count, 2 for an identically zero polynomial.
inline constexpr const char* excluded_observable = "excluded";

/// Trials 0..trials-1 in order on the calling thread.
std::vector<TrialRecord> run_trials_serial(std::string_view experiment, std::string_view law, long trials,
                                           const TrialFn& fn);
/// Same records as the serial runner, computed by an OpenMP worker pool.
std::vector<TrialRecord> run_trials_parallel(std::string_view experiment, std::string_view law, long trials,
                                             int workers, const TrialFn& fn);
std::vector<TrialRecord> run_trials(std::string_view experiment, std::string_view law, long trials, int workers,
                                    const TrialFn& fn);

CountBudget experiment_budget(const ExperimentConfig& cfg);

/// n and the points n + round(i (c-1) n / (points+1)), i = 1..points, and ceil(c n), deduplicated.
std::vector<int> m_grid(int n, double c, int points);
/// Evenly spaced points of [1 - lo/log n, 1 - hi log n / n]; throws ConfigError when empty.
std::vector<double> small_ball_window(int n, int points, double lo, double hi);
/// The x-grid used for degree n: cfg.x_grid, or the window when it is empty.
std::vector<double> x_grid_for(const ExperimentConfig& cfg, int n);

/// E exp(2 pi i w p_n(x) / sqrt(V_n(x))) for iid coefficients of the law.
std::complex<double> exact_charfn(const CoefficientLaw& law, int n, double x, double w);

/// The interval [1/C1, 1 - C0 log n / n] of the pairing experiment.
Interval pairing_interval(int n, double C1, double C0);

std::string z_observable(double x);

std::vector<TrialRecord> run_slln_path(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_lacunary(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_small_ball(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_charfn(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_near_zero_tail(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_near_one_max(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_pairing(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_variance_trend(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_jensen_audit(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_expectation(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_bounds(const ExperimentConfig& cfg);
std::vector<TrialRecord> run_oracle_check(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment (everything except "all").
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SummaryBlock {
    std::string title;
    std::vector<std::pair<std::string, std::string>> fields;
};

struct PlotTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ExperimentSummary {
    std::string experiment;
    std::string law;
    long trials = 0;
    long excluded = 0;
    std::vector<SummaryBlock> blocks;
    std::vector<Verdict> verdicts;
    std::vector<PlotTable> plots;

    bool passed() const;
    const Verdict* verdict(std::string_view name) const;
    /// Field lookup by block title and key; throws std::out_of_range.
    const std::string& field(std::string_view block, std::string_view key) const;
};

ExperimentSummary summarize(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records);

}  // namespace kaclab
