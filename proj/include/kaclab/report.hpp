#pragma once

#include <string>
#include <vector>

#include "kaclab/config.hpp"
#include "kaclab/experiments.hpp"

namespace kaclab {

/// `key: value` lines grouped under `[block]` headers, then one PASS/FAIL line per verdict.
std::string render_summary(const ExperimentSummary& s);
std::string render_plot(const PlotTable& t);

/// Writes content to path through a temporary file and a rename.
void atomic_write(const std::string& path, const std::string& content);

struct ManifestInfo {
    std::string started;
    std::string finished;
    int exit_status = 0;
    std::vector<std::string> files;
};

/// A `[manifest]` block followed by the config echo; readable back with --config.
std::string render_manifest(const ManifestInfo& info, const std::vector<ExperimentConfig>& configs);

/// records.csv, summary.txt and plots/*.csv under dir; returns the files written, relative to dir.
std::vector<std::string> write_run(const std::string& dir, const std::vector<TrialRecord>& records,
                                   const ExperimentSummary& summary);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace kaclab
