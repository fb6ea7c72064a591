#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kaclab/coeff_laws.hpp"
#include "kaclab/root_engine.hpp"

namespace kaclab {

/// Parameters of one experiment run.  Every key exists for every experiment so a
/// config echo is always complete; experiments read only the keys they use.
struct ExperimentConfig {
    std::string experiment = "slln";
    std::string law = "gaussian";
    std::uint64_t seed = 42;
    long trials = 1;
    std::vector<int> degrees;
    int workers = 1;
    int sturm_max_degree = 4;

    std::string interval = "[0,1]";
    std::vector<double> x_grid;
    std::vector<double> lambda_grid;
    std::vector<double> w_grid;
    int window_points = 8;
    double window_lo = 1.0;  // x >= 1 - window_lo / log n
    double window_hi = 2.0;  // x <= 1 - window_hi log n / n

    double eps = 0.5;
    double c = 2.0;
    double C = 8.0;
    double C0 = 8.0;
    double C1 = 2.0;
    double Cp = 16.0;
    int L = 8;
    double c0 = 0.5;
    double floor_c = 0.1;
    double K = 5.0;
    double charfn_C1 = 0.5;
    double charfn_C2 = 1.0;
    double near0_C = 4.0;
    double jensen_r = 0.25;
    double jensen_R = 0.625;
    int m_grid = 32;
    int defect_max = 2;
    double B = 3.0;
    double A = 2.0;
    std::vector<int> witness_degrees;
    long witness_trials = 0;
    double slln_tol = 0.08;
    int oracle_max_degree = 48;
    int oracle_coeff_bound = 9;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

    /// Throws ConfigError naming the offending key.
    void validate() const;
    CoefficientLaw coefficient_law() const;
};

/// `[a,b]`, `(a,b]`, `[a,inf)`, `(-inf,b)`, `R`; endpoints are decimals or fractions p/q.
Interval parse_interval(const std::string& text);

const std::vector<std::string>& experiment_names();
bool known_experiment(const std::string& name);

/// Documented defaults for an experiment; throws ConfigError for unknown names.
ExperimentConfig default_config(const std::string& experiment);

/// Flag values from the command line; unset fields leave the file value alone.
struct ConfigOverrides {
    std::optional<std::string> law;
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
    std::optional<int> nmax;
    std::optional<int> workers;
};

/// Key = value text with `[section]` headers.  Top-level keys apply to every
/// experiment, keys under `[name]` only to that experiment, and a `[manifest]`
/// section is skipped.  Unknown keys and malformed values raise ConfigError.
ExperimentConfig parse_config(const std::string& experiment, std::istream& in,
                              const ConfigOverrides& flags = {});
ExperimentConfig parse_config_file(const std::string& experiment, const std::string& path,
                                   const ConfigOverrides& flags = {});
ExperimentConfig config_from_flags(const std::string& experiment, const ConfigOverrides& flags);

/// `[experiment]` followed by every key; parses back to an equal config.
std::string echo_config(const ExperimentConfig& cfg);

}  // namespace kaclab
