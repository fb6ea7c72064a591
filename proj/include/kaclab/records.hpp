#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kaclab {

/// One Monte Carlo observation row.
struct TrialRecord {
    std::string experiment;
    std::string law;
    long n = 0;
    long trial = 0;
    std::string observable;
    double value = 0.0;
    double aux1 = 0.0;
    double aux2 = 0.0;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

inline constexpr const char* record_header = "experiment,law,n,trial,observable,value,aux1,aux2";

/// Canonical row order: (n, trial, observable), then the remaining columns.
void sort_records(std::vector<TrialRecord>& records);

/// Header then rows in canonical order; fields holding commas or quotes are quoted.
void write_records(std::ostream& os, std::vector<TrialRecord> records);
/// Writes through a temporary file and renames it into place.
void write_records(const std::string& path, std::vector<TrialRecord> records);

/// Throws std::runtime_error on a malformed header or row.
std::vector<TrialRecord> read_records(std::istream& is);
std::vector<TrialRecord> read_records(const std::string& path);

}  // namespace kaclab
