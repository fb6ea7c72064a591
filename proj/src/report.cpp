#include "kaclab/report.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kaclab/format.hpp"

namespace kaclab {

namespace fs = std::filesystem;

std::string render_summary(const ExperimentSummary& s)
{
    std::ostringstream os;
    os << "experiment: " << s.experiment << '\n' << "law: " << s.law << '\n';
    for (const auto& b : s.blocks) {
        os << "\n[" << b.title << "]\n";
        for (const auto& [k, v] : b.fields)
            os << k << ": " << v << '\n';
    }
    os << "\n[verdicts]\n";
    for (const auto& v : s.verdicts) {
        os << (v.pass ? "PASS " : "FAIL ") << v.name;
        if (!v.detail.empty())
            os << ": " << v.detail;
        os << '\n';
    }
    os << "overall: " << (s.passed() ? "PASS" : "FAIL") << '\n';
    return os.str();
}

std::string render_plot(const PlotTable& t)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
    return os.str();
}

void atomic_write(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot write '" + tmp + "'");
        os << content;
        os.flush();
        if (!os)
            throw std::runtime_error("write failed for '" + tmp + "'");
    }
    fs::rename(tmp, path);
}

std::string render_manifest(const ManifestInfo& info, const std::vector<ExperimentConfig>& configs)
{
    std::ostringstream os;
    os << "[manifest]\n"
       << "tool = kaclab\n"
       << "started = " << info.started << '\n'
       << "finished = " << info.finished << '\n'
       << "exit_status = " << info.exit_status << '\n';
    for (const auto& f : info.files)
        os << "file = " << f << '\n';
    for (const auto& c : configs)
        os << '\n' << echo_config(c);
    return os.str();
}

std::vector<std::string> write_run(const std::string& dir, const std::vector<TrialRecord>& records,
                                   const ExperimentSummary& summary)
{
    fs::create_directories(fs::path(dir) / "plots");
    std::vector<std::string> files{"records.csv", "summary.txt"};
    write_records((fs::path(dir) / "records.csv").string(), records);
    atomic_write((fs::path(dir) / "summary.txt").string(), render_summary(summary));
    for (const auto& p : summary.plots) {
        const std::string rel = "plots/" + p.name + ".csv";
        atomic_write((fs::path(dir) / rel).string(), render_plot(p));
        files.push_back(rel);
    }
    return files;
}

std::string utc_timestamp()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace kaclab
