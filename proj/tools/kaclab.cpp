#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "kaclab/acceptance.hpp"
#include "kaclab/config.hpp"
#include "kaclab/experiments.hpp"
#include "kaclab/report.hpp"

using namespace kaclab;
namespace fs = std::filesystem;

namespace {

int run_single(const std::string& sub, const ExperimentConfig& cfg, const std::string& out)
{
    const auto started = utc_timestamp();
    const auto records = run_experiment(cfg);
    const auto summary = summarize(cfg, records);
    auto files = write_run(out, records, summary);
    files.push_back("manifest.txt");
    const int status = summary.passed() ? 0 : 1;
    atomic_write((fs::path(out) / "manifest.txt").string(),
                 render_manifest({started, utc_timestamp(), status, files}, {cfg}));
    for (const auto& v : summary.verdicts)
        std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << (v.detail.empty() ? "" : ": " + v.detail) << '\n';
    std::cout << sub << ": " << (status == 0 ? "PASS" : "FAIL") << ", outputs in " << out << '\n';
    return status;
}

int run_all(const ExperimentConfig& cfg, const std::vector<int>& criteria, const std::string& out)
{
    const auto started = utc_timestamp();
    AcceptanceOptions opt;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    opt.out_dir = out;
    opt.only = criteria;
    fs::create_directories(out);
    std::string text;
    const auto results = run_acceptance(opt, [&](const CriterionResult& r) {
        const auto line = format_criterion(r);
        std::cout << line << std::endl;
        text += line + "\n";
    });
    bool pass = true;
    std::vector<std::string> files{"summary.txt", "manifest.txt"};
    for (const auto& r : results) {
        pass = pass && r.pass;
        char dir[32];
        std::snprintf(dir, sizeof dir, "criterion_%02d/", r.id);
        files.push_back(dir);
    }
    text += std::string("overall: ") + (pass ? "PASS" : "FAIL") + "\n";
    atomic_write((fs::path(out) / "summary.txt").string(), text);
    const int status = pass ? 0 : 1;
    atomic_write((fs::path(out) / "manifest.txt").string(),
                 render_manifest({started, utc_timestamp(), status, files}, {cfg}));
    return status;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Real roots of random Kac polynomials: exact counting and Monte Carlo experiments"};
    std::string sub, config_path, out;
    ConfigOverrides flags;
    std::vector<int> criteria;
    app.add_option("subcommand", sub, "experiment to run, or 'all' for the acceptance suite")
        ->required()
        ->check(CLI::IsMember(experiment_names()));
    app.add_option("--config", config_path, "key = value config file (a manifest.txt also works)")
        ->check(CLI::ExistingFile);
    app.add_option("--law", flags.law, "coefficient law, e.g. gaussian, rademacher, three_point:q0=0.5");
    app.add_option("--seed", flags.seed, "master seed");
    app.add_option("--trials", flags.trials, "Monte Carlo trials");
    app.add_option("--nmax", flags.nmax, "largest degree of the schedule");
    app.add_option("--workers", flags.workers, "OpenMP worker threads");
    app.add_option("--out", out, "output directory (default: $KACLAB_OUT, else ./kaclab_out/<subcommand>)");
    app.add_option("--criteria", criteria, "with 'all': run only these criteria")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    if (out.empty()) {
        const char* env = std::getenv("KACLAB_OUT");
        out = env && *env ? env : (fs::path("kaclab_out") / sub).string();
    }
    try {
        const auto cfg = config_path.empty() ? config_from_flags(sub, flags) : parse_config_file(sub, config_path, flags);
        if (sub == "all")
            return run_all(cfg, criteria, out);
        return run_single(sub, cfg, out);
    } catch (const ConfigError& e) {
        std::cerr << "kaclab: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "kaclab: " << e.what() << '\n';
        return 3;
    }
}
