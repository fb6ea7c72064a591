#include "kaclab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "kaclab/experiments.hpp"
#include "kaclab/format.hpp"
#include "kaclab/report.hpp"
#include "kaclab/stats.hpp"
#include "kaclab/theory_bounds.hpp"

namespace kaclab {

namespace {

namespace fs = std::filesystem;

struct Spec {
    int id;
    const char* title;
    double limit;
};

const std::vector<Spec>& specs()
{
    static const std::vector<Spec> s{
        {1, "root-engine oracle equivalence", 300},
        {2, "Kac expectation agreement", 600},
        {3, "degree-one exact cases", 60},
        {4, "small-ball probabilities", 300},
        {5, "near-zero tail sharpness", 300},
        {6, "iterated-bound constant", 120},
        {7, "pairing stability", 600},
        {8, "characteristic function", 180},
        {9, "SLLN path and Jensen audit", 600},
        {10, "determinism across worker counts", 0},
    };
    return s;
}

ExperimentConfig base(const std::string& exp, std::uint64_t seed, int workers)
{
    auto c = default_config(exp);
    c.seed = seed;
    c.workers = workers;
    return c;
}

std::string csv(const std::vector<TrialRecord>& r)
{
    std::ostringstream os;
    write_records(os, r);
    return os.str();
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Collected {
    bool pass = true;
    std::vector<std::string> notes;
    void check(bool ok, std::string note)
    {
        pass = pass && ok;
        notes.push_back((ok ? "" : "FAILED ") + std::move(note));
    }
    void absorb(const ExperimentSummary& s)
    {
        for (const auto& v : s.verdicts)
            if (!v.pass || v.name.rfind("excluded", 0) != 0)
                check(v.pass, v.name + (v.detail.empty() ? "" : " (" + v.detail + ")"));
    }
};

void write_outputs(const std::string& dir, const ExperimentConfig& cfg, const std::vector<TrialRecord>& records,
                   const ExperimentSummary& s, const std::string& started)
{
    auto files = write_run(dir, records, s);
    files.push_back("manifest.txt");
    ManifestInfo info{started, utc_timestamp(), s.passed() ? 0 : 1, files};
    atomic_write((fs::path(dir) / "manifest.txt").string(), render_manifest(info, {cfg}));
}

std::string criterion_dir(const std::string& out, int id)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "criterion_%02d", id);
    return (fs::path(out) / buf).string();
}

}  // namespace

std::vector<std::pair<std::string, ExperimentConfig>> criterion_runs(int id, std::uint64_t seed, int workers)
{
    std::vector<std::pair<std::string, ExperimentConfig>> runs;
    auto add = [&](std::string label, ExperimentConfig c) { runs.emplace_back(std::move(label), std::move(c)); };
    switch (id) {
    case 1:
        add("oracle", base("oracle-check", seed, workers));
        break;
    case 2: {
        auto c = base("expectation", seed, workers);
        c.degrees = {16, 64, 256, 1024};
        c.trials = 20000;
        c.interval = "[0,1]";
        add("expectation", c);
        break;
    }
    case 3: {
        auto c = base("expectation", seed, workers);
        c.degrees = {1};
        c.trials = 20000;
        c.interval = "[-1,1]";
        add("degree_one", c);
        break;
    }
    case 4: {
        auto g = base("smallball", seed, workers);
        g.degrees = {256};
        g.x_grid = {0.9};
        add("gaussian", g);
        auto r = base("smallball", seed, workers);
        r.law = "rademacher";
        r.degrees = {256};
        add("rademacher", r);
        break;
    }
    case 5: {
        auto t = base("tail0", seed, workers);
        t.law = "three_point:q0=0.5";
        t.degrees = {128};
        t.trials = 100000;
        add("three_point", t);
        auto r = base("tail0", seed, workers);
        r.law = "rademacher";
        r.degrees = {128};
        r.trials = 10000;
        add("rademacher", r);
        break;
    }
    case 6: {
        auto b = base("bounds", seed, workers);
        b.degrees = {512};
        add("bounds", b);
        break;
    }
    case 7: {
        auto p = base("pairing", seed, workers);
        p.degrees = {512};
        p.c = 2;
        p.C1 = 2;
        p.C0 = 8;
        p.m_grid = 32;
        p.trials = 1000;
        add("pairing", p);
        break;
    }
    case 8: {
        auto g = base("charfn", seed, workers);
        g.degrees = {256};
        g.x_grid = {0.9};
        g.w_grid = {0.1, 0.25, 0.5};
        add("gaussian", g);
        auto r = base("charfn", seed, workers);
        r.law = "rademacher";
        r.degrees = {256};
        r.x_grid = {0.9};
        add("rademacher", r);
        break;
    }
    case 9: {
        auto s = base("slln", seed, workers);
        s.law = "rademacher";
        s.trials = 1;
        s.degrees.clear();
        for (int n = 16; n <= 1 << 14; n *= 2)
            s.degrees.push_back(n);
        add("slln", s);
        auto j = base("jensen", seed, workers);
        j.law = "rademacher";
        j.degrees = {64};
        j.trials = 1000;
        j.jensen_r = 0.25;
        j.jensen_R = 0.625;
        j.c0 = 0.5;
        add("jensen", j);
        break;
    }
    case 10:
        break;
    default:
        throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
    }
    return runs;
}

namespace {

void check_determinism(const AcceptanceOptions& opt, Collected& col)
{
    std::vector<std::string> lines;
    for (int id = 1; id <= 9; ++id)
        for (auto [label, cfg] : criterion_runs(id, opt.seed, 1)) {
            if (cfg.experiment == "bounds")
                continue;
            cfg.trials = std::min(cfg.trials, opt.determinism_trials);
            cfg.workers = 1;
            const auto a = csv(run_experiment(cfg));
            cfg.workers = 8;
            const auto b = csv(run_experiment(cfg));
            const std::string name = "criterion " + std::to_string(id) + " " + label;
            col.check(a == b, name + " records identical for workers 1 and 8");
            lines.push_back(name + ": " + (a == b ? "identical" : "DIFFERENT") + ", " + std::to_string(a.size()) +
                            " bytes, " + std::to_string(cfg.trials) + " trials");
        }
    if (opt.out_dir.empty())
        return;
    const auto dir = criterion_dir(opt.out_dir, 10);
    fs::create_directories(dir);
    std::string text = "determinism reruns (trials capped at " + std::to_string(opt.determinism_trials) + ")\n";
    for (const auto& l : lines)
        text += l + "\n";
    text += std::string("overall: ") + (col.pass ? "PASS" : "FAIL") + "\n";
    atomic_write((fs::path(dir) / "summary.txt").string(), text);
}

void check_runs(int id, const AcceptanceOptions& opt, Collected& col, const std::string& started)
{
    for (const auto& [label, cfg] : criterion_runs(id, opt.seed, opt.workers)) {
        const auto records = run_experiment(cfg);
        const auto s = summarize(cfg, records);
        col.absorb(s);
        if (s.excluded > 0)
            col.check(s.excluded * 1000 <= s.trials, label + ": " + std::to_string(s.excluded) + " excluded trials");
        if (id == 3) {
            std::vector<double> v;
            for (const auto& r : records)
                if (r.observable == "N")
                    v.push_back(r.value);
            const auto m = mean_se(v);
            col.check(std::abs(m.mean - 0.5) <= 3 * m.se,
                      "E N_1[-1,1] = " + fmt(m.mean) + " +- " + fmt(m.se) + " vs 1/2");
            const double e = expected_count(1, Interval::real_line());
            col.check(std::abs(e - 1) <= 1e-6, "expected_count(1, R) = " + format_double(e));
        }
        if (!opt.out_dir.empty())
            write_outputs((fs::path(criterion_dir(opt.out_dir, id)) / label).string(), cfg, records, s, started);
    }
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result)
{
    std::vector<CriterionResult> results;
    for (const auto& spec : specs()) {
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), spec.id) == opt.only.end())
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Collected col;
        try {
            if (spec.id == 10)
                check_determinism(opt, col);
            else
                check_runs(spec.id, opt, col, utc_timestamp());
        } catch (const std::exception& e) {
            col.check(false, std::string("error: ") + e.what());
        }

        CriterionResult r;
        r.id = spec.id;
        r.title = spec.title;
        r.limit_seconds = spec.limit;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (spec.limit > 0 && r.seconds > spec.limit)
            col.check(false, "runtime " + fmt(r.seconds) + " s over the " + fmt(spec.limit) + " s limit");
        r.pass = col.pass;
        for (std::size_t i = 0; i < col.notes.size(); ++i)
            r.detail += (i ? "; " : "") + col.notes[i];
        results.push_back(r);
        if (on_result)
            on_result(r);
    }
    return results;
}

std::string format_criterion(const CriterionResult& r)
{
    char head[160];
    if (r.limit_seconds > 0)
        std::snprintf(head, sizeof head, "criterion %02d %s %s [%.1f s / %.0f s]", r.id, r.pass ? "PASS" : "FAIL",
                      r.title.c_str(), r.seconds, r.limit_seconds);
    else
        std::snprintf(head, sizeof head, "criterion %02d %s %s [%.1f s]", r.id, r.pass ? "PASS" : "FAIL",
                      r.title.c_str(), r.seconds);
    return std::string(head) + ": " + r.detail;
}

}  // namespace kaclab
