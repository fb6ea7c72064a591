#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kaclab/experiments.hpp"
#include "kaclab/kac_poly.hpp"

using namespace kaclab;

namespace {

std::string csv(const std::vector<TrialRecord>& r)
{
    std::ostringstream os;
    write_records(os, r);
    return os.str();
}

ExperimentConfig small(const std::string& exp, long trials)
{
    auto cfg = default_config(exp);
    cfg.trials = trials;
    return cfg;
}

void check_worker_invariance(ExperimentConfig cfg)
{
    cfg.workers = 1;
    const auto a = csv(run_experiment(cfg));
    cfg.workers = 8;
    const auto b = csv(run_experiment(cfg));
    CHECK(a == b);
}

}  // namespace

TEST_CASE("runners agree and keep trial order")
{
    const TrialFn fn = [](TrialSink& s) {
        for (long i = 0; i <= s.trial() % 3; ++i)
            s.add(i, "v", static_cast<double>(s.trial() * 10 + i));
    };
    const auto serial = run_trials_serial("e", "l", 50, fn);
    for (int w : {1, 2, 3, 8})
        CHECK(run_trials_parallel("e", "l", 50, w, fn) == serial);
    CHECK(serial.front().trial == 0);
    CHECK(serial.back().trial == 49);
    for (std::size_t i = 1; i < serial.size(); ++i)
        CHECK(serial[i - 1].trial <= serial[i].trial);
}

TEST_CASE("unresolved and zero trials become single excluded records")
{
    const TrialFn fn = [](TrialSink& s) {
        s.add(1, "v", 1);
        if (s.trial() == 2)
            throw UnresolvedError("stuck");
        if (s.trial() == 3)
            throw ZeroPolynomialError();
    };
    for (int w : {1, 4}) {
        const auto r = run_trials("e", "l", 5, w, fn);
        REQUIRE(r.size() == 5);
        CHECK(r[2].observable == excluded_observable);
        CHECK(r[2].value == 1);
        CHECK(r[3].observable == excluded_observable);
        CHECK(r[3].value == 2);
        CHECK(r[4].observable == "v");
    }
    const TrialFn bad = [](TrialSink& s) {
        if (s.trial() == 1)
            throw std::logic_error("bug");
    };
    CHECK_THROWS_AS(run_trials_serial("e", "l", 3, bad), std::logic_error);
    CHECK_THROWS_AS(run_trials_parallel("e", "l", 3, 4, bad), std::logic_error);
}

TEST_CASE("m grid")
{
    const auto m = m_grid(512, 2.0, 32);
    CHECK(m.front() == 512);
    CHECK(m.back() == 1024);
    CHECK(m.size() == 34);
    for (std::size_t i = 1; i < m.size(); ++i)
        CHECK(m[i] > m[i - 1]);
    const auto tiny = m_grid(3, 2.0, 32);
    CHECK(tiny == std::vector<int>{3, 4, 5, 6});
}

TEST_CASE("small-ball window")
{
    const auto xs = small_ball_window(256, 8, 1, 2);
    REQUIRE(xs.size() == 8);
    CHECK(xs.front() == doctest::Approx(1 - 1 / std::log(256.0)));
    CHECK(xs.back() == doctest::Approx(1 - 2 * std::log(256.0) / 256));
    CHECK(small_ball_window(256, 1, 1, 2).size() == 1);
    CHECK_THROWS_AS(small_ball_window(8, 8, 1, 2), ConfigError);
}

TEST_CASE("exact characteristic function")
{
    const auto rad = CoefficientLaw::rademacher();
    CHECK(std::abs(exact_charfn(rad, 16, 0.9, 0.0)) == doctest::Approx(1));
    // Rademacher: product of cos(2 pi w x^j / sqrt V)
    const double V = variance_profile(16, 0.9), w = 0.3;
    double prod = 1, xj = 1;
    for (int j = 0; j <= 16; ++j, xj *= 0.9)
        prod *= std::cos(2 * M_PI * w * xj / std::sqrt(V));
    CHECK(exact_charfn(rad, 16, 0.9, w).real() == doctest::Approx(prod));
    CHECK(std::abs(exact_charfn(CoefficientLaw::gaussian(), 16, 0.9, 0.25)) ==
          doctest::Approx(std::exp(-2 * M_PI * M_PI * 0.0625)));
    // uniform on [-sqrt 3, sqrt 3] has unit variance, so small w matches the Gaussian to second order
    const double u = std::abs(exact_charfn(CoefficientLaw::uniform_sym(), 64, 0.5, 0.01));
    CHECK(u == doctest::Approx(std::exp(-2 * M_PI * M_PI * 1e-4)).epsilon(1e-5));
}

TEST_CASE("pairing interval")
{
    const auto I = pairing_interval(512, 2, 8);
    CHECK(I.lo == mpq_class(1, 2));
    CHECK(I.hi.get_d() == doctest::Approx(1 - 8 * std::log(512.0) / 512));
    CHECK_THROWS_AS(pairing_interval(16, 2, 8), ConfigError);
}

TEST_CASE("slln path is additive and worker independent")
{
    auto cfg = small("slln", 2);
    cfg.degrees = {16, 32, 64, 128};
    check_worker_invariance(cfg);
    const auto s = summarize(cfg, run_experiment(cfg));
    REQUIRE(s.verdict("N[-1,1] = N[-1,0] + N(0,1]"));
    CHECK(s.verdict("N[-1,1] = N[-1,0] + N(0,1]")->pass);
    CHECK(s.excluded == 0);
    CHECK(s.trials == 2);
}

TEST_CASE("expectation matches the Kac integral on small degrees")
{
    auto cfg = small("expectation", 4000);
    cfg.degrees = {1, 8};
    cfg.interval = "[-1,1]";
    const auto s = summarize(cfg, run_experiment(cfg));
    for (const auto& v : s.verdicts)
        CHECK_MESSAGE(v.pass, v.name << ": " << v.detail);
    check_worker_invariance(small("expectation", 50));
}

TEST_CASE("tail0 conventions")
{
    auto cfg = small("tail0", 300);
    cfg.degrees = {32};
    const auto recs = run_experiment(cfg);
    bool saw_prefix = false;
    for (const auto& r : recs)
        if (r.observable == "k")
            saw_prefix = saw_prefix || r.value > 0;
    CHECK(saw_prefix);
    for (std::size_t i = 0; i + 1 < recs.size(); ++i)
        if (recs[i].observable == "T")
            CHECK(recs[i].value >= recs[i + 1].value);  // T >= k, k follows T
    const auto s = summarize(cfg, recs);
    CHECK(s.verdict("n = 32: P(T >= 0) = 1")->pass);

    cfg.law = "rademacher";
    const auto r = summarize(cfg, run_experiment(cfg));
    REQUIRE(r.verdict("n = 32: vanishing prefix identically 0"));
    CHECK(r.verdict("n = 32: vanishing prefix identically 0")->pass);
    cfg.trials = 40;
    check_worker_invariance(cfg);
}

TEST_CASE("jensen audit holds on a small sample")
{
    auto cfg = small("jensen", 20);
    cfg.degrees = {24};
    const auto s = summarize(cfg, run_experiment(cfg));
    CHECK(s.verdict("n = 24: Jensen bound dominates max_j N_j(-r, r)")->pass);
    check_worker_invariance(cfg);
}

TEST_CASE("oracle check finds no disagreement")
{
    auto cfg = small("oracle-check", 100);
    const auto s = summarize(cfg, run_experiment(cfg));
    CHECK(s.passed());
    check_worker_invariance(cfg);
}

TEST_CASE("small-ball and charfn record streams")
{
    auto sb = small("smallball", 200);
    sb.degrees = {64};
    sb.x_grid = {0.9};
    const auto recs = run_experiment(sb);
    CHECK(recs.size() == 200);
    CHECK(recs[0].observable == z_observable(0.9));
    const auto s = summarize(sb, recs);
    CHECK(s.plots.at(0).rows.size() == sb.lambda_grid.size());
    check_worker_invariance(sb);

    auto cf = small("charfn", 200);
    cf.degrees = {64};
    cf.law = "rademacher";
    const auto c = summarize(cf, run_experiment(cf));
    CHECK(c.verdict("frozen C1 within the exact sweep value"));
}

TEST_CASE("near-one, pairing and variance streams")
{
    auto n1 = small("near1", 5);
    n1.degrees = {64};
    n1.m_grid = 4;
    check_worker_invariance(n1);
    const auto a = summarize(n1, run_experiment(n1));
    CHECK(a.trials == 5);

    auto pr = small("pairing", 5);
    pr.degrees = {128};
    pr.m_grid = 4;
    pr.witness_degrees = {16};
    pr.witness_trials = 5;
    check_worker_invariance(pr);
    const auto recs = run_experiment(pr);
    long witness = 0;
    for (const auto& r : recs)
        if (r.observable == "witness") {
            ++witness;
            CHECK(r.trial >= pr.trials);
        }
    CHECK(witness == 5);

    auto va = small("variance", 20);
    va.degrees = {16, 32};
    check_worker_invariance(va);
    const auto v = summarize(va, run_experiment(va));
    CHECK(v.verdict("n = 32: variance >= 0")->pass);
}

TEST_CASE("lacunary exceedance stream")
{
    auto cfg = small("lacunary", 30);
    cfg.degrees = {16, 32};
    check_worker_invariance(cfg);
    const auto s = summarize(cfg, run_experiment(cfg));
    CHECK_NOTHROW(s.field("trend", "exceedance non-increasing in n"));
    CHECK_THROWS_AS(s.field("trend", "absent"), std::out_of_range);
}

TEST_CASE("seed determinism")
{
    auto cfg = small("lacunary", 10);
    cfg.degrees = {32};
    const auto a = run_experiment(cfg);
    CHECK(run_experiment(cfg) == a);
    cfg.seed = 43;
    CHECK(run_experiment(cfg) != a);
}
