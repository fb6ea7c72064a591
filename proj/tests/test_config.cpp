#include <doctest.h>

#include <sstream>

#include "kaclab/config.hpp"

using namespace kaclab;

namespace {

ExperimentConfig parse(const std::string& exp, const std::string& text, const ConfigOverrides& f = {})
{
    std::istringstream in(text);
    return parse_config(exp, in, f);
}

}  // namespace

TEST_CASE("every experiment has valid defaults that echo back exactly")
{
    for (const auto& name : experiment_names()) {
        if (name == "all")
            continue;
        const auto cfg = default_config(name);
        CHECK_NOTHROW(cfg.validate());
        const auto text = echo_config(cfg);
        CHECK(parse(name, text) == cfg);
    }
    CHECK_THROWS_AS(default_config("nope"), ConfigError);
    CHECK(known_experiment("tail0"));
    CHECK_FALSE(known_experiment("tail1"));
}

TEST_CASE("sections, comments and precedence")
{
    const auto cfg = parse("lacunary", "# global\nseed = 7\ntrials = 10\n[lacunary]\ntrials = 20\n"
                                       "degrees = 16, 32\n[slln]\ntrials = 3\n");
    CHECK(cfg.seed == 7);
    CHECK(cfg.trials == 20);
    CHECK(cfg.degrees == std::vector<int>{16, 32});
    const auto other = parse("slln", "seed = 7\n[slln]\ntrials = 3\n");
    CHECK(other.trials == 3);
    // manifest blocks are ignored so a manifest can be fed back as a config
    CHECK(parse("slln", "[manifest]\nanything = goes\n[slln]\nseed = 5\n").seed == 5);
}

TEST_CASE("flags override the file")
{
    ConfigOverrides f;
    f.seed = 99;
    f.trials = 12;
    f.workers = 2;
    f.law = "rademacher";
    const auto cfg = parse("lacunary", "seed = 1\ntrials = 5\n", f);
    CHECK(cfg.seed == 99);
    CHECK(cfg.trials == 12);
    CHECK(cfg.workers == 2);
    CHECK(cfg.law == "rademacher");

    ConfigOverrides n;
    n.nmax = 256;
    const auto d = config_from_flags("lacunary", n);
    CHECK(d.degrees.front() == 16);
    CHECK(d.degrees.back() == 256);
    for (std::size_t i = 1; i < d.degrees.size(); ++i)
        CHECK(d.degrees[i] == 2 * d.degrees[i - 1]);
    CHECK(config_from_flags("tail0", n).degrees == std::vector<int>{256});
}

TEST_CASE("malformed configs are rejected with the key named")
{
    CHECK_THROWS_AS(parse("slln", "bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("slln", "[nonsense]\n"), ConfigError);
    CHECK_THROWS_AS(parse("slln", "seed = 1\nseed = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse("slln", "seed = x\n"), ConfigError);
    CHECK_THROWS_AS(parse("slln", "seed\n"), ConfigError);
    CHECK_THROWS_AS(parse("lacunary", "law = cauchy\n"), ConfigError);
    CHECK_THROWS_AS(parse("lacunary", "interval = [1,0]\n"), ConfigError);
    try {
        parse("lacunary", "trials = 0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("trials") != std::string::npos);
    }
    ConfigOverrides f;
    f.trials = 0;
    CHECK_THROWS_AS(config_from_flags("lacunary", f), ConfigError);
    f.trials = 1;
    f.workers = 0;
    CHECK_THROWS_AS(config_from_flags("lacunary", f), ConfigError);
}

TEST_CASE("degree ceilings")
{
    ConfigOverrides f;
    f.nmax = 1 << 18;
    CHECK_THROWS_AS(config_from_flags("slln", f), ConfigError);
    f.nmax = 1024;
    CHECK_THROWS_AS(config_from_flags("tail0", f), ConfigError);
    f.nmax = 1 << 14;
    CHECK_THROWS_AS(config_from_flags("variance", f), ConfigError);
}

TEST_CASE("interval parsing")
{
    const auto a = parse_interval("[0,1]");
    CHECK(a.lo == 0);
    CHECK(a.hi == 1);
    CHECK(a.lo_closed);
    CHECK(a.hi_closed);
    const auto b = parse_interval("(1/3, 0.75]");
    CHECK(b.lo == mpq_class(1, 3));
    CHECK(b.hi == mpq_class(3, 4));
    CHECK_FALSE(b.lo_closed);
    CHECK(parse_interval("[2,inf)").hi_infinite);
    CHECK(parse_interval("(-inf,-2)").lo_infinite);
    CHECK(parse_interval("R").lo_infinite);
    CHECK(parse_interval("R").hi_infinite);
    CHECK(parse_interval("[-0.1,0.1]").lo == mpq_class(-1, 10));
    CHECK(parse_interval("[0.075, 010/30]").lo == mpq_class(3, 40));
    CHECK(parse_interval("[0.075, 010/30]").hi == mpq_class(1, 3));
    CHECK_THROWS_AS(parse_interval("[0,inf]"), ConfigError);
    CHECK_THROWS_AS(parse_interval("0,1"), ConfigError);
    CHECK_THROWS_AS(parse_interval("[a,1]"), ConfigError);
    CHECK_THROWS_AS(parse_interval("[1,0]"), ConfigError);
}
