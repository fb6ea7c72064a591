#include "kaclab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "kaclab/format.hpp"

namespace kaclab {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    if (trim(v).empty())
        return out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ','))
        out.push_back(trim(item));
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    T v{};
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty())
        throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(v))
            throw ConfigError("config key '" + key + "': value must be finite");
    return v;
}

struct Field {
    std::string key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Field scalar(const char* key, T ExperimentConfig::*m)
{
    return {key,
            [key, m](ExperimentConfig& c, const std::string& v) {
                if constexpr (std::is_same_v<T, std::string>)
                    c.*m = v;
                else
                    c.*m = parse_number<T>(key, v);
            },
            [m](const ExperimentConfig& c) {
                if constexpr (std::is_same_v<T, std::string>)
                    return c.*m;
                else if constexpr (std::is_floating_point_v<T>)
                    return format_double(c.*m);
                else
                    return std::to_string(c.*m);
            }};
}

template <class T>
Field list(const char* key, std::vector<T> ExperimentConfig::*m)
{
    return {key,
            [key, m](ExperimentConfig& c, const std::string& v) {
                std::vector<T> out;
                for (const auto& item : split_list(v))
                    out.push_back(parse_number<T>(key, item));
                c.*m = std::move(out);
            },
            [m](const ExperimentConfig& c) {
                std::string s;
                for (const auto& x : c.*m) {
                    if (!s.empty())
                        s += ", ";
                    if constexpr (std::is_floating_point_v<T>)
                        s += format_double(x);
                    else
                        s += std::to_string(x);
                }
                return s;
            }};
}

using C = ExperimentConfig;

const std::vector<Field>& fields()
{
    static const std::vector<Field> f{
        scalar("law", &C::law),
        scalar("seed", &C::seed),
        scalar("trials", &C::trials),
        list("degrees", &C::degrees),
        scalar("workers", &C::workers),
        scalar("sturm_max_degree", &C::sturm_max_degree),
        scalar("interval", &C::interval),
        list("x_grid", &C::x_grid),
        list("lambda_grid", &C::lambda_grid),
        list("w_grid", &C::w_grid),
        scalar("window_points", &C::window_points),
        scalar("window_lo", &C::window_lo),
        scalar("window_hi", &C::window_hi),
        scalar("eps", &C::eps),
        scalar("c", &C::c),
        scalar("C", &C::C),
        scalar("C0", &C::C0),
        scalar("C1", &C::C1),
        scalar("Cp", &C::Cp),
        scalar("L", &C::L),
        scalar("c0", &C::c0),
        scalar("floor_c", &C::floor_c),
        scalar("K", &C::K),
        scalar("charfn_C1", &C::charfn_C1),
        scalar("charfn_C2", &C::charfn_C2),
        scalar("near0_C", &C::near0_C),
        scalar("jensen_r", &C::jensen_r),
        scalar("jensen_R", &C::jensen_R),
        scalar("m_grid", &C::m_grid),
        scalar("defect_max", &C::defect_max),
        scalar("B", &C::B),
        scalar("A", &C::A),
        list("witness_degrees", &C::witness_degrees),
        scalar("witness_trials", &C::witness_trials),
        scalar("slln_tol", &C::slln_tol),
        scalar("oracle_max_degree", &C::oracle_max_degree),
        scalar("oracle_coeff_bound", &C::oracle_coeff_bound),
    };
    return f;
}

const Field* find_field(const std::string& key)
{
    for (const auto& f : fields())
        if (f.key == key)
            return &f;
    return nullptr;
}

std::vector<int> geometric(int from, int to, int ratio)
{
    std::vector<int> d;
    for (long n = from; n <= to; n *= ratio)
        d.push_back(static_cast<int>(n));
    return d;
}

mpq_class parse_endpoint(const std::string& text)
{
    const std::string t = trim(text);
    if (t.empty())
        throw ConfigError("interval: empty endpoint");
    try {
        if (t.find('/') != std::string::npos) {
            mpq_class q(t, 10);
            q.canonicalize();
            return q;
        }
        // exact decimal
        std::string digits;
        long frac = -1;
        std::size_t i = 0;
        bool neg = false;
        if (t[0] == '-' || t[0] == '+') {
            neg = t[0] == '-';
            i = 1;
        }
        for (; i < t.size(); ++i) {
            if (t[i] == '.' && frac < 0)
                frac = 0;
            else if (std::isdigit(static_cast<unsigned char>(t[i]))) {
                digits += t[i];
                if (frac >= 0)
                    ++frac;
            } else
                throw ConfigError("interval: bad endpoint '" + t + "'");
        }
        if (digits.empty())
            throw ConfigError("interval: bad endpoint '" + t + "'");
        mpz_class num(digits, 10), den = 1;
        for (long k = 0; k < std::max(frac, 0L); ++k)
            den *= 10;
        mpq_class q(neg ? mpz_class(-num) : num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ConfigError("interval: bad endpoint '" + t + "'");
    }
}

}  // namespace

Interval parse_interval(const std::string& text)
{
    const std::string t = trim(text);
    if (t == "R")
        return Interval::real_line();
    if (t.size() < 5 || (t.front() != '[' && t.front() != '(') || (t.back() != ']' && t.back() != ')'))
        throw ConfigError("interval: expected [a,b], (a,b], [a,inf) or R, got '" + t + "'");
    const auto comma = t.find(',');
    if (comma == std::string::npos)
        throw ConfigError("interval: missing comma in '" + t + "'");
    const std::string a = trim(t.substr(1, comma - 1)), b = trim(t.substr(comma + 1, t.size() - comma - 2));
    const bool lo_closed = t.front() == '[', hi_closed = t.back() == ']';
    const bool lo_inf = a == "-inf", hi_inf = b == "inf" || b == "+inf";
    if ((lo_inf && lo_closed) || (hi_inf && hi_closed))
        throw ConfigError("interval: infinite endpoints must be open in '" + t + "'");
    Interval I;
    if (lo_inf && hi_inf)
        I = Interval::real_line();
    else if (lo_inf)
        I = Interval::at_most(parse_endpoint(b), hi_closed);
    else if (hi_inf)
        I = Interval::at_least(parse_endpoint(a), lo_closed);
    else
        I = Interval{parse_endpoint(a), parse_endpoint(b), lo_closed, hi_closed, false, false};
    try {
        I.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return I;
}

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names{"slln",     "lacunary",    "smallball",    "charfn", "tail0",
                                                "near1",    "pairing",     "variance",     "jensen", "expectation",
                                                "bounds",   "oracle-check", "all"};
    return names;
}

bool known_experiment(const std::string& name)
{
    const auto& n = experiment_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

ExperimentConfig default_config(const std::string& experiment)
{
    if (!known_experiment(experiment))
        throw ConfigError("unknown experiment '" + experiment + "'");
    ExperimentConfig c;
    c.experiment = experiment;
    if (experiment == "slln") {
        c.trials = 1;
        c.degrees = geometric(16, 1 << 14, 2);
    } else if (experiment == "lacunary") {
        c.trials = 1000;
        c.degrees = geometric(16, 1024, 2);
    } else if (experiment == "smallball") {
        c.trials = 20000;
        c.degrees = {256};
        c.lambda_grid = {0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
    } else if (experiment == "charfn") {
        c.trials = 100000;
        c.degrees = {256};
        c.x_grid = {0.9};
        c.w_grid = {0, 0.05, 0.1, 0.25, 0.5, 1, 2, 4, 8, 16, 32, 64};
    } else if (experiment == "tail0") {
        c.law = "three_point:q0=0.5";
        c.trials = 100000;
        c.degrees = {128};
    } else if (experiment == "near1") {
        c.trials = 200;
        c.degrees = {256, 1024, 4096};
    } else if (experiment == "pairing") {
        c.trials = 1000;
        c.degrees = {512};
        c.witness_degrees = {64, 128, 256};
        c.witness_trials = 200;
    } else if (experiment == "variance") {
        c.trials = 500;
        c.degrees = geometric(256, 8192, 2);
    } else if (experiment == "jensen") {
        c.law = "rademacher";
        c.trials = 1000;
        c.degrees = {64};
    } else if (experiment == "expectation") {
        c.trials = 20000;
        c.degrees = {16, 64, 256, 1024};
    } else if (experiment == "bounds") {
        c.degrees = {512};
    } else if (experiment == "oracle-check") {
        c.trials = 10000;
        c.degrees = {48};
    } else if (experiment == "all") {
        c.degrees = {1};
    }
    return c;
}

CoefficientLaw ExperimentConfig::coefficient_law() const
{
    return parse_law(law);
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string& key, const std::string& why) {
        throw ConfigError("config key '" + key + "': " + why);
    };
    if (!known_experiment(experiment))
        fail("experiment", "unknown experiment '" + experiment + "'");
    try {
        coefficient_law().validate();
    } catch (const ConfigError& e) {
        fail("law", e.what());
    }
    if (trials < 1)
        fail("trials", "must be >= 1");
    if (workers < 1)
        fail("workers", "must be >= 1");
    if (degrees.empty())
        fail("degrees", "schedule must not be empty");
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < 1)
            fail("degrees", "degrees must be >= 1");
        if (i > 0 && degrees[i] <= degrees[i - 1])
            fail("degrees", "schedule must be strictly increasing");
    }
    const int top = degrees.back();
    if (experiment == "slln" && (degrees.front() < 16 || top > (1 << 17)))
        fail("degrees", "slln schedule must lie in [2^4, 2^17]");
    if (experiment == "variance" && top > (1 << 13))
        fail("degrees", "variance degrees are capped at 2^13");
    if (experiment == "tail0" && top > 512)
        fail("degrees", "tail0 counts every prefix and is capped at n = 512");
    if (experiment == "oracle-check" && (oracle_max_degree < 1 || oracle_coeff_bound < 1))
        fail("oracle_max_degree", "oracle degree and coefficient bound must be >= 1");
    auto sorted = [&](const std::vector<double>& g, const char* key) {
        for (std::size_t i = 1; i < g.size(); ++i)
            if (!(g[i] > g[i - 1]))
                fail(key, "grid must be strictly increasing");
    };
    sorted(x_grid, "x_grid");
    sorted(lambda_grid, "lambda_grid");
    sorted(w_grid, "w_grid");
    for (double l : lambda_grid)
        if (!(l > 0.0))
            fail("lambda_grid", "lambda must be positive");
    for (std::size_t i = 0; i < witness_degrees.size(); ++i)
        if (witness_degrees[i] < 2 || (i > 0 && witness_degrees[i] <= witness_degrees[i - 1]))
            fail("witness_degrees", "must be strictly increasing degrees >= 2");
    if (witness_trials < 0)
        fail("witness_trials", "must be >= 0");
    try {
        parse_interval(interval);
    } catch (const ConfigError& e) {
        fail("interval", e.what());
    }
    if (sturm_max_degree < 0)
        fail("sturm_max_degree", "must be >= 0");
    if (window_points < 1)
        fail("window_points", "must be >= 1");
    if (!(window_lo > 0.0) || !(window_hi > 0.0))
        fail("window_lo", "window constants must be positive");
    if (!(eps > 0.0))
        fail("eps", "must be positive");
    if (!(c >= 1.0))
        fail("c", "must be >= 1");
    if (!(C > 0.0))
        fail("C", "must be positive");
    if (!(C0 > 0.0))
        fail("C0", "must be positive");
    if (!(C1 >= 1.0))
        fail("C1", "must be >= 1");
    if (!(Cp > 1.0 / C))
        fail("Cp", "must exceed 1/C");
    if (L < 1)
        fail("L", "must be >= 1");
    if (!(c0 > 0.0 && c0 < 1.0))
        fail("c0", "must lie in (0, 1)");
    if (!(floor_c > 0.0))
        fail("floor_c", "must be positive");
    if (!(K > 0.0))
        fail("K", "must be positive");
    if (!(charfn_C1 > 0.0) || !(charfn_C2 > 0.0))
        fail("charfn_C1", "charfn constants must be positive");
    if (!(near0_C > 1.0))
        fail("near0_C", "must exceed 1");
    if (!(0.0 < jensen_r && jensen_r < jensen_R && jensen_R < 1.0))
        fail("jensen_r", "requires 0 < jensen_r < jensen_R < 1");
    if (m_grid < 1)
        fail("m_grid", "must be >= 1");
    if (defect_max < 0)
        fail("defect_max", "must be >= 0");
    if (!(B > 0.0) || !(A > 0.0))
        fail("B", "B and A must be positive");
    if (!(slln_tol > 0.0))
        fail("slln_tol", "must be positive");
}

namespace {

void apply_flags(ExperimentConfig& c, const ConfigOverrides& f)
{
    if (f.law)
        c.law = *f.law;
    if (f.seed)
        c.seed = *f.seed;
    if (f.trials)
        c.trials = *f.trials;
    if (f.workers)
        c.workers = *f.workers;
    if (f.nmax) {
        const int nmax = *f.nmax;
        if (nmax < 1)
            throw ConfigError("config key 'nmax': must be >= 1");
        // keep the schedule's ratio, cut or extend it at nmax
        if (c.degrees.size() >= 2 && c.degrees.front() <= nmax) {
            const int ratio = std::max(2, c.degrees[1] / c.degrees[0]);
            c.degrees = geometric(c.degrees.front(), nmax, ratio);
        } else
            c.degrees = {nmax};
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& experiment, std::istream& in, const ConfigOverrides& flags)
{
    ExperimentConfig cfg = default_config(experiment);
    std::string line, section;
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<std::pair<std::string, std::string>> global, local;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (t.empty())
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section != "manifest" && !known_experiment(section))
                throw ConfigError("config line " + std::to_string(lineno) + ": unknown experiment section '" +
                                  section + "'");
            continue;
        }
        if (section == "manifest")
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
        if (!find_field(key))
            throw ConfigError("config key '" + key + "': unknown key");
        if (!seen.insert({section, key}).second)
            throw ConfigError("config key '" + key + "': duplicate");
        if (section.empty())
            global.emplace_back(key, value);
        else if (section == experiment)
            local.emplace_back(key, value);
    }
    for (const auto& [k, v] : global)
        find_field(k)->set(cfg, v);
    for (const auto& [k, v] : local)
        find_field(k)->set(cfg, v);
    apply_flags(cfg, flags);
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& experiment, const std::string& path,
                                   const ConfigOverrides& flags)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(experiment, in, flags);
}

ExperimentConfig config_from_flags(const std::string& experiment, const ConfigOverrides& flags)
{
    std::istringstream empty;
    return parse_config(experiment, empty, flags);
}

std::string echo_config(const ExperimentConfig& cfg)
{
    std::string s = "[" + cfg.experiment + "]\n";
    for (const auto& f : fields())
        s += f.key + " = " + f.get(cfg) + "\n";
    return s;
}

}  // namespace kaclab
