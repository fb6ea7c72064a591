#include "kaclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include <omp.h>

#include "kaclab/format.hpp"
#include "kaclab/kac_poly.hpp"
#include "kaclab/theory_bounds.hpp"

namespace kaclab {

namespace {

constexpr double pi = std::numbers::pi;

void run_one(std::string_view experiment, std::string_view law, long t, const TrialFn& fn,
             std::vector<TrialRecord>& out)
{
    TrialSink sink(experiment, law, t, out);
    try {
        fn(sink);
    } catch (const UnresolvedError&) {
        out.clear();
        sink.add(0, excluded_observable, 1);
    } catch (const ZeroPolynomialError&) {
        out.clear();
        sink.add(0, excluded_observable, 2);
    }
}

std::vector<TrialRecord> concat(std::vector<std::vector<TrialRecord>>& slots)
{
    std::size_t total = 0;
    for (const auto& s : slots)
        total += s.size();
    std::vector<TrialRecord> all;
    all.reserve(total);
    for (auto& s : slots)
        std::move(s.begin(), s.end(), std::back_inserter(all));
    return all;
}

struct Counter {
    CountBudget budget;
    int count(CoeffView p, const Interval& I) const { return count_roots(p, I, budget).count; }
};

mpq_class exact(double x)
{
    return mpq_class(x);
}

int top_degree(const ExperimentConfig& cfg)
{
    return cfg.degrees.back();
}

}  // namespace

std::vector<TrialRecord> run_trials_serial(std::string_view experiment, std::string_view law, long trials,
                                           const TrialFn& fn)
{
    std::vector<std::vector<TrialRecord>> slots(trials);
    for (long t = 0; t < trials; ++t)
        run_one(experiment, law, t, fn, slots[t]);
    return concat(slots);
}

std::vector<TrialRecord> run_trials_parallel(std::string_view experiment, std::string_view law, long trials,
                                             int workers, const TrialFn& fn)
{
    std::vector<std::vector<TrialRecord>> slots(trials);
    std::vector<std::exception_ptr> errors(trials);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long t = 0; t < trials; ++t) {
        try {
            run_one(experiment, law, t, fn, slots[t]);
        } catch (...) {
            errors[t] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return concat(slots);
}

std::vector<TrialRecord> run_trials(std::string_view experiment, std::string_view law, long trials, int workers,
                                    const TrialFn& fn)
{
    if (workers <= 1)
        return run_trials_serial(experiment, law, trials, fn);
    return run_trials_parallel(experiment, law, trials, workers, fn);
}

CountBudget experiment_budget(const ExperimentConfig& cfg)
{
    CountBudget b;
    b.sturm_degree_threshold = cfg.sturm_max_degree;
    return b;
}

std::vector<int> m_grid(int n, double c, int points)
{
    const long top = static_cast<long>(std::ceil(c * n));
    std::vector<int> m{n};
    for (int i = 1; i <= points; ++i)
        m.push_back(static_cast<int>(n + std::lround(i * (top - n) / double(points + 1))));
    m.push_back(static_cast<int>(top));
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    return m;
}

std::vector<double> small_ball_window(int n, int points, double lo, double hi)
{
    const double ln = std::log(static_cast<double>(n));
    const double a = 1 - lo / ln, b = 1 - hi * ln / n;
    if (n < 3 || !(a <= b))
        throw ConfigError("smallball window [1 - " + format_double(lo) + "/log n, 1 - " + format_double(hi) +
                          " log n/n] is empty at n = " + std::to_string(n));
    if (points == 1)
        return {a};
    std::vector<double> xs(points);
    for (int i = 0; i < points; ++i)
        xs[i] = a + (b - a) * i / (points - 1);
    xs.back() = b;
    return xs;
}

std::vector<double> x_grid_for(const ExperimentConfig& cfg, int n)
{
    if (!cfg.x_grid.empty())
        return cfg.x_grid;
    return small_ball_window(n, cfg.window_points, cfg.window_lo, cfg.window_hi);
}

std::complex<double> exact_charfn(const CoefficientLaw& law, int n, double x, double w)
{
    const double s = 1 / std::sqrt(variance_profile(n, x));
    if (law.kind == LawKind::gaussian)
        return std::exp(-2 * pi * pi * w * w);
    // product over j of the coefficient characteristic function at 2 pi w x^j / sqrt(V), in log-modulus
    double log_mod = 0.0, arg = 0.0, xj = 1.0;
    const auto atoms = law.finite_support() ? law.atoms() : std::vector<std::pair<double, double>>{};
    for (int j = 0; j <= n; ++j, xj *= x) {
        const double t = 2 * pi * w * xj * s;
        std::complex<double> f;
        if (law.kind == LawKind::uniform_sym) {
            const double u = std::sqrt(3.0) * t;
            f = u == 0.0 ? 1.0 : std::sin(u) / u;
        } else
            for (auto [v, p] : atoms)
                f += p * std::exp(std::complex<double>(0.0, t * v));
        if (f == 0.0)
            return 0.0;
        log_mod += std::log(std::abs(f));
        arg += std::arg(f);
    }
    return std::polar(std::exp(log_mod), arg);
}

Interval pairing_interval(int n, double C1, double C0)
{
    const double hi = 1 - C0 * std::log(static_cast<double>(n)) / n;
    const double lo = 1 / C1;
    if (!(lo <= hi))
        throw ConfigError("pairing interval [1/C1, 1 - C0 log n/n] is empty at n = " + std::to_string(n));
    return Interval::closed(exact(lo), exact(hi));
}

std::string z_observable(double x)
{
    return "z[x=" + format_double(x) + "]";
}

std::vector<TrialRecord> run_slln_path(const ExperimentConfig& cfg)
{
    const auto law = cfg.coefficient_law();
    const Counter counter{experiment_budget(cfg)};
    const auto I01 = Interval::closed(0, 1), Im10 = Interval::closed(-1, 0), Im11 = Interval::closed(-1, 1),
               Io01 = Interval::left_open(0, 1);
    return run_trials(cfg.experiment, cfg.law, cfg.trials, cfg.workers, [&](TrialSink& sink) {
        const auto s = sample_polynomial(law, top_degree(cfg), cfg.seed, sink.trial());
        for (int n : cfg.degrees) {
            const auto p = s.view(n);
            const double ln = std::log(static_cast<double>(n));
            const int a = counter.count(p, I01), b = counter.count(p, Im10), c = counter.count(p, Im11),
                      d = counter.count(p, Io01);
            sink.add(n, "N[0,1]", a, a / ln);
            sink.add(n, "N[-1,0]", b, b / ln);
            sink.add(n, "N[-1,1]", c, c / ln);
            sink.add(n, "N(0,1]", d, d / ln);
        }
    });
}

std::vector<TrialRecord> run_lacunary(const ExperimentConfig& cfg)
{
    const auto law = cfg.coefficient_law();
    const Counter counter{experiment_budget(cfg)};
    const auto I = parse_interval(cfg.interval);
    return run_trials(cfg.experiment, cfg.law, cfg.trials, cfg.workers, [&](TrialSink& sink) {
        const auto s = sample_polynomial(law, top_degree(cfg), cfg.seed, sink.trial());
        for (int n : cfg.degrees)
            sink.add(n, "N", counter.count(s.view(n), I));
    });
}

namespace {

std::vector<TrialRecord> run_normalized_values(const ExperimentConfig& cfg)
{
    const auto law = cfg.coefficient_law();
    std::vector<std::pair<int, std::vector<std::pair<double, double>>>> grid;  // n -> (x, 1/sqrt V)
    for (int n : cfg.degrees) {
        std::vector<std::pair<double, double>> xs;
        for (double x : x_grid_for(cfg, n))
            xs.emplace_back(x, 1 / std::sqrt(variance_profile(n, x)));
        grid.emplace_back(n, std::move(xs));
    }
    return run_trials(cfg.experiment, cfg.law, cfg.trials, cfg.workers, [&](TrialSink& sink) {
        const auto s = sample_polynomial(law, top_degree(cfg), cfg.seed, sink.trial());
        for (const auto& [n, xs] : grid)
            for (auto [x, inv] : xs)
                sink.add(n, z_observable(x), eval(s.view(n), x).value * inv, x);
    });
}

}  // namespace

std::vector<TrialRecord> run_small_ball(const ExperimentConfig& cfg)
{
    return run_normalized_values(cfg);
}

std::vector<TrialRecord> run_charfn(const ExperimentConfig& cfg)
{
    return run_normalized_values(cfg);
}

std::vector<TrialRecord> run_near_zero_tail(const ExperimentConfig& cfg)
{
    const auto law = cfg.coefficient_law();
    const Counter counter{experiment_budget(cfg)};
    const double r = 1 / cfg.near0_C;
    const auto I = Interval::open(exact(-r), exact(r));
    return run_trials(cfg.experiment, cfg.law, cfg.trials, cfg.workers, [&](TrialSink& sink) {
        const auto s = sample_polynomial(law, top_degree(cfg), cfg.seed, sink.trial());
        for (int n : cfg.degrees) {
            const auto c = s.view(n);
            int k = 0;
            while (k <= n && c[k] == 0.0)
                ++k;
            if (k > n)
                throw ZeroPolynomialError();
            // distinct roots away from 0, plus the multiplicity k of the root at 0
            int T = 0;
            for (int j = k; j <= n; ++j)
                T = std::max(T, counter.count(s.view(j), I) - (k > 0 ? 1 : 0) + k);
            sink.add(n, "T", T);
            sink.add(n, "k", k);
        }
    });
}

std::vector<TrialRecord> run_near_one_max(const ExperimentConfig& cfg)
{
    const auto law = cfg.coefficient_law();
    const Counter counter{experiment_budget(cfg)};
    const int top = static_cast<int>(std::ceil(cfg.c * top_degree(cfg)));
    struct Setup {
        int n;
        Interval J, end;
        std::vector<int> ms;
    };
    std::vector<Setup> setups;
    for (int n : cfg.degrees) {
        const double ln = std::log(static_cast<double>(n));
        const double a = 1 - cfg.C * ln / n, e = 1 - ln / (cfg.Cp * n);
        if (!(a >= -1.0))
            throw ConfigError("near1: window 1 - C log n/n leaves [-1, 1] at n = " + std::to_string(n));
        setups.push_back({n, Interval::closed(exact(a), 1), Interval::closed(exact(e), 1), m_grid(n, cfg.c, cfg.m_grid)});
    }
    return run_trials(cfg.experiment, cfg.law, cfg.trials, cfg.workers, [&](TrialSink& sink) {
        const auto s = sample_polynomial(law, top, cfg.seed, sink.trial());
        for (const auto& st : setups) {
            int best = 0, base = 0;
            for (int m : st.ms) {
                const int v = counter.count(s.view(m), st.J);
                if (m == st.n)
                    base = v;
                best = std::max(best, v);
            }
            sink.add(st.n, "N", base);
            sink.add(st.n, "maxN", best);
            sink.add(st.n, "Nend", counter.count(s.view(st.n), st.end));
        }
    });
}

std::vector<TrialRecord> run_pairing(const ExperimentConfig& cfg)
{
    const auto law = cfg.coefficient_law();
    const Counter counter{experiment_budget(cfg)};
    const int top = static_cast<int>(std::ceil(cfg.c * top_degree(cfg)));
    std::vector<std::pair<int, Interval>> setups;
    for (int n : cfg.degrees)
        setups.emplace_back(n, pairing_interval(n, cfg.C1, cfg.C0));
    auto records = run_trials(cfg.experiment, cfg.law, cfg.trials, cfg.workers, [&](TrialSink& sink) {
        const auto s = sample_polynomial(law, top, cfg.seed, sink.trial());
        for (const auto& [n, I] : setups) {
            const auto ms = m_grid(n, cfg.c, cfg.m_grid);
            const int base = counter.count(s.view(n), I);
            int defect = 0, half = 0;
            for (std::size_t i = 0; i < ms.size(); ++i) {
                const int d = std::abs(counter.count(s.view(ms[i]), I) - base);
                defect = std::max(defect, d);
                if (i % 2 == 0 || i + 1 == ms.size())
                    half = std::max(half, d);
            }
            sink.add(n, "N", base);
            sink.add(n, "defect", defect, static_cast<double>(ms.size()));
            sink.add(n, "defect_half", half);
        }
    });
    if (cfg.witness_trials > 0 && !cfg.witness_degrees.empty()) {
        const auto W = Interval::closed(0, 1);
        // witness trials are numbered after the pairing trials so the two streams stay disjoint
        auto w = run_trials(cfg.experiment, cfg.law, cfg.witness_trials, cfg.workers, [&](TrialSink& sink) {
            const auto s = sample_polynomial(law, cfg.witness_degrees.back(), cfg.seed, cfg.trials + sink.trial());
            for (int n : cfg.witness_degrees) {
                const auto hit = double_root_witness(s.prefix(n), W, cfg.B, cfg.A);
                sink.add(n, "witness", hit ? 1 : 0, hit ? hit->x : -1.0);
            }
        });
        for (auto& r : w)
            r.trial += cfg.trials;
        std::move(w.begin(), w.end(), std::back_inserter(records));
    }
    return records;
}

std::vector<TrialRecord> run_variance_trend(const ExperimentConfig& cfg)
{
    const auto law = cfg.coefficient_law();
    const Counter counter{experiment_budget(cfg)};
    const auto R = Interval::real_line();
    return run_trials(cfg.experiment, cfg.law, cfg.trials, cfg.workers, [&](TrialSink& sink) {
        const auto s = sample_polynomial(law, top_degree(cfg), cfg.seed, sink.trial());
        for (int n : cfg.degrees)
            sink.add(n, "N[R]", counter.count(s.view(n), R));
    });
}

std::vector<TrialRecord> run_jensen_audit(const ExperimentConfig& cfg)
{
    const auto law = cfg.coefficient_law();
    const auto I = Interval::open(exact(-cfg.jensen_r), exact(cfg.jensen_r));
    return run_trials(cfg.experiment, cfg.law, cfg.trials, cfg.workers, [&](TrialSink& sink) {
        const auto s = sample_polynomial(law, top_degree(cfg), cfg.seed, sink.trial());
        for (int n : cfg.degrees) {
            int worst = 0;
            for (int j = 1; j <= n; ++j) {
                const auto p = s.view(j);
                if (std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; }))
                    continue;
                worst = std::max(worst, sturm_count(p, I).count);
            }
            const double bound = jensen_root_bound(s.view(n), cfg.jensen_r, cfg.jensen_R, cfg.c0);
            sink.add(n, "maxN", worst);
            sink.add(n, "bound", bound, first_large_index(s.view(n), cfg.c0));
        }
    });
}

std::vector<TrialRecord> run_expectation(const ExperimentConfig& cfg)
{
    const auto law = cfg.coefficient_law();
    const Counter counter{experiment_budget(cfg)};
    const auto I = parse_interval(cfg.interval);
    return run_trials(cfg.experiment, cfg.law, cfg.trials, cfg.workers, [&](TrialSink& sink) {
        const auto s = sample_polynomial(law, top_degree(cfg), cfg.seed, sink.trial());
        for (int n : cfg.degrees)
            sink.add(n, "N", counter.count(s.view(n), I));
    });
}

std::vector<TrialRecord> run_bounds(const ExperimentConfig& cfg)
{
    std::vector<TrialRecord> out;
    TrialSink sink(cfg.experiment, cfg.law, 0, out);
    const int nmax = top_degree(cfg);
    // iterated-moment constant over n <= nmax, k <= 32
    for (int n = 1; n <= nmax; ++n) {
        double worst = -std::numeric_limits<double>::infinity();
        int worst_k = 0;
        double worst_y = 0;
        for (int k = 1; k <= std::min(n, 32); ++k)
            for (double y : {0.5, 0.9, n >= 3 ? 1 - std::log(n) / n : 0.5}) {
                const auto lc = log_iterated_bound_curves(n, k, 0.0, y);
                const double r = log_iterated_moment(n, k, y) - std::min(lc.branch1, lc.branch2);
                if (r > worst) {
                    worst = r;
                    worst_k = k;
                    worst_y = y;
                }
            }
        sink.add(n, "max_ratio", std::exp(worst), worst_k, worst_y);
    }
    // dual analogue by quadrature on a coarser degree set
    for (int n = 1; n <= nmax; n = n < 16 ? n + 1 : 2 * n) {
        double worst = 0;
        for (int k = 1; k <= std::min(n, 32); ++k)
            for (double x : {0.5, 0.9, n >= 3 ? 1 - std::log(n) / n : 0.5})
                worst = std::max(worst, iterated_moment_dual_quadrature(n, k, x) /
                                            iterated_bound_curves(n, k, x, 1.0).dual);
        sink.add(n, "max_dual_ratio", worst);
    }
    // exact sum against nested quadrature at n = 12
    for (int k = 1; k <= 12; ++k)
        for (double y : {0.5, 0.9, 1 - std::log(12.0) / 12}) {
            const double e = iterated_moment_exact(12, k, y), q = iterated_moment_quadrature(12, k, y);
            sink.add(12, "quad_rel_err[k=" + std::to_string(k) + ",y=" + format_double(y) + "]",
                     std::abs(e - q) / std::abs(e), e, q);
        }
    // pseudo-hyperbolic gaps of the alpha grid, scaled by L
    for (int n = 1 << 8; n <= 1 << 14; n *= 2) {
        const auto a = alpha_grid(n, cfg.C, cfg.Cp, cfg.L);
        double gap = 0;
        for (int j = 0; j < cfg.L; ++j)
            gap = std::max(gap, pseudo_hyperbolic(a[j], a[j + 1]));
        sink.add(n, "alpha_gap_times_L", gap * cfg.L, a.front(), a.back());
    }
    // variance comparability over the window used by the experiments
    for (int n = 16; n <= 4096; n *= 2) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (int i = 0; i <= 1000; ++i) {
            const double r = variance_comparability(n, i / 1000.0).ratio;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        sink.add(n, "variance_ratio_range", hi / lo, lo, hi);
    }
    return out;
}

std::vector<TrialRecord> run_oracle_check(const ExperimentConfig& cfg)
{
    const auto budget = experiment_budget(cfg);
    const std::vector<std::pair<std::string, Interval>> intervals{
        {"[-2,2]", Interval::closed(-2, 2)}, {"[0,1]", Interval::closed(0, 1)}, {"[-1,0]", Interval::closed(-1, 0)}};
    const std::string law = "integer:" + std::to_string(cfg.oracle_coeff_bound);
    return run_trials(cfg.experiment, law, cfg.trials, cfg.workers, [&](TrialSink& sink) {
        auto rs = seeded_stream(cfg.seed, sink.trial());
        const int width = 2 * cfg.oracle_coeff_bound + 1;
        const int d = 1 + static_cast<int>(rs() % cfg.oracle_max_degree);
        std::vector<double> p(d + 1);
        for (auto& v : p)
            v = static_cast<double>(static_cast<int>(rs() % width) - cfg.oracle_coeff_bound);
        while (p[d] == 0.0)
            p[d] = static_cast<double>(static_cast<int>(rs() % width) - cfg.oracle_coeff_bound);
        for (const auto& [name, I] : intervals) {
            const int a = sturm_count(p, I).count;
            const auto b = descartes_count(p, I, budget);
            sink.add(d, "count" + name, a, b.count, b.escalations);
        }
    });
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    const auto& e = cfg.experiment;
    if (e == "slln")
        return run_slln_path(cfg);
    if (e == "lacunary")
        return run_lacunary(cfg);
    if (e == "smallball")
        return run_small_ball(cfg);
    if (e == "charfn")
        return run_charfn(cfg);
    if (e == "tail0")
        return run_near_zero_tail(cfg);
    if (e == "near1")
        return run_near_one_max(cfg);
    if (e == "pairing")
        return run_pairing(cfg);
    if (e == "variance")
        return run_variance_trend(cfg);
    if (e == "jensen")
        return run_jensen_audit(cfg);
    if (e == "expectation")
        return run_expectation(cfg);
    if (e == "bounds")
        return run_bounds(cfg);
    if (e == "oracle-check")
        return run_oracle_check(cfg);
    throw ConfigError("experiment '" + e + "' has no record stream");
}

}  // namespace kaclab
