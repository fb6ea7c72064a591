#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

#include "kaclab/experiments.hpp"
#include "kaclab/format.hpp"
#include "kaclab/kac_poly.hpp"
#include "kaclab/stats.hpp"
#include "kaclab/theory_bounds.hpp"

namespace kaclab {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

using Key = std::pair<long, std::string>;

struct Grouped {
    std::map<Key, std::vector<double>> values;
    std::map<Key, std::vector<TrialRecord>> rows;
    std::set<long> trials;
    long excluded = 0;

    const std::vector<double>& at(long n, const std::string& obs) const
    {
        static const std::vector<double> empty;
        const auto it = values.find({n, obs});
        return it == values.end() ? empty : it->second;
    }
};

Grouped group(const std::vector<TrialRecord>& records)
{
    Grouped g;
    for (const auto& r : records) {
        g.trials.insert(r.trial);
        if (r.observable == excluded_observable) {
            ++g.excluded;
            continue;
        }
        g.values[{r.n, r.observable}].push_back(r.value);
        g.rows[{r.n, r.observable}].push_back(r);
    }
    return g;
}

std::string fmt(double v)
{
    if (std::isnan(v))
        return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string yes(bool b)
{
    return b ? "yes" : "no";
}

class Builder {
public:
    Builder(const ExperimentConfig& cfg, const Grouped& g)
    {
        s.experiment = cfg.experiment;
        s.law = cfg.law;
        s.trials = static_cast<long>(g.trials.size());
        s.excluded = g.excluded;
        auto& b = block("run");
        b.fields.emplace_back("trials", std::to_string(s.trials));
        b.fields.emplace_back("excluded", std::to_string(s.excluded));
        // at most 0.1% of the trials may be excluded, and never silently
        verdict("excluded trials below 0.1%", s.excluded * 1000 <= s.trials,
                std::to_string(s.excluded) + " of " + std::to_string(s.trials));
    }

    SummaryBlock& block(std::string title)
    {
        s.blocks.push_back({std::move(title), {}});
        return s.blocks.back();
    }
    void verdict(std::string name, bool pass, std::string detail) { s.verdicts.push_back({std::move(name), pass, std::move(detail)}); }
    PlotTable& plot(std::string name, std::vector<std::string> columns)
    {
        s.plots.push_back({std::move(name), std::move(columns), {}});
        return s.plots.back();
    }

    ExperimentSummary s;
};

void put(SummaryBlock& b, std::string key, double v)
{
    b.fields.emplace_back(std::move(key), fmt(v));
}

void put(SummaryBlock& b, std::string key, std::string v)
{
    b.fields.emplace_back(std::move(key), std::move(v));
}

void put_fit(SummaryBlock& b, const std::string& prefix, const SlopeFit& f)
{
    put(b, prefix + "slope", f.slope);
    put(b, prefix + "residual", f.residual);
    put(b, prefix + "range", "[" + fmt(f.x_lo) + ", " + fmt(f.x_hi) + "] over " + std::to_string(f.points) + " points");
}

bool non_increasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1])
            return false;
    return true;
}

void summarize_slln(const ExperimentConfig& cfg, const Grouped& g, Builder& B)
{
    auto& plot = B.plot("slln_ratio", {"n", "log_n", "ratio_-1_1", "ratio_0_1", "ratio_-1_0"});
    std::vector<double> ratios;
    bool additive = true;
    for (int n : cfg.degrees) {
        const auto& a = g.at(n, "N[-1,1]");
        const auto& l = g.at(n, "N[-1,0]");
        const auto& r = g.at(n, "N(0,1]");
        if (a.empty())
            continue;
        for (std::size_t i = 0; i < a.size(); ++i)
            additive = additive && a[i] == l[i] + r[i];
        const double ln = std::log(static_cast<double>(n));
        const double m = mean_se(a).mean / ln;
        ratios.push_back(m);
        plot.rows.push_back({double(n), ln, m, mean_se(g.at(n, "N[0,1]")).mean / ln, mean_se(l).mean / ln});
        auto& b = B.block("n = " + std::to_string(n));
        put(b, "mean N[-1,1]", mean_se(a).mean);
        put(b, "mean N[0,1]", mean_se(g.at(n, "N[0,1]")).mean);
        put(b, "mean N[-1,0]", mean_se(l).mean);
        put(b, "ratio N[-1,1]/log n", m);
    }
    auto& b = B.block("trend");
    put(b, "reference 1/pi", 1 / pi);
    if (ratios.size() >= 3) {
        const auto top = std::vector<double>(ratios.end() - 3, ratios.end());
        put(b, "fluctuation over top three points", *std::max_element(top.begin(), top.end()) -
                                                        *std::min_element(top.begin(), top.end()));
    }
    B.verdict("N[-1,1] = N[-1,0] + N(0,1]", additive, "checked per path and degree");
    if (!ratios.empty()) {
        const double last = ratios.back();
        B.verdict("ratio at largest n within 1/pi +- " + fmt(cfg.slln_tol), std::abs(last - 1 / pi) <= cfg.slln_tol,
                  "ratio " + fmt(last) + " at n = " + std::to_string(cfg.degrees.back()));
    }
}

void summarize_counts_vs_expectation(const ExperimentConfig& cfg, const Grouped& g, Builder& B, bool lacunary)
{
    const bool gaussian = cfg.coefficient_law().kind == LawKind::gaussian;
    const auto I = parse_interval(cfg.interval);
    auto& plot = B.plot(lacunary ? "lacunary" : "expectation",
                        {"n", "mean", "se", "expected", "variance", "exceedance", "exceedance_se"});
    std::vector<double> exceed;
    bool all_within = true;
    for (int n : cfg.degrees) {
        const auto& v = g.at(n, "N");
        if (v.empty())
            continue;
        const auto m = mean_se(v);
        const double E = gaussian ? expected_count(n, I) : nan;
        auto& b = B.block("n = " + std::to_string(n));
        put(b, "mean", m.mean);
        put(b, "se", m.se);
        put(b, "variance", m.variance);
        put(b, "expected_count", E);
        double ex = nan, ex_se = nan;
        if (lacunary) {
            const double ref = gaussian ? E : m.mean;
            const double thr = cfg.eps * std::log(static_cast<double>(n));
            long hits = 0;
            for (double x : v)
                hits += std::abs(x - ref) >= thr;
            const auto p = proportion(hits, static_cast<long>(v.size()));
            ex = p.p;
            ex_se = p.se;
            exceed.push_back(ex);
            put(b, "reference", gaussian ? "expected_count" : "sample mean");
            put(b, "P(|N - E| >= eps log n)", ex);
            put(b, "P se", ex_se);
            if (gaussian && n == 1024)
                B.verdict("exceedance at n = 1024 below 0.1", ex < 0.1, "P = " + fmt(ex) + " +- " + fmt(ex_se));
        } else if (gaussian) {
            const double z = m.se > 0 ? (m.mean - E) / m.se : (m.mean == E ? 0.0 : INFINITY);
            put(b, "z", z);
            const bool ok = std::abs(m.mean - E) <= 3 * m.se;
            all_within = all_within && ok;
            B.verdict("n = " + std::to_string(n) + ": mean within 3 SE of expected_count", ok,
                      fmt(m.mean) + " vs " + fmt(E) + ", se " + fmt(m.se));
        }
        plot.rows.push_back({double(n), m.mean, m.se, E, m.variance, ex, ex_se});
    }
    if (lacunary) {
        auto& b = B.block("trend");
        put(b, "exceedance non-increasing in n", yes(non_increasing(exceed)));
    } else if (gaussian && cfg.interval == "[0,1]") {
        const double inc = (expected_count(4096, 0.0, 1.0) - expected_count(1024, 0.0, 1.0)) / std::log(4.0);
        auto& b = B.block("growth");
        put(b, "(E_4096 - E_1024)/log 4", inc);
        put(b, "1/(2 pi)", 1 / (2 * pi));
        B.verdict("expected-count increment within 10% of 1/(2 pi)", std::abs(inc * 2 * pi - 1) <= 0.1,
                  "relative deviation " + fmt(inc * 2 * pi - 1));
    }
    (void)all_within;
}

void summarize_small_ball(const ExperimentConfig& cfg, const Grouped& g, Builder& B)
{
    const bool gaussian = cfg.coefficient_law().kind == LawKind::gaussian;
    auto& plot = B.plot("smallball", {"n", "x", "lambda", "p_hat", "se", "ratio", "floor", "asserted", "truth"});
    double worst_ratio = 0.0;
    int asserted_points = 0;
    bool gaussian_ok = true;
    std::string gaussian_detail = "all grid points";
    for (int n : cfg.degrees)
        for (double x : x_grid_for(cfg, n)) {
            const auto& z = g.at(n, z_observable(x));
            if (z.empty())
                continue;
            const double V = variance_profile(n, x);
            const double floor = std::max(small_ball_floor(x, n, V, cfg.c0, cfg.charfn_C1),
                                          small_ball_window_floor(V, n, cfg.floor_c));
            auto& b = B.block("n = " + std::to_string(n) + ", x = " + fmt(x));
            put(b, "V_n", V);
            put(b, "floor", floor);
            for (double lambda : cfg.lambda_grid) {
                long hits = 0;
                for (double v : z)
                    hits += std::abs(v) <= lambda;
                const auto p = proportion(hits, static_cast<long>(z.size()));
                const auto bound = small_ball_bound(lambda, floor, cfg.K);
                const double truth = gaussian ? normal_abs_cdf(lambda) : nan;
                put(b, "lambda " + fmt(lambda), fmt(p.p) + " +- " + fmt(p.se) + " (ratio " + fmt(p.p / lambda) +
                                                   (bound.asserted ? "" : ", below floor") + ")");
                plot.rows.push_back({double(n), x, lambda, p.p, p.se, p.p / lambda, floor, bound.asserted ? 1.0 : 0.0, truth});
                if (gaussian && std::abs(p.p - truth) > 3 * p.se) {
                    gaussian_ok = false;
                    gaussian_detail = "n = " + std::to_string(n) + ", x = " + fmt(x) + ", lambda = " + fmt(lambda) +
                                      ": " + fmt(p.p) + " vs " + fmt(truth) + ", se " + fmt(p.se);
                }
                if (bound.asserted) {
                    ++asserted_points;
                    worst_ratio = std::max(worst_ratio, p.p / lambda);
                }
            }
        }
    auto& b = B.block("constant");
    put(b, "max ratio P/lambda above floor", worst_ratio);
    put(b, "grid points above floor", static_cast<double>(asserted_points));
    put(b, "frozen K", cfg.K);
    if (gaussian)
        B.verdict("Gaussian small-ball within 3 SE of 2 Phi(lambda) - 1", gaussian_ok, gaussian_detail);
    else
        B.verdict("max P/lambda above floor <= K", asserted_points > 0 && worst_ratio <= cfg.K,
                  fmt(worst_ratio) + " over " + std::to_string(asserted_points) + " points, K = " + fmt(cfg.K));
}

void summarize_charfn(const ExperimentConfig& cfg, const Grouped& g, Builder& B)
{
    const auto law = cfg.coefficient_law();
    const bool gaussian = law.kind == LawKind::gaussian;
    auto& plot = B.plot("charfn", {"n", "x", "w", "abs_phi_hat", "se", "exact", "bound", "admissible"});
    bool gaussian_ok = true, bound_ok = true;
    std::string gaussian_detail = "all grid points", bound_detail = "all admissible grid points";
    double sweep_c1 = INFINITY;
    for (int n : cfg.degrees)
        for (double x : x_grid_for(cfg, n)) {
            const auto& z = g.at(n, z_observable(x));
            if (z.empty())
                continue;
            const double V = variance_profile(n, x);
            auto& b = B.block("n = " + std::to_string(n) + ", x = " + fmt(x));
            put(b, "V_n", V);
            for (double w : cfg.w_grid) {
                std::vector<double> cs(z.size()), sn(z.size());
                for (std::size_t i = 0; i < z.size(); ++i) {
                    cs[i] = std::cos(2 * pi * w * z[i]);
                    sn[i] = std::sin(2 * pi * w * z[i]);
                }
                const auto mc = mean_se(cs), ms = mean_se(sn);
                const double R = std::hypot(mc.mean, ms.mean);
                double cov = 0.0;
                for (std::size_t i = 0; i < z.size(); ++i)
                    cov += (cs[i] - mc.mean) * (sn[i] - ms.mean);
                cov /= std::max<std::size_t>(z.size() - 1, 1);
                // delta method for |(c, s)|, isotropic when the mean sits at the origin
                double se;
                if (R > 0) {
                    const double vr = (mc.mean * mc.mean * mc.variance + ms.mean * ms.mean * ms.variance +
                                       2 * mc.mean * ms.mean * cov) /
                                      (R * R * z.size());
                    se = std::sqrt(std::max(vr, 0.0));
                } else
                    se = std::sqrt((mc.variance + ms.variance) / (2.0 * z.size()));
                const double exact = std::abs(exact_charfn(law, n, x, w));
                const double bound = charfn_bound(w, V, cfg.charfn_C1);
                const bool adm = charfn_admissible(w, x, n, cfg.charfn_C2, cfg.c0);
                put(b, "w " + fmt(w), fmt(R) + " +- " + fmt(se) + " (exact " + fmt(exact) + ", bound " + fmt(bound) +
                                          (adm ? "" : ", not admissible") + ")");
                plot.rows.push_back({double(n), x, w, R, se, exact, bound, adm ? 1.0 : 0.0});
                if (gaussian && std::abs(R - exact) > 3 * se) {
                    gaussian_ok = false;
                    gaussian_detail = "w = " + fmt(w) + ": " + fmt(R) + " vs " + fmt(exact) + ", se " + fmt(se);
                }
                if (!gaussian && adm && R > bound) {
                    bound_ok = false;
                    bound_detail = "w = " + fmt(w) + ": " + fmt(R) + " > " + fmt(bound);
                }
            }
            // largest C1 the exact characteristic function admits on a fine admissible sweep
            const double wmax = std::max(cfg.w_grid.empty() ? 1.0 : cfg.w_grid.back(), 1.0);
            for (int i = 1; i <= 4000; ++i) {
                const double w = 0.01 * std::pow(wmax / 0.01, i / 4000.0);
                if (!charfn_admissible(w, x, n, cfg.charfn_C2, cfg.c0))
                    break;
                const double e = std::abs(exact_charfn(law, n, x, w));
                sweep_c1 = std::min(sweep_c1, e > 0 ? -std::log(e) / std::min(V, w * w) : INFINITY);
            }
        }
    auto& b = B.block("constant");
    put(b, "C1 from exact sweep", sweep_c1);
    put(b, "frozen C1", cfg.charfn_C1);
    B.verdict("frozen C1 within the exact sweep value", cfg.charfn_C1 <= sweep_c1,
              fmt(cfg.charfn_C1) + " <= " + fmt(sweep_c1));
    if (gaussian)
        B.verdict("Gaussian |Phi| within 3 SE of exp(-2 pi^2 w^2)", gaussian_ok, gaussian_detail);
    else
        B.verdict("|Phi| <= exp(-C1 min(V, w^2)) on the admissible grid", bound_ok, bound_detail);
}

void summarize_tail0(const ExperimentConfig& cfg, const Grouped& g, Builder& B)
{
    const auto law = cfg.coefficient_law();
    const double ref = near_zero_reference_slope(law);
    double q0 = 0.0;
    for (auto [v, p] : law.atoms())
        if (v == 0.0)
            q0 += p;
    for (int n : cfg.degrees) {
        const auto& T = g.at(n, "T");
        const auto& k = g.at(n, "k");
        if (T.empty())
            continue;
        const auto surv = survival(T);
        const long M = static_cast<long>(T.size());
        auto& plot = B.plot("tail0_survival_n" + std::to_string(n), {"t", "p_hat", "se", "log_p_hat", "q0_pow_t"});
        std::vector<double> ts, ls;
        for (std::size_t t = 0; t < surv.size(); ++t) {
            const auto& p = surv[t];
            plot.rows.push_back({double(t), p.p, p.se, p.p > 0 ? std::log(p.p) : -INFINITY, std::pow(q0, double(t))});
            if (p.hits >= 50) {
                ts.push_back(double(t));
                ls.push_back(std::log(p.p));
            }
        }
        auto& b = B.block("n = " + std::to_string(n));
        put(b, "trials", double(M));
        put(b, "max T", surv.empty() ? 0.0 : double(surv.size() - 1));
        put(b, "mean vanishing prefix k", mean_se(k).mean);
        put(b, "reference slope log(1/q0)", ref);
        B.verdict("n = " + std::to_string(n) + ": P(T >= 0) = 1", !surv.empty() && surv[0].p == 1.0, "");
        const auto ks = survival(k);
        bool atom_bound = true;
        for (std::size_t t = 0; t < ks.size() && t < surv.size(); ++t)
            atom_bound = atom_bound && surv[t].hits >= ks[t].hits;
        put(b, "P(T >= t) >= P(k >= t) for all t", yes(atom_bound));
        if (ts.size() >= 2) {
            const auto fit = least_squares(ts, ls);
            put_fit(b, "fit ", fit);
            put(b, "fitted tail slope", -fit.slope);
            if (std::isfinite(ref))
                B.verdict("n = " + std::to_string(n) + ": tail slope within [0.7, 1.3] log(1/q0)",
                          -fit.slope >= 0.7 * ref && -fit.slope <= 1.3 * ref,
                          "slope " + fmt(-fit.slope) + ", reference " + fmt(ref));
        } else {
            put(b, "fit", "omitted: fewer than two points with P >= 50/M");
            if (std::isfinite(ref))
                B.verdict("n = " + std::to_string(n) + ": tail slope within [0.7, 1.3] log(1/q0)", false,
                          "fit omitted");
        }
        if (q0 == 0.0)
            B.verdict("n = " + std::to_string(n) + ": vanishing prefix identically 0",
                      std::all_of(k.begin(), k.end(), [](double v) { return v == 0.0; }), "");
    }
}

void summarize_near1(const ExperimentConfig& cfg, const Grouped& g, Builder& B)
{
    auto& plot = B.plot("near1", {"n", "p_exceed", "se", "mean_N", "mean_maxN", "mean_Nend"});
    std::vector<double> ps, ends;
    for (int n : cfg.degrees) {
        const auto& mx = g.at(n, "maxN");
        if (mx.empty())
            continue;
        const double thr = cfg.eps * std::log(static_cast<double>(n));
        long hits = 0;
        for (double v : mx)
            hits += v > thr;
        const auto p = proportion(hits, static_cast<long>(mx.size()));
        const double mN = mean_se(g.at(n, "N")).mean, mE = mean_se(g.at(n, "Nend")).mean;
        ps.push_back(p.p);
        ends.push_back(mN);
        auto& b = B.block("n = " + std::to_string(n));
        put(b, "m-grid size", double(m_grid(n, cfg.c, cfg.m_grid).size()));
        put(b, "P(max_m N_m > eps log n)", p.p);
        put(b, "se", p.se);
        put(b, "mean N_n[1 - C log n/n, 1]", mN);
        put(b, "mean max_m N_m", mean_se(mx).mean);
        put(b, "mean N_n[1 - log n/(Cp n), 1]", mE);
        plot.rows.push_back({double(n), p.p, p.se, mN, mean_se(mx).mean, mE});
    }
    auto& b = B.block("trend");
    put(b, "exceedance non-increasing in n", yes(non_increasing(ps)));
    if (!ends.empty())
        put(b, "max mean window count", *std::max_element(ends.begin(), ends.end()));
}

void summarize_pairing(const ExperimentConfig& cfg, const Grouped& g, Builder& B)
{
    auto& plot = B.plot("pairing", {"n", "p_defect_ok", "se", "p_defect_ok_half_grid", "mean_defect"});
    for (int n : cfg.degrees) {
        const auto& d = g.at(n, "defect");
        if (d.empty())
            continue;
        long ok = 0, ok_half = 0;
        for (double v : d)
            ok += v <= cfg.defect_max;
        for (double v : g.at(n, "defect_half"))
            ok_half += v <= cfg.defect_max;
        const auto p = proportion(ok, static_cast<long>(d.size()));
        const auto ph = proportion(ok_half, static_cast<long>(d.size()));
        auto& b = B.block("n = " + std::to_string(n));
        put(b, "interval", pairing_interval(n, cfg.C1, cfg.C0).str());
        put(b, "m-grid size", double(m_grid(n, cfg.c, cfg.m_grid).size()));
        put(b, "mean N_n(I)", mean_se(g.at(n, "N")).mean);
        put(b, "mean max defect", mean_se(d).mean);
        put(b, "P(defect <= " + std::to_string(cfg.defect_max) + ")", p.p);
        put(b, "se", p.se);
        put(b, "same on every other grid point", ph.p);
        put(b, "grid sensitivity", ph.p - p.p);
        plot.rows.push_back({double(n), p.p, p.se, ph.p, mean_se(d).mean});
        B.verdict("n = " + std::to_string(n) + ": P(max defect <= " + std::to_string(cfg.defect_max) + ") >= 0.95",
                  p.p >= 0.95, "P = " + fmt(p.p) + " +- " + fmt(p.se));
    }
    if (cfg.witness_trials > 0 && !cfg.witness_degrees.empty()) {
        auto& wp = B.plot("witness", {"n", "frequency", "se"});
        auto& b = B.block("repulsion witnesses");
        put(b, "threshold", "n^-" + fmt(cfg.B));
        put(b, "grid pitch", "max(n^-" + fmt(cfg.A) + ", 1e-7)");
        std::vector<double> freq;
        for (int n : cfg.witness_degrees) {
            const auto& w = g.at(n, "witness");
            if (w.empty())
                continue;
            long hits = 0;
            for (double v : w)
                hits += v > 0;
            const auto p = proportion(hits, static_cast<long>(w.size()));
            freq.push_back(p.p);
            put(b, "frequency n = " + std::to_string(n), fmt(p.p) + " +- " + fmt(p.se));
            wp.rows.push_back({double(n), p.p, p.se});
        }
        put(b, "frequency non-increasing in n", yes(non_increasing(freq)));
    }
}

void summarize_variance(const ExperimentConfig& cfg, const Grouped& g, Builder& B)
{
    auto& plot = B.plot("variance", {"n", "log_n", "mean", "variance", "variance_over_log_n", "skewness"});
    std::vector<double> xs, ys;
    for (int n : cfg.degrees) {
        const auto& v = g.at(n, "N[R]");
        if (v.size() < 2)
            continue;
        const auto m = mean_se(v);
        const double ln = std::log(static_cast<double>(n));
        const double sk = skewness(v);
        auto& b = B.block("n = " + std::to_string(n));
        put(b, "mean", m.mean);
        put(b, "variance", m.variance);
        put(b, "variance / log n", m.variance / ln);
        put(b, "skewness", sk);
        plot.rows.push_back({double(n), ln, m.mean, m.variance, m.variance / ln, sk});
        xs.push_back(ln);
        ys.push_back(m.variance);
        B.verdict("n = " + std::to_string(n) + ": variance >= 0", m.variance >= 0, "");
    }
    auto& b = B.block("trend");
    put(b, "reference slope (4/pi)(1 - 2/pi)", maslova_variance_slope());
    if (xs.size() >= 2)
        put_fit(b, "variance vs log n ", least_squares(xs, ys));
    else
        put(b, "fit", "omitted: fewer than two degrees");
    if (!xs.empty()) {
        const int n = cfg.degrees.back();
        const auto& v = g.at(n, "N[R]");
        const auto m = mean_se(v);
        const double sd = std::sqrt(m.variance);
        auto& h = B.plot("variance_histogram", {"z_lo", "z_hi", "frequency"});
        for (int i = -8; i < 8; ++i) {
            long c = 0;
            for (double x : v) {
                const double z = sd > 0 ? (x - m.mean) / sd : 0.0;
                c += z >= i * 0.5 && z < (i + 1) * 0.5;
            }
            h.rows.push_back({i * 0.5, (i + 1) * 0.5, double(c) / v.size()});
        }
        const double sk = skewness(v);
        B.verdict("|skewness| < 0.5 at largest n", std::abs(sk) < 0.5, "skewness " + fmt(sk));
    }
}

void summarize_jensen(const ExperimentConfig& cfg, const Grouped& g, Builder& B)
{
    for (int n : cfg.degrees) {
        const auto& mx = g.at(n, "maxN");
        const auto& bd = g.at(n, "bound");
        if (mx.empty())
            continue;
        long violations = 0;
        double slack = INFINITY;
        for (std::size_t i = 0; i < mx.size(); ++i) {
            violations += mx[i] > bd[i];
            slack = std::min(slack, bd[i] - mx[i]);
        }
        auto& b = B.block("n = " + std::to_string(n));
        put(b, "audited trials", double(mx.size()));
        put(b, "mean max_j N_j(-r, r)", mean_se(mx).mean);
        put(b, "mean Jensen bound", mean_se(bd).mean);
        put(b, "smallest slack", slack);
        B.verdict("n = " + std::to_string(n) + ": Jensen bound dominates max_j N_j(-r, r)", violations == 0,
                  std::to_string(violations) + " violations");
    }
}

void summarize_bounds(const ExperimentConfig& cfg, const Grouped& g, Builder& B)
{
    double cstar = 0, cdual = 0, quad = 0, alpha = 0, vr = 0;
    for (const auto& [key, vals] : g.values) {
        const auto& obs = key.second;
        for (double v : vals) {
            if (obs == "max_ratio")
                cstar = std::max(cstar, v);
            else if (obs == "max_dual_ratio")
                cdual = std::max(cdual, v);
            else if (obs.rfind("quad_rel_err", 0) == 0)
                quad = std::max(quad, v);
            else if (obs == "alpha_gap_times_L")
                alpha = std::max(alpha, v);
            else if (obs == "variance_ratio_range")
                vr = std::max(vr, v);
        }
    }
    auto& b = B.block("constants");
    put(b, "C* (iterated, n <= " + std::to_string(cfg.degrees.back()) + ", k <= 32)", cstar);
    put(b, "C* dual", cdual);
    put(b, "max relative error exact vs quadrature at n = 12", quad);
    put(b, "max L * pseudo-hyperbolic gap of alpha grid", alpha);
    put(b, "max spread of V_n / comparator", vr);
    auto& plot = B.plot("iterated_constant", {"n", "max_ratio", "k_at_max", "y_at_max"});
    for (const auto& [key, rows] : g.rows)
        if (key.second == "max_ratio")
            for (const auto& r : rows)
                plot.rows.push_back({double(r.n), r.value, r.aux1, r.aux2});
    B.verdict("iterated moment <= C* min(branch1, branch2) with C* <= 16", cstar <= 16.0, "C* = " + fmt(cstar));
    B.verdict("n = 12 exact sum matches quadrature within 1e-6", quad <= 1e-6, "max relative error " + fmt(quad));
}

void summarize_oracle(const Grouped& g, Builder& B)
{
    long checks = 0, mismatches = 0, escalations = 0;
    std::string first;
    for (const auto& [key, rows] : g.rows)
        for (const auto& r : rows) {
            ++checks;
            escalations += static_cast<long>(r.aux2);
            if (r.value != r.aux1) {
                ++mismatches;
                if (first.empty())
                    first = "trial " + std::to_string(r.trial) + " " + r.observable;
            }
        }
    auto& b = B.block("oracle");
    put(b, "comparisons", double(checks));
    put(b, "mismatches", double(mismatches));
    put(b, "escalations", double(escalations));
    B.verdict("descartes_count equals sturm_count", mismatches == 0 && checks > 0,
              std::to_string(mismatches) + " mismatches in " + std::to_string(checks) +
                  (first.empty() ? "" : ", first at " + first));
}

}  // namespace

bool ExperimentSummary::passed() const
{
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

const Verdict* ExperimentSummary::verdict(std::string_view name) const
{
    for (const auto& v : verdicts)
        if (v.name == name)
            return &v;
    return nullptr;
}

const std::string& ExperimentSummary::field(std::string_view block, std::string_view key) const
{
    for (const auto& b : blocks)
        if (b.title == block)
            for (const auto& [k, v] : b.fields)
                if (k == key)
                    return v;
    throw std::out_of_range("summary has no field '" + std::string(key) + "' in block '" + std::string(block) + "'");
}

ExperimentSummary summarize(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records)
{
    const auto g = group(records);
    Builder B(cfg, g);
    const auto& e = cfg.experiment;
    if (e == "slln")
        summarize_slln(cfg, g, B);
    else if (e == "lacunary")
        summarize_counts_vs_expectation(cfg, g, B, true);
    else if (e == "expectation")
        summarize_counts_vs_expectation(cfg, g, B, false);
    else if (e == "smallball")
        summarize_small_ball(cfg, g, B);
    else if (e == "charfn")
        summarize_charfn(cfg, g, B);
    else if (e == "tail0")
        summarize_tail0(cfg, g, B);
    else if (e == "near1")
        summarize_near1(cfg, g, B);
    else if (e == "pairing")
        summarize_pairing(cfg, g, B);
    else if (e == "variance")
        summarize_variance(cfg, g, B);
    else if (e == "jensen")
        summarize_jensen(cfg, g, B);
    else if (e == "bounds")
        summarize_bounds(cfg, g, B);
    else if (e == "oracle-check")
        summarize_oracle(g, B);
    else
        throw ConfigError("experiment '" + e + "' has no summary");
    return B.s;
}

}  // namespace kaclab
