#include "kaclab/theory_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kaclab/format.hpp"

namespace kaclab {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

template <class F>
double integrate(F f, double a, double b, double rel_tol, double abs_tol, const char* what)
{
    if (!(b > a))
        return 0.0;
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 18, rel_tol, &err);
    if (!(err <= std::max(abs_tol, rel_tol * std::abs(v))) || !std::isfinite(v))
        throw QuadratureError(std::string(what) + ": quadrature did not converge, achieved " + format_double(err),
                              err);
    return v;
}

// Compensated sum of exp(t_j - shift).
class LogSum {
public:
    explicit LogSum(double shift) : shift_(shift) {}
    void add(double log_term)
    {
        const double y = std::exp(log_term - shift_) - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double log() const { return shift_ + std::log(sum_); }

private:
    double shift_, sum_ = 0.0, comp_ = 0.0;
};

double lfact(int m)
{
    return std::lgamma(m + 1.0);
}

// Integral of the density over [a, b] with 0 <= a <= b <= 1, in u = -log(1 - x).
double integral_unit(int n, double a, double b, double tol)
{
    if (!(b > a))
        return 0.0;
    const double ua = -std::log1p(-a);
    const double knee = std::log(n + 1.0) + 2.0;
    const double cap = knee + 25.0;
    const double ub = b >= 1.0 ? cap : std::min(-std::log1p(-b), cap);
    auto f = [n](double u) {
        const double e = std::exp(-u);
        return kac_density(n, 1.0 - e) * e;
    };
    // unit-length pieces up to the transition near u = log n, one piece beyond it
    std::vector<double> cuts{ua};
    for (double u = std::floor(ua) + 1.0; u < std::min(ub, knee); u += 1.0)
        cuts.push_back(u);
    cuts.push_back(ub);
    double total = 0.0;
    const double share = tol / (4.0 * cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += integrate(f, cuts[i], cuts[i + 1], 1e-11, share, "expected_count");
    return total;
}

double integral_nonneg(int n, double a, double b, double tol)
{
    // [a, b] within [0, inf); the part above 1 maps to [1/b, 1/a] under x -> 1/x
    double total = integral_unit(n, std::min(a, 1.0), std::min(b, 1.0), tol / 2);
    if (b > 1.0)
        total += integral_unit(n, b == inf ? 0.0 : 1.0 / b, 1.0 / std::max(a, 1.0), tol / 2);
    return total;
}

}  // namespace

double kac_density(int n, double x)
{
    if (n < 0)
        throw std::invalid_argument("kac_density: negative degree");
    if (n == 0)
        return 0.0;
    const double ax = std::abs(x);
    if (ax > 1.0) {
        const double r = 1.0 / ax;
        return kac_density(n, r) * r * r;
    }
    const double y = ax * ax;
    // A C - B^2 = sum_s D(s) y^(s-1) with D(s) = sum_{i+j=s} (i-j)^2 / 2 >= 0; both sums are summed
    // upward and stop once the geometric tail is below rounding
    double A = 0.0, S = 0.0, p = 1.0;
    for (int s = 1; s <= 2 * n; ++s) {
        if (s <= n + 1)
            A += p;
        const double m = std::min(n, s) - std::max(0, s - n);
        const double term = m * (m + 1) * (m + 2) / 6.0 * p;
        S += term;
        p *= y;
        const double q = y * (1.0 + 3.0 / s);
        if (q < 1.0 && term * q < 1e-18 * (1.0 - q) * S && p < 1e-18 * (1.0 - y) * A)
            break;
    }
    return std::sqrt(S) / (pi * A);
}

double expected_count(int n, double a, double b, double tol)
{
    if (!(a <= b))
        throw std::invalid_argument("expected_count: empty interval");
    if (n <= 0)
        return 0.0;
    double total = 0.0;
    if (b > 0.0)
        total += integral_nonneg(n, std::max(a, 0.0), b, tol / 2);
    if (a < 0.0)
        total += integral_nonneg(n, std::max(-b, 0.0), -a, tol / 2);
    return total;
}

double expected_count(int n, const Interval& I, double tol)
{
    I.validate();
    return expected_count(n, I.lo_infinite ? -inf : I.lo.get_d(), I.hi_infinite ? inf : I.hi.get_d(), tol);
}

KacDensityTable build_density_table(int n, std::vector<double> xs)
{
    KacDensityTable t;
    t.n = n;
    t.xs = std::move(xs);
    for (double x : t.xs)
        t.rho.push_back(kac_density(n, x));
    t.integrals["[0,1]"] = expected_count(n, 0.0, 1.0);
    t.integrals["[-1,1]"] = expected_count(n, -1.0, 1.0);
    t.integrals["[1,inf)"] = expected_count(n, 1.0, inf);
    t.integrals["R"] = expected_count(n, -inf, inf);
    return t;
}

XiNorm xi_norm_sq(double w, const CoefficientLaw& law)
{
    auto dist2 = [](double t) {
        const double d = t - std::nearbyint(t);
        return d * d;
    };
    if (w == 0.0)
        return {0.0, 0.0};
    if (law.finite_support()) {
        const auto atoms = law.atoms();
        double s = 0.0;
        for (auto [u, pu] : atoms)
            for (auto [v, pv] : atoms)
                s += pu * pv * dist2(w * (u - v));
        return {s, 0.0};
    }
    // Fourier series of ||t||^2 = 1/12 + sum (-1)^k cos(2 pi k t) / (pi k)^2, averaged against
    // the characteristic function |phi(2 pi k w)|^2 of eta1 - eta2.
    const double aw = std::abs(w);
    auto phi2 = [&](double t) {
        if (law.kind == LawKind::gaussian)
            return std::exp(-t * t);
        const double s = std::sqrt(3.0) * t;
        const double sinc = std::sin(s) / s;
        return sinc * sinc;
    };
    auto tail = [&](long K) {
        if (law.kind == LawKind::gaussian) {
            const double a = 4 * pi * pi * aw * aw;
            return std::exp(-a * double(K) * double(K)) / (pi * pi * double(K));
        }
        const double k3 = double(K) * double(K) * double(K);
        return std::min(1.0 / (pi * pi * double(K)), 1.0 / (36.0 * std::pow(pi, 4) * aw * aw * k3));
    };
    double s = 1.0 / 12.0, comp = 0.0;
    long k = 1;
    for (; k <= 20'000'000; ++k) {
        const double term = (k % 2 ? -1.0 : 1.0) * phi2(2 * pi * k * aw) / (pi * pi * double(k) * double(k)) - comp;
        const double t = s + term;
        comp = (t - s) - term;
        s = t;
        if (tail(k) < 1e-15)
            break;
    }
    return {std::max(s, 0.0), tail(k) + 1e-16};
}

double charfn_bound(double w, double V, double C1)
{
    if (!(V > 0.0))
        throw std::invalid_argument("charfn_bound: V must be positive");
    return std::exp(-C1 * std::min(V, w * w));
}

double charfn_admissible_limit(double x, int n, double C2, double c0)
{
    if (!(x > 0.0) || x > 1.0 || n < 1 || !(C2 > 0.0))
        throw std::invalid_argument("charfn_admissible_limit: requires 0 < x <= 1, n >= 1, C2 > 0");
    return std::exp(-0.5 * std::log(1.0 - x + 1.0 / n) - c0 * n * std::log(x)) / C2;
}

bool charfn_admissible(double w, double x, int n, double C2, double c0)
{
    return std::abs(w) <= charfn_admissible_limit(x, n, C2, c0);
}

double small_ball_floor(double x, int n, double V, double c0, double C1)
{
    const double ax = std::abs(x);
    const double a = ax == 0.0 ? 0.0 : std::exp(c0 * n * std::log(ax)) / std::sqrt(V);
    return std::max(a, std::exp(-C1 * V));
}

double small_ball_window_floor(double V, int n, double c)
{
    return std::pow(V, -0.5) * std::pow(static_cast<double>(n), -c);
}

SmallBallBound small_ball_bound(double lambda, double floor, double K)
{
    return {K * lambda, floor, lambda >= floor};
}

int first_large_index(CoeffView p, double c0)
{
    for (std::size_t k = 0; k < p.size(); ++k)
        if (std::abs(p[k]) >= c0)
            return static_cast<int>(k);
    return -1;
}

double jensen_root_bound(CoeffView p, double r, double R, double c0)
{
    if (!(0.0 < r && r < R && R < 1.0) || !(c0 > 0.0))
        throw std::invalid_argument("jensen_root_bound: requires 0 < r < R < 1 and c0 > 0");
    const int n = static_cast<int>(p.size()) - 1;
    const int k = first_large_index(p, c0);
    if (k < 0)
        return n;
    const double logR = std::log(R);
    std::vector<double> terms;
    for (int m = k; m <= n; ++m)
        if (p[m] != 0.0)
            terms.push_back(std::log(std::abs(p[m])) + (m - k) * logR + lfact(m) - lfact(m - k));
    LogSum sum(*std::max_element(terms.begin(), terms.end()));
    for (double t : terms)
        sum.add(t);
    const double log_ratio = std::log(R / r);
    return k + (sum.log() - lfact(k)) / log_ratio + std::log(1.0 / c0) / log_ratio;
}

double jensen_root_bound(const PolynomialSample& p, double r, double R, double c0)
{
    return jensen_root_bound(p.coeffs(), r, R, c0);
}

double log_iterated_moment(int n, int k, double y)
{
    if (k < 1 || k > n || y < 0.0 || y > 1.0)
        throw std::invalid_argument("iterated moment: requires 1 <= k <= n and 0 <= y <= 1");
    if (y == 0.0)
        return -inf;
    const double ly = std::log(y);
    std::vector<double> terms(n - k + 1);
    for (int j = 0; j <= n - k; ++j)
        terms[j] = 2 * (lfact(j + k) - lfact(j)) + lfact(2 * j) - lfact(2 * j + k) + (2 * j + k) * ly;
    LogSum sum(*std::max_element(terms.begin(), terms.end()));
    for (double t : terms)
        sum.add(t);
    return sum.log();
}

double iterated_moment_exact(int n, int k, double y)
{
    return std::exp(log_iterated_moment(n, k, y));
}

namespace {

// Nonnegative integrand concentrated within about 1/n of b: pieces shrink geometrically toward b,
// each split into equal GK31 panels, doubling the panels until two resolutions agree.  Boost's
// adaptive estimate stalls near 1e-10 relative on these integrands and recurses to full depth.
template <class F>
double integrate_toward(F f, double a, double b, int n, const char* what)
{
    using boost::math::quadrature::gauss_kronrod;
    std::vector<double> cuts{a};
    for (double w = (b - a) / 2; w > (b - a) / (4.0 * n) && w > 1e-12; w /= 2)
        cuts.push_back(b - w);
    cuts.push_back(b);
    auto composite = [&](int panels) {
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double h = (cuts[i + 1] - cuts[i]) / panels;
            for (int q = 0; q < panels; ++q)
                total += gauss_kronrod<double, 31>::integrate(f, cuts[i] + q * h,
                                                              q + 1 == panels ? cuts[i + 1] : cuts[i] + (q + 1) * h, 0);
        }
        return total;
    };
    double coarse = composite(1), diff = inf;
    for (int panels = 2; panels <= 64; panels *= 2) {
        const double fine = composite(panels);
        diff = std::abs(fine - coarse);
        if (diff <= 1e-9 * std::abs(fine) && std::isfinite(fine))
            return fine;
        coarse = fine;
    }
    throw QuadratureError(std::string(what) + ": quadrature did not converge, achieved " + format_double(diff), diff);
}

// E |p_n^(k)(t)|^2 for unit-variance coefficients

double derivative_second_moment(int n, int k, double t)
{
    double s = 0.0;
    const double t2 = t * t;
    for (int j = n - k; j >= 0; --j)
        s = s * t2 + std::exp(2 * (lfact(j + k) - lfact(j)));
    return s;
}

}  // namespace

double iterated_moment_quadrature(int n, int k, double y)
{
    if (k < 1 || k > n || y < 0.0 || y > 1.0)
        throw std::invalid_argument("iterated moment: requires 1 <= k <= n and 0 <= y <= 1");
    const double lk = lfact(k - 1);
    auto f = [&](double t) {
        const double d = y - t;
        const double kernel = k == 1 ? 1.0 : std::exp((k - 1) * std::log(d) - lk);
        return kernel * derivative_second_moment(n, k, t);
    };
    return integrate_toward(f, 0.0, y, n, "iterated_moment_quadrature");
}

double iterated_moment_dual_quadrature(int n, int k, double x)
{
    if (k < 1 || k > n || x < 0.0 || x > 1.0)
        throw std::invalid_argument("iterated moment: requires 1 <= k <= n and 0 <= x <= 1");
    const double lk = lfact(k - 1);
    auto f = [&](double t) {
        const double d = t - x;
        const double kernel = k == 1 ? 1.0 : std::exp((k - 1) * std::log(d) - lk);
        return kernel * derivative_second_moment(n, k, t);
    };
    return integrate_toward(f, x, 1.0, n, "iterated_moment_dual_quadrature");
}

LogIteratedCurves log_iterated_bound_curves(int n, int k, double x, double y)
{
    if (k < 1 || k > n || x < 0.0 || x > y || y > 1.0)
        throw std::invalid_argument("iterated bound: requires 1 <= k <= n and 0 <= x <= y <= 1");
    LogIteratedCurves c;
    c.branch1 = (y == 0.0 ? -inf : k * std::log(y)) + (k + 1) * std::log(n / 2.0);
    c.branch2 = y == 1.0 ? inf : lfact(k) + 0.5 * std::log(k) - (k + 1) * std::log(2 * (1 - y));
    c.dual = x == 1.0 ? -inf : (2 * k + 1) * std::log(n) + k * std::log1p(-x) - lfact(k);
    return c;
}

IteratedCurves iterated_bound_curves(int n, int k, double x, double y)
{
    const auto c = log_iterated_bound_curves(n, k, x, y);
    return {std::exp(c.branch1), std::exp(c.branch2), std::exp(c.dual)};
}

std::vector<double> alpha_grid(int n, double C, double Cp, int L)
{
    if (!(C > 0.0) || !(Cp > 1.0 / C) || L < 1 || n < 3)
        throw std::invalid_argument("alpha_grid: requires C > 0, Cp > 1/C, L >= 1, n >= 3");
    const double base = std::log(static_cast<double>(n)) / n;
    std::vector<double> a(L + 1);
    for (int j = 0; j <= L; ++j)
        a[j] = 1.0 - C * std::pow(Cp * C, -static_cast<double>(j) / L) * base;
    a[L] = 1.0 - base / Cp;
    return a;
}

double pseudo_hyperbolic(double x, double y)
{
    const double den = 1.0 - x * y;
    if (den == 0.0)
        throw std::domain_error("pseudo_hyperbolic: undefined for xy = 1");
    return std::abs(x - y) / std::abs(den);
}

double near_zero_tail_bound(double t, double c2)
{
    if (t < 0.0 || !(c2 > 0.0))
        throw std::invalid_argument("near_zero_tail_bound: requires t >= 0 and c2 > 0");
    return std::exp(-c2 * t);
}

double near_zero_reference_slope(const CoefficientLaw& law)
{
    double q = 0.0;
    for (auto [v, p] : law.atoms())
        if (v == 0.0)
            q += p;
    return q > 0.0 ? std::log(1.0 / q) : inf;
}

double maslova_variance_slope()
{
    return 4.0 / pi * (1.0 - 2.0 / pi);
}

BoundCurve charfn_curve(double C1)
{
    return {"charfn_bound", {"w", "V"}, [C1](std::span<const double> v) { return charfn_bound(v[0], v[1], C1); }};
}

BoundCurve small_ball_curve(double K)
{
    return {"small_ball_bound", {"lambda"}, [K](std::span<const double> v) { return K * v[0]; }};
}

BoundCurve iterated_branch1_curve()
{
    return {"iterated_branch1", {"n", "k", "y"}, [](std::span<const double> v) {
                return iterated_bound_curves(int(v[0]), int(v[1]), 0.0, v[2]).branch1;
            }};
}

BoundCurve iterated_branch2_curve()
{
    return {"iterated_branch2", {"n", "k", "y"}, [](std::span<const double> v) {
                return iterated_bound_curves(int(v[0]), int(v[1]), 0.0, v[2]).branch2;
            }};
}

BoundCurve iterated_dual_curve()
{
    return {"iterated_dual", {"n", "k", "x"}, [](std::span<const double> v) {
                return iterated_bound_curves(int(v[0]), int(v[1]), v[2], 1.0).dual;
            }};
}

BoundCurve near_zero_tail_curve()
{
    return {"near_zero_tail", {"t", "c2"}, [](std::span<const double> v) { return near_zero_tail_bound(v[0], v[1]); }};
}

void write_curve_csv(std::ostream& os, const BoundCurve& curve, const std::vector<std::vector<double>>& rows)
{
    for (const auto& name : curve.inputs)
        os << name << ',';
    os << "value\n";
    for (const auto& row : rows) {
        if (row.size() != curve.inputs.size())
            throw std::invalid_argument("write_curve_csv: row width does not match curve inputs");
        for (double v : row)
            os << format_double(v) << ',';
        os << format_double(curve.evaluate(row)) << '\n';
    }
}

}  // namespace kaclab
