#include "kaclab/kac_poly.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "kaclab/exact_poly.hpp"

namespace kaclab {

namespace {

constexpr double unit_roundoff = 0x1.0p-53;

double gamma(int k)
{
    const double ku = k * unit_roundoff;
    return ku / (1.0 - ku);
}

}  // namespace

PolynomialSample::PolynomialSample(std::vector<double> coeffs, std::string law_id, std::uint64_t master_seed,
                                   std::uint64_t trial_index)
    : coeffs_(std::move(coeffs)), law_id_(std::move(law_id)), master_seed_(master_seed), trial_index_(trial_index)
{
    if (coeffs_.empty())
        throw std::invalid_argument("PolynomialSample: needs at least one coefficient");
    for (double c : coeffs_)
        if (!std::isfinite(c))
            throw std::invalid_argument("PolynomialSample: non-finite coefficient");
}

PolynomialSample PolynomialSample::prefix(int m) const
{
    if (m < 0 || m > degree())
        throw std::out_of_range("PolynomialSample::prefix: m out of range");
    auto v = view(m);
    return PolynomialSample(std::vector<double>(v.begin(), v.end()), law_id_, master_seed_, trial_index_);
}

bool PolynomialSample::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

PolynomialSample sample_polynomial(const CoefficientLaw& law, int n, std::uint64_t master_seed,
                                   std::uint64_t trial_index)
{
    if (n < 0)
        throw std::invalid_argument("sample_polynomial: negative degree");
    RandomStream stream = seeded_stream(master_seed, trial_index);
    std::vector<double> c(static_cast<std::size_t>(n) + 1);
    for (auto& x : c)
        x = sample_value(law, stream);
    return PolynomialSample(std::move(c), law.spec(), master_seed, trial_index);
}

CertifiedValue eval(CoeffView p, double x, int k)
{
    const int n = static_cast<int>(p.size()) - 1;
    if (k < 0)
        throw std::invalid_argument("eval: negative derivative order");
    if (k > n)
        return {0.0, 0.0};
    const double ax = std::abs(x);
    double value = 0.0, bound = 0.0;
    if (k == 0) {
        double v = p[n], b = std::abs(p[n]);
        for (int i = n - 1; i >= 0; --i) {
            v = v * x + p[i];
            b = b * ax + std::abs(p[i]);
        }
        value = v;
        bound = b;
    } else {
        std::vector<double> w(p.begin(), p.end());
        std::vector<double> a(p.size());
        std::transform(p.begin(), p.end(), a.begin(), [](double c) { return std::abs(c); });
        for (int s = 0; s <= k; ++s)
            for (int i = n - 1; i >= s; --i) {
                w[i] += x * w[i + 1];
                a[i] += ax * a[i + 1];
            }
        value = w[k];
        bound = a[k];
    }
    // every term passes through at most 2(n+1) roundings
    double radius = 2.0 * gamma(2 * n + 4) * bound;
    if (k > 0) {
        double fact = 1.0;
        for (int i = 2; i <= k; ++i)
            fact *= i;
        value *= fact;
        radius = radius * fact + std::abs(value) * gamma(k + 2);
    }
    if (radius > 0.0)
        radius += std::numeric_limits<double>::denorm_min();
    return {value, radius};
}

CertifiedValue eval(const PolynomialSample& p, double x, int k)
{
    return eval(p.coeffs(), x, k);
}

mpq_class eval_exact(CoeffView p, const mpq_class& x, int k)
{
    const int n = static_cast<int>(p.size()) - 1;
    if (k > n)
        return 0;
    // p^(k)(x) = sum_{j>=k} j!/(j-k)! xi_j x^{j-k}
    mpq_class acc = 0;
    for (int j = n; j >= k; --j) {
        acc *= x;
        if (p[j] != 0.0) {
            mpz_class falling = 1;
            for (int i = 0; i < k; ++i)
                falling *= (j - i);
            acc += mpq_class(p[j]) * falling;
        }
    }
    return acc;
}

mpq_class eval_exact(const PolynomialSample& p, const mpq_class& x, int k)
{
    return eval_exact(p.coeffs(), x, k);
}

int sign_exact(CoeffView p, const mpq_class& x)
{
    return exact::sign_at(exact::from_dyadic(p), x);
}

double variance_profile(int n, double x)
{
    if (n < 0)
        throw std::invalid_argument("variance_profile: negative degree");
    const double ax = std::abs(x);
    if (ax == 1.0)
        return n + 1.0;
    if (ax == 0.0)
        return 1.0;
    const double one_minus_x2 = (1.0 - ax) * (1.0 + ax);
    const double delta = 2.0 * std::log1p(ax - 1.0);  // log x^2
    if (std::abs(one_minus_x2) < 1e-8) {
        // direct summation of exp(j * log x^2), compensated
        double sum = 0.0, comp = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double term = std::exp(j * delta) - comp;
            const double t = sum + term;
            comp = (t - sum) - term;
            sum = t;
        }
        return sum;
    }
    // (1 - x^{2n+2}) / (1 - x^2) written with expm1 to avoid cancellation
    return std::expm1((n + 1.0) * delta) / std::expm1(delta);
}

VarianceComparison variance_comparability(int n, double x)
{
    if (n < 1 || x < 0.0 || x > 1.0)
        throw std::invalid_argument("variance_comparability: requires n >= 1 and x in [0,1]");
    const double v = variance_profile(n, x);
    const double comp = 1.0 / (1.0 - x + 1.0 / n);
    return {v, comp, v / comp};
}

PolynomialSample reciprocal_transform(const PolynomialSample& p)
{
    auto c = p.coeffs();
    return PolynomialSample(std::vector<double>(c.rbegin(), c.rend()), p.law_id(), p.master_seed(), p.trial_index());
}

double tail_difference_bound(int n, int m, double x, double cap)
{
    if (n > m || std::abs(x) > 1.0 || !(cap > 0.0))
        throw std::invalid_argument("tail_difference_bound: requires n <= m, |x| <= 1, cap > 0");
    const double ax = std::abs(x);
    if (ax == 1.0)
        return cap * (m - n);
    if (ax == 0.0)
        return 0.0;
    // cap * sum_{n<j<=m} |x|^j
    return cap * std::pow(ax, n + 1) * (-std::expm1((m - n) * std::log(ax))) / (1.0 - ax);
}

void write_dump(std::ostream& os, const PolynomialSample& p)
{
    os << p.degree() << ' ' << p.law_id() << ' ' << p.master_seed() << ' ' << p.trial_index() << '\n';
    for (int j = 0; j <= p.degree(); ++j) {
        const auto d = p.dyadic(j);
        os << d.mantissa << ' ' << d.exponent << '\n';
    }
}

PolynomialSample read_dump(std::istream& is)
{
    int n = -1;
    std::string law;
    std::uint64_t seed = 0, trial = 0;
    if (!(is >> n >> law >> seed >> trial) || n < 0)
        throw std::runtime_error("read_dump: malformed header");
    std::vector<double> c(static_cast<std::size_t>(n) + 1);
    for (auto& x : c) {
        DyadicCoefficient d;
        if (!(is >> d.mantissa >> d.exponent))
            throw std::runtime_error("read_dump: truncated coefficient list");
        x = d.to_double();
    }
    return PolynomialSample(std::move(c), law, seed, trial);
}

}  // namespace kaclab
