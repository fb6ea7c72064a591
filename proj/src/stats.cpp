#include "kaclab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kaclab {

MeanSE mean_se(std::span<const double> xs)
{
    MeanSE r;
    r.count = static_cast<long>(xs.size());
    if (xs.empty())
        return r;
    // Welford
    double mean = 0.0, m2 = 0.0;
    long k = 0;
    for (double x : xs) {
        ++k;
        const double d = x - mean;
        mean += d / k;
        m2 += d * (x - mean);
    }
    r.mean = mean;
    if (k > 1) {
        r.variance = m2 / (k - 1);
        r.se = std::sqrt(r.variance / k);
    }
    return r;
}

Proportion proportion(long hits, long total)
{
    if (total <= 0 || hits < 0 || hits > total)
        throw std::invalid_argument("proportion: requires 0 <= hits <= total, total > 0");
    const double p = static_cast<double>(hits) / total;
    return {p, std::sqrt(p * (1 - p) / total), hits, total};
}

double skewness(std::span<const double> xs)
{
    const auto m = mean_se(xs);
    if (xs.size() < 2)
        return 0.0;
    double m2 = 0.0, m3 = 0.0;
    for (double x : xs) {
        const double d = x - m.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= xs.size();
    m3 /= xs.size();
    return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

SlopeFit least_squares(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size())
        throw std::invalid_argument("least_squares: length mismatch");
    const auto n = static_cast<double>(xs.size());
    const auto mx = mean_se(xs).mean, my = mean_se(ys).mean;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (xs.size() < 2 || !(sxx > 0.0))
        throw std::invalid_argument("least_squares: need at least two distinct abscissae");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - f.intercept - f.slope * xs[i];
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    f.x_lo = *std::min_element(xs.begin(), xs.end());
    f.x_hi = *std::max_element(xs.begin(), xs.end());
    f.points = static_cast<int>(xs.size());
    return f;
}

double normal_abs_cdf(double lambda)
{
    return std::erf(lambda / std::sqrt(2.0));
}

std::vector<Proportion> survival(std::span<const double> values)
{
    if (values.empty())
        return {};
    const long top = static_cast<long>(*std::max_element(values.begin(), values.end()));
    std::vector<long> at_least(std::max(top, 0L) + 2, 0);
    for (double v : values)
        if (v >= 0)
            ++at_least[static_cast<long>(v)];
    for (long t = static_cast<long>(at_least.size()) - 2; t >= 0; --t)
        at_least[t] += at_least[t + 1];
    std::vector<Proportion> s;
    for (long t = 0; t <= top; ++t)
        s.push_back(proportion(at_least[t], static_cast<long>(values.size())));
    return s;
}

}  // namespace kaclab
