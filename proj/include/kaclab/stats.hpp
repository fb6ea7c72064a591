#pragma once

#include <span>
#include <string>
#include <vector>

namespace kaclab {

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;      // sample std / sqrt(count)
    double variance = 0.0;  // unbiased sample variance
    long count = 0;
};
MeanSE mean_se(std::span<const double> xs);

struct Proportion {
    double p = 0.0;
    double se = 0.0;
    long hits = 0;
    long total = 0;
};
Proportion proportion(long hits, long total);

/// Sample skewness g1 (biased moment estimator); 0 for constant data.
double skewness(std::span<const double> xs);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root mean square residual
    double x_lo = 0.0, x_hi = 0.0;
    int points = 0;
};
/// Least squares y = intercept + slope x; throws std::invalid_argument for fewer than two
/// distinct x values.
SlopeFit least_squares(std::span<const double> xs, std::span<const double> ys);

/// P(|Z| <= lambda) for a standard normal Z.
double normal_abs_cdf(double lambda);

/// Empirical survival P(T >= t) for t = 0..max(T).
std::vector<Proportion> survival(std::span<const double> values);

}  // namespace kaclab
