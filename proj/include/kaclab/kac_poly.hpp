#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "kaclab/coeff_laws.hpp"

namespace kaclab {

/// Read-only coefficient view, ascending powers.  Every entry is an exact
/// dyadic rational (a finite double).
using CoeffView = std::span<const double>;

/// One realized Kac polynomial p_n(x) = xi_0 + xi_1 x + ... + xi_n x^n.
class PolynomialSample {
public:
    PolynomialSample() = default;
    explicit PolynomialSample(std::vector<double> coeffs, std::string law_id = "explicit",
                              std::uint64_t master_seed = 0, std::uint64_t trial_index = 0);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    CoeffView coeffs() const { return coeffs_; }
    /// Coefficients of the partial sum p_m, m <= degree().
    CoeffView view(int m) const { return CoeffView(coeffs_).first(static_cast<std::size_t>(m) + 1); }
    DyadicCoefficient dyadic(int j) const { return DyadicCoefficient::from_double(coeffs_[j]); }

    /// The partial sum p_m as a standalone sample with the same provenance.
    PolynomialSample prefix(int m) const;

    const std::string& law_id() const { return law_id_; }
    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t trial_index() const { return trial_index_; }

    bool is_zero() const;

    friend bool operator==(const PolynomialSample&, const PolynomialSample&) = default;

private:
    std::vector<double> coeffs_;
    std::string law_id_ = "explicit";
    std::uint64_t master_seed_ = 0;
    std::uint64_t trial_index_ = 0;
};

/// Draws xi_0..xi_n from the stream for (master_seed, trial_index).
PolynomialSample sample_polynomial(const CoefficientLaw& law, int n, std::uint64_t master_seed,
                                   std::uint64_t trial_index);

/// Certified floating value: |true - value| <= radius.
struct CertifiedValue {
    double value = 0.0;
    double radius = 0.0;

    bool sign_decided() const { return std::abs(value) > radius; }
    /// -1, 0 (undecided) or +1.
    int sign() const { return sign_decided() ? (value > 0 ? 1 : -1) : 0; }
};

/// p^(k)(x) by iterated synthetic division with an a-priori rounding bound.
CertifiedValue eval(CoeffView p, double x, int k = 0);
CertifiedValue eval(const PolynomialSample& p, double x, int k = 0);

/// Exact p^(k)(x) over the rationals.
mpq_class eval_exact(CoeffView p, const mpq_class& x, int k = 0);
mpq_class eval_exact(const PolynomialSample& p, const mpq_class& x, int k = 0);

/// Exact sign of p(x).
int sign_exact(CoeffView p, const mpq_class& x);

/// V_n(x) = sum_{j=0}^n x^{2j}.
double variance_profile(int n, double x);

struct VarianceComparison {
    double variance;
    double comparator;  // (1 - x + 1/n)^{-1}
    double ratio;       // variance / comparator
};
VarianceComparison variance_comparability(int n, double x);

/// p*_n(x) = x^n p_n(1/x): coefficients reversed, degree unchanged.
PolynomialSample reciprocal_transform(const PolynomialSample& p);

/// Bound on |p_m(x) - p_n(x)| when every |xi_j| <= cap.
double tail_difference_bound(int n, int m, double x, double cap);

/// Debug/replay format: `n law master_seed trial_index` then n+1 lines
/// `mantissa exponent`.
void write_dump(std::ostream& os, const PolynomialSample& p);
PolynomialSample read_dump(std::istream& is);

}  // namespace kaclab
