#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kaclab/coeff_laws.hpp"
#include "kaclab/kac_poly.hpp"
#include "kaclab/root_engine.hpp"

namespace kaclab {

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved) : std::runtime_error(what), achieved(achieved) {}
    double achieved;
};

/// Expected real-root density of p_n at x for Gaussian coefficients.
double kac_density(int n, double x);

/// E N_n(I) for Gaussian coefficients, absolute tolerance `tol`.
double expected_count(int n, const Interval& I, double tol = 1e-6);
double expected_count(int n, double a, double b, double tol = 1e-6);

struct KacDensityTable {
    int n = 0;
    std::vector<double> xs;
    std::vector<double> rho;
    std::map<std::string, double> integrals;
};
/// Density on `xs` plus E N_n over [0,1], [-1,1], [1,inf) and the real line.
KacDensityTable build_density_table(int n, std::vector<double> xs);

struct XiNorm {
    double value;
    double error;
};
/// E || w (eta1 - eta2) ||^2 over R/Z for iid copies eta1, eta2 of the law.
XiNorm xi_norm_sq(double w, const CoefficientLaw& law);

double charfn_bound(double w, double V, double C1);
/// |w| <= (1/C2) (1 - x + 1/n)^{-1/2} x^{-c0 n}
bool charfn_admissible(double w, double x, int n, double C2, double c0 = 0.5);
double charfn_admissible_limit(double x, int n, double C2, double c0 = 0.5);

/// max(x^{c0 n} V^{-1/2}, e^{-C1 V})
double small_ball_floor(double x, int n, double V, double c0, double C1);
/// V^{-1/2} n^{-c}
double small_ball_window_floor(double V, int n, double c);

struct SmallBallBound {
    double value;   // K * lambda
    double floor;
    bool asserted;  // lambda >= floor
};
SmallBallBound small_ball_bound(double lambda, double floor, double K);

/// Index of the first coefficient with |xi_k| >= c0, or -1.
int first_large_index(CoeffView p, double c0);
/// k + log(M_k / k!)/log(R/r) + log(1/c0)/log(R/r); degree n when no |xi_k| >= c0.
double jensen_root_bound(CoeffView p, double r, double R, double c0);
double jensen_root_bound(const PolynomialSample& p, double r, double R, double c0);

/// Log of sum_{j=0}^{n-k} ((j+k)!/j!)^2 (2j)!/(2j+k)! y^{2j+k}; -inf when y = 0.
double log_iterated_moment(int n, int k, double y);
double iterated_moment_exact(int n, int k, double y);
/// The k-fold iterated integral from 0 to y of E|p_n^(k)|^2, by quadrature of the
/// Cauchy repeated-integration kernel.
double iterated_moment_quadrature(int n, int k, double y);
/// Dual iterated integral (lower limits x, upper limit 1) by the same kernel.
double iterated_moment_dual_quadrature(int n, int k, double x);

struct IteratedCurves {
    double branch1;  // y^k (n/2)^{k+1}
    double branch2;  // k! sqrt(k) (2(1-y))^{-(k+1)}
    double dual;     // n^{2k+1} (1-x)^k / k!
};
IteratedCurves iterated_bound_curves(int n, int k, double x, double y);
struct LogIteratedCurves {
    double branch1, branch2, dual;
};
LogIteratedCurves log_iterated_bound_curves(int n, int k, double x, double y);

std::vector<double> alpha_grid(int n, double C, double Cp, int L);

double pseudo_hyperbolic(double x, double y);

double near_zero_tail_bound(double t, double c2);
/// log(1/q0) for laws with an atom at 0, +inf otherwise.
double near_zero_reference_slope(const CoefficientLaw& law);

double maslova_variance_slope();

/// A named analytic curve over a fixed list of inputs.
struct BoundCurve {
    std::string name;
    std::vector<std::string> inputs;
    std::function<double(std::span<const double>)> evaluate;
};

BoundCurve charfn_curve(double C1);
BoundCurve small_ball_curve(double K);
BoundCurve iterated_branch1_curve();
BoundCurve iterated_branch2_curve();
BoundCurve iterated_dual_curve();
BoundCurve near_zero_tail_curve();

/// CSV with one column per input followed by `value`.
void write_curve_csv(std::ostream& os, const BoundCurve& curve, const std::vector<std::vector<double>>& rows);

}  // namespace kaclab
