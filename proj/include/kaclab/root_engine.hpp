#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

#include "kaclab/kac_poly.hpp"

namespace kaclab {

/// Rational-endpoint interval; either end may be infinite (its value is then ignored).
struct Interval {
    mpq_class lo = 0, hi = 0;
    bool lo_closed = true, hi_closed = true;
    bool lo_infinite = false, hi_infinite = false;

    static Interval closed(const mpq_class& a, const mpq_class& b);
    static Interval open(const mpq_class& a, const mpq_class& b);
    static Interval left_open(const mpq_class& a, const mpq_class& b);   // (a, b]
    static Interval right_open(const mpq_class& a, const mpq_class& b);  // [a, b)
    static Interval at_least(const mpq_class& a, bool closed = true);
    static Interval at_most(const mpq_class& b, bool closed = true);
    static Interval real_line();

    bool bounded() const { return !lo_infinite && !hi_infinite; }
    bool contains(const mpq_class& x) const;
    /// Throws std::invalid_argument unless lo <= hi and point intervals are closed.
    void validate() const;
    std::string str() const;
};

enum class CountMethod { sturm, descartes };
std::string to_string(CountMethod m);

struct RootCountResult {
    int count = 0;
    CountMethod method = CountMethod::sturm;
    bool certified = true;
    int escalations = 0;
    /// Distinct roots are counted; set when the squarefree part has lower degree.
    bool repeated_factor = false;
    static constexpr const char* multiplicity_policy = "distinct";
};

class UnresolvedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroPolynomialError : public std::domain_error {
public:
    ZeroPolynomialError() : std::domain_error("root count undefined for the zero polynomial") {}
};

struct CountBudget {
    long max_boxes = 1L << 18;
    int max_depth = 96;
    /// Largest degree handed to exact rational subdivision.
    int exact_degree_cap = 1024;
    /// count_roots uses Sturm at or below this degree.
    int sturm_degree_threshold = 64;
    std::ostream* trace = nullptr;
};

RootCountResult sturm_count(CoeffView p, const Interval& I);
RootCountResult sturm_count(const PolynomialSample& p, const Interval& I);

RootCountResult descartes_count(CoeffView p, const Interval& I, const CountBudget& budget = {});
RootCountResult descartes_count(const PolynomialSample& p, const Interval& I, const CountBudget& budget = {});

/// Sturm for small degree, certified subdivision otherwise, Sturm again if that is unresolved.
RootCountResult count_roots(CoeffView p, const Interval& I, const CountBudget& budget = {});
RootCountResult count_roots(const PolynomialSample& p, const Interval& I, const CountBudget& budget = {});

struct DoubleRootWitness {
    double x;
    CertifiedValue value;
    CertifiedValue slope;
};

/// Searches bounded I for x with |p(x)| <= n^-B and |p'(x)| <= n^-B.
/// Boxes are refined down to pitch max(n^-A, 1e-7).
std::optional<DoubleRootWitness> double_root_witness(const PolynomialSample& p, const Interval& I, double B,
                                                     double A = 2.0);

int pairing_defect(const PolynomialSample& f, const PolynomialSample& g, const Interval& I,
                   const CountBudget& budget = {});

}  // namespace kaclab
