#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kaclab {

/// Raised for malformed law strings, configuration files and flag values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A coefficient value stored as mantissa * 2^exponent.
///
/// The representation is canonical: the mantissa is odd, or the pair is
/// (0, 0) for zero.  Every finite double converts to exactly one
/// DyadicCoefficient and back without loss.
struct DyadicCoefficient {
    std::int64_t mantissa = 0;
    int exponent = 0;

    static DyadicCoefficient from_double(double v);
    double to_double() const;

    bool is_zero() const { return mantissa == 0; }
    friend bool operator==(const DyadicCoefficient&, const DyadicCoefficient&) = default;
};

/// Counter-based random stream.
///
/// Output i is a bijective mix of (key + i * golden_gamma), so the stream for
/// a given (master_seed, trial_index) depends on nothing but those two
/// numbers.  Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t master_seed, std::uint64_t trial_index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();

    std::uint64_t key() const { return key_; }
    std::uint64_t position() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::normal_distribution<double> normal_;

    friend double sample_standard_normal(RandomStream&);
};

RandomStream seeded_stream(std::uint64_t master_seed, std::uint64_t trial_index);

/// Standard normal variate.
double sample_standard_normal(RandomStream& stream);

enum class LawKind { gaussian, rademacher, uniform_sym, three_point, table };

struct SmallBallPair {
    double c0;
    double q0;
};

/// An iid coefficient distribution with its declared moment metadata.
struct CoefficientLaw {
    LawKind kind = LawKind::gaussian;
    // three_point: q0 (mass at 0) and atom magnitude a
    double q0 = 0.0;
    double atom = 0.0;
    // table: finite support with explicit probabilities
    std::vector<double> support;
    std::vector<double> probs;

    double mean = 0.0;
    double variance = 1.0;
    double moment_bound = 0.0;  // declared bound on E|xi|^(2+epsilon)
    double epsilon = 1.0;
    std::optional<SmallBallPair> small_ball_pair;

    static CoefficientLaw gaussian();
    static CoefficientLaw rademacher();
    static CoefficientLaw uniform_sym();
    static CoefficientLaw three_point(double q0);
    static CoefficientLaw table(std::vector<double> support, std::vector<double> probs);

    /// Canonical law string, e.g. "three_point:q0=0.5".
    std::string spec() const;

    bool finite_support() const;
    /// Support points and probabilities for finite-support laws.
    std::vector<std::pair<double, double>> atoms() const;

    /// Throws ConfigError when parameters are out of range.
    void validate() const;
};

/// Parses `gaussian`, `rademacher`, `uniform_sym`, `three_point:q0=<float>`
/// and `table:v@p,v@p,...`.
CoefficientLaw parse_law(std::string_view text);

double sample_value(const CoefficientLaw& law, RandomStream& stream);
DyadicCoefficient sample_coefficient(const CoefficientLaw& law, RandomStream& stream);

/// A pair (c0, q0) with P(|xi| < c0) <= q0, exact whenever the law allows.
SmallBallPair derive_small_ball_pair(const CoefficientLaw& law);

/// P(|xi| < c) for the law, exact (closed form or enumeration).
double prob_abs_below(const CoefficientLaw& law, double c);

}  // namespace kaclab
