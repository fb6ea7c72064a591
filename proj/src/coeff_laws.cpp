#include "kaclab/coeff_laws.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "kaclab/format.hpp"

namespace kaclab {

namespace {

constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double parse_number(std::string_view text, std::string_view what)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError("law: cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    return v;
}

}  // namespace

DyadicCoefficient DyadicCoefficient::from_double(double v)
{
    if (v == 0.0)
        return {};
    if (!std::isfinite(v))
        throw std::domain_error("DyadicCoefficient: non-finite value");
    int e = 0;
    double m = std::frexp(v, &e);  // v = m * 2^e, 0.5 <= |m| < 1
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    e -= 53;
    while ((mant & 1) == 0) {
        mant /= 2;
        ++e;
    }
    return {mant, e};
}

double DyadicCoefficient::to_double() const
{
    return std::ldexp(static_cast<double>(mantissa), exponent);
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t trial_index)
    : key_(mix64(mix64(master_seed ^ 0x6a09e667f3bcc908ULL) + trial_index * golden_gamma + 0x3c6ef372fe94f82bULL))
{
}

RandomStream::result_type RandomStream::operator()()
{
    return mix64(key_ + (++counter_) * golden_gamma);
}

double RandomStream::uniform01()
{
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

RandomStream seeded_stream(std::uint64_t master_seed, std::uint64_t trial_index)
{
    return RandomStream(master_seed, trial_index);
}

double sample_standard_normal(RandomStream& stream)
{
    return stream.normal_(stream);
}

CoefficientLaw CoefficientLaw::gaussian()
{
    CoefficientLaw law;
    law.kind = LawKind::gaussian;
    law.moment_bound = 2.0 * std::sqrt(2.0 / M_PI);
    law.small_ball_pair = SmallBallPair{0.5, std::erf(0.5 / std::sqrt(2.0))};
    return law;
}

CoefficientLaw CoefficientLaw::rademacher()
{
    CoefficientLaw law;
    law.kind = LawKind::rademacher;
    law.moment_bound = 1.0;
    law.small_ball_pair = SmallBallPair{0.5, 1e-6};
    return law;
}

CoefficientLaw CoefficientLaw::uniform_sym()
{
    CoefficientLaw law;
    law.kind = LawKind::uniform_sym;
    law.moment_bound = 3.0 * std::sqrt(3.0) / 4.0;
    law.small_ball_pair = SmallBallPair{0.5, 0.5 / std::sqrt(3.0)};
    return law;
}

CoefficientLaw CoefficientLaw::three_point(double q0)
{
    CoefficientLaw law;
    law.kind = LawKind::three_point;
    law.q0 = q0;
    law.validate();
    law.atom = 1.0 / std::sqrt(1.0 - q0);
    law.moment_bound = (1.0 - q0) * law.atom * law.atom * law.atom;
    law.small_ball_pair = SmallBallPair{1.0, q0};
    return law;
}

CoefficientLaw CoefficientLaw::table(std::vector<double> support, std::vector<double> probs)
{
    CoefficientLaw law;
    law.kind = LawKind::table;
    law.support = std::move(support);
    law.probs = std::move(probs);
    law.validate();
    double m = 0.0, m2 = 0.0, m3 = 0.0;
    for (std::size_t i = 0; i < law.support.size(); ++i) {
        const double v = law.support[i];
        m += law.probs[i] * v;
        m2 += law.probs[i] * v * v;
        m3 += law.probs[i] * std::abs(v) * v * v;
    }
    law.mean = m;
    law.variance = m2 - m * m;
    law.moment_bound = m3;
    law.small_ball_pair = derive_small_ball_pair(law);
    return law;
}

std::string CoefficientLaw::spec() const
{
    switch (kind) {
    case LawKind::gaussian: return "gaussian";
    case LawKind::rademacher: return "rademacher";
    case LawKind::uniform_sym: return "uniform_sym";
    case LawKind::three_point: return "three_point:q0=" + format_double(q0);
    case LawKind::table: {
        std::string s = "table:";
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (i)
                s += ',';
            s += format_double(support[i]) + "@" + format_double(probs[i]);
        }
        return s;
    }
    }
    return {};
}

bool CoefficientLaw::finite_support() const
{
    return kind == LawKind::rademacher || kind == LawKind::three_point || kind == LawKind::table;
}

std::vector<std::pair<double, double>> CoefficientLaw::atoms() const
{
    switch (kind) {
    case LawKind::rademacher: return {{-1.0, 0.5}, {1.0, 0.5}};
    case LawKind::three_point: return {{-atom, (1.0 - q0) / 2}, {0.0, q0}, {atom, (1.0 - q0) / 2}};
    case LawKind::table: {
        std::vector<std::pair<double, double>> out;
        for (std::size_t i = 0; i < support.size(); ++i)
            out.emplace_back(support[i], probs[i]);
        return out;
    }
    default: return {};
    }
}

void CoefficientLaw::validate() const
{
    if (kind == LawKind::three_point && !(q0 > 0.0 && q0 < 1.0))
        throw ConfigError("law: three_point requires q0 in (0,1), got " + format_double(q0));
    if (kind == LawKind::table) {
        if (support.empty() || support.size() != probs.size())
            throw ConfigError("law: table needs matching non-empty value@prob pairs");
        double total = 0.0;
        for (double p : probs) {
            if (!(p > 0.0) || !std::isfinite(p))
                throw ConfigError("law: table probabilities must be positive");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw ConfigError("law: table probabilities sum to " + format_double(total) + ", expected 1");
    }
}

CoefficientLaw parse_law(std::string_view text)
{
    if (text == "gaussian")
        return CoefficientLaw::gaussian();
    if (text == "rademacher")
        return CoefficientLaw::rademacher();
    if (text == "uniform_sym")
        return CoefficientLaw::uniform_sym();
    constexpr std::string_view tp = "three_point:q0=";
    if (text.starts_with(tp))
        return CoefficientLaw::three_point(parse_number(text.substr(tp.size()), "q0"));
    constexpr std::string_view tb = "table:";
    if (text.starts_with(tb)) {
        std::vector<double> vals, probs;
        std::string_view rest = text.substr(tb.size());
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const auto at = item.find('@');
            if (at == std::string_view::npos)
                throw ConfigError("law: table entry '" + std::string(item) + "' is not value@prob");
            vals.push_back(parse_number(item.substr(0, at), "table value"));
            probs.push_back(parse_number(item.substr(at + 1), "table probability"));
            if (comma == std::string_view::npos)
                break;
            rest = rest.substr(comma + 1);
        }
        return CoefficientLaw::table(std::move(vals), std::move(probs));
    }
    throw ConfigError("law: unknown law '" + std::string(text) + "'");
}

double sample_value(const CoefficientLaw& law, RandomStream& stream)
{
    switch (law.kind) {
    case LawKind::gaussian: return sample_standard_normal(stream);
    case LawKind::rademacher: return (stream() >> 63) ? 1.0 : -1.0;
    case LawKind::uniform_sym: return std::sqrt(3.0) * (2.0 * stream.uniform01() - 1.0);
    case LawKind::three_point: {
        const double u = stream.uniform01();
        if (u < law.q0)
            return 0.0;
        return (stream() >> 63) ? law.atom : -law.atom;
    }
    case LawKind::table: {
        const double u = stream.uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < law.support.size(); ++i) {
            acc += law.probs[i];
            if (u < acc)
                return law.support[i];
        }
        return law.support.back();
    }
    }
    return 0.0;
}

DyadicCoefficient sample_coefficient(const CoefficientLaw& law, RandomStream& stream)
{
    return DyadicCoefficient::from_double(sample_value(law, stream));
}

double prob_abs_below(const CoefficientLaw& law, double c)
{
    if (c <= 0.0)
        return 0.0;
    switch (law.kind) {
    case LawKind::gaussian: return std::erf(c / std::sqrt(2.0));
    case LawKind::uniform_sym: return std::min(1.0, c / std::sqrt(3.0));
    default: {
        double p = 0.0;
        for (auto [v, w] : law.atoms())
            if (std::abs(v) < c)
                p += w;
        return p;
    }
    }
}

SmallBallPair derive_small_ball_pair(const CoefficientLaw& law)
{
    switch (law.kind) {
    case LawKind::gaussian:
    case LawKind::uniform_sym: return {0.5, prob_abs_below(law, 0.5)};
    case LawKind::rademacher: return {0.5, 1e-6};
    case LawKind::three_point: return {1.0, law.q0};
    case LawKind::table: {
        // c0 = smallest nonzero |value|; q0 = mass at zero (or a tiny floor)
        double c0 = std::numeric_limits<double>::infinity();
        for (double v : law.support)
            if (v != 0.0)
                c0 = std::min(c0, std::abs(v));
        if (!std::isfinite(c0))
            throw ConfigError("law: table law is identically zero");
        const double q0 = prob_abs_below(law, c0);
        return {c0, q0 > 0.0 ? q0 : 1e-6};
    }
    }
    return {0.5, 0.5};
}

}  // namespace kaclab
