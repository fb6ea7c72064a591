#include "kaclab/root_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "certified_model.hpp"

namespace kaclab {

Interval Interval::closed(const mpq_class& a, const mpq_class& b)
{
    return {a, b, true, true, false, false};
}

Interval Interval::open(const mpq_class& a, const mpq_class& b)
{
    return {a, b, false, false, false, false};
}

Interval Interval::left_open(const mpq_class& a, const mpq_class& b)
{
    return {a, b, false, true, false, false};
}

Interval Interval::right_open(const mpq_class& a, const mpq_class& b)
{
    return {a, b, true, false, false, false};
}

Interval Interval::at_least(const mpq_class& a, bool closed)
{
    return {a, 0, closed, false, false, true};
}

Interval Interval::at_most(const mpq_class& b, bool closed)
{
    return {0, b, false, closed, true, false};
}

Interval Interval::real_line()
{
    return {0, 0, false, false, true, true};
}

bool Interval::contains(const mpq_class& x) const
{
    const bool above = lo_infinite || x > lo || (lo_closed && x == lo);
    const bool below = hi_infinite || x < hi || (hi_closed && x == hi);
    return above && below;
}

void Interval::validate() const
{
    if (lo_infinite || hi_infinite)
        return;
    if (lo > hi)
        throw std::invalid_argument("interval: lo > hi in " + str());
    if (lo == hi && !(lo_closed && hi_closed))
        throw std::invalid_argument("interval: degenerate interval must be closed, got " + str());
}

std::string Interval::str() const
{
    std::ostringstream os;
    os << (lo_infinite ? "(" : (lo_closed ? "[" : "("));
    if (lo_infinite)
        os << "-inf";
    else
        os << lo.get_str();
    os << ", ";
    if (hi_infinite)
        os << "inf";
    else
        os << hi.get_str();
    os << (hi_infinite ? ")" : (hi_closed ? "]" : ")"));
    return os.str();
}

std::string to_string(CountMethod m)
{
    return m == CountMethod::sturm ? "sturm" : "descartes";
}

RootCountResult count_roots(CoeffView p, const Interval& I, const CountBudget& budget)
{
    int degree = static_cast<int>(p.size()) - 1;
    while (degree > 0 && p[degree] == 0.0)
        --degree;
    if (degree <= budget.sturm_degree_threshold)
        return sturm_count(p, I);
    try {
        return descartes_count(p, I, budget);
    } catch (const UnresolvedError&) {
        auto res = sturm_count(p, I);
        res.escalations += 1;
        return res;
    }
}

RootCountResult count_roots(const PolynomialSample& p, const Interval& I, const CountBudget& budget)
{
    return count_roots(p.coeffs(), I, budget);
}

std::optional<DoubleRootWitness> double_root_witness(const PolynomialSample& p, const Interval& I, double B,
                                                     double A)
{
    if (!I.bounded())
        throw std::invalid_argument("double_root_witness: interval must be bounded");
    I.validate();
    const int n = std::max(p.degree(), 2);
    const double tau = std::pow(static_cast<double>(n), -B);
    const double pitch = std::max(std::pow(static_cast<double>(n), -A), 1e-7);
    if (!(tau > 0.0))
        throw std::invalid_argument("double_root_witness: threshold underflows");

    const std::vector<double> coeffs(p.coeffs().begin(), p.coeffs().end());
    if (p.degree() < 1)
        return std::nullopt;
    detail::Scratch scratch;
    const int K = std::min(p.degree() + 1, 16);
    const double lo0 = I.lo.get_d(), hi0 = I.hi.get_d();

    auto verified = [&](double x) -> std::optional<DoubleRootWitness> {
        if (!(x >= lo0 && x <= hi0) || !I.contains(mpq_class(x)))
            return std::nullopt;
        const auto v = eval(coeffs, x, 0);
        const auto d = eval(coeffs, x, 1);
        if (std::abs(v.value) + v.radius <= tau && std::abs(d.value) + d.radius <= tau)
            return DoubleRootWitness{x, v, d};
        return std::nullopt;
    };

    std::vector<std::pair<double, double>> stack{{lo0, hi0}};
    long boxes = 0;
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        if (++boxes > 4'000'000)
            throw UnresolvedError("double_root_witness: box budget exhausted");
        const double c = lo + (hi - lo) / 2;
        const double h = std::max(c - lo, hi - c) * (1 + 0x1.0p-50);
        const auto m = detail::taylor_model(coeffs, c, h, K, scratch);
        const int T = m.terms();
        double rest0 = m.rem, rest1 = m.rem * T;
        for (int k = 1; k < T; ++k)
            rest0 += std::abs(m.a[k]) + m.rad[k];
        for (int k = 2; k < T; ++k)
            rest1 += k * (std::abs(m.a[k]) + m.rad[k]);
        const double low_value = (std::abs(m.a[0]) - m.rad[0] - rest0) * (1 - 0x1.0p-40);
        const double low_slope = T > 1 ? (std::abs(m.a[1]) - m.rad[1] - rest1) / h * (1 - 0x1.0p-40) : 0.0;
        if (low_value > tau || low_slope > tau)
            continue;
        if (2 * h <= pitch) {
            std::vector<double> candidates{c};
            const auto v = eval(coeffs, c, 0), d1 = eval(coeffs, c, 1), d2 = eval(coeffs, c, 2);
            if (d1.value != 0.0)
                candidates.push_back(c - v.value / d1.value);
            if (d2.value != 0.0)
                candidates.push_back(c - d1.value / d2.value);
            for (double x : candidates)
                if (std::abs(x - c) <= h)
                    if (auto w = verified(x))
                        return w;
            continue;
        }
        stack.emplace_back(c, hi);
        stack.emplace_back(lo, c);
    }
    return std::nullopt;
}

int pairing_defect(const PolynomialSample& f, const PolynomialSample& g, const Interval& I,
                   const CountBudget& budget)
{
    return std::abs(count_roots(f, I, budget).count - count_roots(g, I, budget).count);
}

}  // namespace kaclab
