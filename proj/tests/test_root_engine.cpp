#include <doctest.h>

#include <cmath>

#include "kaclab/root_engine.hpp"

using namespace kaclab;

namespace {

PolynomialSample poly(std::vector<double> c)
{
    return PolynomialSample(std::move(c));
}

int both(const PolynomialSample& p, const Interval& I)
{
    const int s = sturm_count(p, I).count;
    const int d = descartes_count(p, I).count;
    CHECK(s == d);
    return s;
}

std::vector<double> random_integer_poly(RandomStream& s, int degree)
{
    std::vector<double> c(degree + 1);
    for (auto& x : c)
        x = static_cast<double>(static_cast<int>(s() % 19) - 9);
    if (c.back() == 0)
        c.back() = 1;
    return c;
}

}  // namespace

TEST_CASE("interval construction")
{
    CHECK(Interval::closed(0, 1).contains(1));
    CHECK_FALSE(Interval::right_open(0, 1).contains(1));
    CHECK(Interval::left_open(0, 1).contains(1));
    CHECK_FALSE(Interval::open(0, 1).contains(0));
    CHECK(Interval::real_line().contains(mpq_class(-1000)));
    CHECK(Interval::at_least(1).contains(1));
    CHECK_FALSE(Interval::at_least(1, false).contains(1));
    CHECK_THROWS_AS(Interval::closed(1, 0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(Interval::open(1, 1).validate(), std::invalid_argument);
    CHECK_NOTHROW(Interval::closed(1, 1).validate());
    CHECK(Interval::left_open(mpq_class(1, 2), 2).str() == "(1/2, 2]");
}

TEST_CASE("small exact cases")
{
    CHECK(both(poly({0, -1, 0, 1}), Interval::closed(-2, 2)) == 3);
    CHECK(both(poly({1, 0, 1}), Interval::closed(-10, 10)) == 0);
    CHECK(both(poly({1, -2, 1}), Interval::closed(0, 2)) == 1);
    CHECK(sturm_count(poly({1, -2, 1}), Interval::closed(0, 2)).repeated_factor);
    CHECK(both(poly({-1, 0, 1}), Interval::closed(0, 2)) == 1);
    CHECK(both(poly(std::vector<double>(49, 1.0)), Interval::closed(0, 1)) == 0);
    CHECK(both(poly({-2, 1}), Interval::at_least(1)) == 1);
    CHECK(both(poly({0, -1, 0, 1}), Interval::open(-1, 1)) == 1);
    CHECK(both(poly({0, -1, 0, 1}), Interval::left_open(-1, 1)) == 2);
    CHECK(both(poly({0, -1, 0, 1}), Interval::closed(1, 1)) == 1);
    CHECK(both(poly({0, -1, 0, 1}), Interval::real_line()) == 3);
    CHECK(both(poly({3}), Interval::real_line()) == 0);
    // (x - 1/3)(x - 3)(x + 5)
    CHECK(both(poly({15, -47, 5, 3}), Interval::open(mpq_class(1, 3), 3)) == 0);
    CHECK(both(poly({15, -47, 5, 3}), Interval::closed(mpq_class(1, 3), 3)) == 2);
    CHECK(both(poly({15, -47, 5, 3}), Interval::at_most(-5, false)) == 0);
    CHECK(both(poly({15, -47, 5, 3}), Interval::at_most(-5)) == 1);
    CHECK(both(poly({0, 0, 0, 1, -1}), Interval::closed(-1, 1)) == 2);
    CHECK(both(poly({0, 0, 0, 1, -1}), Interval::open(0, 1)) == 0);
}

TEST_CASE("zero polynomial is rejected")
{
    CHECK_THROWS_AS(sturm_count(poly({0, 0}), Interval::closed(0, 1)), ZeroPolynomialError);
    CHECK_THROWS_AS(descartes_count(poly({0}), Interval::closed(0, 1)), ZeroPolynomialError);
    CHECK_THROWS_AS(count_roots(poly({0, 0, 0}), Interval::closed(0, 1)), ZeroPolynomialError);
}

TEST_CASE("repeated roots and roots at split points")
{
    // (x - 1/2)^3 (x + 1)^2 (x^2 - 1/4)
    std::vector<double> c{1};
    auto mul = [&](std::vector<double> f) {
        std::vector<double> r(c.size() + f.size() - 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < f.size(); ++j)
                r[i + j] += c[i] * f[j];
        c = r;
    };
    for (int i = 0; i < 3; ++i)
        mul({-0.5, 1});
    mul({1, 1});
    mul({1, 1});
    mul({-0.25, 0, 1});
    const auto p = poly(c);
    CHECK(both(p, Interval::closed(-1, 1)) == 3);
    CHECK(both(p, Interval::open(-1, 1)) == 2);
    CHECK(both(p, Interval::closed(0, 1)) == 1);
    CHECK(both(p, Interval::real_line()) == 3);
    CHECK(descartes_count(p, Interval::closed(-1, 1)).repeated_factor);
}

TEST_CASE("descartes agrees with sturm on random integer polynomials")
{
    auto s = seeded_stream(2718, 0);
    const Interval intervals[] = {Interval::closed(-2, 2), Interval::closed(0, 1), Interval::closed(-1, 0)};
    for (int t = 0; t < 600; ++t) {
        const int degree = 1 + static_cast<int>(s() % 48);
        const auto p = poly(random_integer_poly(s, degree));
        const auto& I = intervals[t % 3];
        CAPTURE(t);
        CHECK(sturm_count(p, I).count == descartes_count(p, I).count);
    }
}

TEST_CASE("monotonicity, additivity and reciprocal symmetry")
{
    for (int t = 0; t < 60; ++t) {
        const auto p = sample_polynomial(CoefficientLaw::gaussian(), 40 + t, 31, t);
        const int whole = descartes_count(p, Interval::closed(-1, 1)).count;
        const int inner = descartes_count(p, Interval::closed(mpq_class(-1, 2), mpq_class(3, 4))).count;
        CHECK(inner <= whole);
        const int left = descartes_count(p, Interval::closed(-1, 0)).count;
        const int right = descartes_count(p, Interval::left_open(0, 1)).count;
        CHECK(left + right == whole);
        const int all = descartes_count(p, Interval::real_line()).count;
        const int parts = descartes_count(p, Interval::at_most(-1, false)).count + whole +
                          descartes_count(p, Interval::at_least(1, false)).count;
        CHECK(all == parts);
        CHECK(all == sturm_count(p, Interval::real_line()).count);
        CHECK(descartes_count(p, Interval::at_least(1)).count ==
              descartes_count(reciprocal_transform(p), Interval::left_open(0, 1)).count);
    }
}

TEST_CASE("backend choice does not change counts at high degree")
{
    const auto p = sample_polynomial(CoefficientLaw::gaussian(), 512, 4, 4);
    const auto r = count_roots(p, Interval::closed(0, 1));
    CHECK(r.method == CountMethod::descartes);
    CHECK(r.certified);
    for (int m : {16, 33, 64}) {
        const auto q = p.prefix(m);
        CHECK(count_roots(q, Interval::closed(0, 1)).method == CountMethod::sturm);
        CHECK(sturm_count(q, Interval::closed(0, 1)).count == descartes_count(q, Interval::closed(0, 1)).count);
    }
    const auto r2 = descartes_count(p, Interval::closed(0, 1));
    CHECK(r2.count == r.count);
}

TEST_CASE("double root witness")
{
    const auto sq = poly({0.25, -1, 1});
    const auto w = double_root_witness(sq, Interval::closed(0, 1), 20);
    REQUIRE(w.has_value());
    CHECK(std::abs(w->x - 0.5) < 1e-3);
    CHECK_FALSE(double_root_witness(poly({-0.5, 1}), Interval::closed(0, 1), std::log(1e6) / std::log(2.0)).has_value());
}

TEST_CASE("pairing defect")
{
    const auto f = poly({-1, 0, 1});
    CHECK(pairing_defect(f, f, Interval::closed(0, 2)) == 0);
    const auto g = poly({-1 + 1e-9, 0, 1});
    CHECK(pairing_defect(f, g, Interval::closed(0, 2)) <= 1);
    const auto h = poly({1, 0, 1});
    CHECK(pairing_defect(f, h, Interval::closed(-2, 2)) == 2);
}
