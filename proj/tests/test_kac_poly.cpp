#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kaclab/kac_poly.hpp"

using namespace kaclab;

TEST_CASE("samples and prefixes")
{
    const auto p = sample_polynomial(CoefficientLaw::gaussian(), 30, 11, 4);
    CHECK(p.degree() == 30);
    CHECK(p.coeffs().size() == 31);
    CHECK(p == sample_polynomial(CoefficientLaw::gaussian(), 30, 11, 4));
    const auto q = sample_polynomial(CoefficientLaw::gaussian(), 50, 11, 4);
    // shorter draws are prefixes of longer ones
    for (int j = 0; j <= 30; ++j)
        CHECK(q.coeffs()[j] == p.coeffs()[j]);
    for (int m : {0, 5, 17, 30}) {
        const auto pm = q.prefix(m);
        CHECK(pm.degree() == m);
        for (double x : {-0.9, 0.3, 0.77})
            CHECK(eval_exact(pm, mpq_class(x)) == eval_exact(q.view(m), mpq_class(x)));
    }
    CHECK_THROWS(q.prefix(51));
    CHECK_THROWS(PolynomialSample(std::vector<double>{}));
}

TEST_CASE("certified evaluation")
{
    const PolynomialSample ones(std::vector<double>(11, 1.0));
    CHECK(eval_exact(ones, 1) == 11);
    CHECK(eval(ones, 1.0).value == 11.0);

    const auto p = sample_polynomial(CoefficientLaw::gaussian(), 30, 5, 0);
    const auto top = eval(p, 0.4, 30);
    double fact = 1;
    for (int i = 2; i <= 30; ++i)
        fact *= i;
    CHECK(top.value == doctest::Approx(fact * p.coeffs()[30]).epsilon(1e-12));
    CHECK(eval(p, 0.4, 31).value == 0.0);

    const auto v = eval(p, 0.73);
    const double truth = eval_exact(p, mpq_class(0.73)).get_d();
    CHECK(std::abs(v.value - truth) <= v.radius);
    for (int k = 1; k <= 5; ++k) {
        const auto d = eval(p, 0.73, k);
        CHECK(std::abs(d.value - eval_exact(p, mpq_class(0.73), k).get_d()) <= d.radius);
    }
}

TEST_CASE("certified signs agree with exact signs")
{
    auto s = seeded_stream(77, 0);
    int decided = 0;
    for (int t = 0; t < 10000; ++t) {
        const int n = 1 + static_cast<int>(s() % 60);
        const auto p = sample_polynomial(t % 2 ? CoefficientLaw::gaussian() : CoefficientLaw::rademacher(), n, 78, t);
        const double x = 2.2 * s.uniform01() - 1.1;
        const auto v = eval(p, x);
        if (v.sign_decided()) {
            ++decided;
            CHECK(v.sign() == sign_exact(p.coeffs(), mpq_class(x)));
        }
    }
    CHECK(decided > 9000);
}

TEST_CASE("variance profile")
{
    CHECK(variance_profile(7, 1.0) == 8.0);
    CHECK(variance_profile(7, -1.0) == 8.0);
    CHECK(variance_profile(12, 0.0) == 1.0);
    CHECK(variance_profile(4, 0.5) == doctest::Approx(341.0 / 256.0).epsilon(1e-15));
    for (int n : {1, 10, 1000, 1 << 17})
        for (double x : {-1.0, -0.99999999, -0.7, 0.1, 0.5, 0.9, 0.999, 1 - 1e-9, 1.0}) {
            long double direct = 0;
            for (int j = n; j >= 0; --j)
                direct += std::pow(static_cast<long double>(x), 2 * j);
            CAPTURE(n);
            CAPTURE(x);
            CHECK(std::abs(variance_profile(n, x) - static_cast<double>(direct)) <= 1e-12 * static_cast<double>(direct));
        }
}

TEST_CASE("variance comparability")
{
    CHECK(variance_comparability(5, 0.0).ratio == doctest::Approx(6.0 / 5.0));
    CHECK(variance_comparability(9, 1.0).ratio == doctest::Approx(10.0 / 9.0));
    for (int n = 16; n <= 4096; n *= 2)
        for (int i = 0; i <= 200; ++i) {
            const double r = variance_comparability(n, i / 200.0).ratio;
            CHECK(r >= 0.25);
            CHECK(r <= 4.0);
        }
    CHECK_THROWS(variance_comparability(0, 0.5));
    CHECK_THROWS(variance_comparability(4, 1.5));
}

TEST_CASE("reciprocal transform")
{
    const PolynomialSample p(std::vector<double>{-2, 1});
    CHECK(reciprocal_transform(p).coeffs()[0] == 1);
    CHECK(reciprocal_transform(p).coeffs()[1] == -2);
    const PolynomialSample pal(std::vector<double>{1, 3, 3, 1});
    CHECK(reciprocal_transform(pal) == pal);
    const auto g = sample_polynomial(CoefficientLaw::gaussian(), 20, 1, 1);
    CHECK(reciprocal_transform(reciprocal_transform(g)) == g);
}

TEST_CASE("tail difference bound")
{
    CHECK(tail_difference_bound(3, 9, 0.0, 2.0) == 0.0);
    CHECK(tail_difference_bound(4, 9, 1.0, 1.0) == 5.0);
    CHECK(tail_difference_bound(2, 4, 0.5, 1.0) == doctest::Approx(0.125 + 0.0625));
    CHECK_THROWS(tail_difference_bound(5, 4, 0.5, 1.0));

    const auto law = CoefficientLaw::uniform_sym();
    const double cap = std::sqrt(3.0);
    auto s = seeded_stream(8, 8);
    for (int t = 0; t < 1000; ++t) {
        const int m = 20 + static_cast<int>(s() % 40);
        const int n = static_cast<int>(s() % (m + 1));
        const double x = 2 * s.uniform01() - 1;
        const auto p = sample_polynomial(law, m, 9, t);
        const double diff = std::abs(eval(p.view(m), x).value - eval(p.view(n), x).value);
        CHECK(diff <= tail_difference_bound(n, m, x, cap) * (1 + 1e-12) + 1e-15);
    }
}

TEST_CASE("dump round trip")
{
    const auto p = sample_polynomial(CoefficientLaw::three_point(0.5), 12, 123, 9);
    std::stringstream ss;
    write_dump(ss, p);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "12 three_point:q0=0.5 123 9");
    ss.seekg(0);
    CHECK(read_dump(ss) == p);
    std::stringstream bad("3 gaussian 1 1\n1 0\n");
    CHECK_THROWS(read_dump(bad));
}
