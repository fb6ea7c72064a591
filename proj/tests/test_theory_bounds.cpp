#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "kaclab/format.hpp"
#include "kaclab/theory_bounds.hpp"

using namespace kaclab;

namespace {

constexpr double pi = std::numbers::pi;

// (1/pi) sqrt(A C - B^2) / A summed term by term in long double
double naive_density(int n, double x)
{
    long double A = 0, B = 0, C = 0;
    const long double X = x;
    for (int j = 0; j <= n; ++j) {
        A += std::pow(X, 2 * j);
        if (j >= 1) {
            B += j * std::pow(X, 2 * j - 1);
            C += static_cast<long double>(j) * j * std::pow(X, 2 * j - 2);
        }
    }
    return static_cast<double>(std::sqrt(A * C - B * B) / A / std::numbers::pi_v<long double>);
}

double simpson(int n, double a, double b, int steps)
{
    const double h = (b - a) / steps;
    double s = naive_density(n, a) + naive_density(n, b);
    for (int i = 1; i < steps; ++i)
        s += (i % 2 ? 4 : 2) * naive_density(n, a + i * h);
    return s * h / 3;
}

}  // namespace

TEST_CASE("kac density")
{
    for (int n : {1, 2, 7, 100, 4096})
        CHECK(kac_density(n, 0.0) == doctest::Approx(1 / pi).epsilon(1e-15));
    CHECK(kac_density(0, 0.3) == 0.0);
    CHECK_THROWS_AS(kac_density(-1, 0.0), std::invalid_argument);
    // n = 1: Cauchy density
    for (double x : {-3.0, -0.5, 0.0, 0.25, 2.0})
        CHECK(kac_density(1, x) == doctest::Approx(1 / (pi * (1 + x * x))).epsilon(1e-14));
    for (int n : {3, 16, 64})
        for (double x : {0.1, 0.5, 0.9, 0.99}) {
            CHECK(kac_density(n, x) == doctest::Approx(naive_density(n, x)).epsilon(1e-10));
            CHECK(kac_density(n, -x) == kac_density(n, x));
            CHECK(kac_density(n, 1 / x) == doctest::Approx(kac_density(n, x) * x * x).epsilon(1e-12));
        }
    for (int n : {1, 10, 1000, 1 << 17})
        for (double x : {0.0, 0.999999, 1.0, 5.0})
            CHECK(std::isfinite(kac_density(n, x)));
}

TEST_CASE("expected count")
{
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(expected_count(1, Interval::real_line()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(expected_count(1, Interval::real_line()) - 1.0) <= 1e-6);
    CHECK(expected_count(1, -1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(expected_count(1, 0.0, 1.0) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(expected_count(0, -inf, inf) == 0.0);
    CHECK_THROWS_AS(expected_count(3, 1.0, 0.0), std::invalid_argument);

    for (int n : {4, 16}) {
        const double oracle = simpson(n, 0.0, 1.0, 20000);
        CHECK(expected_count(n, 0.0, 1.0) == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(expected_count(n, 0.2, 0.7) == doctest::Approx(simpson(n, 0.2, 0.7, 20000)).epsilon(1e-9));
    }
    for (int n : {16, 256, 4096}) {
        const double unit = expected_count(n, 0.0, 1.0);
        CHECK(expected_count(n, -1.0, 1.0) == doctest::Approx(2 * unit).epsilon(1e-8));
        CHECK(std::abs(expected_count(n, 1.0, inf) - unit) <= 1e-6);
        CHECK(expected_count(n, -inf, inf) == doctest::Approx(4 * unit).epsilon(1e-8));
        // additivity across 1
        CHECK(expected_count(n, 0.5, 2.0) ==
              doctest::Approx(expected_count(n, 0.5, 1.0) + expected_count(n, 1.0, 2.0)).epsilon(1e-9));
        CHECK(expected_count(n, Interval::closed(mpq_class(1, 2), 2)) ==
              doctest::Approx(expected_count(n, 0.5, 2.0)).epsilon(1e-12));
    }
    // increments over a factor 4 in degree approach log(4)/(2 pi)
    const double slope = (expected_count(4096, 0.0, 1.0) - expected_count(1024, 0.0, 1.0)) / std::log(4.0);
    CHECK(std::abs(slope / (1 / (2 * pi)) - 1) < 0.1);
    const double big = expected_count(1 << 17, -inf, inf);
    CHECK(big == doctest::Approx(2 / pi * std::log(1 << 17)).epsilon(0.1));
}

TEST_CASE("density table")
{
    const auto t = build_density_table(64, {-2.0, -0.5, 0.0, 0.5, 2.0});
    REQUIRE(t.rho.size() == 5);
    CHECK(t.rho[0] == t.rho[4]);
    CHECK(t.rho[1] == t.rho[3]);
    for (double r : t.rho)
        CHECK(r >= 0.0);
    CHECK(std::abs(t.integrals.at("[1,inf)") - t.integrals.at("[0,1]")) <= 1e-6);
    CHECK(t.integrals.at("R") == doctest::Approx(2 * t.integrals.at("[-1,1]")).epsilon(1e-8));
}

TEST_CASE("xi norm")
{
    const auto rad = CoefficientLaw::rademacher();
    CHECK(xi_norm_sq(0.0, rad).value == 0.0);
    CHECK(xi_norm_sq(0.5, rad).value == 0.0);
    CHECK(xi_norm_sq(0.25, rad).value == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(xi_norm_sq(-0.25, rad).value == doctest::Approx(0.125).epsilon(1e-15));
    // three-point q0 = 1/2, atom sqrt 2: differences 0 (3/8), +-a (1/2), +-2a (1/8)
    const auto tp = CoefficientLaw::three_point(0.5);
    const double a = std::sqrt(2.0), w = 0.3;
    auto d2 = [](double t) { return std::pow(t - std::nearbyint(t), 2); };
    CHECK(xi_norm_sq(w, tp).value == doctest::Approx(0.5 * d2(w * a) + 0.125 * d2(2 * w * a)).epsilon(1e-14));

    // continuous laws against direct quadrature of the difference density
    auto direct = [&](const CoefficientLaw& law, double w) {
        const int steps = 400000;
        const double L = law.kind == LawKind::gaussian ? 14.0 : 2 * std::sqrt(3.0);
        const double h = L / steps;
        double s = 0;
        for (int i = 0; i < steps; ++i) {
            const double d = (i + 0.5) * h;
            const double dens = law.kind == LawKind::gaussian ? std::exp(-d * d / 4) / std::sqrt(4 * pi)
                                                              : (2 * std::sqrt(3.0) - d) / 12;
            s += 2 * dens * d2(w * d) * h;
        }
        return s;
    };
    for (const auto& law : {CoefficientLaw::gaussian(), CoefficientLaw::uniform_sym()})
        for (double w : {0.01, 0.1, 0.37, 1.3}) {
            const auto r = xi_norm_sq(w, law);
            CHECK(r.error < 1e-12);
            CHECK(r.value == doctest::Approx(direct(law, w)).epsilon(1e-6));
        }
    // small w: E (w D)^2 = 2 w^2
    CHECK(xi_norm_sq(1e-3, CoefficientLaw::gaussian()).value == doctest::Approx(2e-6).epsilon(1e-6));
    // large w tends to the uniform value 1/12
    CHECK(xi_norm_sq(50.0, CoefficientLaw::gaussian()).value == doctest::Approx(1.0 / 12).epsilon(1e-12));
}

TEST_CASE("characteristic function bound")
{
    CHECK(charfn_bound(0.0, 3.0, 2.0) == 1.0);
    CHECK(charfn_bound(10.0, 3.0, 2.0) == doctest::Approx(std::exp(-6.0)));
    CHECK(charfn_bound(10.0, 3.0, 2.0) == charfn_bound(20.0, 3.0, 2.0));
    CHECK_THROWS(charfn_bound(1.0, 0.0, 2.0));
    // Gaussian truth lies below the bound for C1 <= 2 pi^2 and w^2 <= V
    for (double w : {0.05, 0.2, 0.7, 1.5})
        CHECK(std::exp(-2 * pi * pi * w * w) <= charfn_bound(w, 4.0, 2 * pi * pi) * (1 + 1e-15));
    const double lim = charfn_admissible_limit(0.9, 256, 1.0);
    CHECK(lim == doctest::Approx(std::pow(0.1 + 1.0 / 256, -0.5) * std::pow(0.9, -128.0)).epsilon(1e-12));
    CHECK(charfn_admissible(0.5, 0.9, 256, 1.0));
    CHECK_FALSE(charfn_admissible(2 * lim, 0.9, 256, 1.0));
}

TEST_CASE("small ball bound")
{
    const double lambda = 0.1;
    CHECK(std::erf(lambda / std::sqrt(2.0)) == doctest::Approx(0.0797).epsilon(1e-3));
    const auto b = small_ball_bound(1.0, 0.2, 1.0);
    CHECK(b.value == 1.0);
    CHECK(b.asserted);
    CHECK_FALSE(small_ball_bound(0.1, 0.2, 1.0).asserted);

    const int n = 256;
    const double x = 1 - std::log(n) / n;
    const double V = variance_profile(n, x);
    CHECK(small_ball_window_floor(V, n, 0.1) == doctest::Approx(std::pow(V, -0.5) * std::pow(256.0, -0.1)));
    CHECK(small_ball_floor(x, n, V, 0.5, 2.0) == doctest::Approx(std::max(std::pow(x, 128.0) / std::sqrt(V), std::exp(-2 * V))));
    CHECK(small_ball_floor(0.0, n, 1.0, 0.5, 2.0) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("jensen root bound")
{
    std::vector<double> p{1.0, 0.0, 0.0, 0.0};
    CHECK(first_large_index(p, 0.5) == 0);
    const double lr = std::log(2.0);
    CHECK(jensen_root_bound(p, 0.25, 0.5, 0.5) == doctest::Approx(0 + 0 + std::log(2.0) / lr));

    // all ones, k = 0, R = 1/2: M_0 = sum 2^-m
    const int n = 20;
    std::vector<double> ones(n + 1, 1.0);
    double M0 = 0;
    for (int m = 0; m <= n; ++m)
        M0 += std::pow(0.5, m);
    const double r = 0.2, R = 0.5;
    CHECK(jensen_root_bound(ones, r, R, 0.5) ==
          doctest::Approx(std::log(M0) / std::log(R / r) + std::log(2.0) / std::log(R / r)).epsilon(1e-13));

    std::vector<double> small{0.1, -0.2, 1.0, 3.0};
    CHECK(first_large_index(small, 0.5) == 2);
    // M_2 = 1 * 2!/0! + 3 R 3!/1!
    const double M2 = 2 + 3 * R * 6;
    CHECK(jensen_root_bound(small, r, R, 0.5) ==
          doctest::Approx(2 + std::log(M2 / 2) / std::log(R / r) + std::log(2.0) / std::log(R / r)).epsilon(1e-13));
    CHECK(jensen_root_bound(std::vector<double>{0.1, 0.1}, r, R, 0.5) == 1.0);
    CHECK_THROWS(jensen_root_bound(ones, 0.5, 0.25, 0.5));

    // dominance on random Rademacher samples
    const auto law = CoefficientLaw::rademacher();
    const auto I = Interval::open(mpq_class(-1, 4), mpq_class(1, 4));
    for (int t = 0; t < 50; ++t) {
        const auto s = sample_polynomial(law, 64, 99, t);
        int worst = 0;
        for (int j = 1; j <= 64; ++j)
            worst = std::max(worst, sturm_count(s.view(j), I).count);
        CHECK(worst <= jensen_root_bound(s, 0.25, 0.625, 0.5));
    }
}

TEST_CASE("iterated moments")
{
    for (int n : {1, 5, 12})
        for (double y : {0.3, 1.0}) {
            double fact = 1;
            for (int i = 2; i <= n; ++i)
                fact *= i;
            CHECK(iterated_moment_exact(n, n, y) == doctest::Approx(fact * std::pow(y, n)).epsilon(1e-12));
        }
    CHECK(iterated_moment_exact(1, 1, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(log_iterated_moment(5, 2, 0.0) == -std::numeric_limits<double>::infinity());
    CHECK_THROWS(iterated_moment_exact(3, 4, 0.5));
    CHECK_THROWS(iterated_moment_exact(3, 0, 0.5));
    CHECK_THROWS(iterated_moment_exact(3, 2, 1.5));

    for (int k = 1; k <= 12; ++k)
        for (double y : {0.1, 0.5, 0.9, 1.0})
            CHECK(iterated_moment_quadrature(12, k, y) == doctest::Approx(iterated_moment_exact(12, k, y)).epsilon(1e-6));
    // k = 1: integral of sum j^2 t^(2j-2) from 0 to y
    {
        const int n = 4;
        const double y = 0.7;
        double s = 0;
        for (int j = 1; j <= n; ++j)
            s += double(j) * j * std::pow(y, 2 * j - 1) / (2 * j - 1);
        CHECK(iterated_moment_exact(n, 1, y) == doctest::Approx(s).epsilon(1e-14));
    }
    CHECK(iterated_moment_dual_quadrature(5, 2, 1.0) == 0.0);
    CHECK(iterated_moment_dual_quadrature(5, 2, 0.5) > 0.0);
    // huge arguments stay finite in the log domain
    CHECK(std::isfinite(log_iterated_moment(1 << 17, 40, 0.9999)));
}

TEST_CASE("iterated bound curves")
{
    const auto c = iterated_bound_curves(1, 1, 0.0, 1.0);
    CHECK(c.branch1 == doctest::Approx(0.25));
    CHECK(c.branch2 == std::numeric_limits<double>::infinity());
    CHECK(iterated_bound_curves(5, 2, 1.0, 1.0).dual == 0.0);
    const auto d = iterated_bound_curves(10, 3, 0.2, 0.5);
    CHECK(d.branch1 == doctest::Approx(std::pow(0.5, 3) * std::pow(5.0, 4)));
    CHECK(d.branch2 == doctest::Approx(6 * std::sqrt(3.0) * std::pow(1.0, -4)));
    CHECK(d.dual == doctest::Approx(std::pow(10.0, 7) * std::pow(0.8, 3) / 6));
    CHECK_THROWS(iterated_bound_curves(10, 3, 0.6, 0.5));

    // one constant across the sweep grid
    double worst = 0;
    for (int n = 1; n <= 512; n = n < 16 ? n + 1 : n * 2)
        for (int k = 1; k <= std::min(n, 32); ++k)
            for (double y : {0.5, 0.9, n >= 3 ? 1 - std::log(n) / n : 0.5}) {
                const auto lc = log_iterated_bound_curves(n, k, 0.0, y);
                worst = std::max(worst, log_iterated_moment(n, k, y) - std::min(lc.branch1, lc.branch2));
            }
    CHECK(std::exp(worst) <= 16.0);
}

TEST_CASE("alpha grid and pseudo-hyperbolic distance")
{
    const int n = 1024;
    const auto a = alpha_grid(n, 8, 16, 8);
    REQUIRE(a.size() == 9);
    CHECK(a[0] == doctest::Approx(1 - 8 * std::log(n) / n).epsilon(1e-15));
    CHECK(a[8] == doctest::Approx(1 - std::log(n) / (16.0 * n)).epsilon(1e-15));
    for (int j = 0; j < 8; ++j)
        CHECK(a[j] < a[j + 1]);
    CHECK_THROWS(alpha_grid(n, 8, 1.0 / 16, 8));
    CHECK_THROWS(alpha_grid(2, 8, 16, 8));
    CHECK_THROWS(alpha_grid(n, 8, 16, 0));

    // gaps shrink like 1/L with one constant for all n
    for (int L : {4, 8, 16}) {
        double worst = 0;
        for (int n2 = 1 << 8; n2 <= 1 << 14; n2 *= 2) {
            const auto g = alpha_grid(n2, 8, 16, L);
            for (int j = 0; j < L; ++j)
                worst = std::max(worst, pseudo_hyperbolic(g[j], g[j + 1]));
        }
        CHECK(worst * L <= 3.0);
    }

    CHECK(pseudo_hyperbolic(0.4, 0.4) == 0.0);
    CHECK(pseudo_hyperbolic(0.0, 0.5) == 0.5);
    CHECK(pseudo_hyperbolic(0.9, 0.95) == doctest::Approx(0.05 / 0.145).epsilon(1e-12));
    CHECK(pseudo_hyperbolic(0.2, 0.7) == pseudo_hyperbolic(0.7, 0.2));
    CHECK_THROWS_AS(pseudo_hyperbolic(2.0, 0.5), std::domain_error);
}

TEST_CASE("near-zero tail and variance constants")
{
    CHECK(near_zero_tail_bound(0.0, 0.7) == 1.0);
    CHECK(near_zero_tail_bound(2.0, 0.5) == doctest::Approx(std::exp(-1.0)));
    CHECK_THROWS(near_zero_tail_bound(-1.0, 0.5));
    CHECK(near_zero_reference_slope(CoefficientLaw::three_point(0.5)) == doctest::Approx(std::log(2.0)));
    CHECK(std::isinf(near_zero_reference_slope(CoefficientLaw::rademacher())));
    CHECK(std::isinf(near_zero_reference_slope(CoefficientLaw::gaussian())));
    CHECK(maslova_variance_slope() == doctest::Approx(0.46267).epsilon(1e-5));
}

TEST_CASE("bound curves export")
{
    const auto c = charfn_curve(2.0);
    std::ostringstream os;
    write_curve_csv(os, c, {{0.0, 1.0}, {1.0, 0.5}});
    CHECK(os.str() == "w,V,value\n0,1,1\n1,0.5," + format_double(std::exp(-1.0)) + "\n");
    CHECK_THROWS(write_curve_csv(os, c, {{1.0}}));
    const std::vector<double> in{8.0, 2.0, 0.5};
    CHECK(iterated_branch1_curve().evaluate(in) == doctest::Approx(16.0));
    CHECK(small_ball_curve(3.0).evaluate(std::vector<double>{0.1}) == doctest::Approx(0.3));
    CHECK(near_zero_tail_curve().evaluate(std::vector<double>{1.0, 1.0}) == doctest::Approx(std::exp(-1.0)));
    for (const auto& curve : {iterated_branch2_curve(), iterated_dual_curve()})
        CHECK(curve.evaluate(in) >= 0.0);
}
