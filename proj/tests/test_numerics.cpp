#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmct/errors.hpp"
#include "qmct/numerics.hpp"

#include <cmath>
#include <vector>

using namespace qmct;

TEST_CASE("quadrature is near machine accurate on smooth integrands") {
    // int_0^1 x^3 = 1/4 (Gauss-Kronrod is exact on polynomials)
    auto q1 = integrate([](double x) { return x * x * x; }, 0.0, 1.0);
    CHECK(std::abs(q1.value - 0.25) < 1e-14);

    // int_0^pi sin = 2
    auto q2 = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(std::abs(q2.value - 2.0) < 1e-12);

    // int_0^1 e^x = e - 1
    auto q3 = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(std::abs(q3.value - (std::exp(1.0) - 1.0)) < 1e-12);
    CHECK(q3.abs_error < 1e-10);
    CHECK(q3.evaluations > 0);
}

TEST_CASE("quadrature handles integrable square-root endpoints") {
    // int_0^1 1/sqrt(x) = 2 -- adaptive subdivision must dig into x=0.
    auto q = integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-300, 1.0,
                       1e-9, 1e-12, 60);
    CHECK(std::abs(q.value - 2.0) < 1e-6);
}

TEST_CASE("quadrature respects orientation and zero-width intervals") {
    auto fwd = integrate([](double x) { return x; }, 0.0, 2.0);
    auto rev = integrate([](double x) { return x; }, 2.0, 0.0);
    CHECK(std::abs(fwd.value - 2.0) < 1e-13);
    CHECK(std::abs(rev.value + 2.0) < 1e-13);
    auto nil = integrate([](double x) { return x * x; }, 1.5, 1.5);
    CHECK(nil.value == doctest::Approx(0.0));
}

TEST_CASE("find_root solves classic brackets to tight tolerance") {
    // sqrt(2) as root of x^2-2
    double r = find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    CHECK(std::abs(r - std::sqrt(2.0)) < 1e-12);

    // cos(x) = x  (Dottie number 0.7390851332151607)
    double d = find_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0);
    CHECK(std::abs(d - 0.7390851332151607) < 1e-12);

    // root at a bracket edge
    double z = find_root([](double x) { return x; }, 0.0, 1.0);
    CHECK(std::abs(z) < 1e-12);
}

TEST_CASE("find_root rejects an invalid bracket") {
    CHECK_THROWS_AS(
        find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0),
        DomainError);
}

TEST_CASE("find_all_roots enumerates every root of sin on [0.5, 10]") {
    auto roots = find_all_roots([](double x) { return std::sin(x); }, 0.5, 10.0);
    REQUIRE(roots.size() == 3);
    CHECK(std::abs(roots[0] - M_PI) < 1e-10);
    CHECK(std::abs(roots[1] - 2 * M_PI) < 1e-10);
    CHECK(std::abs(roots[2] - 3 * M_PI) < 1e-10);
}

TEST_CASE("summarize computes mean, stderr, median") {
    std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0};
    auto s = summarize(xs);
    CHECK(s.n == 5);
    CHECK(s.mean == doctest::Approx(3.0));
    CHECK(s.median == doctest::Approx(3.0));
    // sample std = sqrt(2.5), stderr = sqrt(2.5/5) = sqrt(0.5)
    CHECK(s.stderr_mean == doctest::Approx(std::sqrt(0.5)));

    std::vector<double> even = {1.0, 2.0, 3.0, 10.0};
    CHECK(summarize(even).median == doctest::Approx(2.5));

    std::vector<double> one = {7.0};
    auto s1 = summarize(one);
    CHECK(s1.mean == doctest::Approx(7.0));
    CHECK(s1.n == 1);
}

TEST_CASE("wls_fit recovers an exact line with zero variance") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y, w;
    for (double xi : x) {
        y.push_back(2.5 * xi - 1.0);
        w.push_back(1.0);
    }
    auto f = wls_fit(x, y, w);
    CHECK(f.slope == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(f.chi2 == doctest::Approx(0.0));
    CHECK(f.n == 5);
}

TEST_CASE("wls_fit weights dominate: heavy point pins the line") {
    // Two tight points define y = x; a third outlier is almost ignored
    // when its weight is tiny.
    std::vector<double> x = {0.0, 1.0, 2.0};
    std::vector<double> y = {0.0, 1.0, 100.0};
    std::vector<double> w = {1e8, 1e8, 1e-8};
    auto f = wls_fit(x, y, w);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(f.intercept == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("wls_fit parameter variances match the textbook 1/sigma^2 sums") {
    // Equal weights 1/sigma^2 with sigma=2, x = 0..4:
    // var(slope) = sigma^2 / sum (x - xbar)^2 = 4/10
    std::vector<double> x = {0, 1, 2, 3, 4};
    std::vector<double> y = {0.1, 0.9, 2.1, 2.9, 4.1};
    std::vector<double> w(5, 0.25);
    auto f = wls_fit(x, y, w);
    CHECK(f.slope_var == doctest::Approx(0.4).epsilon(1e-9));
    // var(intercept) = sigma^2 * sum x^2 / (n * sum (x-xbar)^2) = 4*30/(5*10)
    CHECK(f.intercept_var == doctest::Approx(2.4).epsilon(1e-9));
}

TEST_CASE("chi2 scaling mode rescales variances by chi2/dof") {
    std::vector<double> x = {0, 1, 2, 3};
    std::vector<double> y = {0.0, 1.2, 1.8, 3.1};
    std::vector<double> w(4, 1.0);
    auto raw = wls_fit(x, y, w, false);
    auto scaled = wls_fit(x, y, w, true);
    REQUIRE(raw.chi2 > 0.0);
    double factor = raw.chi2 / (4 - 2);
    CHECK(scaled.slope_var == doctest::Approx(raw.slope_var * factor));
    CHECK(scaled.intercept_var == doctest::Approx(raw.intercept_var * factor));
    // central values unchanged
    CHECK(scaled.slope == doctest::Approx(raw.slope));
}

TEST_CASE("chi2_quantile matches known upper-tail values") {
    // 99% quantiles: chi2(1) = 6.635, chi2(10) = 23.209, chi2(100) = 135.807
    const double z99 = 2.3263478740408408;
    CHECK(chi2_quantile(1, z99) == doctest::Approx(6.635).epsilon(0.02));
    CHECK(chi2_quantile(10, z99) == doctest::Approx(23.209).epsilon(0.01));
    CHECK(chi2_quantile(100, z99) == doctest::Approx(135.807).epsilon(0.005));
    // 95%: chi2(5) = 11.070
    CHECK(chi2_quantile(5, 1.6448536269514722) ==
          doctest::Approx(11.070).epsilon(0.01));
}
