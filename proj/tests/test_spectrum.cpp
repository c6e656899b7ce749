#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmct/errors.hpp"
#include "qmct/models.hpp"
#include "qmct/spectrum.hpp"

#include <cmath>
#include <vector>

using namespace qmct;

TEST_CASE("single spin: gap is 2*sqrt(Gamma^2 + h^2)") {
    for (double gamma : {0.3, 0.7, 1.5}) {
        auto r = gap_dense(SpinModel::chain(1, gamma));
        CHECK(r.delta == doctest::Approx(2 * gamma).epsilon(1e-12));
        CHECK(r.eigenvalues[0] == doctest::Approx(-gamma).epsilon(1e-12));
    }
    auto biased = gap_dense(SpinModel::chain(1, 0.6, 0.8));
    CHECK(biased.delta == doctest::Approx(2.0).epsilon(1e-12)); // 2*sqrt(.36+.64)
}

TEST_CASE("two-spin chain matches the closed-form spectrum") {
    // Single bond (L=2): levels -r, -1, +1, +r with r = sqrt(1+4 Gamma^2).
    const double gamma = 0.7;
    const double r = std::sqrt(1 + 4 * gamma * gamma);
    auto res = gap_dense(SpinModel::chain(2, gamma), 4);
    REQUIRE(res.eigenvalues.size() >= 4);
    CHECK(res.eigenvalues[0] == doctest::Approx(-r).epsilon(1e-12));
    CHECK(res.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(res.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.eigenvalues[3] == doctest::Approx(r).epsilon(1e-12));
    CHECK(res.delta == doctest::Approx(r - 1).epsilon(1e-12));
    CHECK(res.log_delta == doctest::Approx(std::log(r - 1)).epsilon(1e-10));
}

TEST_CASE("dense and sparse solvers agree on chains") {
    for (double gamma : {0.5, 0.7, 0.9}) {
        auto model = SpinModel::chain(8, gamma);
        auto dense = gap_dense(model, 2);
        auto sparse = gap_sparse(model, 2);
        CHECK(sparse.eigenvalues[0] ==
              doctest::Approx(dense.eigenvalues[0]).epsilon(1e-10));
        CHECK(sparse.delta == doctest::Approx(dense.delta).epsilon(1e-8));
        CHECK(sparse.method == SpectrumMethod::SparseIterative);
        CHECK(dense.method == SpectrumMethod::DenseFull);
    }
    // open chain too
    auto open = SpinModel::chain(7, 0.6, 0.0, false);
    CHECK(gap_sparse(open).delta ==
          doctest::Approx(gap_dense(open).delta).epsilon(1e-8));
}

TEST_CASE("symmetric-sector reduction matches the full-space solvers") {
    for (int L : {4, 8, 10}) {
        auto model = SpinModel::fully_connected(L, 0.45);
        auto dense = gap_dense(model, 2);
        auto sector = gap_symmetric_sector(model, 2);
        // the max-spin sector carries the global ground pair
        CHECK(sector.eigenvalues[0] ==
              doctest::Approx(dense.eigenvalues[0]).epsilon(1e-10));
        CHECK(sector.delta == doctest::Approx(dense.delta).epsilon(1e-8));
    }
}

TEST_CASE("symmetric-sector Hamiltonian has the announced matrix elements") {
    const int L = 6;
    const double gamma = 0.4;
    auto model = SpinModel::fully_connected(L, gamma);
    auto hs = build_symmetric_sector(model);
    CHECK(hs.S == doctest::Approx(3.0));
    REQUIRE(hs.diagonal.size() == static_cast<std::size_t>(L + 1));
    REQUIRE(hs.offdiagonal.size() == static_cast<std::size_t>(L));
    // M = -S..S -> m = 2M/L; diagonal = -L g(m) = -L m^2/2
    for (int i = 0; i <= L; ++i) {
        double m = 2.0 * (i - 3) / L;
        CHECK(hs.diagonal[i] == doctest::Approx(-L * 0.5 * m * m));
    }
    // offdiagonal between M-1 and M: -Gamma sqrt((S+M)(S-M+1))
    for (int i = 0; i < L; ++i) {
        double M = static_cast<double>(i - 3 + 1); // upper state of the pair
        CHECK(hs.offdiagonal[i] ==
              doctest::Approx(-gamma * std::sqrt((3 + M) * (3 - M + 1))));
    }
}

TEST_CASE("ground vector of the symmetric sector is strictly positive") {
    // Perron-Frobenius: the off-diagonal couplings are negative, so the
    // ground state can be chosen with all components positive.
    auto v = symmetric_sector_ground_vector(SpinModel::fully_connected(20, 0.4));
    REQUIRE(v.size() == 21);
    for (double c : v) CHECK(c > 0.0);
    double norm = 0;
    for (double c : v) norm += c * c;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("high-precision sector solver matches double precision where both work") {
    auto model = SpinModel::fully_connected(24, 0.4);
    auto d = gap_symmetric_sector(model);
    auto hp = gap_symmetric_sector_hp(model, 40);
    CHECK(hp.log_delta == doctest::Approx(d.log_delta).epsilon(1e-9));
    CHECK(hp.eigenvalues[0] == doctest::Approx(d.eigenvalues[0]).epsilon(1e-12));
}

TEST_CASE("high-precision solver reaches splittings far below double underflow") {
    // At L=600, Gamma=0.3 the splitting is ~ e^{-c L} with c ~ 0.9: far
    // below 1e-300.  log_delta must still be finite and descend linearly.
    auto m1 = SpinModel::fully_connected(500, 0.3);
    auto m2 = SpinModel::fully_connected(600, 0.3);
    auto r1 = gap_symmetric_sector_hp(m1);
    auto r2 = gap_symmetric_sector_hp(m2);
    CHECK(std::isfinite(r1.log_delta));
    CHECK(std::isfinite(r2.log_delta));
    CHECK(r1.log_delta < -300.0);
    CHECK(r2.log_delta < r1.log_delta);
    // per-site rate changes by < 2% over this range (it converges O(1/L))
    CHECK(r1.log_delta / 500 == doctest::Approx(r2.log_delta / 600).epsilon(0.02));
}

TEST_CASE("chain gap exponents: reference decay rates of -ln(Delta)/L") {
    // Independent pinning of the periodic-chain splitting decay used by the
    // scaling studies: fitted d(-ln Delta)/dL over L=12..16.
    std::vector<int> Ls = {12, 14, 16};
    auto rate = [&](double gamma) {
        std::vector<double> y;
        for (int L : Ls) y.push_back(-gap_sparse(SpinModel::chain(L, gamma)).log_delta);
        // slope over three equally spaced points
        return (y[2] - y[0]) / 4.0;
    };
    CHECK(rate(0.8) == doctest::Approx(0.535 / 2).epsilon(0.02));
    CHECK(rate(0.7) == doctest::Approx(0.799 / 2).epsilon(0.02));
}

TEST_CASE("double-well grid solver matches independently computed gaps") {
    // References from a separate tridiagonal FD solve (n = 8000/16000,
    // Richardson in dx^2), good to ~1e-8.
    struct Ref { double lambda, delta; };
    const Ref refs[] = {
        {0.05, 0.0017114941},
        {0.1, 0.1124337063},
        {0.125, 0.2312139791},
        {0.15, 0.3585876420},
        {0.2, 0.5937798624},
    };
    for (auto [lambda, delta] : refs) {
        auto r = gap_double_well(DoubleWell{lambda, 0.5});
        CHECK(r.delta == doctest::Approx(delta).epsilon(2e-4));
        CHECK(r.method == SpectrumMethod::GridSchrodinger);
    }
}

TEST_CASE("double-well eigenfunctions alternate parity") {
    DoubleWell dw{0.2, 0.5};
    auto levels = double_well_levels(dw, GridSpec{0.0, 2048}, 4);
    REQUIRE(levels.evecs.size() >= 4);
    const auto& x = levels.x;
    const std::size_t n = x.size();
    for (int k = 0; k < 4; ++k) {
        const auto& u = levels.evecs[k];
        REQUIRE(u.size() == n);
        // symmetric grid: compare u(x) against u(-x)
        double sym = 0, anti = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double mirror = u[n - 1 - i];
            sym += (u[i] - mirror) * (u[i] - mirror);
            anti += (u[i] + mirror) * (u[i] + mirror);
        }
        if (k % 2 == 0)
            CHECK(sym < 1e-16 * anti); // even states
        else
            CHECK(anti < 1e-16 * sym); // odd states
    }
    // energies ascend
    for (int k = 1; k < 4; ++k) CHECK(levels.evals[k] > levels.evals[k - 1]);
}

TEST_CASE("thermal and ground-state oracles reproduce closed forms") {
    SUBCASE("single spin at finite beta") {
        const double gamma = 0.7, beta = 3.0;
        auto t = thermal_oracle(SpinModel::chain(1, gamma), beta);
        CHECK(t.sigma_x == doctest::Approx(std::tanh(beta * gamma)).epsilon(1e-12));
        CHECK(t.energy == doctest::Approx(-gamma * std::tanh(beta * gamma)));
        CHECK(t.m2 == doctest::Approx(1.0)); // single spin: m^2 = 1 always
    }
    SUBCASE("single spin with longitudinal field") {
        const double gamma = 0.6, h = 0.8, beta = 2.0;
        const double r = std::sqrt(gamma * gamma + h * h);
        auto t = thermal_oracle(SpinModel::chain(1, gamma, h), beta);
        CHECK(t.sigma_x ==
              doctest::Approx((gamma / r) * std::tanh(beta * r)).epsilon(1e-12));
    }
    SUBCASE("two-spin ground state") {
        const double gamma = 0.7;
        const double r = std::sqrt(1 + 4 * gamma * gamma);
        auto g = ground_state_oracle(SpinModel::chain(2, gamma));
        CHECK(g.energy == doctest::Approx(-r).epsilon(1e-12));
        // <sigma_x> per site = 2 Gamma / r (Hellmann-Feynman)
        CHECK(g.sigma_x == doctest::Approx(2 * gamma / r).epsilon(1e-12));
        // m^2 = (1 + <Z1 Z2>)/2 with <Z1 Z2> = 1/r
        CHECK(g.m2 == doctest::Approx((1 + 1 / r) / 2).epsilon(1e-12));
    }
    SUBCASE("thermal approaches ground state at large beta") {
        auto model = SpinModel::chain(2, 0.7);
        auto t = thermal_oracle(model, 60.0);
        auto g = ground_state_oracle(model);
        CHECK(t.sigma_x == doctest::Approx(g.sigma_x).epsilon(1e-8));
        CHECK(t.m2 == doctest::Approx(g.m2).epsilon(1e-8));
    }
}

TEST_CASE("capacity guard on the dense solver") {
    CHECK_THROWS_AS(gap_dense(SpinModel::chain(13, 0.7)), CapacityError);
}

TEST_CASE("eigen-residuals are certified small") {
    CHECK(gap_dense(SpinModel::chain(6, 0.7)).residual < 1e-9);
    CHECK(gap_sparse(SpinModel::chain(12, 0.7)).residual < 1e-9);
}
