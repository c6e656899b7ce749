#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmct/models.hpp"
#include "qmct/numerics.hpp"
#include "qmct/rng.hpp"
#include "qmct/spectrum.hpp"
#include "qmct/spin_path.hpp"
#include "qmct/spin_qmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

using namespace qmct;

namespace {

// Batch-mean estimate: mean and its standard error from `n_batches`
// consecutive blocks, robust to short autocorrelation times.
struct BatchMean {
    double mean = 0.0;
    double stderr_mean = 0.0;
};

BatchMean batch_mean(const std::vector<double>& xs, int n_batches = 50) {
    const std::size_t len = xs.size() / n_batches;
    std::vector<double> means;
    for (int b = 0; b < n_batches; ++b) {
        double s = 0;
        for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += xs[i];
        means.push_back(s / len);
    }
    auto st = summarize(means);
    return {st.mean, st.stderr_mean};
}

using DiscreteSweep = std::function<void(DiscretePath&, const SpinModel&, Rng&)>;

struct Measured {
    BatchMean sigma_x;
    BatchMean m2;
};

Measured run_discrete(const SpinModel& model, double beta, int P, int n_sweeps,
                      const DiscreteSweep& sweep, std::uint64_t seed) {
    auto path = init_polarized(model, beta, P, Boundary::Periodic, +1);
    Rng rng(seed);
    for (int i = 0; i < 2000; ++i) sweep(path, model, rng);
    std::vector<double> sx, m2;
    sx.reserve(n_sweeps);
    m2.reserve(n_sweeps);
    for (int i = 0; i < n_sweeps; ++i) {
        sweep(path, model, rng);
        sx.push_back(sigma_x_estimate(path, model));
        m2.push_back(m2_estimate(path));
    }
    return {batch_mean(sx), batch_mean(m2)};
}

Measured run_ct(const SpinModel& model, double beta, int n_sweeps,
                std::uint64_t seed) {
    auto path = init_polarized_ct(model, beta, Boundary::Periodic, +1);
    Rng rng(seed);
    for (int i = 0; i < 2000; ++i) sweep_cluster(path, model, rng);
    std::vector<double> sx, m2;
    for (int i = 0; i < n_sweeps; ++i) {
        sweep_cluster(path, model, rng);
        sx.push_back(sigma_x_estimate(path, model));
        m2.push_back(m2_estimate(path));
    }
    return {batch_mean(sx), batch_mean(m2)};
}

void check_within(const BatchMean& got, double expect, double extra_bias = 0.0) {
    const double tol = 3 * got.stderr_mean + extra_bias;
    INFO("measured " << got.mean << " +- " << got.stderr_mean << ", expected "
                     << expect << ", tol " << tol);
    CHECK(std::abs(got.mean - expect) <= tol);
}

} // namespace

TEST_CASE("polarized initial states and path bookkeeping") {
    auto model = SpinModel::chain(4, 0.7);
    auto path = init_polarized(model, 2.0, 8, Boundary::Periodic, +1);
    CHECK(path.L == 4);
    CHECK(path.P == 8);
    for (auto s : path.spins) CHECK(s == 1);
    CHECK(path.k_space_scale == doctest::Approx(2.0 / 8));
    // k_tau = ln(coth(Gamma beta / P)) / 2
    const double u = 0.7 * 2.0 / 8;
    CHECK(path.k_tau == doctest::Approx(0.5 * std::log(1.0 / std::tanh(u))));
    CHECK(reversal_fraction(path, 0.5) == doctest::Approx(0.0));

    auto down = init_polarized(model, 2.0, 8, Boundary::Periodic, -1);
    CHECK(reversal_fraction(down, 0.5) == doctest::Approx(1.0));

    auto ct = init_polarized_ct(model, 2.0, Boundary::Open, -1);
    CHECK(ct.total_walls() == 0);
    for (auto s : ct.spin0) CHECK(s == -1);
    CHECK(reversal_fraction(ct, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("reversal fraction counts slices at or below -threshold") {
    auto model = SpinModel::chain(4, 0.7);
    auto path = init_polarized(model, 1.0, 4, Boundary::Periodic, +1);
    // slice magnetizations 1, 0, -1, -0.5
    path.spin(2, 1) = -1;
    path.spin(3, 1) = -1;
    for (int i = 0; i < 4; ++i) path.spin(i, 2) = -1;
    for (int i = 0; i < 3; ++i) path.spin(i, 3) = -1;
    CHECK(path.slice_magnetization(0) == doctest::Approx(1.0));
    CHECK(path.slice_magnetization(1) == doctest::Approx(0.0));
    CHECK(path.slice_magnetization(3) == doctest::Approx(-0.5));
    // boundary inclusive: m = -0.5 counts at threshold 0.5
    CHECK(reversal_fraction(path, 0.5) == doctest::Approx(0.5));
    CHECK(reversal_fraction(path, 0.25) == doctest::Approx(0.5));
    CHECK(reversal_fraction(path, 1.0) == doctest::Approx(0.25));
}

TEST_CASE("continuous-time worldline lookup flips at wall times") {
    auto model = SpinModel::chain(1, 0.7);
    auto path = init_polarized_ct(model, 4.0, Boundary::Periodic, +1);
    path.walls[0] = {1.0, 2.5};
    CHECK(path.spin_at(0, 0.5) == 1);
    CHECK(path.spin_at(0, 1.0) == -1); // flips at the instant of the wall
    CHECK(path.spin_at(0, 2.0) == -1);
    CHECK(path.spin_at(0, 2.5) == 1);
    CHECK(path.spin_at(0, 3.9) == 1);
    CHECK(path.total_walls() == 2);
    // reversed for tau in [1.0, 2.5): fraction 1.5/4
    CHECK(reversal_fraction(path, 0.5) == doctest::Approx(1.5 / 4.0));

    auto prof = slice_magnetization_profile(path, 8);
    REQUIRE(prof.size() == 8);
    for (double m : prof) CHECK(std::abs(m) <= 1.0);
}

TEST_CASE("single spin: both representations reproduce tanh(beta Gamma)") {
    const double gamma = 0.7, beta = 2.0;
    const double exact = std::tanh(beta * gamma);
    auto model = SpinModel::chain(1, gamma);

    SUBCASE("discrete lattice (no splitting error for a single term)") {
        auto r = run_discrete(
            model, beta, 32, 60000,
            [](DiscretePath& p, const SpinModel& m, Rng& g) { sweep_cluster(p, m, g); },
            11);
        check_within(r.sigma_x, exact);
        CHECK(r.m2.mean == doctest::Approx(1.0)); // single spin: m^2 == 1
    }
    SUBCASE("continuous time") {
        auto r = run_ct(model, beta, 60000, 12);
        check_within(r.sigma_x, exact);
        CHECK(r.m2.mean == doctest::Approx(1.0));
    }
}

TEST_CASE("exact enumeration: cluster sweep samples exp(log_weight) on 2x3") {
    // Brute-force expectations over all 64 discrete paths, then compare the
    // sampler's time averages.  This validates sampler and estimators
    // against the *declared* path weight, independently of Trotter error.
    const double gamma = 0.9, beta = 1.5;
    const int L = 2, P = 3;
    auto model = SpinModel::chain(L, gamma);
    auto path = init_polarized(model, beta, P, Boundary::Periodic, +1);

    double zsum = 0, sx_sum = 0, m2_sum = 0;
    for (int idx = 0; idx < (1 << (L * P)); ++idx) {
        for (int b = 0; b < L * P; ++b)
            path.spins[b] = (idx >> b) & 1 ? 1 : -1;
        const double w = std::exp(log_weight(path, model));
        zsum += w;
        sx_sum += w * sigma_x_estimate(path, model);
        m2_sum += w * m2_estimate(path);
    }
    const double sx_exact = sx_sum / zsum;
    const double m2_exact = m2_sum / zsum;

    auto r = run_discrete(
        model, beta, P, 80000,
        [](DiscretePath& p, const SpinModel& m, Rng& g) { sweep_cluster(p, m, g); },
        21);
    check_within(r.sigma_x, sx_exact);
    check_within(r.m2, m2_exact);

    auto rl = run_discrete(
        model, beta, P, 80000,
        [](DiscretePath& p, const SpinModel& m, Rng& g) { sweep_local(p, m, g); },
        22);
    check_within(rl.sigma_x, sx_exact);
    check_within(rl.m2, m2_exact);
}

TEST_CASE("two-spin thermal expectations match dense diagonalization") {
    const double gamma = 0.7, beta = 2.0;
    auto model = SpinModel::chain(2, gamma);
    auto oracle = thermal_oracle(model, beta);

    SUBCASE("continuous time is unbiased") {
        auto r = run_ct(model, beta, 100000, 31);
        check_within(r.sigma_x, oracle.sigma_x);
        check_within(r.m2, oracle.m2);
    }
    SUBCASE("discrete at P=64 carries negligible splitting bias") {
        auto r = run_discrete(
            model, beta, 64, 60000,
            [](DiscretePath& p, const SpinModel& m, Rng& g) { sweep_cluster(p, m, g); },
            32);
        check_within(r.sigma_x, oracle.sigma_x, 2e-3);
        check_within(r.m2, oracle.m2, 2e-3);
    }
    SUBCASE("fully connected model against its own oracle") {
        auto fc = SpinModel::fully_connected(3, 0.6);
        auto ofc = thermal_oracle(fc, beta);
        auto rfc = run_ct(fc, beta, 100000, 33);
        check_within(rfc.sigma_x, ofc.sigma_x);
        check_within(rfc.m2, ofc.m2);
    }
}

TEST_CASE("update schemes agree with each other") {
    const double gamma = 0.7, beta = 2.0;
    auto model = SpinModel::chain(2, gamma);
    auto sw = run_discrete(
        model, beta, 16, 60000,
        [](DiscretePath& p, const SpinModel& m, Rng& g) {
            sweep_cluster(p, m, g, ClusterFlavor::SwendsenWang);
        },
        41);
    auto wolff = run_discrete(
        model, beta, 16, 120000,
        [](DiscretePath& p, const SpinModel& m, Rng& g) {
            sweep_cluster(p, m, g, ClusterFlavor::Wolff);
        },
        42);
    auto local = run_discrete(
        model, beta, 16, 60000,
        [](DiscretePath& p, const SpinModel& m, Rng& g) { sweep_local(p, m, g); },
        43);
    auto agree = [](const BatchMean& a, const BatchMean& b) {
        CHECK(std::abs(a.mean - b.mean) <=
              3 * std::hypot(a.stderr_mean, b.stderr_mean));
    };
    agree(sw.sigma_x, wolff.sigma_x);
    agree(sw.sigma_x, local.sigma_x);
    agree(sw.m2, wolff.m2);
    agree(sw.m2, local.m2);
}

TEST_CASE("chi-squared stationarity on the 2x4 lattice") {
    // All 256 discrete paths enumerated; long sampler runs must reproduce
    // the exact distribution.  Low-probability states are pooled so every
    // cell has expected count >= 10; the statistic is compared against the
    // 99% chi-squared quantile.
    const double gamma = 1.0, beta = 2.0;
    const int L = 2, P = 4, NBITS = L * P;
    auto model = SpinModel::chain(L, gamma);
    auto scratch = init_polarized(model, beta, P, Boundary::Periodic, +1);

    std::vector<double> prob(1 << NBITS);
    double zsum = 0;
    for (int idx = 0; idx < (1 << NBITS); ++idx) {
        for (int b = 0; b < NBITS; ++b)
            scratch.spins[b] = (idx >> b) & 1 ? 1 : -1;
        prob[idx] = std::exp(log_weight(scratch, model));
        zsum += prob[idx];
    }
    for (auto& p : prob) p /= zsum;

    auto run_chi2 = [&](const DiscreteSweep& sweep, int stride, int n_samples,
                        std::uint64_t seed) {
        auto path = init_polarized(model, beta, P, Boundary::Periodic, +1);
        Rng rng(seed);
        for (int i = 0; i < 1000; ++i) sweep(path, model, rng);
        std::vector<long long> count(1 << NBITS, 0);
        for (int s = 0; s < n_samples; ++s) {
            for (int k = 0; k < stride; ++k) sweep(path, model, rng);
            int idx = 0;
            for (int b = 0; b < NBITS; ++b)
                if (path.spins[b] == 1) idx |= 1 << b;
            ++count[idx];
        }
        // pool ascending-probability states until each cell expects >= 10
        std::vector<int> order(1 << NBITS);
        for (int i = 0; i < (1 << NBITS); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return prob[a] < prob[b]; });
        double chi2 = 0;
        int cells = 0;
        double e_pool = 0;
        long long o_pool = 0;
        for (int idx : order) {
            e_pool += n_samples * prob[idx];
            o_pool += count[idx];
            if (e_pool >= 10.0) {
                chi2 += (o_pool - e_pool) * (o_pool - e_pool) / e_pool;
                ++cells;
                e_pool = 0;
                o_pool = 0;
            }
        }
        REQUIRE(cells > 50);
        const double threshold = chi2_quantile(cells - 1, 2.3263478740408408);
        INFO("chi2 = " << chi2 << " over " << cells - 1
                       << " dof, 99% threshold " << threshold);
        CHECK(chi2 < threshold);
    };

    SUBCASE("every-cluster flavor") {
        run_chi2(
            [](DiscretePath& p, const SpinModel& m, Rng& g) {
                sweep_cluster(p, m, g, ClusterFlavor::SwendsenWang);
            },
            4, 200000, 51);
    }
    SUBCASE("single-cluster flavor") {
        run_chi2(
            [](DiscretePath& p, const SpinModel& m, Rng& g) {
                sweep_cluster(p, m, g, ClusterFlavor::Wolff);
            },
            8, 150000, 52);
    }
    SUBCASE("local metropolis") {
        run_chi2(
            [](DiscretePath& p, const SpinModel& m, Rng& g) { sweep_local(p, m, g); },
            4, 200000, 53);
    }
}

TEST_CASE("continuous-time invariants: wall parity, ordering, bounds") {
    auto model = SpinModel::chain(3, 0.8);
    auto path = init_polarized_ct(model, 4.0, Boundary::Periodic, +1);
    Rng rng(61);
    for (int i = 0; i < 200; ++i) {
        sweep_cluster(path, model, rng);
        for (int s = 0; s < path.L; ++s) {
            const auto& w = path.walls[s];
            CHECK(w.size() % 2 == 0); // periodic: worldlines close on themselves
            CHECK(std::is_sorted(w.begin(), w.end()));
            if (!w.empty()) {
                CHECK(w.front() >= 0.0);
                CHECK(w.back() < path.beta);
            }
        }
    }
    // open boundaries place no parity constraint but keep ordering/bounds
    auto open = init_polarized_ct(model, 4.0, Boundary::Open, +1);
    for (int i = 0; i < 200; ++i) {
        sweep_cluster(open, model, rng);
        for (int s = 0; s < open.L; ++s) {
            const auto& w = open.walls[s];
            CHECK(std::is_sorted(w.begin(), w.end()));
            if (!w.empty()) {
                CHECK(w.front() >= 0.0);
                CHECK(w.back() < open.beta);
            }
        }
    }
}

TEST_CASE("open-boundary projection: interior estimators hit the ground state") {
    const double gamma = 0.7, beta = 30.0;
    auto model = SpinModel::chain(2, gamma);
    auto exact = ground_state_oracle(model);

    auto path = init_polarized_ct(model, beta, Boundary::Open, +1);
    Rng rng(71);
    for (int i = 0; i < 3000; ++i) sweep_cluster(path, model, rng);
    std::vector<double> sx, m2;
    for (int i = 0; i < 40000; ++i) {
        sweep_cluster(path, model, rng);
        sx.push_back(interior_sigma_x(path, model));
        m2.push_back(interior_m2(path));
    }
    // residual projection bias ~ exp(-gap * beta/4) ~ 5e-3
    check_within(batch_mean(sx), exact.sigma_x, 6e-3);
    check_within(batch_mean(m2), exact.m2, 6e-3);
}

TEST_CASE("sweep statistics are coherent") {
    auto model = SpinModel::chain(4, 0.7);
    auto path = init_polarized(model, 2.0, 8, Boundary::Periodic, +1);
    Rng rng(81);
    auto st = sweep_local(path, model, rng);
    CHECK(st.attempted == 4 * 8);
    CHECK(st.accepted <= st.attempted);
    CHECK(st.acceptance_rate() >= 0.0);
    CHECK(st.acceptance_rate() <= 1.0);
}
