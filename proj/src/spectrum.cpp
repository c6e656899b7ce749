#include "qmct/spectrum.hpp"

#include "qmct/errors.hpp"
#include "qmct/rng.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

namespace qmct {

std::string to_string(SpectrumMethod m) {
    switch (m) {
        case SpectrumMethod::DenseFull: return "dense";
        case SpectrumMethod::SparseIterative: return "sparse";
        case SpectrumMethod::SymmetricSector: return "symmetric-sector";
        case SpectrumMethod::GridSchrodinger: return "grid";
    }
    return "?";
}

namespace {

// sigma_z value of site i in basis state z.
inline double spin_of(std::uint64_t z, int i) {
    return (z >> i) & 1ULL ? 1.0 : -1.0;
}

// Diagonal of the Hamiltonian over the full 2^L basis.
std::vector<double> build_diagonal(const SpinModel& model) {
    const std::size_t dim = std::size_t{1} << model.L;
    std::vector<double> diag(dim);
    if (model.is_mean_field()) {
        // Energy depends only on the magnetization: precompute by popcount.
        std::vector<double> by_count(model.L + 1);
        for (int c = 0; c <= model.L; ++c) {
            const double m = (2.0 * c - model.L) / model.L;
            by_count[c] = -model.L * model.g.value(m);
        }
        for (std::size_t z = 0; z < dim; ++z)
            diag[z] = by_count[std::popcount(z)];
        return diag;
    }
    const auto bonds = chain_bonds(model);
    for (std::size_t z = 0; z < dim; ++z) {
        double e = 0.0;
        for (auto [i, j] : bonds) e -= spin_of(z, i) * spin_of(z, j);
        if (model.h != 0.0)
            for (int i = 0; i < model.L; ++i) e -= model.h * spin_of(z, i);
        diag[z] = e;
    }
    return diag;
}

// y = H x, matrix-free: diagonal plus the transverse-field bit flips.
void apply_hamiltonian(const SpinModel& model, const std::vector<double>& diag,
                       const double* x, double* y) {
    const std::size_t dim = diag.size();
    for (std::size_t z = 0; z < dim; ++z) y[z] = diag[z] * x[z];
    const double g = model.gamma;
    for (int b = 0; b < model.L; ++b) {
        const std::size_t s = std::size_t{1} << b;
        for (std::size_t base = 0; base < dim; base += 2 * s) {
            for (std::size_t i = base; i < base + s; ++i) {
                y[i] -= g * x[i + s];
                y[i + s] -= g * x[i];
            }
        }
    }
}

double hamiltonian_norm_bound(const SpinModel& model, const std::vector<double>& diag) {
    double dmax = 0.0;
    for (double d : diag) dmax = std::max(dmax, std::abs(d));
    return dmax + model.L * std::abs(model.gamma);
}

// Residuals ||H y - theta y|| for explicit Ritz vectors.
double exact_residual(const SpinModel& model, const std::vector<double>& diag,
                      const double* y, double theta, std::vector<double>& work) {
    const std::size_t dim = diag.size();
    work.resize(dim);
    apply_hamiltonian(model, diag, y, work.data());
    double ss = 0.0;
    for (std::size_t z = 0; z < dim; ++z) {
        const double r = work[z] - theta * y[z];
        ss += r * r;
    }
    return std::sqrt(ss);
}

// Tridiagonal residual ||T v - lambda v||.
double tridiag_residual(const std::vector<double>& d, const std::vector<double>& e,
                        const double* v, double lambda) {
    const std::size_t n = d.size();
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (d[i] - lambda) * v[i];
        if (i > 0) r += e[i - 1] * v[i - 1];
        if (i + 1 < n) r += e[i] * v[i + 1];
        ss += r * r;
    }
    return std::sqrt(ss);
}

void check_lapack(int info, const char* what) {
    if (info != 0)
        throw ConvergenceError(std::string(what) + " failed with info=" +
                               std::to_string(info));
}

} // namespace

SpectrumResult gap_dense(const SpinModel& model, int k) {
    if (model.L > 12)
        throw CapacityError("gap_dense: dense path limited to L <= 12, got L=" +
                            std::to_string(model.L));
    const lapack_int n = lapack_int(1) << model.L;
    k = std::clamp<int>(k, 2, n);
    auto diag = build_diagonal(model);

    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    for (lapack_int z = 0; z < n; ++z) a[static_cast<std::size_t>(z) * n + z] = diag[z];
    for (int b = 0; b < model.L; ++b) {
        const lapack_int s = lapack_int(1) << b;
        for (lapack_int z = 0; z < n; ++z) {
            const lapack_int zp = z ^ s;
            if (zp > z) {
                a[static_cast<std::size_t>(zp) * n + z] -= model.gamma;
                a[static_cast<std::size_t>(z) * n + zp] -= model.gamma;
            }
        }
    }

    std::vector<double> w(n), z(static_cast<std::size_t>(n) * k);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
    lapack_int found = 0;
    check_lapack(LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n,
                                0.0, 0.0, 1, k, 0.0, &found, w.data(), z.data(), n,
                                isuppz.data()),
                 "dsyevr");

    SpectrumResult res;
    res.method = SpectrumMethod::DenseFull;
    res.eigenvalues.assign(w.begin(), w.begin() + found);
    std::vector<double> work;
    for (lapack_int i = 0; i < found; ++i)
        res.residual = std::max(
            res.residual, exact_residual(model, diag, z.data() + static_cast<std::size_t>(i) * n,
                                         w[i], work));
    res.delta = res.eigenvalues[1] - res.eigenvalues[0];
    res.log_delta = std::log(res.delta);
    return res;
}

SpectrumResult gap_sparse(const SpinModel& model, int k) {
    if (model.L > 24)
        throw CapacityError("gap_sparse: matrix-free path limited to L <= 24");
    const std::size_t n = std::size_t{1} << model.L;
    k = std::clamp<int>(k, 2, static_cast<int>(n));
    auto diag = build_diagonal(model);
    const double hnorm = hamiltonian_norm_bound(model, diag);
    const double tol = 1e-10 * hnorm;

    // Basis size cap: memory-bounded (columns of length n), never above n.
    const std::size_t mem_cols = (std::size_t{600} << 20) / (8 * n);
    const std::size_t m_max = std::min<std::size_t>({n, 400, mem_cols});
    if (m_max < 16 && m_max < n)
        throw CapacityError("gap_sparse: basis of " + std::to_string(m_max) +
                            " columns at dimension " + std::to_string(n) +
                            " cannot converge within the memory budget");

    std::vector<double> B(n * m_max);      // orthonormal basis, column-major
    std::vector<double> T(m_max * m_max, 0.0); // projected Hamiltonian
    std::vector<double> w(n), h(m_max), tmp;

    Rng rng(0x5eedc0de01u);
    std::size_t m = 0; // columns in basis

    auto orthonormalize_into_basis = [&](std::vector<double>& v) -> bool {
        // Two-pass Gram-Schmidt against all existing columns, then append.
        for (int pass = 0; pass < 2; ++pass) {
            if (m == 0) break;
            cblas_dgemv(CblasColMajor, CblasTrans, static_cast<int>(n),
                        static_cast<int>(m), 1.0, B.data(), static_cast<int>(n),
                        v.data(), 1, 0.0, h.data(), 1);
            cblas_dgemv(CblasColMajor, CblasNoTrans, static_cast<int>(n),
                        static_cast<int>(m), -1.0, B.data(), static_cast<int>(n),
                        h.data(), 1, 1.0, v.data(), 1);
        }
        const double norm = cblas_dnrm2(static_cast<int>(n), v.data(), 1);
        if (norm <= 1e-8) return false;
        for (std::size_t i = 0; i < n; ++i) B[m * n + i] = v[i] / norm;
        ++m;
        return true;
    };

    auto fresh_random_column = [&]() -> bool {
        std::vector<double> v(n);
        for (int attempt = 0; attempt < 4; ++attempt) {
            for (auto& x : v) x = rng.uniform(-1.0, 1.0);
            if (orthonormalize_into_basis(v)) return true;
        }
        return false;
    };

    const int block = 2; // near-degenerate pairs need >= 2 simultaneous lanes
    for (int lane = 0; lane < block && m < m_max; ++lane) fresh_random_column();

    SpectrumResult res;
    res.method = SpectrumMethod::SparseIterative;

    std::size_t num_mult = 0; // columns already multiplied by H
    std::vector<double> ritz_vals, ritz_vecs;

    auto ritz_check = [&](bool final) -> bool {
        const std::size_t s = num_mult;
        if (s < static_cast<std::size_t>(k)) return false;
        // Symmetrize the recorded projection (T[i][j] valid for i <= j).
        std::vector<double> ts(s * s);
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t i = 0; i <= j; ++i)
                ts[j * s + i] = ts[i * s + j] = T[j * m_max + i];
        std::vector<double> ev(s);
        check_lapack(LAPACKE_dsyev(LAPACK_COL_MAJOR, 'V', 'U', static_cast<int>(s),
                                   ts.data(), static_cast<int>(s), ev.data()),
                     "dsyev(T)");
        double worst = 0.0;
        std::vector<double> y(n);
        for (int i = 0; i < k; ++i) {
            cblas_dgemv(CblasColMajor, CblasNoTrans, static_cast<int>(n),
                        static_cast<int>(s), 1.0, B.data(), static_cast<int>(n),
                        ts.data() + static_cast<std::size_t>(i) * s, 1, 0.0, y.data(), 1);
            worst = std::max(worst, exact_residual(model, diag, y.data(), ev[i], tmp));
        }
        if (worst <= tol || final) {
            res.eigenvalues.assign(ev.begin(), ev.begin() + k);
            res.residual = worst;
            return worst <= tol;
        }
        return false;
    };

    bool converged = false;
    int steps_since_check = 0;
    while (!converged) {
        if (num_mult >= m) {
            // Invariant subspace exhausted (tiny systems): final exact check.
            converged = ritz_check(true);
            break;
        }
        // Multiply the oldest not-yet-multiplied column.
        const std::size_t c = num_mult;
        apply_hamiltonian(model, diag, B.data() + c * n, w.data());
        // Record T column c (projections onto all current columns).
        cblas_dgemv(CblasColMajor, CblasTrans, static_cast<int>(n),
                    static_cast<int>(m), 1.0, B.data(), static_cast<int>(n),
                    w.data(), 1, 0.0, h.data(), 1);
        for (std::size_t i = 0; i < m; ++i) T[c * m_max + i] = h[i];
        ++num_mult;
        if (m < m_max) {
            cblas_dgemv(CblasColMajor, CblasNoTrans, static_cast<int>(n),
                        static_cast<int>(m), -1.0, B.data(), static_cast<int>(n),
                        h.data(), 1, 1.0, w.data(), 1);
            std::vector<double> v(w.begin(), w.end());
            if (!orthonormalize_into_basis(v)) {
                // Worldline exhausted in this direction; refill randomly to
                // keep the block advancing.
                fresh_random_column();
            }
        }
        if (++steps_since_check >= 16) {
            steps_since_check = 0;
            converged = ritz_check(false);
        }
        if (!converged && num_mult >= m_max) {
            converged = ritz_check(true);
            if (!converged)
                throw ConvergenceError(
                    "gap_sparse: Lanczos failed to reach residual " +
                    std::to_string(tol) + " within basis " + std::to_string(m_max) +
                    " (residual " + std::to_string(res.residual) + ")");
            break;
        }
    }
    if (res.eigenvalues.empty()) ritz_check(true);
    if (static_cast<int>(res.eigenvalues.size()) < k)
        throw ConvergenceError("gap_sparse: insufficient Ritz values");
    res.delta = res.eigenvalues[1] - res.eigenvalues[0];
    res.log_delta = std::log(std::max(res.delta, 5e-324));
    return res;
}

SymmetricSectorHamiltonian build_symmetric_sector(const SpinModel& model) {
    if (!model.is_mean_field())
        throw ConfigError("symmetric sector requires a permutation-symmetric model");
    SymmetricSectorHamiltonian ham;
    const int L = model.L;
    ham.S = 0.5 * L;
    ham.diagonal.resize(L + 1);
    ham.offdiagonal.resize(L);
    for (int j = 0; j <= L; ++j) {
        const double m = (2.0 * j - L) / L;
        ham.diagonal[j] = -L * model.g.value(m);
    }
    for (int j = 1; j <= L; ++j) {
        // Coupling between M-1 and M with M = j - S.
        const double M = j - ham.S;
        ham.offdiagonal[j - 1] =
            -model.gamma * std::sqrt((ham.S + M) * (ham.S - M + 1.0));
    }
    return ham;
}

namespace {

struct TridiagEigen {
    std::vector<double> evals;
    std::vector<double> evecs; // column-major, n x k
    double residual = 0.0;
};

TridiagEigen solve_tridiag(const std::vector<double>& d, const std::vector<double>& e,
                           int k) {
    const lapack_int n = static_cast<lapack_int>(d.size());
    k = std::clamp<int>(k, 1, n);
    std::vector<double> dc(d), ec(e);
    ec.resize(n); // dstevr wants length n scratch for the off-diagonal
    TridiagEigen out;
    out.evals.resize(n);
    out.evecs.resize(static_cast<std::size_t>(n) * k);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(1, k)));
    lapack_int found = 0;
    check_lapack(LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, dc.data(), ec.data(),
                                0.0, 0.0, 1, k, 0.0, &found, out.evals.data(),
                                out.evecs.data(), n, isuppz.data()),
                 "dstevr");
    out.evals.resize(found);
    for (lapack_int i = 0; i < found; ++i)
        out.residual = std::max(
            out.residual,
            tridiag_residual(d, e, out.evecs.data() + static_cast<std::size_t>(i) * n,
                             out.evals[i]));
    return out;
}

} // namespace

SpectrumResult gap_symmetric_sector(const SpinModel& model, int k) {
    const auto ham = build_symmetric_sector(model);
    const auto sol = solve_tridiag(ham.diagonal, ham.offdiagonal, std::max(k, 2));
    SpectrumResult res;
    res.method = SpectrumMethod::SymmetricSector;
    res.eigenvalues = sol.evals;
    res.residual = sol.residual;
    res.delta = res.eigenvalues[1] - res.eigenvalues[0];
    res.log_delta = std::log(std::max(res.delta, 5e-324));
    return res;
}

std::vector<double> symmetric_sector_ground_vector(const SpinModel& model) {
    const auto ham = build_symmetric_sector(model);
    auto sol = solve_tridiag(ham.diagonal, ham.offdiagonal, 1);
    std::vector<double> v(sol.evecs.begin(), sol.evecs.begin() + ham.diagonal.size());
    // Sign-normalize on the largest component.
    double big = 0.0;
    for (double x : v)
        if (std::abs(x) > std::abs(big)) big = x;
    if (big < 0)
        for (auto& x : v) x = -x;
    return v;
}

// ---------------------------------------------------------------------------
// Double-well grid solver

namespace {

TridiagEigen solve_well_grid(const DoubleWell& dw, double x_max, int n, int k) {
    const double dx = 2.0 * x_max / (n + 1);
    const double kin = 1.0 / (2.0 * dw.mass * dx * dx);
    std::vector<double> d(n), e(n - 1, -kin);
    for (int i = 0; i < n; ++i) {
        const double x = -x_max + (i + 1) * dx;
        d[i] = 2.0 * kin + potential(dw, x);
    }
    return solve_tridiag(d, e, k);
}

} // namespace

SpectrumResult gap_double_well(const DoubleWell& dw, GridSpec grid, int k) {
    const double x_max = grid.x_max > 0 ? grid.x_max : 2.5 * dw.x_min() + 2.0;
    if (x_max < 2.0 * dw.x_min())
        throw ConfigError("gap_double_well: grid must cover x_max >= 2*x_min");
    if (grid.n < 64) throw ConfigError("gap_double_well: grid too small");
    k = std::max(k, 2);

    const auto fine = solve_well_grid(dw, x_max, grid.n, k);
    const auto half = solve_well_grid(dw, x_max, grid.n / 2, k);
    const double delta_fine = fine.evals[1] - fine.evals[0];
    const double delta_half = half.evals[1] - half.evals[0];
    const double drift = std::abs(delta_fine - delta_half);
    if (drift > 1e-3 * std::abs(delta_fine))
        throw AccuracyError(
            "gap_double_well: grid not converged (Richardson drift " +
            std::to_string(drift / std::abs(delta_fine)) + " relative)");

    SpectrumResult res;
    res.method = SpectrumMethod::GridSchrodinger;
    res.eigenvalues.resize(fine.evals.size());
    // Second-order scheme: Richardson-extrapolate each level from (n/2, n).
    for (std::size_t i = 0; i < fine.evals.size(); ++i)
        res.eigenvalues[i] = fine.evals[i] + (fine.evals[i] - half.evals[i]) / 3.0;
    res.delta = res.eigenvalues[1] - res.eigenvalues[0];
    res.log_delta = std::log(res.delta);
    res.residual = drift;
    return res;
}

GridLevels double_well_levels(const DoubleWell& dw, GridSpec grid, int k) {
    const double x_max = grid.x_max > 0 ? grid.x_max : 2.5 * dw.x_min() + 2.0;
    const auto sol = solve_well_grid(dw, x_max, grid.n, k);
    GridLevels out;
    out.evals = sol.evals;
    const int n = grid.n;
    const double dx = 2.0 * x_max / (n + 1);
    out.x.resize(n);
    for (int i = 0; i < n; ++i) out.x[i] = -x_max + (i + 1) * dx;
    for (std::size_t j = 0; j < sol.evals.size(); ++j)
        out.evecs.emplace_back(sol.evecs.begin() + static_cast<std::ptrdiff_t>(j) * n,
                               sol.evecs.begin() + static_cast<std::ptrdiff_t>(j + 1) * n);
    return out;
}

// ---------------------------------------------------------------------------
// Thermal / ground-state oracle (dense, small systems)

namespace {

ThermalExpectations expectations_from_dense(const SpinModel& model, double beta,
                                            bool ground_only) {
    if (model.L > 8)
        throw CapacityError("thermal oracle limited to L <= 8 (dense full spectrum)");
    const lapack_int n = lapack_int(1) << model.L;
    auto diag = build_diagonal(model);
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    for (lapack_int z = 0; z < n; ++z) a[static_cast<std::size_t>(z) * n + z] = diag[z];
    for (int b = 0; b < model.L; ++b) {
        const lapack_int s = lapack_int(1) << b;
        for (lapack_int z = 0; z < n; ++z) {
            const lapack_int zp = z ^ s;
            if (zp > z) {
                a[static_cast<std::size_t>(zp) * n + z] -= model.gamma;
                a[static_cast<std::size_t>(z) * n + zp] -= model.gamma;
            }
        }
    }
    std::vector<double> w(n);
    check_lapack(LAPACKE_dsyev(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, w.data()),
                 "dsyev");

    // Per-state magnetization m(z).
    std::vector<double> mz(n);
    for (lapack_int z = 0; z < n; ++z)
        mz[z] = (2.0 * std::popcount(static_cast<std::uint64_t>(z)) - model.L) / model.L;

    ThermalExpectations out;
    double zsum = 0.0;
    const lapack_int n_states = ground_only ? 1 : n;
    for (lapack_int s = 0; s < n_states; ++s) {
        const double weight = ground_only ? 1.0 : std::exp(-beta * (w[s] - w[0]));
        if (weight < 1e-300) continue;
        const double* v = a.data() + static_cast<std::size_t>(s) * n;
        double sx = 0.0, m2 = 0.0;
        for (lapack_int z = 0; z < n; ++z) {
            m2 += v[z] * v[z] * mz[z] * mz[z];
            for (int b = 0; b < model.L; ++b) sx += v[z] * v[z ^ (lapack_int(1) << b)];
        }
        zsum += weight;
        out.sigma_x += weight * sx / model.L;
        out.m2 += weight * m2;
        out.energy += weight * w[s];
    }
    out.sigma_x /= zsum;
    out.m2 /= zsum;
    out.energy /= zsum;
    return out;
}

} // namespace

ThermalExpectations thermal_oracle(const SpinModel& model, double beta) {
    if (beta <= 0) throw ConfigError("thermal_oracle: beta must be positive");
    return expectations_from_dense(model, beta, false);
}

ThermalExpectations ground_state_oracle(const SpinModel& model) {
    return expectations_from_dense(model, 0.0, true);
}

} // namespace qmct
