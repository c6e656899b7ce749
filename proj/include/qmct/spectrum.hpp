#pragma once

#include "qmct/models.hpp"

#include <cstdint>
#include <vector>

namespace qmct {

enum class SpectrumMethod : std::uint8_t {
    DenseFull,
    SparseIterative,
    SymmetricSector,
    GridSchrodinger
};

std::string to_string(SpectrumMethod m);

struct SpectrumResult {
    std::vector<double> eigenvalues; // ascending, the k lowest
    double delta = 0.0;              // E1 - E0 (may underflow to 0; see log_delta)
    double log_delta = 0.0;          // ln(E1 - E0), reliable for tiny splittings
    SpectrumMethod method = SpectrumMethod::DenseFull;
    double residual = 0.0;           // max eigen-residual / certified error bound
};

// Full 2^L diagonalization (LAPACK dsyevr on the explicit matrix).
// Capacity limit L <= 12.
SpectrumResult gap_dense(const SpinModel& model, int k = 4);

// Matrix-free block Lanczos (width 2, full reorthogonalization, exact
// residual checks, tolerance 1e-10) for L <= 24.  Resolves near-degenerate
// tunneling pairs.
SpectrumResult gap_sparse(const SpinModel& model, int k = 2);

// Maximum-spin sector S = L/2 of a permutation-symmetric model: (L+1)
// dimensional tridiagonal problem; Delta here equals the full-space ground
// splitting.
SpectrumResult gap_symmetric_sector(const SpinModel& model, int k = 2);

struct SymmetricSectorHamiltonian {
    double S = 0.0;                   // total spin, = L/2
    std::vector<double> diagonal;     // -L*g(2M/L) for M = -S..S
    std::vector<double> offdiagonal;  // -Gamma*sqrt((S+M)(S-M+1)) between M-1 and M
};

SymmetricSectorHamiltonian build_symmetric_sector(const SpinModel& model);

// Ground-sector eigenvector components (sign-normalized), for
// Perron-Frobenius positivity checks.
std::vector<double> symmetric_sector_ground_vector(const SpinModel& model);

// Arbitrary-precision variant (MPFR Sturm bisection) for splittings far
// below double-precision underflow (Delta ~ e^{-cL} at L up to ~1000).
// digits10 <= 0 selects the precision automatically from a closed-form
// exponent estimate (Curie-Weiss) or a double-precision pilot solve.
SpectrumResult gap_symmetric_sector_hp(const SpinModel& model, int digits10 = 0);

// ---------------------------------------------------------------------------
// 1D grid Schrodinger solver for the double well (the in-repo gap oracle).

struct GridSpec {
    double x_max = 0.0; // <= 0 selects the default 2.5*x_min + 2
    int n = 4096;       // interior grid points
};

// Second-order central differences with Dirichlet walls at +-x_max; result
// is Richardson-extrapolated from (n/2, n) and certified: if halving the
// resolution moves Delta by more than 0.1% an AccuracyError is thrown.
SpectrumResult gap_double_well(const DoubleWell& dw, GridSpec grid = {}, int k = 2);

// Raw levels + grid eigenfunctions (single resolution), for parity checks.
struct GridLevels {
    std::vector<double> x;
    std::vector<double> evals;
    std::vector<std::vector<double>> evecs;
};
GridLevels double_well_levels(const DoubleWell& dw, GridSpec grid, int k);

// ---------------------------------------------------------------------------
// Exact thermal/ground-state expectations from dense spectra; the oracle the
// QMC sampling tests compare against.  Capacity limit L <= 8.

struct ThermalExpectations {
    double sigma_x = 0.0; // (1/L) sum_i <sigma^x_i>
    double m2 = 0.0;      // <((1/L) sum_i sigma^z_i)^2>
    double energy = 0.0;  // <H>
};

ThermalExpectations thermal_oracle(const SpinModel& model, double beta);
ThermalExpectations ground_state_oracle(const SpinModel& model);

} // namespace qmct
