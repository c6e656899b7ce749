#pragma once

// Imaginary-time path representations for transverse-field spin models:
// a discrete Suzuki-Trotter lattice (L sites x P slices) and a continuous-time
// worldline form (per-site domain-wall lists). Both support periodic
// (thermal) and open (ground-state projection) boundaries in imaginary time.

#include "qmct/models.hpp"

#include <cstdint>
#include <vector>

namespace qmct {

enum class Boundary { Periodic, Open };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

struct DiscretePath {
    int L = 0;
    int P = 0;
    double beta = 0.0;
    Boundary boundary = Boundary::Periodic;
    double k_tau = 0.0;         // imaginary-time bond coupling, 0.5*ln coth(G*beta/P)
    double k_space_scale = 0.0; // beta/P, multiplies the classical couplings
    std::vector<std::int8_t> spins; // site-major: spins[i*P + t]

    std::int8_t& spin(int i, int t) { return spins[static_cast<std::size_t>(i) * P + t]; }
    std::int8_t spin(int i, int t) const {
        return spins[static_cast<std::size_t>(i) * P + t];
    }
    // Magnetization of slice t in [-1, 1].
    double slice_magnetization(int t) const;
};

struct ContinuousTimePath {
    int L = 0;
    double beta = 0.0;
    Boundary boundary = Boundary::Periodic;
    std::vector<std::int8_t> spin0;          // worldline value at tau = 0
    std::vector<std::vector<double>> walls;  // sorted flip times per site, in [0, beta)

    // Spin of site i at imaginary time tau (wall at tau flips at that instant).
    std::int8_t spin_at(int i, double tau) const;
    std::size_t total_walls() const;
};

// Fully polarized starting states (every slice / worldline at `sign`).
DiscretePath init_polarized(const SpinModel& model, double beta, int P,
                            Boundary boundary, int sign);
ContinuousTimePath init_polarized_ct(const SpinModel& model, double beta,
                                     Boundary boundary, int sign);

// Fraction of imaginary time with m(tau) <= -threshold (inclusive).
double reversal_fraction(const DiscretePath& path, double threshold);
double reversal_fraction(const ContinuousTimePath& path, double threshold);

// m(tau) sampled on a uniform grid of `bins` points.
std::vector<double> slice_magnetization_profile(const DiscretePath& path, int bins);
std::vector<double> slice_magnetization_profile(const ContinuousTimePath& path,
                                                int bins);

// Log of the classical Boltzmann weight of a discrete path (tau bonds plus
// beta/P-scaled classical energy per slice). Exposed for balance tests.
double log_weight(const DiscretePath& path, const SpinModel& model);

} // namespace qmct
