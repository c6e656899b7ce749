#pragma once

// Monte Carlo updates and estimators for spin paths: single-spin Metropolis
// sweeps on the discrete lattice, and worldline cluster updates (per-site
// Swendsen-Wang or Wolff flavor) in both discrete and continuous time.

#include "qmct/models.hpp"
#include "qmct/rng.hpp"
#include "qmct/spin_path.hpp"
#include "qmct/sweep_stats.hpp"

namespace qmct {

enum class ClusterFlavor { SwendsenWang, Wolff };

// L*P single-spin Metropolis attempts against the discrete path weight.
SweepStats sweep_local(DiscretePath& path, const SpinModel& model, Rng& rng);

// One worldline decomposition per site: tau bonds between aligned neighbors
// activate with probability 1-exp(-2 k_tau); every resulting cluster (or one
// random cluster for Wolff) is reassigned by a heat-bath draw on the spatial
// coupling change, which stays ergodic even when the spatial change is zero.
SweepStats sweep_cluster(DiscretePath& path, const SpinModel& model, Rng& rng,
                         ClusterFlavor flavor = ClusterFlavor::SwendsenWang);

// Continuous-time analogue: segments are bounded by existing walls plus
// Poisson cuts of rate Gamma; each segment is reassigned by a heat-bath
// draw on the integrated spatial-energy change.
SweepStats sweep_cluster(ContinuousTimePath& path, const SpinModel& model, Rng& rng,
                         ClusterFlavor flavor = ClusterFlavor::SwendsenWang);

// Per-site transverse magnetization estimators.
double sigma_x_estimate(const DiscretePath& path, const SpinModel& model);
double sigma_x_estimate(const ContinuousTimePath& path, const SpinModel& model);

// Imaginary-time averaged squared magnetization (1/P) sum_t m(t)^2.
double m2_estimate(const DiscretePath& path);
double m2_estimate(const ContinuousTimePath& path);

// Interior (central-slice) estimators for open-boundary ground-state
// projection, where only the middle of the path samples the ground state.
double interior_m2(const DiscretePath& path);
double interior_sigma_x(const DiscretePath& path, const SpinModel& model);
double interior_m2(const ContinuousTimePath& path);
double interior_sigma_x(const ContinuousTimePath& path, const SpinModel& model);

} // namespace qmct
