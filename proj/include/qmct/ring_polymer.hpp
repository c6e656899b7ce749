#pragma once

#include <vector>

#include "qmct/models.hpp"
#include "qmct/rng.hpp"
#include "qmct/sweep_stats.hpp"

namespace qmct {

// Closed imaginary-time path (ring polymer) for a single continuous degree of
// freedom at temperature T, discretized into P beads.  Neighboring beads are
// coupled by harmonic springs of stiffness mass*(P*T)^2; each bead feels the
// physical potential reduced by 1/P.  The same configuration object serves
// both the Metropolis sampler (pimc_sweep) and the Langevin integrator
// (pimd_step); the momenta `pi` are used only by the latter.
struct RingPolymer {
    std::vector<double> x;   // bead positions, size P
    std::vector<double> pi;  // bead momenta (velocity units), size P
    double T = 1.0;          // temperature (k_B = 1)
    int P = 1;               // number of beads
    double mass = 0.5;

    double spring_k() const { return mass * (P * T) * (P * T); }

    // All beads at x0 with zero momentum.
    static RingPolymer polarized(double x0, int P, double T, double mass);
};

// Parameters of the damped Langevin update.  Stability of the momentum
// recursion requires delta * gamma_friction < 2 (the drift factor
// 1 - delta*gamma_friction must stay above -1); validate() enforces this
// along with positivity.
struct LangevinParams {
    double delta = 0.005;          // time step
    double gamma_friction = 10.0;  // friction coefficient

    void validate() const;
};

// Euclidean action of the ring:  sum_k [ (m*P*T/2)(x_k - x_{k+1})^2
// + V(x_k)/(P*T) ]  with cyclic indexing.  The Boltzmann weight sampled by
// pimc_sweep is exp(-ring_action).
double ring_action(const RingPolymer& poly, const DoubleWell& well);

// One Metropolis pass: P single-bead moves in sequence, bead k proposed at
// x_k + step*z with z uniform in [-1, 1], accepted with prob
// min(1, exp(-delta_action)).
SweepStats pimc_sweep(RingPolymer& poly, const DoubleWell& well, double step,
                      Rng& rng);

// One step of the damped Langevin dynamics whose stationary distribution is
// the same ring Boltzmann weight:
//   pi_k' = (1 - delta*gamma) pi_k + (delta/m) f_k + sqrt(2*gamma*T*delta/m) eta_k
//   x_k'  = x_k + pi_k' delta
// with force f_k = -V'(x_k)/P + P*T^2*m*(x_{k+1} - 2 x_k + x_{k-1}) and eta_k
// independent standard normals.  The position update uses the freshly
// updated momentum (semi-implicit Euler), which is what keeps the harmonic
// modes stable at delta*gamma < 2.  Throws StabilityError if a coordinate
// leaves [-1e8, 1e8] or becomes non-finite.
void pimd_step(RingPolymer& poly, const DoubleWell& well,
               const LangevinParams& params, Rng& rng);

// Draw all momenta from the stationary Maxwell distribution <pi^2> = T/m.
void thermalize_momenta(RingPolymer& poly, Rng& rng);

// Fraction of beads sitting in the left well, i.e. with x_k <= -x_min/2
// (boundary included).
double well_reversal_fraction(const RingPolymer& poly, const DoubleWell& well);

// Adjust the Metropolis step during warmup toward ~50% acceptance: runs
// `sweeps` passes, scaling the step up (acceptance > target) or down
// (acceptance < target) after each pass, and returns the final step, which
// the caller then freezes for the measurement phase.
double tune_pimc_step(RingPolymer& poly, const DoubleWell& well, Rng& rng,
                      int sweeps = 100, double target = 0.5,
                      double initial_step = 0.5);

} // namespace qmct
