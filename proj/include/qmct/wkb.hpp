#pragma once

// Semiclassical (discrete-WKB) machinery for mean-field spin models in the
// large-spin sector: effective potential over the magnetization, under-barrier
// momentum and velocity, tunneling action quadratures, the closed-form pair
// splitting, instanton trajectories, and the large-beta free energy surface.

#include "qmct/models.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace qmct {

// Rescaled single-barrier problem: magnetization m in (-ell, ell), total-spin
// fraction ell = 2S/L, and the rescaled energy per site at which the barrier
// is traversed.
struct WkbProblem {
    MeanFieldPotential g;
    double gamma = 0.0;
    double ell = 1.0;
    double energy = 0.0;

    static WkbProblem curie_weiss(double gamma, double h = 0.0, double ell = 1.0,
                                  double energy = 0.0);
    // Unstructured-search limit: g == 0 below the marked state, traversal at
    // e = -1 toward the terminal point m = ell = 1.
    static WkbProblem grover(double gamma = 1.0);
};

enum class ExtremumKind { LocalMin, Max, GlobalMin };

struct Extremum {
    double m = 0.0;
    double e = 0.0;
    ExtremumKind kind = ExtremumKind::LocalMin;
};

struct PotentialLandscape {
    std::vector<Extremum> extrema; // ordered by m
    double ell_c = 0.0;            // monostability boundary (h^(2/3)+G^(2/3))^(3/2)
    bool bistable = false;
};

struct SplittingForm {
    double b = 0.0;     // prefactor
    double c = 0.0;     // decay rate per site
    double delta = 0.0; // b * exp(-L c)
};

struct TrajectoryPoint {
    double s = 0.0;
    double m = 0.0;
};

struct InstantonTrajectory {
    std::vector<TrajectoryPoint> points; // wall center pinned at s = 0
    bool truncated = false;              // stopped eps short of a turning point
    double epsilon = 0.0;
    std::string note;
};

struct FreeEnergyPoint {
    double m = 0.0;
    double lambda = 0.0;
    double f = 0.0;
};

struct MeanFieldFreeEnergy {
    std::function<double(double m, double lambda)> f;
    std::vector<FreeEnergyPoint> extrema; // sorted by descending f
};

// Effective potential V(m) = -gamma*sqrt(ell^2 - m^2) - g(m); |m| <= ell.
double v_eff(const WkbProblem& p, double m);

// Under-barrier momentum k(m) >= 0; requires m strictly inside the forbidden
// region -(e + g(m)) > gamma*sqrt(ell^2 - m^2) > 0 (boundaries give 0).
double momentum_k(const WkbProblem& p, double m);

// Under-barrier velocity nu(m) = sqrt((e+g(m))^2 - gamma^2(ell^2-m^2)).
double velocity_nu(const WkbProblem& p, double m);

// Barrier-bracketing turning points (m1, m1') at p.energy. When the forbidden
// region extends to the sector edge (Grover), the right point is ell itself.
std::pair<double, double> turning_points(const WkbProblem& p);

// Tunneling action integral of k(m) dm between the turning points, with the
// square-root endpoint behavior absorbed by a sin^2 substitution.
double action(const WkbProblem& p);

// Under-barrier transit time integral of dm/nu(m); diverges logarithmically
// as p.energy approaches the well bottom, so call it strictly above e1.
double under_barrier_time(const WkbProblem& p);

// Closed-form ground-state pair splitting b(gamma)*exp(-L*c(gamma)) of the
// zero-bias pair model; requires 0 < gamma < 1.
SplittingForm splitting_closed_form(double gamma, int L);

// Extrema scan of the effective potential at fixed ell (p.energy ignored).
PotentialLandscape landscape(const WkbProblem& p);

// Integrates dm/ds = nu(m) between the turning points; the s origin is fixed
// where the path crosses the wall center (m1+m1')/2.
InstantonTrajectory instanton_trajectory(const WkbProblem& p, int n_samples = 801);

// Large-beta mean-field free energy f(m, lambda) and its stationary points.
MeanFieldFreeEnergy mean_field_free_energy(double gamma, double beta,
                                           const MeanFieldPotential& g);

} // namespace qmct
