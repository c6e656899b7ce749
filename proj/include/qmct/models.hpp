#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qmct {

// ---------------------------------------------------------------------------
// Mean-field potential g(m): the per-spin classical energy functional of the
// permutation-symmetric models, E = -L*g(m).  Carried as value/derivative
// pair so the WKB machinery can consume arbitrary smooth g.

struct MeanFieldPotential {
    std::function<double(double)> value;
    std::function<double(double)> deriv;

    // Curie-Weiss g(m) = m^2/2 + h*m.
    static MeanFieldPotential curie_weiss(double h = 0.0);
    // Degenerate limit used by the Grover analysis: g == 0 for m < 1, with
    // the target state entering only through the terminal turning point.
    static MeanFieldPotential zero();
};

// ---------------------------------------------------------------------------
// Quantum spin models: H = -Gamma*sum sigma_x - sum J_ij sigma_z sigma_z
//                          - h*sum sigma_z

enum class Topology : std::uint8_t { Chain, FullyConnected, MeanFieldPSpin };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);

struct SpinModel {
    Topology topology = Topology::Chain;
    int L = 1;
    double gamma = 1.0;
    double h = 0.0;
    // Chain only: wraparound bond between sites L-1 and 0.  Periodic is the
    // default; all quantitative scaling targets in the test suite are pinned
    // to the periodic chain (the open variant's gap exponents differ and are
    // exercised separately).
    bool spatial_periodic = true;
    // Mean-field models: classical energy is exactly -L*g(m).  For
    // FullyConnected this is Curie-Weiss with the model's h folded in,
    // equivalent to J_ij = 1/(2L) over ordered pairs i != j.
    MeanFieldPotential g;

    static SpinModel chain(int L, double gamma, double h = 0.0,
                           bool periodic = true);
    static SpinModel fully_connected(int L, double gamma, double h = 0.0);
    static SpinModel mean_field(int L, double gamma, MeanFieldPotential g);

    bool is_mean_field() const { return topology != Topology::Chain; }
};

// Chain bond list, each bond exactly once with strength J = 1.  The
// wraparound bond exists only for periodic chains with L > 2 (at L = 2 it
// would duplicate the single physical bond).  ED and the QMC engines must
// agree on this enumeration.
std::vector<std::pair<int, int>> chain_bonds(const SpinModel& model);

// Diagonal (sigma_z basis) energy of a spin configuration.
double classical_energy(const SpinModel& model, std::span<const std::int8_t> spins);

// Mean-field classical energy as a function of magnetization only.
double classical_energy_m(const SpinModel& model, double m);

// Height of the classical barrier crossed during a thermal reversal:
// 4 for the chain (an instanton/anti-instanton domain-wall pair, 2J each),
// L/2 for the fully connected model (L*g(1) - L*g(0) at h=0).
double barrier_height(const SpinModel& model);

// ---------------------------------------------------------------------------
// Continuous-space double well V(x) = lambda*x^4 - x^2, H = p^2/(2 mass) + V.
// mass = 1/2 matches the reference form H = p^2 + lambda*x^4 - x^2.

struct DoubleWell {
    double lambda = 0.2;
    double mass = 0.5;

    double x_min() const;           // right minimum, +sqrt(1/(2 lambda))
    double well_separation() const; // d = 2*x_min
    double barrier_height() const;  // Delta V = 1/(4 lambda)
};

double potential(const DoubleWell& dw, double x);
double potential_grad(const DoubleWell& dw, double x);

} // namespace qmct
