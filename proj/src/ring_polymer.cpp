#include "qmct/ring_polymer.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "qmct/errors.hpp"

namespace qmct {

RingPolymer RingPolymer::polarized(double x0, int P, double T, double mass) {
    if (P < 1) throw ConfigError("RingPolymer: P must be >= 1");
    if (T <= 0.0) throw ConfigError("RingPolymer: T must be > 0");
    if (mass <= 0.0) throw ConfigError("RingPolymer: mass must be > 0");
    RingPolymer poly;
    poly.T = T;
    poly.P = P;
    poly.mass = mass;
    poly.x.assign(static_cast<std::size_t>(P), x0);
    poly.pi.assign(static_cast<std::size_t>(P), 0.0);
    return poly;
}

void LangevinParams::validate() const {
    if (!(delta > 0.0)) throw ConfigError("LangevinParams: delta must be > 0");
    if (!(gamma_friction > 0.0))
        throw ConfigError("LangevinParams: gamma_friction must be > 0");
    if (!(delta * gamma_friction < 2.0))
        throw ConfigError(
            "LangevinParams: delta * gamma_friction must be < 2 for the "
            "momentum recursion to be stable");
}

double ring_action(const RingPolymer& poly, const DoubleWell& well) {
    const int P = poly.P;
    const double spring = 0.5 * poly.mass * P * poly.T;  // (m P T / 2)
    const double pot_scale = 1.0 / (P * poly.T);
    double s = 0.0;
    for (int k = 0; k < P; ++k) {
        const double d = poly.x[k] - poly.x[(k + 1) % P];
        s += spring * d * d + pot_scale * potential(well, poly.x[k]);
    }
    return s;
}

SweepStats pimc_sweep(RingPolymer& poly, const DoubleWell& well, double step,
                      Rng& rng) {
    if (!(step > 0.0)) throw ConfigError("pimc_sweep: step must be > 0");
    const int P = poly.P;
    // A one-bead ring has no spring term: the bead is its own neighbor, so
    // the bond length is identically zero however the bead moves.
    const double spring = P > 1 ? 0.5 * poly.mass * P * poly.T : 0.0;
    const double pot_scale = 1.0 / (P * poly.T);
    SweepStats stats;
    for (int k = 0; k < P; ++k) {
        const double old_x = poly.x[k];
        const double new_x = old_x + step * (2.0 * rng.uniform() - 1.0);
        const double left = poly.x[(k + P - 1) % P];
        const double right = poly.x[(k + 1) % P];
        const double dl = new_x - left;
        const double dr = new_x - right;
        const double ol = old_x - left;
        const double orr = old_x - right;
        double dS = spring * (dl * dl + dr * dr - ol * ol - orr * orr) +
                    pot_scale * (potential(well, new_x) - potential(well, old_x));
        ++stats.attempted;
        if (dS <= 0.0 || rng.uniform() < std::exp(-dS)) {
            poly.x[k] = new_x;
            ++stats.accepted;
        }
    }
    return stats;
}

void pimd_step(RingPolymer& poly, const DoubleWell& well,
               const LangevinParams& params, Rng& rng) {
    params.validate();
    const int P = poly.P;
    const double m = poly.mass;
    const double delta = params.delta;
    const double drift = 1.0 - delta * params.gamma_friction;
    const double kick = delta / m;
    const double noise = std::sqrt(2.0 * params.gamma_friction * poly.T * delta / m);
    const double spring_f = P * poly.T * poly.T * m;  // P T^2 m
    const double inv_p = 1.0 / P;

    // Forces depend on the configuration before the update, so compute them
    // all first; the position update then uses the new momenta.
    static thread_local std::vector<double> force;
    force.assign(static_cast<std::size_t>(P), 0.0);
    for (int k = 0; k < P; ++k) {
        const double left = poly.x[(k + P - 1) % P];
        const double right = poly.x[(k + 1) % P];
        force[k] = -potential_grad(well, poly.x[k]) * inv_p +
                   spring_f * (right - 2.0 * poly.x[k] + left);
    }
    bool ok = true;
    for (int k = 0; k < P; ++k) {
        const double new_pi = drift * poly.pi[k] + kick * force[k] +
                              noise * rng.gaussian();
        const double new_x = poly.x[k] + new_pi * delta;
        poly.pi[k] = new_pi;
        poly.x[k] = new_x;
        if (!(std::abs(new_x) <= 1e8) || !std::isfinite(new_pi)) ok = false;
    }
    if (!ok)
        throw StabilityError(
            "pimd_step: trajectory diverged (coordinate left [-1e8, 1e8] or "
            "became non-finite); reduce delta or increase friction");
}

void thermalize_momenta(RingPolymer& poly, Rng& rng) {
    const double sigma = std::sqrt(poly.T / poly.mass);
    for (auto& p : poly.pi) p = sigma * rng.gaussian();
}

double well_reversal_fraction(const RingPolymer& poly, const DoubleWell& well) {
    const double cut = -0.5 * well.x_min();
    int n = 0;
    for (double xk : poly.x)
        if (xk <= cut) ++n;
    return static_cast<double>(n) / static_cast<double>(poly.P);
}

double tune_pimc_step(RingPolymer& poly, const DoubleWell& well, Rng& rng,
                      int sweeps, double target, double initial_step) {
    double step = initial_step;
    for (int s = 0; s < sweeps; ++s) {
        const SweepStats st = pimc_sweep(poly, well, step, rng);
        const double rate =
            static_cast<double>(st.accepted) / static_cast<double>(st.attempted);
        // Multiplicative feedback with a shrinking gain so the step settles.
        const double gain = 0.2 / (1.0 + s * 0.05);
        step *= std::exp(gain * (rate - target));
        step = std::min(std::max(step, 1e-6), 1e3);
    }
    return step;
}

} // namespace qmct
