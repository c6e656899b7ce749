#include "qmct/models.hpp"

#include "qmct/errors.hpp"

#include <cmath>

namespace qmct {

MeanFieldPotential MeanFieldPotential::curie_weiss(double h) {
    return {[h](double m) { return 0.5 * m * m + h * m; },
            [h](double m) { return m + h; }};
}

MeanFieldPotential MeanFieldPotential::zero() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

std::string to_string(Topology t) {
    switch (t) {
        case Topology::Chain: return "chain";
        case Topology::FullyConnected: return "fully-connected";
        case Topology::MeanFieldPSpin: return "mean-field";
    }
    return "?";
}

Topology topology_from_string(const std::string& s) {
    if (s == "chain") return Topology::Chain;
    if (s == "fully-connected" || s == "fc") return Topology::FullyConnected;
    if (s == "mean-field") return Topology::MeanFieldPSpin;
    throw ConfigError("unknown topology: " + s);
}

SpinModel SpinModel::chain(int L, double gamma, double h, bool periodic) {
    if (L < 1) throw ConfigError("SpinModel: L must be >= 1");
    SpinModel m;
    m.topology = Topology::Chain;
    m.L = L;
    m.gamma = gamma;
    m.h = h;
    m.spatial_periodic = periodic;
    return m;
}

SpinModel SpinModel::fully_connected(int L, double gamma, double h) {
    if (L < 1) throw ConfigError("SpinModel: L must be >= 1");
    SpinModel m;
    m.topology = Topology::FullyConnected;
    m.L = L;
    m.gamma = gamma;
    m.h = h;
    m.g = MeanFieldPotential::curie_weiss(h);
    return m;
}

SpinModel SpinModel::mean_field(int L, double gamma, MeanFieldPotential g) {
    if (L < 1) throw ConfigError("SpinModel: L must be >= 1");
    SpinModel m;
    m.topology = Topology::MeanFieldPSpin;
    m.L = L;
    m.gamma = gamma;
    m.g = std::move(g);
    return m;
}

std::vector<std::pair<int, int>> chain_bonds(const SpinModel& model) {
    std::vector<std::pair<int, int>> bonds;
    bonds.reserve(model.L);
    for (int i = 0; i + 1 < model.L; ++i) bonds.emplace_back(i, i + 1);
    if (model.spatial_periodic && model.L > 2) bonds.emplace_back(model.L - 1, 0);
    return bonds;
}

double classical_energy(const SpinModel& model, std::span<const std::int8_t> spins) {
    if (static_cast<int>(spins.size()) != model.L)
        throw ConfigError("classical_energy: expected " + std::to_string(model.L) +
                          " spins, got " + std::to_string(spins.size()));
    if (model.is_mean_field()) {
        long sum = 0;
        for (auto s : spins) sum += s;
        return classical_energy_m(model, static_cast<double>(sum) / model.L);
    }
    double e = 0.0;
    for (auto [i, j] : chain_bonds(model))
        e -= static_cast<double>(spins[i]) * spins[j];
    for (auto s : spins) e -= model.h * s;
    return e;
}

double classical_energy_m(const SpinModel& model, double m) {
    if (!model.is_mean_field())
        throw DomainError("classical_energy_m: chain energy is not a function of m alone");
    return -model.L * model.g.value(m);
}

double barrier_height(const SpinModel& model) {
    switch (model.topology) {
        case Topology::Chain:
            return 4.0; // two domain walls at 2J each
        case Topology::FullyConnected:
        case Topology::MeanFieldPSpin:
            return -model.L * (model.g.value(0.0) - model.g.value(1.0));
    }
    return 0.0;
}

double DoubleWell::x_min() const { return std::sqrt(1.0 / (2.0 * lambda)); }

double DoubleWell::well_separation() const { return 2.0 * x_min(); }

double DoubleWell::barrier_height() const { return 1.0 / (4.0 * lambda); }

double potential(const DoubleWell& dw, double x) {
    const double x2 = x * x;
    return dw.lambda * x2 * x2 - x2;
}

double potential_grad(const DoubleWell& dw, double x) {
    return 4.0 * dw.lambda * x * x * x - 2.0 * x;
}

} // namespace qmct
