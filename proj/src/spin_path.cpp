#include "qmct/spin_path.hpp"

#include "qmct/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qmct {

std::string to_string(Boundary b) {
    return b == Boundary::Periodic ? "periodic" : "open";
}

Boundary boundary_from_string(const std::string& s) {
    if (s == "periodic") return Boundary::Periodic;
    if (s == "open") return Boundary::Open;
    throw ConfigError("unknown boundary: " + s);
}

double DiscretePath::slice_magnetization(int t) const {
    int sum = 0;
    for (int i = 0; i < L; ++i) sum += spin(i, t);
    return static_cast<double>(sum) / L;
}

std::int8_t ContinuousTimePath::spin_at(int i, double tau) const {
    const auto& w = walls[i];
    const auto n = std::upper_bound(w.begin(), w.end(), tau) - w.begin();
    return (n % 2 == 0) ? spin0[i] : static_cast<std::int8_t>(-spin0[i]);
}

std::size_t ContinuousTimePath::total_walls() const {
    std::size_t n = 0;
    for (const auto& w : walls) n += w.size();
    return n;
}

DiscretePath init_polarized(const SpinModel& model, double beta, int P,
                            Boundary boundary, int sign) {
    if (beta <= 0) throw ConfigError("init_polarized: beta must be positive");
    if (P < 2) throw ConfigError("init_polarized: need at least 2 slices");
    if (model.gamma <= 0)
        throw ConfigError("init_polarized: gamma must be positive for k_tau");
    if (sign != 1 && sign != -1) throw ConfigError("init_polarized: sign must be +-1");
    DiscretePath path;
    path.L = model.L;
    path.P = P;
    path.beta = beta;
    path.boundary = boundary;
    const double u = model.gamma * beta / P;
    path.k_tau = 0.5 * std::log(1.0 / std::tanh(u));
    path.k_space_scale = beta / P;
    path.spins.assign(static_cast<std::size_t>(model.L) * P,
                      static_cast<std::int8_t>(sign));
    return path;
}

ContinuousTimePath init_polarized_ct(const SpinModel& model, double beta,
                                     Boundary boundary, int sign) {
    if (beta <= 0) throw ConfigError("init_polarized_ct: beta must be positive");
    if (sign != 1 && sign != -1)
        throw ConfigError("init_polarized_ct: sign must be +-1");
    ContinuousTimePath path;
    path.L = model.L;
    path.beta = beta;
    path.boundary = boundary;
    path.spin0.assign(model.L, static_cast<std::int8_t>(sign));
    path.walls.assign(model.L, {});
    return path;
}

double reversal_fraction(const DiscretePath& path, double threshold) {
    const double cut = -threshold + 1e-12;
    int reversed = 0;
    for (int t = 0; t < path.P; ++t)
        if (path.slice_magnetization(t) <= cut) ++reversed;
    return static_cast<double>(reversed) / path.P;
}

double reversal_fraction(const ContinuousTimePath& path, double threshold) {
    // Sweep the merged wall events, accumulating the measure of imaginary
    // time where the instantaneous magnetization is at or below -threshold.
    struct Event {
        double t;
        int site;
    };
    std::vector<Event> events;
    for (int i = 0; i < path.L; ++i)
        for (double t : path.walls[i]) events.push_back({t, i});
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.t < b.t; });

    const double cut = -threshold + 1e-12;
    double measure = 0.0;
    double prev = 0.0;
    std::vector<std::int8_t> cur(path.spin0);
    int sum = 0;
    for (int i = 0; i < path.L; ++i) sum += cur[i];
    for (const auto& ev : events) {
        if (static_cast<double>(sum) / path.L <= cut) measure += ev.t - prev;
        sum -= 2 * cur[ev.site];
        cur[ev.site] = static_cast<std::int8_t>(-cur[ev.site]);
        prev = ev.t;
    }
    if (static_cast<double>(sum) / path.L <= cut) measure += path.beta - prev;
    return measure / path.beta;
}

std::vector<double> slice_magnetization_profile(const DiscretePath& path, int bins) {
    if (bins <= 0) bins = path.P;
    std::vector<double> prof(bins);
    for (int b = 0; b < bins; ++b) {
        const int t = std::min(path.P - 1, b * path.P / bins);
        prof[b] = path.slice_magnetization(t);
    }
    return prof;
}

std::vector<double> slice_magnetization_profile(const ContinuousTimePath& path,
                                                int bins) {
    if (bins <= 0) bins = 256;
    std::vector<double> prof(bins);
    for (int b = 0; b < bins; ++b) {
        const double tau = (b + 0.5) * path.beta / bins;
        int sum = 0;
        for (int i = 0; i < path.L; ++i) sum += path.spin_at(i, tau);
        prof[b] = static_cast<double>(sum) / path.L;
    }
    return prof;
}

double log_weight(const DiscretePath& path, const SpinModel& model) {
    double lw = 0.0;
    const int bonds = path.boundary == Boundary::Periodic ? path.P : path.P - 1;
    for (int i = 0; i < path.L; ++i)
        for (int t = 0; t < bonds; ++t)
            lw += path.k_tau * path.spin(i, t) * path.spin(i, (t + 1) % path.P);
    std::vector<std::int8_t> slice(path.L);
    for (int t = 0; t < path.P; ++t) {
        for (int i = 0; i < path.L; ++i) slice[i] = path.spin(i, t);
        lw -= path.k_space_scale * classical_energy(model, slice);
    }
    return lw;
}

} // namespace qmct
