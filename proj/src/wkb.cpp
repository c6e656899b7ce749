#include "qmct/wkb.hpp"

#include "qmct/errors.hpp"
#include "qmct/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qmct {

WkbProblem WkbProblem::curie_weiss(double gamma, double h, double ell, double energy) {
    WkbProblem p;
    p.g = MeanFieldPotential::curie_weiss(h);
    p.gamma = gamma;
    p.ell = ell;
    p.energy = energy;
    return p;
}

WkbProblem WkbProblem::grover(double gamma) {
    WkbProblem p;
    p.g = MeanFieldPotential::zero();
    p.gamma = gamma;
    p.ell = 1.0;
    p.energy = -gamma;
    return p;
}

double v_eff(const WkbProblem& p, double m) {
    if (std::abs(m) > p.ell * (1.0 + 1e-12))
        throw DomainError("v_eff: |m| exceeds ell");
    const double w = std::max(0.0, p.ell * p.ell - m * m);
    return -p.gamma * std::sqrt(w) - p.g.value(m);
}

namespace {

struct BarrierPoint {
    double sw;       // sqrt(ell^2 - m^2)
    double q;        // e + g(m)
    double radicand; // q^2 - gamma^2 (ell^2 - m^2), clipped at 0
};

BarrierPoint forbidden_point(const WkbProblem& p, double m) {
    if (std::abs(m) >= p.ell)
        throw DomainError("momentum undefined at |m| >= ell");
    const double w = p.ell * p.ell - m * m;
    const double sw = std::sqrt(w);
    const double q = p.energy + p.g.value(m);
    const double scale = std::max({1.0, std::abs(q), p.gamma * sw});
    if (q > -p.gamma * sw + 1e-11 * scale)
        throw DomainError("classically allowed point: e >= V_eff(m)");
    return {sw, q, std::max(0.0, q * q - p.gamma * p.gamma * w)};
}

} // namespace

double momentum_k(const WkbProblem& p, double m) {
    const auto b = forbidden_point(p, m);
    return std::asinh(std::sqrt(b.radicand) / (p.gamma * b.sw));
}

double velocity_nu(const WkbProblem& p, double m) {
    return std::sqrt(forbidden_point(p, m).radicand);
}

PotentialLandscape landscape(const WkbProblem& p) {
    if (p.gamma <= 0) throw ConfigError("landscape: gamma must be positive");
    PotentialLandscape out;
    const double h = p.g.deriv(0.0);
    out.ell_c = std::pow(std::pow(std::abs(h), 2.0 / 3.0) +
                             std::pow(p.gamma, 2.0 / 3.0),
                         1.5);

    const double ell = p.ell;
    auto dv = [&](double m) {
        return p.gamma * m / std::sqrt(ell * ell - m * m) - p.g.deriv(m);
    };
    const double edge = ell * (1.0 - 1e-7);
    const auto roots = find_all_roots(dv, -edge, edge, 4096, 1e-12 * ell);
    if (roots.empty())
        throw ConvergenceError("landscape: no stationary point found in (-ell, ell)");

    const double fd = 1e-5 * ell;
    for (double m : roots) {
        Extremum ex;
        ex.m = m;
        ex.e = v_eff(p, m);
        const double curv = v_eff(p, std::min(m + fd, edge)) - 2.0 * ex.e +
                            v_eff(p, std::max(m - fd, -edge));
        ex.kind = curv > 0 ? ExtremumKind::LocalMin : ExtremumKind::Max;
        out.extrema.push_back(ex);
    }
    std::sort(out.extrema.begin(), out.extrema.end(),
              [](const Extremum& a, const Extremum& b) { return a.m < b.m; });

    // Promote the deepest minimum; a right-side tie breaks toward GlobalMin so
    // the zero-bias double well still reports one of each.
    Extremum* deepest = nullptr;
    int n_minima = 0;
    for (auto& ex : out.extrema) {
        if (ex.kind != ExtremumKind::Max) {
            ++n_minima;
            if (!deepest || ex.e <= deepest->e + 1e-12 * (1.0 + std::abs(ex.e)))
                deepest = &ex;
        }
    }
    if (deepest) deepest->kind = ExtremumKind::GlobalMin;
    out.bistable = n_minima >= 2;
    return out;
}

std::pair<double, double> turning_points(const WkbProblem& p) {
    const auto lands = landscape(p);
    const double e = p.energy;
    auto phi = [&](double m) { return v_eff(p, m) - e; };
    const double tol = 1e-11 * (1.0 + std::abs(e));

    if (!lands.bistable) {
        // Single well: a barrier exists only in the pinned-endpoint sense,
        // with the forbidden region running from the minimum to the edge.
        const auto& bottom = lands.extrema.front();
        if (std::abs(bottom.e - e) > 1e-9 * (1.0 + std::abs(e)))
            throw DomainError("turning_points: no barrier at this energy");
        if (phi(p.ell * (1.0 - 1e-9)) <= 0)
            throw DomainError("turning_points: potential re-crosses the energy");
        return {bottom.m, p.ell};
    }

    // Identify barrier top and the two flanking minima.
    const Extremum* top = nullptr;
    for (const auto& ex : lands.extrema)
        if (ex.kind == ExtremumKind::Max && (!top || ex.e > top->e)) top = &ex;
    if (!top) throw DomainError("turning_points: no barrier top found");
    const Extremum *left = nullptr, *right = nullptr;
    for (const auto& ex : lands.extrema) {
        if (ex.kind == ExtremumKind::Max) continue;
        if (ex.m < top->m && (!left || ex.m > left->m)) left = &ex;
        if (ex.m > top->m && (!right || ex.m < right->m)) right = &ex;
    }
    if (!left || !right) throw DomainError("turning_points: barrier not flanked");

    const double e_start = std::max(left->e, right->e); // metastable side
    if (e < e_start - tol || e > top->e + tol)
        throw DomainError("turning_points: energy outside the barrier window");
    if (e >= top->e - tol) return {top->m, top->m}; // barrier-top limit

    double m1, m1p;
    if (std::abs(phi(left->m)) <= tol)
        m1 = left->m;
    else if (phi(left->m) < 0)
        m1 = find_root(phi, left->m, top->m);
    else
        throw DomainError("turning_points: left well above requested energy");
    if (std::abs(phi(right->m)) <= tol)
        m1p = right->m;
    else if (phi(right->m) < 0)
        m1p = find_root(phi, top->m, right->m);
    else
        throw DomainError("turning_points: right well above requested energy");
    return {m1, m1p};
}

namespace {

// Integrate F(m) dm between the turning points through m = m1 + D sin^2(t),
// which flattens the square-root vanishing of the integrand at both ends.
double barrier_integral(const WkbProblem& p,
                        const std::function<double(double)>& f, double rel_tol) {
    const auto [m1, m1p] = turning_points(p);
    const double d = m1p - m1;
    if (d <= 0) return 0.0; // coincident turning points at the barrier top
    auto integrand = [&](double t) {
        const double st = std::sin(t);
        const double m = m1 + d * st * st;
        if (m <= m1 || m >= m1p) return 0.0;
        return f(m) * d * std::sin(2.0 * t);
    };
    return integrate(integrand, 0.0, std::numbers::pi / 2, rel_tol, 1e-13).value;
}

} // namespace

double action(const WkbProblem& p) {
    return barrier_integral(
        p, [&](double m) { return momentum_k(p, m); }, 1e-12);
}

double under_barrier_time(const WkbProblem& p) {
    return barrier_integral(
        p, [&](double m) { return 1.0 / velocity_nu(p, m); }, 1e-8);
}

SplittingForm splitting_closed_form(double gamma, int L) {
    if (gamma <= 0 || gamma >= 1)
        throw DomainError("splitting_closed_form: requires 0 < gamma < 1");
    if (L < 1) throw ConfigError("splitting_closed_form: L must be >= 1");
    const double s = std::sqrt(1.0 - gamma * gamma);
    SplittingForm out;
    out.c = 0.5 * std::log((1.0 + s) / (1.0 - s)) - s;
    out.b = std::sqrt(32.0 * L / std::numbers::pi) * std::pow(1.0 - gamma, 1.25) /
            (1.0 + s);
    out.delta = out.b * std::exp(-L * out.c);
    return out;
}

InstantonTrajectory instanton_trajectory(const WkbProblem& p, int n_samples) {
    if (n_samples < 16) throw ConfigError("instanton_trajectory: too few samples");
    const auto [m1, m1p] = turning_points(p);
    const double d = m1p - m1;
    if (d <= 0) throw DomainError("instanton_trajectory: barrier has zero width");
    const double center = 0.5 * (m1 + m1p);

    InstantonTrajectory out;
    out.epsilon = 1e-7 * d;
    out.truncated = true;
    out.note = "path truncated where the velocity vanishes at the turning points";

    // Uniform grid in the sin^2 variable, clipped eps short of each end; the
    // cumulative time picks up the logarithmic slowdown automatically.
    const double t0 = std::asin(std::sqrt(out.epsilon / d));
    const double t1 = std::numbers::pi / 2 - t0;
    std::vector<double> ms(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double t = t0 + (t1 - t0) * i / (n_samples - 1);
        const double st = std::sin(t);
        ms[i] = m1 + d * st * st;
    }

    out.points.resize(n_samples);
    out.points[0] = {0.0, ms[0]};
    for (int i = 1; i < n_samples; ++i) {
        const double seg =
            integrate([&](double m) { return 1.0 / velocity_nu(p, m); }, ms[i - 1],
                      ms[i], 1e-9, 1e-13)
                .value;
        out.points[i] = {out.points[i - 1].s + seg, ms[i]};
    }

    // Pin s = 0 at the wall center.
    double s_center = out.points.front().s;
    for (int i = 0; i + 1 < n_samples; ++i) {
        const double a = out.points[i].m - center, b = out.points[i + 1].m - center;
        if (a <= 0 && b >= 0) {
            const double frac = (b - a) > 0 ? -a / (b - a) : 0.0;
            s_center = out.points[i].s + frac * (out.points[i + 1].s - out.points[i].s);
            break;
        }
    }
    for (auto& pt : out.points) pt.s -= s_center;
    return out;
}

MeanFieldFreeEnergy mean_field_free_energy(double gamma, double beta,
                                           const MeanFieldPotential& g) {
    if (beta <= 0) throw ConfigError("mean_field_free_energy: beta must be positive");
    MeanFieldFreeEnergy out;
    const auto gv = g.value;
    out.f = [gamma, beta, gv](double m, double lambda) {
        const double x = beta * std::hypot(lambda, gamma);
        // log(2 cosh x) evaluated overflow-free.
        const double log2cosh = x + std::log1p(std::exp(-2.0 * x));
        return lambda * m - gv(m) - log2cosh / beta;
    };

    // Zero-temperature stationarity: lambda = g'(m), m = lambda/sqrt(lambda^2+G^2).
    auto stat = [&](double m) {
        const double lam = g.deriv(m);
        return m - lam / std::hypot(lam, gamma);
    };
    for (double m : find_all_roots(stat, -1.0, 1.0, 2048, 1e-13)) {
        FreeEnergyPoint pt;
        pt.m = m;
        pt.lambda = g.deriv(m);
        pt.f = pt.lambda * m - g.value(m) - std::hypot(pt.lambda, gamma);
        out.extrema.push_back(pt);
    }
    std::sort(out.extrema.begin(), out.extrema.end(),
              [](const FreeEnergyPoint& a, const FreeEnergyPoint& b) {
                  return a.f > b.f;
              });
    return out;
}

} // namespace qmct
