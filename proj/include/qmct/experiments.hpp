#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qmct/first_passage.hpp"
#include "qmct/fitting.hpp"
#include "qmct/spectrum.hpp"
#include "qmct/wkb.hpp"

namespace qmct {

// ---------------------------------------------------------------------------
// Exact-diagonalization gap scan: Delta(L) plus the exponential fit of
// 1/Delta vs L, i.e. gap_fit.slope = d(-ln Delta)/dL.

struct GapScanPoint {
    int L = 0;
    SpectrumResult spectrum;
};

struct GapScanResult {
    std::vector<GapScanPoint> points;
    FitResult gap_fit;
};

GapScanResult ed_gap_scan(const std::function<SpinModel(int)>& make_model,
                          const std::vector<int>& Ls, double window_lo,
                          double window_hi);

// ---------------------------------------------------------------------------
// WKB summary for one (gamma, h): quadrature barrier action at the
// degenerate-minimum energy, closed forms when h = 0, and the consistency
// deviation between them (the quadrature action equals twice the per-site
// decay rate).

struct WkbReport {
    double gamma = 0.0;
    double h = 0.0;
    PotentialLandscape potential;
    double action_quadrature = 0.0;  // a(e1, ell=1)
    bool has_closed_form = false;    // h == 0, 0 < gamma < 1
    double c_closed = 0.0;           // per-site decay rate c(gamma)
    double cross_check_dev = 0.0;    // |action/2 - c| when closed form exists
};

WkbReport wkb_report(double gamma, double h);

// ---------------------------------------------------------------------------
// High-precision gap decay of the fully connected model: |ln Delta|/L over
// large L, extrapolated in 1/L against the closed-form rate.

struct HpConvergencePoint {
    int L = 0;
    double log_delta = 0.0;  // ln Delta
    double c_over_l = 0.0;   // |ln Delta| / L
};

struct HpConvergenceResult {
    std::vector<HpConvergencePoint> points;
    double c_extrapolated = 0.0;  // intercept of c_over_l vs 1/L
    double correction_slope = 0.0;
    double c_closed = 0.0;
};

HpConvergenceResult hp_convergence_scan(double gamma, const std::vector<int>& Ls);

// ---------------------------------------------------------------------------
// First-passage size scan: one first-passage ensemble per system size, the
// per-size summaries, and the bootstrap exponential fit of mean xi vs L in
// [window_lo, window_hi].  Per-size master seeds derive from base.master_seed
// and L, so scans are reproducible point by point.

struct SizeScanResult {
    std::vector<PointSummary> points;              // x = L
    std::vector<std::vector<double>> samples;      // uncensored, per point
    std::vector<FirstPassageRecord> records;       // everything, all sizes
    FitResult fit;
    bool usable = true;  // no in-window point exceeded 50% censoring
};

SizeScanResult size_scan(const FirstPassageConfig& base,
                         const std::function<SpinModel(int)>& make_model,
                         const std::vector<int>& Ls, int n_runs,
                         long long budget, double window_lo, double window_hi,
                         int n_boot = 200);

// Double-well analogue over the quartic coupling: abscissa is
// ln(1/Delta^2) with Delta from the in-repo grid solver, so the expected
// slope of the exponential fit is 1 for a 1/Delta^2 law.

struct WellScanResult {
    std::vector<double> lambdas;
    std::vector<double> deltas;                    // grid-solver gaps
    std::vector<PointSummary> points;              // x = ln(1/Delta^2)
    std::vector<std::vector<double>> samples;
    std::vector<FirstPassageRecord> records;
    FitResult fit;
    bool usable = true;
};

WellScanResult well_scan(const FirstPassageConfig& base,
                         const std::vector<double>& lambdas, int n_runs,
                         long long budget, int n_boot = 200);

// ---------------------------------------------------------------------------
// Temperature scan at fixed sizes: mean xi(beta, L) table, the Arrhenius fit
// d(ln xi)/d(beta) over the high-temperature window (smallest size), and the
// regime verdicts: size-independence at the smallest beta, and
// beta-independence per size across the two largest betas (each within
// 2 sigma), plus size-dependence at the largest beta.

struct TempScanRow {
    int L = 0;
    double beta = 0.0;
    PointSummary summary;
};

struct TempScanResult {
    std::vector<TempScanRow> rows;
    FitResult arrhenius;
    double arrhenius_window_lo = 0.0;
    double arrhenius_window_hi = 0.0;
    bool high_t_size_independent = false;
    bool low_t_beta_independent = false;
    bool low_t_size_dependent = false;
};

TempScanResult temperature_scan(const FirstPassageConfig& base,
                                const std::function<SpinModel(int)>& make_model,
                                const std::vector<int>& Ls,
                                const std::vector<double>& betas, int n_runs,
                                long long budget, double arrhenius_lo,
                                double arrhenius_hi);

// ---------------------------------------------------------------------------
// Wall-centered averaged magnetization profile.  Input profiles are
// imaginary-time magnetization curves on uniform bins over [0, beta); a wall
// is a zero crossing of m(tau).  Profiles whose crossing count differs from
// the boundary's expectation (2 cyclic crossings for periodic paths, 1 for
// open) are skipped and counted, as are walls closer than `margin` to a path
// end or to each other.  Each accepted wall is interpolated onto a common
// grid of the rescaled coordinate s = 2*(tau - tau_wall), sign-normalized to
// the rising orientation, and averaged.

struct InstantonProfileResult {
    std::vector<double> s;
    std::vector<double> m;
    std::vector<int> n_contrib;  // walls contributing per grid point
    int n_walls = 0;
    int n_used = 0;     // profiles contributing at least one wall
    int n_skipped = 0;  // profiles rejected (wrong wall count / margins)
};

InstantonProfileResult average_instanton_profile(
    const std::vector<std::vector<double>>& profiles, double beta,
    Boundary boundary, double margin, int out_points = 161);

// Equilibrium harvest feeding the profile average: runs the continuous-time
// worldline sampler (open boundaries expose single walls), snapshots every
// few sweeps, and averages the accepted walls.

struct InstantonHarvest {
    InstantonProfileResult profile;
    int n_snapshots = 0;
};

InstantonHarvest harvest_instanton_profile(const SpinModel& model, double beta,
                                           Boundary boundary, long long n_sweeps,
                                           int snapshot_every, int warmup,
                                           double margin, int bins,
                                           int out_points, std::uint64_t seed);

// Largest |averaged - analytic| over the grid points where the analytic
// trajectory has |m| <= m_window and data exists; the analytic curve is
// linearly interpolated in s.
double max_profile_deviation(const InstantonProfileResult& profile,
                             const InstantonTrajectory& trajectory,
                             double m_window);

} // namespace qmct
