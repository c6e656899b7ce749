#pragma once

#include <vector>

#include "qmct/numerics.hpp"
#include "qmct/rng.hpp"

namespace qmct {

// One abscissa of a scan (a system size, an inverse temperature, or a
// log-inverse-gap value) together with the first-passage statistics of its
// uncensored runs.
struct PointSummary {
    double x = 0.0;
    SampleStats stats;   // mean, stderr of mean, median over uncensored runs
    int n_censored = 0;
    int n_total = 0;
};

PointSummary summarize_point(double x, const std::vector<double>& samples,
                             int n_censored = 0);

// Result of the exponential fit  y(x) = a * exp(b x):  weighted least
// squares of ln(mean) against x.  slope = b, intercept = ln a.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    double covariance = 0.0;
    int n_points = 0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

// Fit over the points with window_lo <= x <= window_hi.  Each ln(mean)
// carries sigma = stderr/mean; if any point lacks a positive stderr the fit
// falls back to unweighted least squares with residual-scaled parameter
// errors (so noiseless synthetic input reproduces the generating line with
// zero stderr).  Requires >= 3 points in the window and positive means.
FitResult fit_exponential(const std::vector<PointSummary>& points,
                          double window_lo, double window_hi);

// Same fit, but the reported parameter errors come from a bootstrap:
// resample each point's runs with replacement, recompute the means, refit.
// samples_by_x[i] holds the uncensored first-passage samples of points[i].
FitResult fit_exponential_bootstrap(
    const std::vector<PointSummary>& points,
    const std::vector<std::vector<double>>& samples_by_x, double window_lo,
    double window_hi, int n_boot, Rng& rng);

// Verdict of a QMC-exponent vs exact-diagonalization-exponent comparison.
// ed_slope is the gap decay rate d(-ln Delta)/dL; Squared compares against
// twice that (the 1/Delta^2 growth exponent), Linear against it directly
// (the 1/Delta growth exponent).
enum class ComparisonMode { Squared, Linear };

struct ComparisonVerdict {
    double b_qmc = 0.0;
    double b_qmc_err = 0.0;
    double b_ref = 0.0;
    double b_ref_err = 0.0;
    double combined_err = 0.0;
    double discrepancy_sigma = 0.0;
    bool pass = false;  // |b_qmc - b_ref| <= 3 combined sigma
};

ComparisonVerdict exponent_comparison(const FitResult& qmc, double ed_slope,
                                      double ed_err, ComparisonMode mode);

} // namespace qmct
