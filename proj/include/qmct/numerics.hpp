#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qmct {

// ---------------------------------------------------------------------------
// Quadrature

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0; // accumulated Kronrod error estimate
    int evaluations = 0;
};

// Adaptive Gauss-Kronrod 7-15 integration of f over [a, b].  Subdivides
// until the local error estimate satisfies the mixed tolerance
// |err| <= max(abs_tol, rel_tol*|I|) or max_depth is reached (then throws
// AccuracyError).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10, double abs_tol = 1e-14,
                     int max_depth = 30);

// ---------------------------------------------------------------------------
// Root finding

// Root of f in the bracket [lo, hi] (f(lo), f(hi) of opposite sign):
// safeguarded Newton/secant falling back to bisection.  Converges to
// |hi-lo| <= tol (absolute).  Throws DomainError if the bracket is invalid.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-13, int max_iter = 200);

// Scans [lo, hi] on n uniform points and returns every bracketing pair
// refined by find_root.  Used for potential-extrema detection.
std::vector<double> find_all_roots(const std::function<double(double)>& f,
                                   double lo, double hi, int n_scan = 2048,
                                   double tol = 1e-12);

// ---------------------------------------------------------------------------
// Descriptive statistics

struct SampleStats {
    double mean = 0.0;
    double stderr_mean = 0.0; // std / sqrt(n)
    double median = 0.0;
    std::size_t n = 0;
};

SampleStats summarize(std::span<const double> xs);

// ---------------------------------------------------------------------------
// Weighted least squares y = intercept + slope*x

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_var = 0.0;
    double intercept_var = 0.0;
    double covariance = 0.0;
    double chi2 = 0.0;
    std::size_t n = 0;
};

// weights = 1/sigma_i^2.  If scale_by_chi2 is set the parameter covariance
// is rescaled by chi2/(n-2) (standard practice when the weights are only
// relative, e.g. unweighted fits of deterministic ED points).
LinearFit wls_fit(std::span<const double> x, std::span<const double> y,
                  std::span<const double> w, bool scale_by_chi2 = false);

// ---------------------------------------------------------------------------
// Chi-squared upper quantile (Wilson-Hilferty approximation); z is the
// standard-normal quantile of the target level, e.g. 2.3263 for 99%.
double chi2_quantile(double dof, double z);

} // namespace qmct
