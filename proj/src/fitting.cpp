#include "qmct/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "qmct/errors.hpp"

namespace qmct {

PointSummary summarize_point(double x, const std::vector<double>& samples,
                             int n_censored) {
    PointSummary p;
    p.x = x;
    p.stats = summarize(std::span<const double>(samples));
    p.n_censored = n_censored;
    p.n_total = static_cast<int>(samples.size()) + n_censored;
    return p;
}

namespace {

struct Prepared {
    std::vector<double> x, y, w;
    bool weighted = true;
};

Prepared prepare(const std::vector<PointSummary>& points, double lo, double hi) {
    Prepared prep;
    for (const auto& p : points) {
        if (p.x < lo || p.x > hi) continue;
        if (!(p.stats.mean > 0.0))
            throw DomainError("fit_exponential: non-positive mean at x = " +
                              std::to_string(p.x));
        prep.x.push_back(p.x);
        prep.y.push_back(std::log(p.stats.mean));
        const double sigma_ln = p.stats.stderr_mean / p.stats.mean;
        if (sigma_ln > 0.0) {
            prep.w.push_back(1.0 / (sigma_ln * sigma_ln));
        } else {
            prep.w.push_back(0.0);  // marks the fit as unweighted below
            prep.weighted = false;
        }
    }
    if (prep.x.size() < 3)
        throw ConfigError("fit_exponential: need at least 3 points in the "
                          "fit window");
    if (!prep.weighted)
        std::fill(prep.w.begin(), prep.w.end(), 1.0);
    return prep;
}

FitResult from_linear(const LinearFit& lf, double lo, double hi) {
    FitResult r;
    r.slope = lf.slope;
    r.intercept = lf.intercept;
    r.slope_stderr = std::sqrt(std::max(lf.slope_var, 0.0));
    r.intercept_stderr = std::sqrt(std::max(lf.intercept_var, 0.0));
    r.covariance = lf.covariance;
    r.n_points = static_cast<int>(lf.n);
    r.window_lo = lo;
    r.window_hi = hi;
    return r;
}

} // namespace

FitResult fit_exponential(const std::vector<PointSummary>& points,
                          double window_lo, double window_hi) {
    const Prepared prep = prepare(points, window_lo, window_hi);
    // With genuine per-point errors the parameter covariance follows from
    // the weights alone; without them only the residual scatter can set the
    // scale.
    const LinearFit lf = wls_fit(prep.x, prep.y, prep.w, !prep.weighted);
    return from_linear(lf, window_lo, window_hi);
}

FitResult fit_exponential_bootstrap(
    const std::vector<PointSummary>& points,
    const std::vector<std::vector<double>>& samples_by_x, double window_lo,
    double window_hi, int n_boot, Rng& rng) {
    if (samples_by_x.size() != points.size())
        throw ConfigError("fit_exponential_bootstrap: samples_by_x must "
                          "parallel points");
    if (n_boot < 2)
        throw ConfigError("fit_exponential_bootstrap: n_boot must be >= 2");

    FitResult central = fit_exponential(points, window_lo, window_hi);

    std::vector<double> slopes, intercepts;
    slopes.reserve(n_boot);
    intercepts.reserve(n_boot);
    std::vector<PointSummary> resampled = points;
    for (int b = 0; b < n_boot; ++b) {
        bool valid = true;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i].x < window_lo || points[i].x > window_hi) continue;
            const auto& src = samples_by_x[i];
            if (src.empty()) {
                valid = false;
                break;
            }
            double sum = 0.0;
            for (std::size_t k = 0; k < src.size(); ++k)
                sum += src[rng.below(src.size())];
            const double mean = sum / static_cast<double>(src.size());
            if (!(mean > 0.0)) {
                valid = false;
                break;
            }
            resampled[i].stats.mean = mean;
        }
        if (!valid) continue;
        const FitResult fr = fit_exponential(resampled, window_lo, window_hi);
        slopes.push_back(fr.slope);
        intercepts.push_back(fr.intercept);
    }
    if (slopes.size() < 2)
        throw ConvergenceError("fit_exponential_bootstrap: too few valid "
                               "bootstrap replicas");

    auto sd = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double t : v) m += t;
        m /= static_cast<double>(v.size());
        double s2 = 0.0;
        for (double t : v) s2 += (t - m) * (t - m);
        return std::sqrt(s2 / static_cast<double>(v.size() - 1));
    };
    central.slope_stderr = sd(slopes);
    central.intercept_stderr = sd(intercepts);
    double cov = 0.0;
    {
        double ms = 0.0, mi = 0.0;
        for (double t : slopes) ms += t;
        for (double t : intercepts) mi += t;
        ms /= static_cast<double>(slopes.size());
        mi /= static_cast<double>(intercepts.size());
        for (std::size_t k = 0; k < slopes.size(); ++k)
            cov += (slopes[k] - ms) * (intercepts[k] - mi);
        cov /= static_cast<double>(slopes.size() - 1);
    }
    central.covariance = cov;
    return central;
}

ComparisonVerdict exponent_comparison(const FitResult& qmc, double ed_slope,
                                      double ed_err, ComparisonMode mode) {
    if (!(ed_err >= 0.0))
        throw ConfigError("exponent_comparison: ed_err must be >= 0");
    const double factor = mode == ComparisonMode::Squared ? 2.0 : 1.0;
    ComparisonVerdict v;
    v.b_qmc = qmc.slope;
    v.b_qmc_err = qmc.slope_stderr;
    v.b_ref = factor * ed_slope;
    v.b_ref_err = factor * ed_err;
    v.combined_err = std::hypot(v.b_qmc_err, v.b_ref_err);
    if (!(v.combined_err > 0.0))
        throw ConfigError("exponent_comparison: both uncertainties are zero");
    v.discrepancy_sigma = std::abs(v.b_qmc - v.b_ref) / v.combined_err;
    v.pass = v.discrepancy_sigma <= 3.0;
    return v;
}

} // namespace qmct
