#include "qmct/numerics.hpp"

#include "qmct/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace qmct {

namespace {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss
// rule (QUADPACK dqk15 constants).
constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kWg = {0.129484966168870, 0.279705391489277,
                                       0.381830050505119, 0.417959183673469};

struct PanelResult {
    double kronrod;
    double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(c);
    double result_gauss = kWg[3] * fc;
    double result_kronrod = kWgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = half * kXgk[j];
        const double f1 = f(c - x);
        const double f2 = f(c + x);
        result_kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) // odd Kronrod indices are the Gauss nodes
            result_gauss += kWg[j / 2] * (f1 + f2);
    }
    result_kronrod *= half;
    result_gauss *= half;
    // QUADPACK-style sharpened error estimate.
    const double diff = std::abs(result_kronrod - result_gauss);
    double err = diff;
    if (diff != 0.0) err = diff * std::min(1.0, std::pow(200.0 * diff, 1.5));
    return {result_kronrod, err};
}

void integrate_rec(const std::function<double(double)>& f, double a, double b,
                   double rel_tol, double abs_tol, int depth, int max_depth,
                   QuadResult& acc) {
    const auto panel = gk15(f, a, b);
    acc.evaluations += 15;
    const double tol = std::max(abs_tol, rel_tol * std::abs(panel.kronrod));
    if (panel.error <= tol || b - a < 1e-15 * (std::abs(a) + std::abs(b))) {
        acc.value += panel.kronrod;
        acc.abs_error += panel.error;
        return;
    }
    if (depth >= max_depth)
        throw AccuracyError("quadrature failed to converge: panel error " +
                            std::to_string(panel.error) + " on [" +
                            std::to_string(a) + ", " + std::to_string(b) + "]");
    const double mid = 0.5 * (a + b);
    integrate_rec(f, a, mid, rel_tol, abs_tol, depth + 1, max_depth, acc);
    integrate_rec(f, mid, b, rel_tol, abs_tol, depth + 1, max_depth, acc);
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_tol, int max_depth) {
    QuadResult acc;
    if (a == b) return acc;
    // Per-panel tolerances are tightened so the sum over panels stays within
    // the requested global tolerance (factor heuristic as in QUADPACK).
    integrate_rec(f, a, b, rel_tol * 0.5, abs_tol * 0.5, 0, max_depth, acc);
    return acc;
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw DomainError("find_root: endpoints do not bracket a root (f(" +
                          std::to_string(lo) + ")=" + std::to_string(flo) +
                          ", f(" + std::to_string(hi) + ")=" + std::to_string(fhi) + ")");
    double x = 0.5 * (lo + hi);
    double fx = f(x);
    for (int it = 0; it < max_iter; ++it) {
        if (fx == 0.0) return x;
        // Maintain the bracket.
        if ((fx > 0) == (fhi > 0)) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
        if (hi - lo <= tol) return 0.5 * (lo + hi);
        // Secant proposal, safeguarded to the bracket interior; otherwise
        // bisect.
        double x_new;
        const double denom = fhi - flo;
        if (denom != 0.0) {
            x_new = lo - flo * (hi - lo) / denom;
            const double margin = 0.01 * (hi - lo);
            if (!(x_new > lo + margin && x_new < hi - margin))
                x_new = 0.5 * (lo + hi);
        } else {
            x_new = 0.5 * (lo + hi);
        }
        x = x_new;
        fx = f(x);
    }
    return 0.5 * (lo + hi);
}

std::vector<double> find_all_roots(const std::function<double(double)>& f,
                                   double lo, double hi, int n_scan, double tol) {
    std::vector<double> roots;
    double x_prev = lo;
    double f_prev = f(lo);
    for (int i = 1; i <= n_scan; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / n_scan;
        const double fx = f(x);
        if (f_prev == 0.0) {
            roots.push_back(x_prev);
        } else if (fx != 0.0 && (f_prev > 0) != (fx > 0)) {
            // fx == 0 exactly is recorded once by the branch above on the
            // next iteration, not also as a bracketed sign change here.
            roots.push_back(find_root(f, x_prev, x, tol));
        }
        x_prev = x;
        f_prev = fx;
    }
    if (f_prev == 0.0) roots.push_back(x_prev);
    return roots;
}

SampleStats summarize(std::span<const double> xs) {
    SampleStats st;
    st.n = xs.size();
    if (xs.empty()) return st;
    double sum = 0.0;
    for (double v : xs) sum += v;
    st.mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double v : xs) ss += (v - st.mean) * (v - st.mean);
    if (xs.size() > 1)
        st.stderr_mean = std::sqrt(ss / (static_cast<double>(xs.size() - 1) *
                                         static_cast<double>(xs.size())));
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    st.median = (sorted.size() % 2 == 1)
                    ? sorted[mid]
                    : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return st;
}

LinearFit wls_fit(std::span<const double> x, std::span<const double> y,
                  std::span<const double> w, bool scale_by_chi2) {
    if (x.size() != y.size() || x.size() != w.size())
        throw ConfigError("wls_fit: size mismatch");
    if (x.size() < 2) throw ConfigError("wls_fit: need at least 2 points");
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
        swxx += w[i] * x[i] * x[i];
        swxy += w[i] * x[i] * y[i];
    }
    const double det = sw * swxx - swx * swx;
    if (det <= 0.0) throw DomainError("wls_fit: singular normal equations");
    LinearFit fit;
    fit.n = x.size();
    fit.slope = (sw * swxy - swx * swy) / det;
    fit.intercept = (swxx * swy - swx * swxy) / det;
    fit.slope_var = sw / det;
    fit.intercept_var = swxx / det;
    fit.covariance = -swx / det;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        fit.chi2 += w[i] * r * r;
    }
    if (scale_by_chi2 && x.size() > 2) {
        const double s = fit.chi2 / static_cast<double>(x.size() - 2);
        fit.slope_var *= s;
        fit.intercept_var *= s;
        fit.covariance *= s;
    }
    return fit;
}

double chi2_quantile(double dof, double z) {
    // Wilson-Hilferty: X ~ dof * (1 - 2/(9 dof) + z*sqrt(2/(9 dof)))^3
    const double t = 2.0 / (9.0 * dof);
    const double base = 1.0 - t + z * std::sqrt(t);
    return dof * base * base * base;
}

} // namespace qmct
