#pragma once

#include <string>
#include <vector>

#include "qmct/experiments.hpp"
#include "qmct/first_passage.hpp"
#include "qmct/fitting.hpp"

namespace qmct {

// Full-precision number formatting for machine-readable files: %.17g round
// trips every double exactly.
std::string fmt_full(double v);

void ensure_directory(const std::string& path);

// records.csv for first-passage runs; fixed column contract:
// engine,topology,L,gamma,beta,P,seed,sweeps_to_reversal,censored,threshold
void write_records_csv(const std::string& path,
                       const std::vector<FirstPassageRecord>& records);
std::vector<FirstPassageRecord> read_records_csv(const std::string& path);

// records.csv for spectrum scans:
// topology,L,gamma,h,method,e0,e1,delta,log_delta,residual
void write_spectrum_csv(const std::string& path,
                        const std::vector<GapScanPoint>& points,
                        const std::string& topology, double gamma, double h);

// summary.csv: one row per scan point.
struct SummaryRow {
    std::string label;   // what x means: "L", "beta", "log_inv_delta_sq", ...
    double x = 0.0;
    int L = 0;
    double gamma = 0.0;
    double beta = 0.0;
    int P = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;
    double median = 0.0;
    long long n = 0;
    int n_censored = 0;
};
void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows);

// fits.csv: fits and comparison verdicts share one superset of columns;
// reference fields are blank for plain fits.
struct FitRow {
    std::string name;
    FitResult fit;
    bool has_ref = false;
    double ref = 0.0;
    double ref_err = 0.0;
    double discrepancy_sigma = 0.0;
    std::string verdict;  // "pass"/"fail" when meaningful, else empty
};
void write_fits_csv(const std::string& path, const std::vector<FitRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

} // namespace qmct
