#include "qmct/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmct/errors.hpp"

namespace qmct {

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec)
        throw ConfigError("cannot create directory '" + path +
                          "': " + ec.message());
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    return fields;
}

} // namespace

void write_records_csv(const std::string& path,
                       const std::vector<FirstPassageRecord>& records) {
    auto out = open_out(path);
    out << "engine,topology,L,gamma,beta,P,seed,sweeps_to_reversal,censored,"
           "threshold\n";
    for (const auto& r : records) {
        out << to_string(r.engine) << ',' << r.topology << ',' << r.L << ','
            << fmt_full(r.gamma) << ',' << fmt_full(r.beta) << ',' << r.P << ','
            << r.seed << ',' << r.sweeps_to_reversal << ','
            << (r.censored ? 1 : 0) << ',' << fmt_full(r.threshold) << '\n';
    }
}

std::vector<FirstPassageRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open records file '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("records file '" + path + "' is empty");
    const std::string expect =
        "engine,topology,L,gamma,beta,P,seed,sweeps_to_reversal,censored,"
        "threshold";
    if (line != expect)
        throw ConfigError("records file '" + path +
                          "' has an unexpected header");
    std::vector<FirstPassageRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 10)
            throw ConfigError("records file '" + path + "' line " +
                              std::to_string(line_no) + ": expected 10 fields");
        try {
            FirstPassageRecord r;
            r.engine = engine_from_string(f[0]);
            r.topology = f[1];
            r.L = std::stoi(f[2]);
            r.gamma = std::stod(f[3]);
            r.beta = std::stod(f[4]);
            r.P = std::stoi(f[5]);
            r.seed = std::stoull(f[6]);
            r.sweeps_to_reversal = std::stoll(f[7]);
            r.censored = std::stoi(f[8]) != 0;
            r.threshold = std::stod(f[9]);
            records.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw ConfigError("records file '" + path + "' line " +
                              std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

void write_spectrum_csv(const std::string& path,
                        const std::vector<GapScanPoint>& points,
                        const std::string& topology, double gamma, double h) {
    auto out = open_out(path);
    out << "topology,L,gamma,h,method,e0,e1,delta,log_delta,residual\n";
    for (const auto& p : points) {
        const auto& s = p.spectrum;
        const double e0 = s.eigenvalues.size() > 0 ? s.eigenvalues[0] : 0.0;
        const double e1 = s.eigenvalues.size() > 1 ? s.eigenvalues[1] : 0.0;
        out << topology << ',' << p.L << ',' << fmt_full(gamma) << ','
            << fmt_full(h) << ',' << to_string(s.method) << ',' << fmt_full(e0)
            << ',' << fmt_full(e1) << ',' << fmt_full(s.delta) << ','
            << fmt_full(s.log_delta) << ',' << fmt_full(s.residual) << '\n';
    }
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows) {
    auto out = open_out(path);
    out << "label,x,L,gamma,beta,P,mean,stderr,median,n,n_censored\n";
    for (const auto& r : rows) {
        out << r.label << ',' << fmt_full(r.x) << ',' << r.L << ','
            << fmt_full(r.gamma) << ',' << fmt_full(r.beta) << ',' << r.P << ','
            << fmt_full(r.mean) << ',' << fmt_full(r.stderr_mean) << ','
            << fmt_full(r.median) << ',' << r.n << ',' << r.n_censored << '\n';
    }
}

void write_fits_csv(const std::string& path, const std::vector<FitRow>& rows) {
    auto out = open_out(path);
    out << "name,slope,slope_stderr,intercept,intercept_stderr,covariance,"
           "n_points,window_lo,window_hi,ref,ref_stderr,discrepancy_sigma,"
           "verdict\n";
    for (const auto& r : rows) {
        out << r.name << ',' << fmt_full(r.fit.slope) << ','
            << fmt_full(r.fit.slope_stderr) << ',' << fmt_full(r.fit.intercept)
            << ',' << fmt_full(r.fit.intercept_stderr) << ','
            << fmt_full(r.fit.covariance) << ',' << r.fit.n_points << ','
            << fmt_full(r.fit.window_lo) << ',' << fmt_full(r.fit.window_hi)
            << ',';
        if (r.has_ref)
            out << fmt_full(r.ref) << ',' << fmt_full(r.ref_err) << ','
                << fmt_full(r.discrepancy_sigma);
        else
            out << ",,";
        out << ',' << r.verdict << '\n';
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
}

} // namespace qmct
