#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmct/first_passage.hpp"

namespace qmct {

// Fully resolved experiment description.  Every field has a default, so a
// config file only needs the keys it cares about; the emitted manifest
// echoes all of them, which makes manifests themselves valid config files.
struct ExperimentConfig {
    std::string kind;

    // Spin model
    std::string topology = "chain";  // chain | fully-connected | p-spin
    double gamma = 0.5;
    double h = 0.0;
    bool spatial_periodic = true;    // chain bonds wrap around
    int p = 3;                       // p-spin exponent

    // Double well
    double lambda = 0.2;
    double mass = 0.5;
    std::vector<double> lambdas;     // well size-scan abscissas

    // Engine
    std::string engine;              // default chosen per kind
    int P = 128;
    double beta = 8.0;
    std::string flavor = "sw";       // sw | wolff
    double slice_threshold = 0.5;
    std::vector<double> stop_fractions = {0.25};
    double pimc_step = 0.0;          // 0 = auto-tune
    LangevinParams langevin{0.005, 10.0};
    int start_sign = 1;

    // Scan shape
    std::vector<int> L_values;
    std::vector<double> betas;
    double window_lo = 0.0, window_hi = 0.0;          // 0,0 = full range
    double arrhenius_lo = 0.5, arrhenius_hi = 2.0;

    // Budgets
    int n_runs = 200;
    long long budget = 100000000;
    int n_boot = 200;
    int threads = 0;                 // 0 = machine core count
    int snapshot_bins = 0;

    std::uint64_t master_seed = 1;
    std::string out;

    // fit / compare inputs
    std::string records_file;
    double qmc_b = 0.0, qmc_err = 0.0;
    std::string ed_mode = "squared"; // squared | linear
};

// The ten experiment kinds, in the order list-experiments prints them.
const std::vector<std::string>& experiment_kinds();
bool is_experiment_kind(const std::string& kind);

// Strict JSON (de)serialization: every key is schema-checked by name and
// type; unknown keys are rejected naming the offender.  to_json emits the
// fully resolved config so the manifest round-trips.
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config,
                                const std::string& code_version);
ExperimentConfig load_config_file(const std::string& path);

// Apply one `key=value` override (nested keys use dots: langevin.delta).
void apply_override(ExperimentConfig& config, const std::string& key,
                    const std::string& value);

// Parse a size/list spec: "14", "12,14,16", or "12..18" (inclusive).
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

// Build the spin model / first-passage config described by the experiment.
SpinModel model_from_config(const ExperimentConfig& config, int L);
FirstPassageConfig first_passage_from_config(const ExperimentConfig& config);

void validate_config(const ExperimentConfig& config);

} // namespace qmct
