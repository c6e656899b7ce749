#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmct/models.hpp"
#include "qmct/ring_polymer.hpp"
#include "qmct/spin_qmc.hpp"

namespace qmct {

// The five first-passage engines: spin paths with periodic imaginary time
// (discrete Trotter grid or continuous time), spin paths with open
// imaginary time (ground-state projection), and the continuous double-well
// ring polymer driven by Metropolis or by damped Langevin dynamics.
enum class Engine { PimcDiscrete, PimcCt, Pigs, PimcWell, PimdWell };

std::string to_string(Engine e);
Engine engine_from_string(const std::string& s);
bool engine_uses_spins(Engine e);

// Everything needed to reproduce one first-passage ensemble.  Spin engines
// read model/beta/P/flavor; well engines read well/beta/P (temperature
// T = 1/beta) plus langevin (PimdWell) or pimc_step (PimcWell, 0 = tune a
// sacrificial copy to ~50% acceptance and freeze).  One sweep means: one
// cluster pass (spin), one P-bead Metropolis pass (PimcWell), or P Langevin
// steps (PimdWell).
struct FirstPassageConfig {
    Engine engine = Engine::PimcDiscrete;

    SpinModel model;                 // spin engines
    double beta = 8.0;               // inverse temperature (wells: T = 1/beta)
    int P = 128;                     // slices / beads; ignored by PimcCt
    ClusterFlavor flavor = ClusterFlavor::SwendsenWang;

    DoubleWell well;                 // well engines
    LangevinParams langevin;         // PimdWell
    double pimc_step = 0.0;          // PimcWell proposal half-width; 0 = auto

    int start_sign = +1;             // polarized initial state orientation
    double slice_threshold = 0.5;    // spin slice reversed when m <= -0.5
    std::vector<double> stop_fractions = {0.25};  // reversed-measure targets
    std::uint64_t master_seed = 1;

    // When > 0, the imaginary-time magnetization profile (this many bins) is
    // captured at the moment the lowest stop fraction is first reached; for
    // well engines the raw bead positions are captured instead.
    int snapshot_bins = 0;

    // Worker threads for the run queue (runs are independent; output is
    // keyed by run index, so any thread count yields identical results).
    int n_threads = 1;
};

struct FirstPassageRecord {
    Engine engine = Engine::PimcDiscrete;
    std::string topology;       // "chain", "fully-connected", ... or "well"
    int L = 0;                  // spin count; 0 for well engines
    double gamma = 0.0;         // transverse field; well quartic coupling
    double beta = 0.0;
    int P = 0;
    std::uint64_t seed = 0;     // derived per-run stream key
    long long sweeps_to_reversal = 0;
    bool censored = false;
    double threshold = 0.25;    // stop fraction this record refers to
};

struct FirstPassageEnsemble {
    std::vector<FirstPassageRecord> records;  // n_runs x |stop_fractions|
    std::vector<std::vector<double>> snapshots;  // per run, if requested
};

// Runs n_runs independent first-passage simulations from the polarized
// initial state.  Each run stops once every requested stop fraction has
// been reached (recording the first sweep index for each) or at the sweep
// budget; fractions not reached by then yield censored records with
// sweeps_to_reversal = budget.  The check runs after every sweep and once
// before the first (a pre-reversed start records 0).
FirstPassageEnsemble measure_first_passage(const FirstPassageConfig& config,
                                           int n_runs, long long budget);

// Records matching one stop fraction, split into helpers used by the fits.
std::vector<double> uncensored_samples(
    const std::vector<FirstPassageRecord>& records, double threshold);
int censored_count(const std::vector<FirstPassageRecord>& records,
                   double threshold);
double censored_fraction(const std::vector<FirstPassageRecord>& records,
                         double threshold);
// More than half the runs censored makes the point unusable for fitting.
bool usable_for_fitting(const std::vector<FirstPassageRecord>& records,
                        double threshold);

} // namespace qmct
