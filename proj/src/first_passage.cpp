#include "qmct/first_passage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qmct/errors.hpp"

namespace qmct {

std::string to_string(Engine e) {
    switch (e) {
        case Engine::PimcDiscrete: return "pimc-discrete";
        case Engine::PimcCt: return "pimc-ct";
        case Engine::Pigs: return "pigs";
        case Engine::PimcWell: return "pimc-well";
        case Engine::PimdWell: return "pimd-well";
    }
    throw ConfigError("to_string(Engine): unknown engine");
}

Engine engine_from_string(const std::string& s) {
    if (s == "pimc-discrete" || s == "pimc") return Engine::PimcDiscrete;
    if (s == "pimc-ct" || s == "ct") return Engine::PimcCt;
    if (s == "pigs") return Engine::Pigs;
    if (s == "pimc-well") return Engine::PimcWell;
    if (s == "pimd-well") return Engine::PimdWell;
    throw ConfigError("unknown engine '" + s +
                      "' (expected pimc-discrete, pimc-ct, pigs, pimc-well, "
                      "or pimd-well)");
}

bool engine_uses_spins(Engine e) {
    return e == Engine::PimcDiscrete || e == Engine::PimcCt || e == Engine::Pigs;
}

namespace {

struct StopPlan {
    std::vector<double> fractions;  // ascending
};

StopPlan make_plan(const FirstPassageConfig& config) {
    if (config.stop_fractions.empty())
        throw ConfigError("measure_first_passage: stop_fractions empty");
    StopPlan plan;
    plan.fractions = config.stop_fractions;
    std::sort(plan.fractions.begin(), plan.fractions.end());
    for (double f : plan.fractions)
        if (!(f > 0.0) || f > 1.0)
            throw ConfigError(
                "measure_first_passage: stop fractions must lie in (0, 1]");
    return plan;
}

FirstPassageRecord base_record(const FirstPassageConfig& config) {
    FirstPassageRecord rec;
    rec.engine = config.engine;
    rec.beta = config.beta;
    rec.P = config.engine == Engine::PimcCt ? 0 : config.P;
    if (engine_uses_spins(config.engine)) {
        rec.topology = to_string(config.model.topology);
        rec.L = config.model.L;
        rec.gamma = config.model.gamma;
    } else {
        rec.topology = "well";
        rec.L = 0;
        rec.gamma = config.well.lambda;
    }
    return rec;
}

// Feeds reversal fractions sweep by sweep, recording the first sweep index
// at which each target fraction is reached.  The snapshot callback fires
// once, when the lowest target is first met.
class StopTracker {
  public:
    StopTracker(const StopPlan& plan, long long budget)
        : plan_(&plan), budget_(budget), reached_(plan.fractions.size(), -1) {}

    template <typename Snapshot>
    bool observe(double fraction, long long sweep, Snapshot&& snapshot) {
        while (next_ < plan_->fractions.size() &&
               fraction >= plan_->fractions[next_]) {
            if (next_ == 0) snapshot();
            reached_[next_] = sweep;
            ++next_;
        }
        return next_ == plan_->fractions.size();
    }

    void emit(const FirstPassageRecord& base, std::uint64_t seed,
              std::vector<FirstPassageRecord>& out) const {
        for (std::size_t i = 0; i < plan_->fractions.size(); ++i) {
            FirstPassageRecord rec = base;
            rec.seed = seed;
            rec.threshold = plan_->fractions[i];
            rec.censored = reached_[i] < 0;
            rec.sweeps_to_reversal = rec.censored ? budget_ : reached_[i];
            out.push_back(std::move(rec));
        }
    }

  private:
    const StopPlan* plan_;
    long long budget_;
    std::vector<long long> reached_;
    std::size_t next_ = 0;
};

void validate_config(const FirstPassageConfig& config) {
    if (config.start_sign != 1 && config.start_sign != -1)
        throw ConfigError("measure_first_passage: start_sign must be +1/-1");
    if (engine_uses_spins(config.engine)) {
        if (config.model.L < 1)
            throw ConfigError("measure_first_passage: spin model not configured");
        if (!(config.slice_threshold >= 0.0) || config.slice_threshold > 1.0)
            throw ConfigError(
                "measure_first_passage: slice_threshold must lie in [0, 1]");
    } else {
        if (!(config.beta > 0.0))
            throw ConfigError("measure_first_passage: beta must be > 0");
        if (config.P < 1)
            throw ConfigError("measure_first_passage: P must be >= 1");
        if (config.engine == Engine::PimdWell) config.langevin.validate();
    }
}

struct RunOutput {
    std::vector<FirstPassageRecord> records;
    std::vector<double> snapshot;
};

RunOutput run_once(const FirstPassageConfig& config, const StopPlan& plan,
                   const FirstPassageRecord& base, long long budget, int run,
                   double well_step) {
    const std::uint64_t seed =
        Rng::derive_key(config.master_seed, {static_cast<std::uint64_t>(run)});
    Rng rng(seed);
    StopTracker tracker(plan, budget);
    RunOutput out;
    const bool want_snapshot = config.snapshot_bins > 0;
    bool done = false;

    switch (config.engine) {
        case Engine::PimcDiscrete:
        case Engine::Pigs: {
            const Boundary boundary = config.engine == Engine::Pigs
                                          ? Boundary::Open
                                          : Boundary::Periodic;
            DiscretePath path = init_polarized(config.model, config.beta,
                                               config.P, boundary,
                                               config.start_sign);
            auto snap = [&] {
                if (want_snapshot)
                    out.snapshot =
                        slice_magnetization_profile(path, config.snapshot_bins);
            };
            done = tracker.observe(
                reversal_fraction(path, config.slice_threshold), 0, snap);
            for (long long sweep = 1; !done && sweep <= budget; ++sweep) {
                sweep_cluster(path, config.model, rng, config.flavor);
                done = tracker.observe(
                    reversal_fraction(path, config.slice_threshold), sweep, snap);
            }
            break;
        }
        case Engine::PimcCt: {
            ContinuousTimePath path = init_polarized_ct(
                config.model, config.beta, Boundary::Periodic, config.start_sign);
            auto snap = [&] {
                if (want_snapshot)
                    out.snapshot =
                        slice_magnetization_profile(path, config.snapshot_bins);
            };
            done = tracker.observe(
                reversal_fraction(path, config.slice_threshold), 0, snap);
            for (long long sweep = 1; !done && sweep <= budget; ++sweep) {
                sweep_cluster(path, config.model, rng, config.flavor);
                done = tracker.observe(
                    reversal_fraction(path, config.slice_threshold), sweep, snap);
            }
            break;
        }
        case Engine::PimcWell:
        case Engine::PimdWell: {
            RingPolymer poly = RingPolymer::polarized(
                config.start_sign * config.well.x_min(), config.P,
                1.0 / config.beta, config.well.mass);
            if (config.engine == Engine::PimdWell) {
                // Positions define the metastable start; momenta are not part
                // of the measured state, so they begin thermal.
                thermalize_momenta(poly, rng);
            }
            auto snap = [&] {
                if (want_snapshot) out.snapshot = poly.x;
            };
            done = tracker.observe(well_reversal_fraction(poly, config.well), 0,
                                   snap);
            for (long long sweep = 1; !done && sweep <= budget; ++sweep) {
                if (config.engine == Engine::PimcWell) {
                    pimc_sweep(poly, config.well, well_step, rng);
                } else {
                    for (int k = 0; k < config.P; ++k)
                        pimd_step(poly, config.well, config.langevin, rng);
                }
                done = tracker.observe(well_reversal_fraction(poly, config.well),
                                       sweep, snap);
            }
            break;
        }
    }
    tracker.emit(base, seed, out.records);
    return out;
}

} // namespace

FirstPassageEnsemble measure_first_passage(const FirstPassageConfig& config,
                                           int n_runs, long long budget) {
    if (n_runs < 1)
        throw ConfigError("measure_first_passage: n_runs must be >= 1");
    if (budget < 1)
        throw ConfigError("measure_first_passage: budget must be >= 1");
    validate_config(config);

    const StopPlan plan = make_plan(config);
    const FirstPassageRecord base = base_record(config);

    // PimcWell proposal width: tuned once on a sacrificial polymer so every
    // measured trajectory starts exactly from the polarized state with the
    // clock at zero, and all runs share the same frozen step.
    double well_step = config.pimc_step;
    if (config.engine == Engine::PimcWell && !(well_step > 0.0)) {
        Rng tune_rng = Rng::derive(config.master_seed, {0x7u, 0u});
        RingPolymer scratch = RingPolymer::polarized(
            config.start_sign * config.well.x_min(), config.P,
            1.0 / config.beta, config.well.mass);
        well_step = tune_pimc_step(scratch, config.well, tune_rng);
    }

    // Work queue over run indices; every run derives its stream from the
    // master seed and its own index, so results are identical for any worker
    // count or scheduling order.
    std::vector<RunOutput> by_run(static_cast<std::size_t>(n_runs));
    const int n_threads = std::max(
        1, std::min<int>(config.n_threads,
                         static_cast<int>(std::thread::hardware_concurrency())));
    if (n_threads <= 1 || n_runs == 1) {
        for (int run = 0; run < n_runs; ++run)
            by_run[run] = run_once(config, plan, base, budget, run, well_step);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (;;) {
                const int run = next.fetch_add(1);
                if (run >= n_runs) return;
                by_run[run] = run_once(config, plan, base, budget, run, well_step);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads) - 1);
        for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }

    FirstPassageEnsemble out;
    out.records.reserve(static_cast<std::size_t>(n_runs) * plan.fractions.size());
    if (config.snapshot_bins > 0) out.snapshots.resize(n_runs);
    for (int run = 0; run < n_runs; ++run) {
        for (auto& rec : by_run[run].records) out.records.push_back(std::move(rec));
        if (config.snapshot_bins > 0)
            out.snapshots[run] = std::move(by_run[run].snapshot);
    }
    return out;
}

std::vector<double> uncensored_samples(
    const std::vector<FirstPassageRecord>& records, double threshold) {
    std::vector<double> xs;
    for (const auto& r : records)
        if (!r.censored && r.threshold == threshold)
            xs.push_back(static_cast<double>(r.sweeps_to_reversal));
    return xs;
}

int censored_count(const std::vector<FirstPassageRecord>& records,
                   double threshold) {
    int n = 0;
    for (const auto& r : records)
        if (r.censored && r.threshold == threshold) ++n;
    return n;
}

double censored_fraction(const std::vector<FirstPassageRecord>& records,
                         double threshold) {
    int total = 0, cens = 0;
    for (const auto& r : records) {
        if (r.threshold != threshold) continue;
        ++total;
        if (r.censored) ++cens;
    }
    return total > 0 ? static_cast<double>(cens) / total : 0.0;
}

bool usable_for_fitting(const std::vector<FirstPassageRecord>& records,
                        double threshold) {
    return censored_fraction(records, threshold) <= 0.5;
}

} // namespace qmct
