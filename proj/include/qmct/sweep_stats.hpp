#pragma once

namespace qmct {

// Attempt/acceptance counters returned by every Monte Carlo update pass.
struct SweepStats {
    long long attempted = 0;
    long long accepted = 0;

    double acceptance_rate() const {
        return attempted > 0 ? static_cast<double>(accepted) / attempted : 0.0;
    }
};

} // namespace qmct
