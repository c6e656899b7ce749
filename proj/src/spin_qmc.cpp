#include "qmct/spin_qmc.hpp"

#include "qmct/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qmct {

namespace {

// Heat-bath flip probability for a cluster whose flip changes the log weight
// by dlog. Plain Metropolis (min(1, e^dlog)) is non-ergodic here: with zero
// spatial coupling it flips every cluster deterministically and no domain
// wall is ever created. The heat-bath rule resamples each cluster from its
// conditional distribution (probability 1/2 at dlog = 0) and is the standard
// Swendsen-Wang assignment.
inline bool heat_bath_flip(double dlog, Rng& rng) {
    const double p = dlog >= 0.0 ? 1.0 / (1.0 + std::exp(-dlog))
                                 : std::exp(dlog) / (1.0 + std::exp(dlog));
    return rng.uniform() < p;
}

std::vector<std::vector<int>> adjacency(const SpinModel& model) {
    std::vector<std::vector<int>> adj(model.L);
    for (auto [i, j] : chain_bonds(model)) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    return adj;
}

std::vector<int> slice_sums(const DiscretePath& path) {
    std::vector<int> ssum(path.P, 0);
    for (int i = 0; i < path.L; ++i)
        for (int t = 0; t < path.P; ++t) ssum[t] += path.spin(i, t);
    return ssum;
}

} // namespace

SweepStats sweep_local(DiscretePath& path, const SpinModel& model, Rng& rng) {
    const int L = path.L, P = path.P;
    const bool periodic = path.boundary == Boundary::Periodic;
    const bool mf = model.is_mean_field();
    const double kss = path.k_space_scale;
    std::vector<int> ssum;
    std::vector<std::vector<int>> adj;
    if (mf)
        ssum = slice_sums(path);
    else
        adj = adjacency(model);

    SweepStats st;
    for (int t = 0; t < P; ++t) {
        for (int i = 0; i < L; ++i) {
            const int s = path.spin(i, t);
            double dlog = 0.0;
            if (t > 0 || periodic) dlog -= 2.0 * path.k_tau * s * path.spin(i, (t + P - 1) % P);
            if (t < P - 1 || periodic) dlog -= 2.0 * path.k_tau * s * path.spin(i, (t + 1) % P);
            if (mf) {
                const double m0 = static_cast<double>(ssum[t]) / L;
                const double m1 = static_cast<double>(ssum[t] - 2 * s) / L;
                const double de = -L * (model.g.value(m1) - model.g.value(m0));
                dlog -= kss * de;
            } else {
                int nb = 0;
                for (int j : adj[i]) nb += path.spin(j, t);
                dlog -= kss * 2.0 * s * (nb + model.h);
            }
            ++st.attempted;
            if (dlog >= 0.0 || rng.uniform() < std::exp(dlog)) {
                path.spin(i, t) = static_cast<std::int8_t>(-s);
                if (mf) ssum[t] -= 2 * s;
                ++st.accepted;
            }
        }
    }
    return st;
}

SweepStats sweep_cluster(DiscretePath& path, const SpinModel& model, Rng& rng,
                         ClusterFlavor flavor) {
    const int L = path.L, P = path.P;
    const bool periodic = path.boundary == Boundary::Periodic;
    const bool mf = model.is_mean_field();
    const double kss = path.k_space_scale;
    const double p_act = 1.0 - std::exp(-2.0 * path.k_tau);
    std::vector<int> ssum;
    std::vector<std::vector<int>> adj;
    if (mf)
        ssum = slice_sums(path);
    else
        adj = adjacency(model);

    SweepStats st;
    std::vector<char> cut(P);
    for (int i = 0; i < L; ++i) {
        // tau-bond t joins slices t and t+1 (mod P); misaligned bonds always
        // cut, aligned ones cut with the complementary activation probability.
        const int nbonds = periodic ? P : P - 1;
        bool any_cut = false;
        for (int t = 0; t < nbonds; ++t) {
            const bool aligned = path.spin(i, t) == path.spin(i, (t + 1) % P);
            cut[t] = !(aligned && rng.uniform() < p_act);
            any_cut = any_cut || cut[t];
        }
        if (!periodic) {
            cut[P - 1] = 1; // open ends: no bond across the cut
            any_cut = true;
        }

        auto try_flip = [&](int start, int len) {
            const int s = path.spin(i, start);
            double dlog = 0.0;
            for (int k = 0; k < len; ++k) {
                const int t = (start + k) % P;
                if (mf) {
                    const double m0 = static_cast<double>(ssum[t]) / L;
                    const double m1 = static_cast<double>(ssum[t] - 2 * s) / L;
                    dlog -= kss * (-L * (model.g.value(m1) - model.g.value(m0)));
                } else {
                    int nb = 0;
                    for (int j : adj[i]) nb += path.spin(j, t);
                    dlog -= kss * 2.0 * s * (nb + model.h);
                }
            }
            ++st.attempted;
            if (heat_bath_flip(dlog, rng)) {
                for (int k = 0; k < len; ++k) {
                    const int t = (start + k) % P;
                    path.spin(i, t) = static_cast<std::int8_t>(-s);
                    if (mf) ssum[t] -= 2 * s;
                }
                ++st.accepted;
            }
        };

        if (!any_cut) {
            // Whole worldline is one cyclic cluster.
            try_flip(0, P);
            continue;
        }
        if (flavor == ClusterFlavor::SwendsenWang) {
            int c0 = 0;
            while (!cut[c0]) ++c0;
            int start = (c0 + 1) % P;
            int covered = 0;
            while (covered < P) {
                int len = 1;
                while (!cut[(start + len - 1) % P]) ++len;
                try_flip(start, len);
                covered += len;
                start = (start + len) % P;
            }
        } else {
            // Wolff: the cluster containing a uniformly chosen slice.
            int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(P)));
            while (!cut[(a + P - 1) % P]) a = (a + P - 1) % P;
            int len = 1;
            while (!cut[(a + len - 1) % P]) ++len;
            try_flip(a, len);
        }
    }
    return st;
}

namespace {

// Signed time integral of site j's worldline over [a, b), b <= beta.
double signed_time(const ContinuousTimePath& path, int j, double a, double b) {
    const auto& w = path.walls[j];
    double sigma = path.spin_at(j, a);
    double acc = 0.0, prev = a;
    for (auto it = std::upper_bound(w.begin(), w.end(), a);
         it != w.end() && *it < b; ++it) {
        acc += sigma * (*it - prev);
        sigma = -sigma;
        prev = *it;
    }
    return acc + sigma * (b - prev);
}

// Log-weight change for flipping site i (current spin s) over [a, b), where b
// may wrap past beta for cyclic segments.
double ct_delta_log_weight(const ContinuousTimePath& path, const SpinModel& model,
                           const std::vector<std::vector<int>>& adj, int i, double a,
                           double b, int s) {
    double dlog = 0.0;
    auto piece = [&](double lo, double hi) {
        if (hi <= lo) return;
        if (!model.is_mean_field()) {
            double tj = 0.0;
            for (int j : adj[i]) tj += signed_time(path, j, lo, hi);
            dlog += -2.0 * s * (tj + model.h * (hi - lo));
            return;
        }
        // Mean field: walk the merged wall events of all other sites.
        std::vector<std::pair<double, int>> events;
        for (int j = 0; j < path.L; ++j) {
            if (j == i) continue;
            const auto& w = path.walls[j];
            for (auto it = std::upper_bound(w.begin(), w.end(), lo);
                 it != w.end() && *it < hi; ++it)
                events.emplace_back(*it, j);
        }
        std::sort(events.begin(), events.end());
        std::vector<std::int8_t> cur(path.L, 0);
        int sum = s;
        for (int j = 0; j < path.L; ++j)
            if (j != i) sum += cur[j] = path.spin_at(j, lo);
        double prev = lo;
        auto accrue = [&](double until) {
            const double m0 = static_cast<double>(sum) / path.L;
            const double m1 = static_cast<double>(sum - 2 * s) / path.L;
            const double de = -path.L * (model.g.value(m1) - model.g.value(m0));
            dlog -= de * (until - prev);
            prev = until;
        };
        for (const auto& [t, j] : events) {
            accrue(t);
            sum -= 2 * cur[j];
            cur[j] = static_cast<std::int8_t>(-cur[j]);
        }
        accrue(hi);
    };
    if (b <= path.beta) {
        piece(a, b);
    } else {
        piece(a, path.beta);
        piece(0.0, b - path.beta);
    }
    return dlog;
}

} // namespace

SweepStats sweep_cluster(ContinuousTimePath& path, const SpinModel& model, Rng& rng,
                         ClusterFlavor flavor) {
    const int L = path.L;
    const double beta = path.beta;
    const bool periodic = path.boundary == Boundary::Periodic;
    if (model.gamma <= 0) throw ConfigError("sweep_cluster: gamma must be positive");
    const auto adj = model.is_mean_field() ? std::vector<std::vector<int>>{}
                                           : adjacency(model);

    SweepStats st;
    std::vector<double> cuts;
    std::vector<std::int8_t> seg_spin, final_spin;
    for (int i = 0; i < L; ++i) {
        cuts = path.walls[i];
        for (double t = rng.exponential(model.gamma); t < beta;
             t += rng.exponential(model.gamma))
            cuts.push_back(t);
        std::sort(cuts.begin(), cuts.end());
        const int K = static_cast<int>(cuts.size());

        if (K == 0) {
            // Single segment spanning all of imaginary time.
            const int s = path.spin0[i];
            const double dlog = ct_delta_log_weight(path, model, adj, i, 0.0, beta, s);
            ++st.attempted;
            if (heat_bath_flip(dlog, rng)) {
                path.spin0[i] = static_cast<std::int8_t>(-s);
                ++st.accepted;
            }
            continue;
        }

        // Segment k starts at cuts[k]; for periodic paths the last segment
        // wraps to cuts[0]+beta, for open paths a leading segment covers
        // [0, cuts[0]).
        seg_spin.clear();
        final_spin.clear();
        if (periodic) {
            for (int k = 0; k < K; ++k) seg_spin.push_back(path.spin_at(i, cuts[k]));
        } else {
            seg_spin.push_back(path.spin0[i]);
            for (int k = 0; k < K; ++k) seg_spin.push_back(path.spin_at(i, cuts[k]));
        }
        final_spin = seg_spin;
        const int n_seg = static_cast<int>(seg_spin.size());

        auto seg_bounds = [&](int k) -> std::pair<double, double> {
            if (periodic)
                return {cuts[k], k + 1 < K ? cuts[k + 1] : cuts[0] + beta};
            if (k == 0) return {0.0, cuts[0]};
            return {cuts[k - 1], k < K ? cuts[k] : beta};
        };

        auto decide = [&](int k) {
            const auto [a, b] = seg_bounds(k);
            const int s = seg_spin[k];
            const double dlog = ct_delta_log_weight(path, model, adj, i, a, b, s);
            ++st.attempted;
            if (heat_bath_flip(dlog, rng)) {
                final_spin[k] = static_cast<std::int8_t>(-s);
                ++st.accepted;
            }
        };

        if (flavor == ClusterFlavor::SwendsenWang) {
            for (int k = 0; k < n_seg; ++k) decide(k);
        } else {
            const double tau0 = rng.uniform(0.0, beta);
            int k;
            if (periodic) {
                if (tau0 < cuts[0] || tau0 >= cuts[K - 1])
                    k = K - 1; // wrap segment covers tau = 0
                else
                    k = static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(),
                                                          tau0) -
                                         cuts.begin()) -
                        1;
            } else {
                k = static_cast<int>(
                    std::upper_bound(cuts.begin(), cuts.end(), tau0) - cuts.begin());
            }
            decide(k);
        }

        // Rebuild the worldline from the final segment spins.
        auto& w = path.walls[i];
        w.clear();
        if (periodic) {
            for (int k = 0; k < K; ++k)
                if (final_spin[(k - 1 + K) % K] != final_spin[k]) w.push_back(cuts[k]);
            path.spin0[i] = final_spin[K - 1];
        } else {
            for (int k = 0; k < K; ++k)
                if (final_spin[k] != final_spin[k + 1]) w.push_back(cuts[k]);
            path.spin0[i] = final_spin[0];
        }
    }
    return st;
}

double sigma_x_estimate(const DiscretePath& path, const SpinModel& model) {
    const double u = model.gamma * path.beta / path.P;
    const int nbonds = path.boundary == Boundary::Periodic ? path.P : path.P - 1;
    long long sum = 0;
    for (int i = 0; i < path.L; ++i)
        for (int t = 0; t < nbonds; ++t)
            sum += path.spin(i, t) * path.spin(i, (t + 1) % path.P);
    return 1.0 / std::tanh(2.0 * u) -
           static_cast<double>(sum) /
               (static_cast<double>(path.L) * nbonds * std::sinh(2.0 * u));
}

double sigma_x_estimate(const ContinuousTimePath& path, const SpinModel& model) {
    return static_cast<double>(path.total_walls()) /
           (path.beta * model.gamma * path.L);
}

double m2_estimate(const DiscretePath& path) {
    double acc = 0.0;
    for (int t = 0; t < path.P; ++t) {
        const double m = path.slice_magnetization(t);
        acc += m * m;
    }
    return acc / path.P;
}

double m2_estimate(const ContinuousTimePath& path) {
    struct Event {
        double t;
        int site;
    };
    std::vector<Event> events;
    for (int i = 0; i < path.L; ++i)
        for (double t : path.walls[i]) events.push_back({t, i});
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.t < b.t; });
    std::vector<std::int8_t> cur(path.spin0);
    int sum = 0;
    for (int i = 0; i < path.L; ++i) sum += cur[i];
    double acc = 0.0, prev = 0.0;
    for (const auto& ev : events) {
        const double m = static_cast<double>(sum) / path.L;
        acc += m * m * (ev.t - prev);
        sum -= 2 * cur[ev.site];
        cur[ev.site] = static_cast<std::int8_t>(-cur[ev.site]);
        prev = ev.t;
    }
    const double m = static_cast<double>(sum) / path.L;
    acc += m * m * (path.beta - prev);
    return acc / path.beta;
}

double interior_m2(const DiscretePath& path) {
    const double m = path.slice_magnetization(path.P / 2);
    return m * m;
}

double interior_sigma_x(const DiscretePath& path, const SpinModel& model) {
    const double u = model.gamma * path.beta / path.P;
    const int t = path.P / 2;
    long long sum = 0;
    for (int i = 0; i < path.L; ++i)
        sum += path.spin(i, t) * path.spin(i, (t + 1) % path.P);
    return 1.0 / std::tanh(2.0 * u) -
           static_cast<double>(sum) / (path.L * std::sinh(2.0 * u));
}

double interior_m2(const ContinuousTimePath& path) {
    int sum = 0;
    for (int i = 0; i < path.L; ++i) sum += path.spin_at(i, 0.5 * path.beta);
    const double m = static_cast<double>(sum) / path.L;
    return m * m;
}

double interior_sigma_x(const ContinuousTimePath& path, const SpinModel& model) {
    const double lo = 0.25 * path.beta, hi = 0.75 * path.beta;
    std::size_t n = 0;
    for (const auto& w : path.walls)
        n += std::upper_bound(w.begin(), w.end(), hi) -
             std::lower_bound(w.begin(), w.end(), lo);
    return static_cast<double>(n) / ((hi - lo) * model.gamma * path.L);
}

} // namespace qmct
