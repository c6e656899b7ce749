#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace qmct {

// Splittable counter-seeded RNG: xoshiro256** state expanded from a 64-bit
// key with splitmix64.  Every simulation stream is derived from
// (master_seed, path...) so batch experiments are bitwise reproducible
// regardless of thread scheduling, and independent runs never share a
// stream.  Hand-rolled rather than <random> because the determinism
// contract must hold across standard-library implementations.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0x2545f4914f6cdd1dULL) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
        have_gauss_ = false;
    }

    // Deterministically derive a child stream key from a master seed and a
    // path of indices (run id, site, sweep, ...).  Order-sensitive: every
    // level feeds the accumulated key through the full splitmix64 avalanche,
    // so nearby paths (small indices) land on unrelated keys.
    static std::uint64_t derive_key(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> path) {
        std::uint64_t x = master;
        for (std::uint64_t p : path) {
            x ^= 0x9e3779b97f4a7c15ULL + p;
            x = splitmix64_next(x);
        }
        return x;
    }

    static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
        return Rng(derive_key(master, path));
    }

    std::uint64_t operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) by rejection on the top bits.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (-n) % n; // 2^64 mod n
        for (;;) {
            std::uint64_t r = (*this)();
            if (r >= threshold) return r % n;
        }
    }

    // Exponential with given rate (inverse transform; log(u) with u in (0,1]).
    double exponential(double rate) {
        double u = 1.0 - uniform(); // (0, 1]
        return -std::log(u) / rate;
    }

    // Standard normal via Box-Muller; the pair partner is cached.
    double gaussian() {
        if (have_gauss_) {
            have_gauss_ = false;
            return cached_gauss_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * u2;
        cached_gauss_ = r * std::sin(phi);
        have_gauss_ = true;
        return r * std::cos(phi);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
    double cached_gauss_ = 0.0;
    bool have_gauss_ = false;
};

} // namespace qmct
