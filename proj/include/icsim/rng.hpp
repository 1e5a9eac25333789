#pragma once

#include <cstdint>
#include <random>

namespace icsim {

// splitmix64; used both as a stream mixer and to derive per-trial seeds.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) {
    uint64_t s = a ^ (b * 0x9e3779b97f4a7c15ULL);
    return splitmix64(s);
}

// Deterministic per-trial seed derivation from a master seed.
inline uint64_t trial_seed(uint64_t master, uint64_t trial_index) {
    return mix64(master, trial_index + 1);
}

class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // uniform in [0, n)
    uint64_t below(uint64_t n) {
        std::uniform_int_distribution<uint64_t> d(0, n - 1);
        return d(eng_);
    }

    double unit() {
        std::uniform_real_distribution<double> d(0.0, 1.0);
        return d(eng_);
    }

    bool bernoulli(double p) { return unit() < p; }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

} // namespace icsim
