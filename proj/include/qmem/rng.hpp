#pragma once

// Deterministic RNG provisioning. Per-sample streams are derived from
// (master seed, sample index) with a splitmix64 mix so that results are
// independent of the worker thread a sample lands on.

#include <cmath>
#include <cstdint>
#include <random>

namespace qmem {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t master, uint64_t index, uint64_t salt = 0) {
    return splitmix64(splitmix64(master ^ 0x2545f4914f6cdd1dull * salt) + index);
}

// std::mt19937_64 has a standard-pinned sequence; the distributions below are
// hand-rolled because the std ones are implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // Uniform on (0, 1]: never zero so -log stays finite.
    double uniform_pos() { return (double((eng_() >> 11)) + 1.0) * 0x1.0p-53; }

    // Uniform on [0, 1).
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    // Uniform integer in [0, m) by rejection; exact and portable.
    uint64_t below(uint64_t m) {
        uint64_t threshold = (0 - m) % m;
        for (;;) {
            uint64_t r = eng_();
            if (r >= threshold) return r % m;
        }
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 eng_;
};

// FNV-1a, used for config hashes and trajectory digests.
inline uint64_t fnv1a(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ull) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

template <class T>
inline uint64_t fnv1a_value(const T& v, uint64_t h = 0xcbf29ce484222325ull) {
    return fnv1a(&v, sizeof(T), h);
}

}  // namespace qmem
