// Seeded random number generation with a fully specified sequence.
// All randomized components of the library draw through this wrapper so that
// a (seed, draw-order) pair pins down every result bit-for-bit.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace polysub {

// splitmix64 finalizer; also the declared 64-bit mixing function used to
// derive independent per-trial seeds: trial_seed = mix(master_seed, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + splitmix64(b)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on (0,1); never returns an exact endpoint.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller with a cached spare.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u = uniform01();
        const double v = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace polysub
