#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace otfs {

/// Deterministic random source. The mt19937_64 engine is fully specified by
/// the standard; the distributions here are hand-rolled because the std::
/// distribution objects are implementation-defined and would break the
/// byte-identical-output contract across toolchains.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// One standard normal sample (Box-Muller; caches the pair partner).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_gaussian(double variance) {
        double s = std::sqrt(variance * 0.5);
        double re = gaussian();
        double im = gaussian();
        return {s * re, s * im};
    }

    bool bit() { return (engine_() >> 63) != 0; }

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        // Modulo bias is negligible for the small n used here, but reject
        // anyway to keep draws exact.
        uint64_t limit = n * (UINT64_MAX / n);
        uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// splitmix64 finalizer; used to derive independent stream seeds.
inline uint64_t mix_seed(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = mix_seed(master);
    h = mix_seed(h ^ (a * 0x9e3779b97f4a7c15ULL));
    h = mix_seed(h ^ (b * 0xc2b2ae3d27d4eb4fULL));
    h = mix_seed(h ^ (c * 0x165667b19e3779f9ULL));
    return h;
}

}  // namespace otfs
