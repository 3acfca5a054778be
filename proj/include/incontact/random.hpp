#ifndef INCONTACT_RANDOM_HPP
#define INCONTACT_RANDOM_HPP

#include <cmath>
#include <cstdint>

namespace incontact {

// splitmix64: small, fast, well-mixed generator. Used both as a stream on its
// own and to derive independent per-trial seeds from a master seed by index,
// so that trials can be generated in any order with identical results.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Integer in [0, n). n must be > 0. Modulo bias is irrelevant here.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // Standard normal via Box-Muller. Implemented here instead of
    // std::normal_distribution so the stream is identical on every platform.
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::uint64_t state_;
};

// Derives a well-separated child seed from a master seed and an index.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 mix(master ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return mix.next();
}

} // namespace incontact

#endif
