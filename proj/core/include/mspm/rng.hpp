#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mspm {

/// splitmix64 step; used to derive independent stream seeds from a root
/// seed plus replicate indices.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(root ^ (a * 0x9e3779b97f4a7c15ull)) ^ b);
}

/// Deterministic standard-normal stream: mt19937_64 feeding an explicit
/// Box-Muller transform. std::normal_distribution is implementation
/// defined, so outputs would not be reproducible across standard
/// libraries; this sampler is bit-stable everywhere.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite; u2 in [0, 1).
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform01() {
        // 53 random bits -> double in [0, 1).
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace mspm
