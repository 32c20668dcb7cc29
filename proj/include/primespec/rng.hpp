#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "primespec/errors.hpp"

namespace primespec {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic random stream: raw mt19937_64 output is pinned by the
// standard, and all variate transforms below are explicit, so sequences are
// reproducible across platforms (unlike std::*_distribution).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Independent stream for one draw index of a seeded experiment.
    static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(splitmix64(seed ^ splitmix64(stream + 0x51ed1e5ull)));
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller, second value cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    // Gamma(shape, 1) by Marsaglia-Tsang squeeze.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw DomainError("gamma: shape must be positive");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform_pos(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
                return d * v;
            }
        }
    }

    // chi-distributed value with dof degrees of freedom.
    double chi(double dof) { return std::sqrt(2.0 * gamma(0.5 * dof)); }

private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace primespec
