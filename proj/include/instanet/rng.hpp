#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace instanet {

/// Deterministic 64-bit generator (splitmix64). The standard library's
/// distributions are implementation-defined, so every draw we make goes
/// through this class to keep seeded output identical across platforms
/// and across serial/parallel execution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        // Rejection to avoid modulo bias.
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal via Box-Muller (no cached spare, so draws stay
    /// reproducible regardless of call interleaving).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    double exponential(double rate) {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return -std::log(u) / rate;
    }

    /// Poisson by CDF inversion; fine for the moderate means used here.
    std::uint32_t poisson(double mean) {
        const double u = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        std::uint32_t k = 0;
        while (u > cdf && k < 100000000U) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (p < 1e-300 && cdf < u) break; // underflow guard far in the tail
        }
        return k;
    }

    /// Geometric on {1, 2, ...} with success probability p.
    std::uint64_t geometric(double p) {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        const double k = std::ceil(std::log(u) / std::log1p(-p));
        return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
    }

    /// Fisher-Yates; std::shuffle's draw sequence is unspecified, this is not.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    /// Independent child stream, e.g. one per bootstrap replicate, so that
    /// parallel execution order cannot change any result.
    Rng split(std::uint64_t stream) const {
        Rng child(state_ ^ (0x5851f42d4c957f2dULL * (stream + 1)));
        child.next();
        return child;
    }

private:
    std::uint64_t state_;
};

} // namespace instanet
