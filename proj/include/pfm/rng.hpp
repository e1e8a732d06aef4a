#pragma once

#include <cstdint>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

namespace pfm {

/// Seedable 64-bit random stream shared by every stochastic step of a run.
///
/// Real and integer draws are derived from the raw engine output with fixed
/// bit arithmetic rather than the <random> distributions, so a given seed
/// yields the same sequence with any standard library.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi). When hi == lo, returns lo.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform in the closed interval [-1, 1].
    double uniform_signed_closed() {
        // 2^53 + 1 equally spaced points including both endpoints.
        constexpr std::uint64_t span = (std::uint64_t{1} << 53) + 1;
        return static_cast<double>(below(span)) * 0x1.0p-52 - 1.0;
    }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection sampling over the largest multiple of bound.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform integer in the closed range [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // UniformRandomBitGenerator interface, for std::shuffle and friends.
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return next(); }

private:
    std::mt19937_64 engine_;
};

/// Fisher-Yates shuffle driven only by Rng::below, so the permutation is
/// reproducible across standard libraries (std::shuffle is not).
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace pfm
