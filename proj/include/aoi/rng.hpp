#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace aoi {

/// Independent random streams derived from one experiment seed.
///
/// Each named purpose gets its own generator, so turning a feature on
/// (e.g. mobility) never shifts the draws another purpose sees.
enum class Stream : std::uint64_t {
    scheduling = 1,
    correlation = 2,
    mobility = 3,
    topology = 4,
    policy_params = 5,
};

/// SplitMix64 finalizer, used to decorrelate (seed, stream, index) keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                                    std::uint64_t index = 0) noexcept {
    return mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(stream)) ^ index);
}

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0)
        : engine_(derive_seed(seed, stream, index)) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal(double mean, double stddev) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace aoi
