#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace copulacpd {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t v) noexcept {
    v += 0x9e3779b97f4a7c15ULL;
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
    return v ^ (v >> 31);
}

/// FNV-1a over a stream name, used to derive stable stream keys from labels such as "eps_y".
constexpr std::uint64_t stream_tag(std::string_view name) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Counter-based generator: draw i of the stream keyed by (seed, tag...) is mix64(key + i * golden).
///
/// Streams are fully determined by their key, so separate components of a simulation
/// (or separate permutations) never shift each other. All variate transforms are written
/// out here rather than taken from <random>, whose distributions are implementation-defined.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t tag = 0, std::uint64_t sub = 0) noexcept
        : key_(mix64(mix64(mix64(seed) ^ tag) ^ (sub * 0xd1b54a32d192ed03ULL))) {}

    std::uint64_t next_u64() noexcept { return mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

    /// Uniform on the open interval (0, 1) with 53 bits of resolution.
    double uniform() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) via Lemire's multiply-and-reject.
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Standard normal by Box-Muller (two uniforms per draw, no caching).
    double normal() noexcept;
    double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

    double laplace(double scale) noexcept;
    double student_t(unsigned dof) noexcept;
    /// Knuth multiplication method; adequate for the small rates used in simulation.
    std::uint64_t poisson(double lambda) noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }
    double rademacher() noexcept { return (next_u64() >> 63) != 0 ? 1.0 : -1.0; }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Uniform random permutation of 0..n-1 by Fisher-Yates.
std::vector<std::size_t> random_permutation(std::size_t n, CounterRng& rng);

}  // namespace copulacpd
