#pragma once

#include <cstdint>
#include <random>

namespace hawkes {

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of replication `index` under `master`.
///
/// Splitting rule: substream(master, r) = mix64(mix64(master) ^ mix64(mix64(r + 1))).
/// The two sides go through different maps so that no (master, r) pair is
/// systematically the mirror of another (a plain mix64(master) ^ mix64(r + 1)
/// would send every (m, m - 1) to the same word). The derived word seeds a
/// fresh mt19937_64, so results depend only on (master, r), never on which
/// worker ran the replication.
std::uint64_t substream(std::uint64_t master, std::uint64_t index) noexcept;

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate (> 0).
    double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }

    double normal() { return normal_(engine_); }

    std::mt19937_64& engine() noexcept { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace hawkes
