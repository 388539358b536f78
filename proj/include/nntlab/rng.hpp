#pragma once

// Counter-based random numbers.
//
// Every random quantity in nntlab is a pure function of a 64-bit key and a
// 64-bit counter: value(key, i) = mix64(key + (i + 1) * 0x9E3779B97F4A7C15).
// This is exactly the SplitMix64 output sequence started at state `key`, so a
// stream can be read sequentially (SplitMix64) or addressed at any position,
// and output is identical on every platform.

#include <cstdint>
#include <utility>

namespace nntlab {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Key for an independent sub-stream, e.g. one per replicate or per point.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + kGoldenGamma));
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t key, std::uint64_t position = 0) noexcept
      : key_(key), counter_(position) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept { return at(counter_++); }

  /// Random access into the stream; does not advance.
  constexpr result_type at(std::uint64_t i) const noexcept {
    return mix64(key_ + (i + 1) * kGoldenGamma);
  }

  constexpr std::uint64_t position() const noexcept { return counter_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1].
  double uniform_open0() noexcept;
  /// Uniform integer on [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Two independent standard normals (Box-Muller, fixed two draws).
  std::pair<double, double> normal_pair() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Poisson(mean) variate. Multiplication method below mean 10, PTRS
/// transformed rejection above; the number of draws consumed depends only on
/// the stream, never on the platform.
std::uint64_t poisson_variate(SplitMix64& rng, double mean);

}  // namespace nntlab
