#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ppedcrf {

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Deterministic generator: std::mt19937_64 (whose output sequence is fixed
/// by the standard) seeded through SplitMix64. Uniforms use the top 53 bits;
/// normals use the Marsaglia polar method. No std:: distributions are used,
/// so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Stream for one frame of one sequence. The noise stream deliberately
  /// excludes the mechanism and sigma0 so all stochastic mechanisms see the
  /// same standard-normal draws for a given (seed, sequence, frame).
  static Rng for_frame(std::uint64_t seed, std::string_view sequence_id,
                       std::uint64_t frame_index);

  /// Independent child stream; does not advance this generator.
  Rng derive(std::string_view label) const;

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  /// Standard normal.
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ppedcrf
