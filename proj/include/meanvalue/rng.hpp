#pragma once

#include <cstdint>
#include <span>

namespace meanvalue {

/// Counter-based stream: output n of stream s under seed k is a fixed
/// function of (k, s, n), so results do not depend on which thread draws
/// them. The mixer is SplitMix64.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform in (0, 1].
  double uniform_positive() { return 1.0 - uniform(); }
  // Standard normal by Box-Muller; the second variate is cached.
  double normal();

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// Fills `out` with a direction uniformly distributed on the unit sphere
/// S^{m-1} (normalized standard-normal vector).
void uniform_direction(StreamRng& rng, std::span<double> out);

}  // namespace meanvalue
