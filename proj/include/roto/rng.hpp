#pragma once

#include <cstdint>
#include <random>

namespace roto {

/// Deterministic stream: mt19937_64 is fully specified by the standard and
/// the Normal transform below is hand-written, so identical (seed, stream)
/// pairs yield identical sequences with any conforming library.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard Normal via the Marsaglia polar method.
  double normal();

  /// Child stream keyed by (seed, stream, key); independent of how many
  /// draws the parent has made.
  SeededRng derive(std::uint64_t key) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace roto
