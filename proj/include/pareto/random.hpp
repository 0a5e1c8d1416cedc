#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "pareto/point.hpp"

namespace pareto {

/// Counter-based uniform source keyed by (master seed, trial index).
///
/// The k-th draw is a pure function of (seed, trial, k): the SplitMix64
/// finalizer applied to key + (k + 1) * golden-gamma. Observation i of a
/// d-dimensional trial uses counters i*d .. i*d + d - 1, so any observation
/// can be regenerated without replaying the ones before it.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t trial = 0) noexcept
      : key_(mix(mix(master_seed) ^ (trial * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits_at(std::uint64_t counter) const noexcept {
    return mix(key_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
  }

  std::uint64_t next_bits() noexcept { return bits_at(counter_++); }

  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform() noexcept {
    return static_cast<double>(next_bits() >> 11) * 0x1.0p-53;
  }

  /// Exponential(1) by inversion: -ln(1 - U).
  double next_exponential() noexcept { return -std::log1p(-next_uniform()); }

  std::uint64_t position() const noexcept { return counter_; }
  void seek(std::uint64_t counter) noexcept { counter_ = counter; }

  /// Position the stream at the first counter of 0-based observation `index`.
  void seek_observation(std::uint64_t index, std::size_t d) noexcept { counter_ = index * d; }

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Fill `out` with independent Exponential(1) coordinates.
inline void sample_observation_into(RandomStream& stream, std::span<double> out) noexcept {
  for (double& v : out) v = stream.next_exponential();
}

inline Point sample_observation(RandomStream& stream, std::size_t d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  std::vector<double> coords(d);
  sample_observation_into(stream, coords);
  return Point(std::move(coords));
}

}  // namespace pareto
