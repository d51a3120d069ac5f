#pragma once

// Counter-based random streams.
//
// A stream is addressed by (seed, index). Its key is
//   key = mix(mix(seed) ^ (index * 0xD1B54A32D192ED03))
// and its k-th draw (k = 1, 2, ...) is
//   mix(key + k * 0x9E3779B97F4A7C15)
// where mix is the SplitMix64 finalizer. Uniform doubles take the top 53 bits.
// Any trial, restart or chunk can therefore be regenerated in isolation, so
// parallel and serial runs see identical numbers.

#include <cstdint>
#include <limits>

namespace monobell {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t index)
      : key_(splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ull))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return splitmix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ull); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace monobell
