#pragma once

#include <cstdint>

namespace telent {

/// Counter-based generator: output i is a pure function of (key, i), so streams
/// are reproducible across platforms and can be split without shared state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t next_u64();
  /// Uniform in the open interval (0, 1).
  double uniform();
  double normal();

  /// Independent child stream labelled by `stream`.
  CounterRng split(std::uint64_t stream) const;

  static std::uint64_t mix(std::uint64_t x);

 private:
  struct FromKey {};
  CounterRng(FromKey, std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace telent
