#pragma once

#include <cstdint>
#include <random>

namespace aim {

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

/// Deterministic random stream. mt19937_64 output is fixed by the standard and
/// the conversions below avoid the implementation-defined distributions, so a
/// seed reproduces the same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(mix64(seed)) {}

  /// Child stream keyed by (this stream's seed, key); independent of how many
  /// draws were made from the parent.
  static Rng stream(std::uint64_t master, std::uint64_t key) { return Rng(mix64(master) ^ mix64(~key)); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aim
