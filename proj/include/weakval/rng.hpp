// Seeded random streams with per-task subseeds.
//
// Every task (sample index, search restart) owns a generator seeded with
// derive_seed(master, task, stream), so results do not depend on how tasks
// are spread across workers. Variate transforms are written out here rather
// than taken from <random>, whose distributions are implementation-defined.

#pragma once

#include <cstdint>
#include <random>

namespace weakval {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t task, std::uint64_t stream = 0) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) ^ splitmix64(task + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace weakval
