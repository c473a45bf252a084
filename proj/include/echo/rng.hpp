#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace echo {

// Seeded random source. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the mapping to doubles and bounded integers is done
// here rather than through <random> distributions, whose algorithms vary
// between standard libraries. Same seed, same stream, on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for one consumer (graph, population, ...) of a run seed.
  static Rng stream(std::uint64_t seed, std::string_view tag);

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, bound). bound must be > 0.
  std::size_t below(std::size_t bound);

  // Uniform integer on [lo, hi], inclusive.
  int range(int lo, int hi);

  bool coin() { return (next() >> 63) != 0; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// FNV-1a, used for stream tags and config hashes.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace echo
