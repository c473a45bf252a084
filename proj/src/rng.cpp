#include "echo/rng.hpp"

#include <limits>

namespace echo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng Rng::stream(std::uint64_t seed, std::string_view tag) {
  return Rng(splitmix64(seed ^ fnv1a64(tag)));
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t bound) {
  // Reject the partial top bucket so the modulo is unbiased.
  const std::uint64_t b = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t x = next();
  while (x >= limit) {
    x = next();
  }
  return static_cast<std::size_t>(x % b);
}

int Rng::range(int lo, int hi) {
  const auto span = static_cast<std::size_t>(static_cast<long long>(hi) - lo + 1);
  return lo + static_cast<int>(below(span));
}

}  // namespace echo
