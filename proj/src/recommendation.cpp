#include "echo/recommendation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "echo/errors.hpp"

namespace echo {

std::string to_string(ExposureMode mode) {
  return mode == ExposureMode::all_neighbors ? "all_neighbors" : "recommended";
}

ExposureMode exposure_mode_from_string(const std::string& name) {
  if (name == "all_neighbors") return ExposureMode::all_neighbors;
  if (name == "recommended") return ExposureMode::recommended;
  throw ParameterError(fmt::format("unknown exposure mode '{}'", name));
}

std::vector<std::size_t> recommend(const NetworkGraph& g, std::span<const double> beliefs,
                                   std::size_t i, double threshold) {
  if (beliefs.size() != g.size()) {
    throw ParameterError(fmt::format("belief vector has {} entries for a graph of {} nodes",
                                     beliefs.size(), g.size()));
  }
  if (i >= g.size()) throw ParameterError(fmt::format("agent index {} out of range", i));
  if (!(threshold >= 0.0)) throw ParameterError("recommendation threshold must be >= 0");

  std::vector<std::size_t> out;
  for (std::size_t j : g.neighbors(i)) {
    if (std::abs(beliefs[i] - beliefs[j]) <= threshold) out.push_back(j);
  }
  return out;
}

std::vector<std::size_t> exposure_set(const NetworkGraph& g, std::span<const double> beliefs,
                                      std::size_t i, ExposureMode mode, std::size_t cap,
                                      Rng* rng, double threshold) {
  if (cap < 1) throw ParameterError("exposure cap must be >= 1");

  std::vector<std::size_t> out;
  if (mode == ExposureMode::recommended) {
    out = recommend(g, beliefs, i, threshold);
  } else {
    if (i >= g.size()) throw ParameterError(fmt::format("agent index {} out of range", i));
    const auto nbrs = g.neighbors(i);
    out.assign(nbrs.begin(), nbrs.end());
  }

  if (out.size() > cap) {
    if (rng == nullptr) throw ParameterError("capped exposure needs a random source");
    // Partial Fisher-Yates: the first cap slots become a uniform sample.
    for (std::size_t s = 0; s < cap; ++s) {
      std::swap(out[s], out[s + rng->below(out.size() - s)]);
    }
    out.resize(cap);
    std::sort(out.begin(), out.end());
  }
  return out;
}

}  // namespace echo
