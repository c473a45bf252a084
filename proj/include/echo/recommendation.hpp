#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "echo/graph.hpp"
#include "echo/rng.hpp"

namespace echo {

enum class ExposureMode { all_neighbors, recommended };

std::string to_string(ExposureMode mode);
ExposureMode exposure_mode_from_string(const std::string& name);

// Similarity threshold of the recommendation filter.
inline constexpr double kRecommendationThreshold = 2.0;
inline constexpr std::size_t kNoCap = std::numeric_limits<std::size_t>::max();

// Neighbors j of i with |v_i - v_j| <= threshold, ascending.
std::vector<std::size_t> recommend(const NetworkGraph& g, std::span<const double> beliefs,
                                   std::size_t i, double threshold);

// Who agent i hears from today. Results above cap are subsampled uniformly
// (seeded) and returned ascending. rng may be null when cap == kNoCap.
std::vector<std::size_t> exposure_set(const NetworkGraph& g, std::span<const double> beliefs,
                                      std::size_t i, ExposureMode mode, std::size_t cap,
                                      Rng* rng, double threshold = kRecommendationThreshold);

}  // namespace echo
