#pragma once

#include <span>
#include <string>
#include <vector>

#include "echo/graph.hpp"
#include "echo/population.hpp"
#include "echo/recommendation.hpp"

namespace echo {

using BeliefVector = std::vector<double>;
// Entry t holds the beliefs at the end of day t; entry 0 is the initial state.
using Trajectory = std::vector<BeliefVector>;

// Bounded confidence. Each day every agent moves toward the mean of the
// neighbors it both hears from and accepts (|difference| <= epsilon) at rate mu.
struct BcmParams {
  double epsilon = 2.0;
  double mu = 0.3;
  bool use_recommendation = true;
  double threshold = kRecommendationThreshold;

  void validate() const;
};

// Friedkin-Johnsen: v_i(t) = a * s_i + (1 - a) * mean of exposed neighbors,
// with anchors s fixed to the initial beliefs.
struct FjParams {
  double susceptibility = 0.3;
  bool use_recommendation = true;
  double threshold = kRecommendationThreshold;
  std::vector<double> anchors;

  void validate() const;
};

BeliefVector bcm_day(const NetworkGraph& g, std::span<const double> beliefs, const BcmParams& p);
BeliefVector fj_day(const NetworkGraph& g, std::span<const double> beliefs, const FjParams& p);

// Iterates the engine for `days` synchronous days. For FJ, empty anchors are
// filled from the population's initial beliefs.
Trajectory run_numeric(const NetworkGraph& g, const Population& pop, const BcmParams& p,
                       std::size_t days);
Trajectory run_numeric(const NetworkGraph& g, const Population& pop, FjParams p,
                       std::size_t days);

}  // namespace echo
