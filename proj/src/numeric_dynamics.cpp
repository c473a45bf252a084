#include "echo/numeric_dynamics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "echo/errors.hpp"

namespace echo {
namespace {

std::vector<std::size_t> heard_from(const NetworkGraph& g, std::span<const double> beliefs,
                                    std::size_t i, bool use_recommendation, double threshold) {
  const auto mode = use_recommendation ? ExposureMode::recommended : ExposureMode::all_neighbors;
  return exposure_set(g, beliefs, i, mode, kNoCap, nullptr, threshold);
}

void check_sizes(const NetworkGraph& g, std::span<const double> beliefs) {
  if (beliefs.size() != g.size()) {
    throw ParameterError(fmt::format("belief vector has {} entries for a graph of {} nodes",
                                     beliefs.size(), g.size()));
  }
}

}  // namespace

void BcmParams::validate() const {
  if (!(epsilon >= 0.0)) throw ParameterError(fmt::format("epsilon must be >= 0, got {}", epsilon));
  if (!(mu > 0.0 && mu <= 0.5)) throw ParameterError(fmt::format("mu must lie in (0, 0.5], got {}", mu));
  if (!(threshold >= 0.0)) throw ParameterError("recommendation threshold must be >= 0");
}

void FjParams::validate() const {
  if (!(susceptibility >= 0.0 && susceptibility <= 1.0)) {
    throw ParameterError(fmt::format("susceptibility must lie in [0, 1], got {}", susceptibility));
  }
  if (!(threshold >= 0.0)) throw ParameterError("recommendation threshold must be >= 0");
}

BeliefVector bcm_day(const NetworkGraph& g, std::span<const double> beliefs, const BcmParams& p) {
  p.validate();
  check_sizes(g, beliefs);

  BeliefVector next(beliefs.begin(), beliefs.end());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double shift = 0.0;
    std::size_t accepted = 0;
    for (std::size_t j : heard_from(g, beliefs, i, p.use_recommendation, p.threshold)) {
      const double diff = beliefs[j] - beliefs[i];
      if (std::abs(diff) <= p.epsilon) {
        shift += diff;
        ++accepted;
      }
    }
    if (accepted > 0) next[i] = beliefs[i] + p.mu * (shift / static_cast<double>(accepted));
  }
  return next;
}

BeliefVector fj_day(const NetworkGraph& g, std::span<const double> beliefs, const FjParams& p) {
  p.validate();
  check_sizes(g, beliefs);
  if (p.anchors.size() != beliefs.size()) {
    throw ParameterError(fmt::format("FJ anchors have {} entries for {} agents", p.anchors.size(),
                                     beliefs.size()));
  }

  const double a = p.susceptibility;
  BeliefVector next(beliefs.begin(), beliefs.end());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto exposed = heard_from(g, beliefs, i, p.use_recommendation, p.threshold);
    if (exposed.empty()) continue;
    double sum = 0.0;
    for (std::size_t j : exposed) sum += beliefs[j];
    next[i] = a * p.anchors[i] + (1.0 - a) * (sum / static_cast<double>(exposed.size()));
  }
  return next;
}

namespace {

template <typename Step>
Trajectory iterate(const BeliefVector& initial, std::size_t days, Step step) {
  if (days < 1) throw ParameterError("a run needs at least one day");
  Trajectory out;
  out.reserve(days + 1);
  out.push_back(initial);
  for (std::size_t t = 1; t <= days; ++t) out.push_back(step(out.back()));
  return out;
}

}  // namespace

Trajectory run_numeric(const NetworkGraph& g, const Population& pop, const BcmParams& p,
                       std::size_t days) {
  return iterate(pop.beliefs, days, [&](const BeliefVector& v) { return bcm_day(g, v, p); });
}

Trajectory run_numeric(const NetworkGraph& g, const Population& pop, FjParams p,
                       std::size_t days) {
  if (p.anchors.empty()) p.anchors = pop.beliefs;
  return iterate(pop.beliefs, days, [&](const BeliefVector& v) { return fj_day(g, v, p); });
}

}  // namespace echo
