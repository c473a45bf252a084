#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "echo/graph.hpp"

namespace echo {

// Population variance of beliefs (divides by N).
double polarization(std::span<const double> beliefs);

// DG = (1 / 2N) * sum_i DG_i, where DG_i is the mean squared difference to
// i's neighbors. Isolated nodes contribute 0.
double global_disagreement(const NetworkGraph& g, std::span<const double> beliefs);

// Neighbor correlation index: Pearson correlation, across non-isolated
// nodes, between own belief and the mean belief of the node's neighbors.
// nullopt when either side has zero variance or fewer than two nodes qualify.
std::optional<double> nci(const NetworkGraph& g, std::span<const double> beliefs);

struct MetricsSnapshot {
  std::size_t day = 0;
  double polarization = 0.0;
  double global_disagreement = 0.0;
  std::optional<double> nci;
  std::vector<double> beliefs;
};

MetricsSnapshot snapshot(std::size_t day, const NetworkGraph& g, std::span<const double> beliefs);

// Final minus initial. An undefined NCI at either end makes the NCI delta
// undefined.
struct MetricsDelta {
  double polarization = 0.0;
  double global_disagreement = 0.0;
  std::optional<double> nci;
};

MetricsDelta delta(std::span<const MetricsSnapshot> run);

// "day,polarization,global_disagreement,nci" with an empty nci cell when
// undefined.
void write_metrics_csv(std::ostream& out, std::span<const MetricsSnapshot> run);

}  // namespace echo
