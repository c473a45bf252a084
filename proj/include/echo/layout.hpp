#pragma once

#include <cstdint>
#include <vector>

#include "echo/graph.hpp"

namespace echo {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct LayoutParams {
  std::size_t iterations = 300;
  double width = 1.0;   // positions end up in [-width/2, width/2]^2
};

// Fruchterman-Reingold spring layout from seeded initial positions. Same
// graph and seed, same coordinates.
std::vector<Point> force_directed_layout(const NetworkGraph& g, std::uint64_t seed,
                                         const LayoutParams& params = {});

}  // namespace echo
