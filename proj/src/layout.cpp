#include "echo/layout.hpp"

#include <algorithm>
#include <cmath>

#include "echo/rng.hpp"

namespace echo {

std::vector<Point> force_directed_layout(const NetworkGraph& g, std::uint64_t seed,
                                         const LayoutParams& params) {
  const std::size_t n = g.size();
  std::vector<Point> pos(n);
  if (n < 2) return pos;

  Rng rng = Rng::stream(seed, "layout");
  for (auto& p : pos) {
    p.x = rng.uniform(-0.5, 0.5) * params.width;
    p.y = rng.uniform(-0.5, 0.5) * params.width;
  }

  const double area = params.width * params.width;
  const double k = std::sqrt(area / static_cast<double>(n));
  double temperature = params.width / 10.0;
  const double cooling = temperature / static_cast<double>(params.iterations + 1);

  std::vector<Point> disp(n);
  for (std::size_t it = 0; it < params.iterations; ++it) {
    std::fill(disp.begin(), disp.end(), Point{});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double dx = pos[i].x - pos[j].x;
        double dy = pos[i].y - pos[j].y;
        const double dist = std::max(std::hypot(dx, dy), 1e-9);
        const double force = k * k / dist;
        dx = dx / dist * force;
        dy = dy / dist * force;
        disp[i].x += dx;
        disp[i].y += dy;
        disp[j].x -= dx;
        disp[j].y -= dy;
      }
    }
    for (const auto& [i, j] : g.edges()) {
      double dx = pos[i].x - pos[j].x;
      double dy = pos[i].y - pos[j].y;
      const double dist = std::max(std::hypot(dx, dy), 1e-9);
      const double force = dist * dist / k;
      dx = dx / dist * force;
      dy = dy / dist * force;
      disp[i].x -= dx;
      disp[i].y -= dy;
      disp[j].x += dx;
      disp[j].y += dy;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double len = std::max(std::hypot(disp[i].x, disp[i].y), 1e-9);
      const double step = std::min(len, temperature);
      pos[i].x += disp[i].x / len * step;
      pos[i].y += disp[i].y / len * step;
    }
    temperature -= cooling;
  }

  // Rescale into the requested box, centered on the origin.
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& p : pos) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(n);
  cy /= static_cast<double>(n);
  double extent = 0.0;
  for (auto& p : pos) {
    p.x -= cx;
    p.y -= cy;
    extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
  }
  if (extent > 0.0) {
    const double scale = params.width / 2.0 / extent;
    for (auto& p : pos) {
      p.x *= scale;
      p.y *= scale;
    }
  }
  return pos;
}

}  // namespace echo
