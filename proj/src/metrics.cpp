#include "echo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "echo/errors.hpp"

namespace echo {
namespace {

double mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Treats vectors whose spread is at rounding level as constant, so that
// equal beliefs averaged over different neighbor counts still register as
// zero variance.
bool effectively_constant(std::span<const double> xs) {
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double scale = std::max({1.0, std::abs(*lo), std::abs(*hi)});
  return (*hi - *lo) <= 1e-12 * scale;
}

void check_sizes(const NetworkGraph& g, std::span<const double> beliefs) {
  if (beliefs.size() != g.size()) {
    throw ParameterError(fmt::format("belief vector has {} entries for a graph of {} nodes",
                                     beliefs.size(), g.size()));
  }
}

}  // namespace

double polarization(std::span<const double> beliefs) {
  if (beliefs.empty()) throw ParameterError("polarization of an empty population");
  const double m = mean(beliefs);
  double ss = 0.0;
  for (double v : beliefs) ss += (v - m) * (v - m);
  return ss / static_cast<double>(beliefs.size());
}

double global_disagreement(const NetworkGraph& g, std::span<const double> beliefs) {
  check_sizes(g, beliefs);
  if (g.size() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto nbrs = g.neighbors(i);
    if (nbrs.empty()) continue;
    double local = 0.0;
    for (std::size_t j : nbrs) local += (beliefs[i] - beliefs[j]) * (beliefs[i] - beliefs[j]);
    total += local / static_cast<double>(nbrs.size());
  }
  return total / (2.0 * static_cast<double>(g.size()));
}

std::optional<double> nci(const NetworkGraph& g, std::span<const double> beliefs) {
  check_sizes(g, beliefs);
  std::vector<double> own;
  std::vector<double> around;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto nbrs = g.neighbors(i);
    if (nbrs.empty()) continue;
    double sum = 0.0;
    for (std::size_t j : nbrs) sum += beliefs[j];
    own.push_back(beliefs[i]);
    around.push_back(sum / static_cast<double>(nbrs.size()));
  }
  if (own.size() < 2 || effectively_constant(own) || effectively_constant(around)) {
    return std::nullopt;
  }

  const double mx = mean(own);
  const double my = mean(around);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < own.size(); ++k) {
    const double dx = own[k] - mx;
    const double dy = around[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

MetricsSnapshot snapshot(std::size_t day, const NetworkGraph& g, std::span<const double> beliefs) {
  MetricsSnapshot s;
  s.day = day;
  s.polarization = polarization(beliefs);
  s.global_disagreement = global_disagreement(g, beliefs);
  s.nci = nci(g, beliefs);
  s.beliefs.assign(beliefs.begin(), beliefs.end());
  return s;
}

MetricsDelta delta(std::span<const MetricsSnapshot> run) {
  if (run.size() < 2) throw ParameterError("delta needs at least two snapshots");
  const auto& first = run.front();
  const auto& last = run.back();
  MetricsDelta d;
  d.polarization = last.polarization - first.polarization;
  d.global_disagreement = last.global_disagreement - first.global_disagreement;
  if (first.nci && last.nci) d.nci = *last.nci - *first.nci;
  return d;
}

void write_metrics_csv(std::ostream& out, std::span<const MetricsSnapshot> run) {
  out << "day,polarization,global_disagreement,nci\n";
  for (const auto& s : run) {
    out << fmt::format("{},{},{},", s.day, s.polarization, s.global_disagreement);
    if (s.nci) out << fmt::format("{}", *s.nci);
    out << '\n';
  }
}

}  // namespace echo
