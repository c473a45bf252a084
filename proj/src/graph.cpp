#include "echo/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>

#include <fmt/format.h>

#include "echo/errors.hpp"

namespace echo {

NetworkGraph NetworkGraph::from_edges(std::size_t n, std::span<const Edge> edges) {
  NetworkGraph g(n);
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n) {
      throw ParameterError(fmt::format("edge ({}, {}) out of range for n={}", i, j, n));
    }
    if (!g.add_edge(i, j)) {
      throw ParameterError(fmt::format("edge ({}, {}) is a self-loop or duplicate", i, j));
    }
  }
  return g;
}

bool NetworkGraph::has_edge(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) return false;
  const auto& row = adjacency_[i];
  return std::binary_search(row.begin(), row.end(), j);
}

bool NetworkGraph::add_edge(std::size_t i, std::size_t j) {
  if (i >= size() || j >= size()) {
    throw ParameterError(fmt::format("node index out of range: ({}, {})", i, j));
  }
  if (i == j || has_edge(i, j)) return false;
  auto insert_sorted = [](std::vector<std::size_t>& row, std::size_t v) {
    row.insert(std::lower_bound(row.begin(), row.end(), v), v);
  };
  insert_sorted(adjacency_[i], j);
  insert_sorted(adjacency_[j], i);
  ++edge_count_;
  return true;
}

bool NetworkGraph::remove_edge(std::size_t i, std::size_t j) {
  if (!has_edge(i, j)) return false;
  auto erase_sorted = [](std::vector<std::size_t>& row, std::size_t v) {
    row.erase(std::lower_bound(row.begin(), row.end(), v));
  };
  erase_sorted(adjacency_[i], j);
  erase_sorted(adjacency_[j], i);
  --edge_count_;
  return true;
}

std::vector<Edge> NetworkGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j : adjacency_[i]) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::small_world: return "small_world";
    case GraphKind::scale_free: return "scale_free";
    case GraphKind::random: return "random";
  }
  return "unknown";
}

GraphKind graph_kind_from_string(const std::string& name) {
  if (name == "small_world") return GraphKind::small_world;
  if (name == "scale_free") return GraphKind::scale_free;
  if (name == "random") return GraphKind::random;
  throw ParameterError(fmt::format("unknown graph kind '{}'", name));
}

void GraphSpec::validate() const {
  switch (kind) {
    case GraphKind::small_world:
      if (k < 2 || k % 2 != 0 || k >= n) {
        throw ParameterError(fmt::format(
            "small_world needs an even k with 2 <= k < n (k={}, n={})", k, n));
      }
      if (!(p_rewire >= 0.0 && p_rewire <= 1.0)) {
        throw ParameterError(fmt::format("p_rewire must lie in [0,1], got {}", p_rewire));
      }
      break;
    case GraphKind::scale_free:
      if (m < 1 || m >= n) {
        throw ParameterError(fmt::format("scale_free needs 1 <= m < n (m={}, n={})", m, n));
      }
      break;
    case GraphKind::random:
      if (n < 1) throw ParameterError("random graph needs n >= 1");
      if (!(p_edge >= 0.0 && p_edge <= 1.0)) {
        throw ParameterError(fmt::format("p_edge must lie in [0,1], got {}", p_edge));
      }
      break;
  }
}

NetworkGraph generate_small_world(std::size_t n, std::size_t k, double p_rewire, Rng& rng) {
  GraphSpec{.kind = GraphKind::small_world, .n = n, .k = k, .p_rewire = p_rewire}.validate();

  NetworkGraph g(n);
  for (std::size_t offset = 1; offset <= k / 2; ++offset) {
    for (std::size_t u = 0; u < n; ++u) g.add_edge(u, (u + offset) % n);
  }

  // Rewire each lattice edge once, lap by lap, moving its far endpoint to a
  // uniform node that is neither u nor already adjacent to u.
  for (std::size_t offset = 1; offset <= k / 2; ++offset) {
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t v = (u + offset) % n;
      if (!rng.bernoulli(p_rewire) || !g.has_edge(u, v)) continue;
      for (std::size_t attempt = 0; attempt < n; ++attempt) {
        const std::size_t w = rng.below(n);
        if (w == u || g.has_edge(u, w)) continue;
        g.remove_edge(u, v);
        g.add_edge(u, w);
        break;
      }
    }
  }
  return g;
}

NetworkGraph generate_scale_free(std::size_t n, std::size_t m, Rng& rng) {
  GraphSpec{.kind = GraphKind::scale_free, .n = n, .m = m}.validate();

  NetworkGraph g(n);
  // One entry per edge endpoint: sampling uniformly from it is sampling nodes
  // proportionally to degree.
  std::vector<std::size_t> endpoints;
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = i + 1; j <= m; ++j) {
      g.add_edge(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }

  std::vector<std::size_t> targets;
  for (std::size_t node = m + 1; node < n; ++node) {
    targets.clear();
    while (targets.size() < m) {
      const std::size_t t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    for (std::size_t t : targets) {
      g.add_edge(node, t);
      endpoints.push_back(node);
      endpoints.push_back(t);
    }
  }
  return g;
}

NetworkGraph generate_random(std::size_t n, double p_edge, Rng& rng) {
  GraphSpec{.kind = GraphKind::random, .n = n, .p_edge = p_edge}.validate();

  NetworkGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p_edge)) g.add_edge(i, j);
    }
  }
  return g;
}

NetworkGraph generate(const GraphSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case GraphKind::small_world: return generate_small_world(spec.n, spec.k, spec.p_rewire, rng);
    case GraphKind::scale_free: return generate_scale_free(spec.n, spec.m, rng);
    case GraphKind::random: return generate_random(spec.n, spec.p_edge, rng);
  }
  throw ParameterError("unknown graph kind");
}

double clustering_coefficient(const NetworkGraph& g) {
  if (g.size() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto nbrs = g.neighbors(i);
    const std::size_t d = nbrs.size();
    if (d < 2) continue;
    std::size_t links = 0;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a + 1; b < d; ++b) {
        if (g.has_edge(nbrs[a], nbrs[b])) ++links;
      }
    }
    total += static_cast<double>(links) / (static_cast<double>(d * (d - 1)) / 2.0);
  }
  return total / static_cast<double>(g.size());
}

std::vector<std::size_t> degree_sequence(const NetworkGraph& g) {
  std::vector<std::size_t> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g.degree(i);
  return out;
}

std::vector<std::size_t> bfs_distances(const NetworkGraph& g, std::size_t source) {
  std::vector<std::size_t> dist(g.size(), kUnreachable);
  if (source >= g.size()) {
    throw ParameterError(fmt::format("bfs source {} out of range", source));
  }
  std::queue<std::size_t> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

bool is_connected(const NetworkGraph& g) {
  if (g.size() == 0) return true;
  const auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](std::size_t d) { return d == kUnreachable; });
}

void write_edge_list(std::ostream& out, const NetworkGraph& g) {
  out << g.size() << '\n';
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

NetworkGraph read_edge_list(std::istream& in) {
  std::size_t n = 0;
  if (!(in >> n)) throw ParameterError("edge list: missing node count");
  std::vector<Edge> edges;
  std::size_t i = 0;
  std::size_t j = 0;
  while (in >> i >> j) edges.emplace_back(i, j);
  if (!in.eof()) throw ParameterError("edge list: malformed edge line");
  return NetworkGraph::from_edges(n, edges);
}

}  // namespace echo
