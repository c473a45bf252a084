#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "echo/rng.hpp"

namespace echo {

using Edge = std::pair<std::size_t, std::size_t>;

// Undirected simple graph over node indices [0, n). Neighbor lists are kept
// sorted so iteration order, and therefore every downstream computation, is
// deterministic.
class NetworkGraph {
 public:
  NetworkGraph() = default;
  explicit NetworkGraph(std::size_t n) : adjacency_(n) {}

  // Throws ParameterError on self-loops, duplicates or out-of-range indices.
  static NetworkGraph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const std::size_t> neighbors(std::size_t i) const {
    return adjacency_.at(i);
  }
  std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }

  bool has_edge(std::size_t i, std::size_t j) const;

  // Both return false (and leave the graph unchanged) when the edit is a
  // no-op: a self-loop, an existing edge, or a missing edge respectively.
  bool add_edge(std::size_t i, std::size_t j);
  bool remove_edge(std::size_t i, std::size_t j);

  // Canonical edge list: i < j, ascending lexicographic order.
  std::vector<Edge> edges() const;

  friend bool operator==(const NetworkGraph&, const NetworkGraph&) = default;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t edge_count_ = 0;
};

enum class GraphKind { small_world, scale_free, random };

std::string to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& name);

struct GraphSpec {
  GraphKind kind = GraphKind::small_world;
  std::size_t n = 50;
  std::size_t k = 4;         // small_world: even ring degree
  double p_rewire = 0.1;     // small_world
  std::size_t m = 2;         // scale_free: edges per new node
  double p_edge = 0.08;      // random

  void validate() const;
};

NetworkGraph generate_small_world(std::size_t n, std::size_t k, double p_rewire, Rng& rng);
NetworkGraph generate_scale_free(std::size_t n, std::size_t m, Rng& rng);
NetworkGraph generate_random(std::size_t n, double p_edge, Rng& rng);
NetworkGraph generate(const GraphSpec& spec, Rng& rng);

double clustering_coefficient(const NetworkGraph& g);
std::vector<std::size_t> degree_sequence(const NetworkGraph& g);
bool is_connected(const NetworkGraph& g);

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// Hop distances from source; kUnreachable for other components.
std::vector<std::size_t> bfs_distances(const NetworkGraph& g, std::size_t source);

// Edge-list text: first line n, then "i j" per edge in canonical order.
void write_edge_list(std::ostream& out, const NetworkGraph& g);
NetworkGraph read_edge_list(std::istream& in);

}  // namespace echo
