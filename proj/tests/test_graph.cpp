#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "echo/errors.hpp"
#include "echo/graph.hpp"
#include "oracles.hpp"

using namespace echo;

namespace {

void check_invariants(const NetworkGraph& g) {
  std::size_t endpoint_total = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto nbrs = g.neighbors(i);
    CHECK(std::is_sorted(nbrs.begin(), nbrs.end()));
    CHECK(std::adjacent_find(nbrs.begin(), nbrs.end()) == nbrs.end());
    for (std::size_t j : nbrs) {
      CHECK(j < g.size());
      CHECK(j != i);
      CHECK(g.has_edge(j, i));
    }
    endpoint_total += nbrs.size();
  }
  CHECK(endpoint_total == 2 * g.edge_count());
}

NetworkGraph path(std::size_t n) {
  NetworkGraph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

std::size_t median_degree(const NetworkGraph& g) {
  auto d = degree_sequence(g);
  std::sort(d.begin(), d.end());
  return d[d.size() / 2];
}

}  // namespace

TEST_CASE("small world without rewiring is the ring lattice") {
  Rng rng(7);
  const auto g = generate_small_world(6, 2, 0.0, rng);
  CHECK(g.edge_count() == 6);
  CHECK(degree_sequence(g) == std::vector<std::size_t>(6, 2));
  for (std::size_t i = 0; i < 6; ++i) CHECK(g.has_edge(i, (i + 1) % 6));
  check_invariants(g);
}

TEST_CASE("ring lattice clustering matches the closed form and the triangle count") {
  Rng rng(1);
  const auto g = generate_small_world(50, 4, 0.0, rng);
  const double expected = 3.0 * (4 - 2) / (4.0 * (4 - 1));
  CHECK(oracle::clustering(g) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(clustering_coefficient(g) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rewiring preserves the edge count") {
  Rng rng(1);
  const auto g = generate_small_world(50, 4, 0.1, rng);
  CHECK(g.edge_count() == 100);
  check_invariants(g);

  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng r(seed);
    CHECK(generate_small_world(40, 6, 0.5, r).edge_count() == 120);
  }
}

TEST_CASE("rewiring a complete ring keeps every edge") {
  // n=5, k=4 is K5: no valid rewiring target ever exists.
  Rng rng(3);
  const auto g = generate_small_world(5, 4, 1.0, rng);
  CHECK(g.edge_count() == 10);
  check_invariants(g);
}

TEST_CASE("scale free with m=1 on three nodes is a two-edge tree") {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    Rng rng(seed);
    const auto g = generate_scale_free(3, 1, rng);
    CHECK(g.edge_count() == 2);
    CHECK(is_connected(g));
  }
}

TEST_CASE("scale free edge count and hub dominance") {
  Rng rng(1);
  const auto g = generate_scale_free(50, 2, rng);
  CHECK(g.edge_count() == 3 + 2 * (50 - 3));
  CHECK(is_connected(g));
  const auto d = degree_sequence(g);
  const auto max_degree = *std::max_element(d.begin(), d.end());
  CHECK(max_degree > 3 * median_degree(g));
  check_invariants(g);
}

TEST_CASE("scale free seeds differ in edges but not in count") {
  Rng a(1);
  Rng b(2);
  const auto g1 = generate_scale_free(50, 2, a);
  const auto g2 = generate_scale_free(50, 2, b);
  CHECK(g1.edges() != g2.edges());
  CHECK(g1.edge_count() == g2.edge_count());
}

TEST_CASE("random graph extremes") {
  Rng rng(5);
  CHECK(generate_random(10, 0.0, rng).edge_count() == 0);
  const auto full = generate_random(10, 1.0, rng);
  CHECK(full.edge_count() == 45);
  CHECK(clustering_coefficient(full) == doctest::Approx(1.0));
}

TEST_CASE("random graph mean edge count over seeds") {
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    total += static_cast<double>(generate_random(50, 0.08, rng).edge_count());
  }
  const double mean = total / 100.0;
  CHECK(std::abs(mean - 98.0) <= 0.05 * 98.0);
}

TEST_CASE("clustering coefficient on small graphs") {
  const Edge tri[] = {{0, 1}, {1, 2}, {0, 2}};
  CHECK(clustering_coefficient(NetworkGraph::from_edges(3, tri)) == doctest::Approx(1.0));
  CHECK(clustering_coefficient(path(3)) == 0.0);

  Rng rng(1);
  const auto cycle = generate_small_world(6, 2, 0.0, rng);
  CHECK(oracle::clustering(cycle) == 0.0);
  CHECK(clustering_coefficient(cycle) == 0.0);
}

TEST_CASE("clustering agrees with the triangle-count oracle on random graphs") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng(seed);
    const auto g = generate_random(15, 0.3, rng);
    CHECK(clustering_coefficient(g) == doctest::Approx(oracle::clustering(g)).epsilon(1e-12));
  }
}

TEST_CASE("degree sequences") {
  Rng rng(1);
  CHECK(degree_sequence(generate_small_world(6, 2, 0.0, rng)) ==
        std::vector<std::size_t>(6, 2));

  const Edge star[] = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  CHECK(degree_sequence(NetworkGraph::from_edges(5, star)) ==
        std::vector<std::size_t>{4, 1, 1, 1, 1});

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng r(seed);
    for (const auto& g : {generate_small_world(30, 4, 0.2, r), generate_scale_free(30, 3, r),
                          generate_random(30, 0.2, r)}) {
      const auto d = degree_sequence(g);
      std::size_t sum = 0;
      for (auto x : d) sum += x;
      CHECK(sum == 2 * g.edge_count());
    }
  }
}

TEST_CASE("generators are deterministic per seed and keep invariants") {
  for (auto kind : {GraphKind::small_world, GraphKind::scale_free, GraphKind::random}) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      GraphSpec spec{.kind = kind, .n = 50};
      Rng a(seed);
      Rng b(seed);
      const auto g1 = generate(spec, a);
      const auto g2 = generate(spec, b);
      CHECK(g1 == g2);
      check_invariants(g1);
    }
  }
}

TEST_CASE("small world clusters more than a density-matched random graph") {
  double sw = 0.0;
  double rnd = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng a(seed);
    Rng b(seed);
    sw += clustering_coefficient(generate_small_world(50, 4, 0.1, a));
    rnd += clustering_coefficient(generate_random(50, 4.0 / 49.0, b));
  }
  CHECK(sw / 20 > rnd / 20);
}

TEST_CASE("scale free hubs grow with n") {
  double small = 0.0;
  double large = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng a(seed);
    Rng b(seed);
    const auto d50 = degree_sequence(generate_scale_free(50, 2, a));
    const auto d200 = degree_sequence(generate_scale_free(200, 2, b));
    small += static_cast<double>(*std::max_element(d50.begin(), d50.end()));
    large += static_cast<double>(*std::max_element(d200.begin(), d200.end()));
  }
  CHECK(small < large);
}

TEST_CASE("invalid generator parameters") {
  Rng rng(1);
  CHECK_THROWS_AS(generate_small_world(10, 3, 0.1, rng), ParameterError);
  CHECK_THROWS_AS(generate_small_world(4, 4, 0.1, rng), ParameterError);
  CHECK_THROWS_AS(generate_small_world(10, 0, 0.1, rng), ParameterError);
  CHECK_THROWS_AS(generate_small_world(10, 4, 1.5, rng), ParameterError);
  CHECK_THROWS_AS(generate_scale_free(10, 0, rng), ParameterError);
  CHECK_THROWS_AS(generate_scale_free(3, 3, rng), ParameterError);
  CHECK_THROWS_AS(generate_random(0, 0.5, rng), ParameterError);
  CHECK_THROWS_AS(generate_random(10, -0.1, rng), ParameterError);
  CHECK_THROWS_AS(graph_kind_from_string("lattice"), ParameterError);
}

TEST_CASE("graph editing rejects self loops and duplicates") {
  NetworkGraph g(4);
  CHECK(g.add_edge(0, 1));
  CHECK_FALSE(g.add_edge(1, 0));
  CHECK_FALSE(g.add_edge(2, 2));
  CHECK_THROWS_AS(g.add_edge(0, 9), ParameterError);
  CHECK(g.remove_edge(1, 0));
  CHECK_FALSE(g.remove_edge(1, 0));
  CHECK(g.edge_count() == 0);

  const Edge dup[] = {{0, 1}, {1, 0}};
  CHECK_THROWS_AS(NetworkGraph::from_edges(3, dup), ParameterError);
}

TEST_CASE("edge list text is canonical and reads back") {
  const Edge edges[] = {{3, 1}, {0, 2}, {2, 1}};
  const auto g = NetworkGraph::from_edges(4, edges);
  std::ostringstream out;
  write_edge_list(out, g);
  CHECK(out.str() == "4\n0 2\n1 2\n1 3\n");

  Rng rng(11);
  const auto big = generate_scale_free(40, 2, rng);
  std::stringstream io;
  write_edge_list(io, big);
  CHECK(read_edge_list(io) == big);

  std::istringstream bad("3\n0 1\n1 x\n");
  CHECK_THROWS_AS(read_edge_list(bad), ParameterError);
}

TEST_CASE("bfs distances") {
  const auto g = path(4);
  CHECK(bfs_distances(g, 0) == std::vector<std::size_t>{0, 1, 2, 3});
  NetworkGraph split(3);
  split.add_edge(0, 1);
  CHECK(bfs_distances(split, 0)[2] == kUnreachable);
  CHECK_FALSE(is_connected(split));
}
