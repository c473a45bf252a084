#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "echo/errors.hpp"
#include "echo/metrics.hpp"
#include "echo/numeric_dynamics.hpp"

using namespace echo;

namespace {

NetworkGraph pair_graph() {
  NetworkGraph g(2);
  g.add_edge(0, 1);
  return g;
}

NetworkGraph complete(std::size_t n) {
  NetworkGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  }
  return g;
}

Population population_of(std::vector<double> beliefs) {
  Population p;
  p.beliefs = std::move(beliefs);
  p.personas.resize(p.beliefs.size());
  p.topic = "t";
  return p;
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

double max_change(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

NetworkGraph connected_small_world(std::uint64_t seed) {
  for (;; ++seed) {
    Rng rng(seed);
    auto g = generate_small_world(50, 4, 0.1, rng);
    if (is_connected(g)) return g;
  }
}

}  // namespace

TEST_CASE("bcm two-node hand case") {
  // Each node moves half way to the other: 0 + 0.5 * (1 - 0), 1 + 0.5 * (0 - 1).
  const BcmParams p{.epsilon = 2.0, .mu = 0.5, .use_recommendation = false};
  CHECK(bcm_day(pair_graph(), std::vector<double>{0.0, 1.0}, p) == std::vector<double>{0.5, 0.5});
}

TEST_CASE("bcm with a closed gate or uniform beliefs is a fixed point") {
  Rng rng(5);
  const auto g = generate_random(20, 0.3, rng);
  std::vector<double> distinct(20);
  for (std::size_t i = 0; i < 20; ++i) distinct[i] = -2.0 + 0.2 * static_cast<double>(i);
  CHECK(bcm_day(g, distinct, {.epsilon = 0.0, .mu = 0.5}) == distinct);

  const std::vector<double> flat(20, 1.25);
  for (double eps : {0.0, 1.0, 4.0}) {
    for (double mu : {0.1, 0.5}) {
      CHECK(bcm_day(g, flat, {.epsilon = eps, .mu = mu}) == flat);
      CHECK(bcm_day(g, flat, {.epsilon = eps, .mu = mu, .use_recommendation = false}) == flat);
    }
  }
}

TEST_CASE("bcm averages the accepted shifts") {
  // Centre 0 with leaves -1, 0.5 and 2; epsilon 1 accepts -1 and 0.5 only.
  NetworkGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  const std::vector<double> v{0.0, -1.0, 0.5, 2.0};
  const auto next = bcm_day(g, v, {.epsilon = 1.0, .mu = 0.4, .use_recommendation = false});
  CHECK(next[0] == doctest::Approx(0.4 * (-1.0 + 0.5) / 2.0));
  CHECK(next[1] == doctest::Approx(-1.0 + 0.4 * 1.0));
  CHECK(next[2] == doctest::Approx(0.5 - 0.4 * 0.5));
  CHECK(next[3] == 2.0);  // |2 - 0| > 1
}

TEST_CASE("bcm recommendation filter stacks with epsilon") {
  const std::vector<double> v{-2.0, 1.0};
  const auto g = pair_graph();
  // epsilon accepts the pair, the recommendation threshold does not.
  CHECK(bcm_day(g, v, {.epsilon = 4.0, .mu = 0.5, .use_recommendation = true}) == v);
  CHECK(bcm_day(g, v, {.epsilon = 4.0, .mu = 0.5, .use_recommendation = false}) ==
        std::vector<double>{-0.5, -0.5});
}

TEST_CASE("fj with full stubbornness returns the anchors") {
  Rng rng(2);
  const auto g = generate_scale_free(20, 2, rng);
  std::vector<double> anchors(20);
  std::vector<double> now(20);
  for (std::size_t i = 0; i < 20; ++i) {
    anchors[i] = rng.uniform(-2.0, 2.0);
    now[i] = rng.uniform(-2.0, 2.0);
  }
  CHECK(fj_day(g, now, {.susceptibility = 1.0, .use_recommendation = false, .anchors = anchors}) ==
        anchors);
}

TEST_CASE("fj with no stubbornness on a triangle") {
  const std::vector<double> v{-2.0, 0.0, 2.0};
  const auto next =
      fj_day(complete(3), v, {.susceptibility = 0.0, .use_recommendation = false, .anchors = v});
  CHECK(next == std::vector<double>{1.0, 0.0, -1.0});
}

TEST_CASE("fj fixed point when beliefs and anchors agree") {
  Rng rng(8);
  const auto g = generate_random(15, 0.3, rng);
  const std::vector<double> c(15, -0.75);
  const auto next = fj_day(g, c, {.susceptibility = 0.3, .anchors = c});
  for (double v : next) CHECK(v == doctest::Approx(-0.75).epsilon(1e-15));
}

TEST_CASE("run_numeric matches direct day calls") {
  Rng rng(3);
  const auto g = generate_small_world(20, 4, 0.2, rng);
  Rng prng(4);
  const auto pop = init_population(20, "t", false, prng);

  const BcmParams bcm{.epsilon = 1.0, .mu = 0.3};
  const auto t1 = run_numeric(g, pop, bcm, 1);
  REQUIRE(t1.size() == 2);
  CHECK(t1[0] == pop.beliefs);
  CHECK(t1[1] == bcm_day(g, pop.beliefs, bcm));

  const auto t5 = run_numeric(g, pop, FjParams{.susceptibility = 0.3}, 5);
  REQUIRE(t5.size() == 6);
  FjParams fj{.susceptibility = 0.3, .anchors = pop.beliefs};
  auto v = pop.beliefs;
  for (int d = 0; d < 5; ++d) v = fj_day(g, v, fj);
  CHECK(t5.back() == v);

  CHECK_THROWS_AS(run_numeric(g, pop, bcm, 0), ParameterError);
}

TEST_CASE("bcm reaches consensus under full confidence") {
  const auto g = connected_small_world(1);
  Rng prng(1);
  const auto pop = init_population(50, "t", false, prng);
  const auto traj =
      run_numeric(g, pop, BcmParams{.epsilon = 4.0, .mu = 0.5, .use_recommendation = false}, 200);
  CHECK(spread(traj.back()) < 0.01);
}

TEST_CASE("fj converges geometrically") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const auto g = generate_scale_free(50, 2, rng);
    const auto pop = init_population(50, "t", false, rng);
    const auto traj = run_numeric(g, pop, FjParams{.susceptibility = 0.3}, 200);
    CHECK(max_change(traj[200], traj[199]) < 1e-6);

    // Without the recommendation filter the update is a fixed linear
    // contraction, so consecutive changes shrink by at least (1 - alpha).
    const auto linear =
        run_numeric(g, pop, FjParams{.susceptibility = 0.3, .use_recommendation = false}, 40);
    for (std::size_t t = 2; t < linear.size(); ++t) {
      const double prev = max_change(linear[t - 1], linear[t - 2]);
      const double now = max_change(linear[t], linear[t - 1]);
      CHECK(now <= 0.7 * prev + 1e-15);
    }
  }
}

TEST_CASE("synchronous updates do not depend on agent labels") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const auto g = generate_random(15, 0.3, rng);
    std::vector<double> v(15);
    for (auto& x : v) x = rng.uniform(-2.0, 2.0);

    std::vector<std::size_t> perm(15);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = 14; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

    NetworkGraph h(15);
    for (const auto& [a, b] : g.edges()) h.add_edge(perm[a], perm[b]);
    std::vector<double> w(15);
    for (std::size_t i = 0; i < 15; ++i) w[perm[i]] = v[i];

    const BcmParams bcm{.epsilon = 1.5, .mu = 0.3};
    const FjParams fj_g{.susceptibility = 0.3, .anchors = v};
    const FjParams fj_h{.susceptibility = 0.3, .anchors = w};
    const auto bg = bcm_day(g, v, bcm);
    const auto bh = bcm_day(h, w, bcm);
    const auto fg = fj_day(g, v, fj_g);
    const auto fh = fj_day(h, w, fj_h);
    for (std::size_t i = 0; i < 15; ++i) {
      CHECK(bh[perm[i]] == doctest::Approx(bg[i]).epsilon(1e-14));
      CHECK(fh[perm[i]] == doctest::Approx(fg[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("bcm stays inside the initial hull") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const auto g = generate_small_world(50, 4, 0.1, rng);
    const auto pop = init_population(50, "t", false, rng);
    const auto [lo, hi] = std::minmax_element(pop.beliefs.begin(), pop.beliefs.end());
    const auto traj =
        run_numeric(g, pop, BcmParams{.epsilon = 4.0, .mu = 0.5, .use_recommendation = false}, 50);
    const double p0 = polarization(traj.front());
    for (const auto& v : traj) {
      for (double x : v) {
        CHECK(x >= *lo);
        CHECK(x <= *hi);
      }
      CHECK(polarization(v) <= p0 + 1e-12);
    }
  }
}

TEST_CASE("numeric runs are bit-exact per input") {
  Rng a(6);
  Rng b(6);
  const auto g1 = generate_scale_free(40, 2, a);
  const auto g2 = generate_scale_free(40, 2, b);
  const auto p = population_of(std::vector<double>(40, 0.0));
  Rng prng(6);
  const auto pop = init_population(40, "t", false, prng);
  CHECK(run_numeric(g1, pop, BcmParams{}, 30) == run_numeric(g2, pop, BcmParams{}, 30));
  CHECK(run_numeric(g1, pop, FjParams{}, 30) == run_numeric(g2, pop, FjParams{}, 30));
  CHECK(run_numeric(g1, p, BcmParams{}, 3).back() == p.beliefs);
}

TEST_CASE("invalid numeric parameters") {
  const auto g = pair_graph();
  const std::vector<double> v{0.0, 1.0};
  CHECK_THROWS_AS(bcm_day(g, v, {.epsilon = 1.0, .mu = 0.0}), ParameterError);
  CHECK_THROWS_AS(bcm_day(g, v, {.epsilon = 1.0, .mu = 0.6}), ParameterError);
  CHECK_THROWS_AS(bcm_day(g, v, {.epsilon = -1.0, .mu = 0.3}), ParameterError);
  CHECK_THROWS_AS(fj_day(g, v, {.susceptibility = 1.5, .anchors = v}), ParameterError);
  CHECK_THROWS_AS(fj_day(g, v, {.susceptibility = 0.5, .anchors = {0.0}}), ParameterError);
  CHECK_THROWS_AS(bcm_day(g, std::vector<double>{0.0}, {}), ParameterError);
}
