#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "echo/errors.hpp"
#include "echo/interventions.hpp"
#include "echo/llm_dynamics.hpp"

using namespace echo;

namespace {

NetworkGraph path_graph(std::size_t n) {
  NetworkGraph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

std::vector<std::string> labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("opinion of " + std::to_string(i));
  return out;
}

SsfRun mock_run(NudgeKind kind, std::uint64_t seed) {
  Rng grng(seed);
  const auto g = generate_scale_free(40, 2, grng);
  Rng prng(seed + 100);
  const auto pop = init_population(40, std::string(kDefaultTopic), true, prng);
  MockBackend mock;
  return run_ssf(g, pop, mock, SsfParams{}, NudgePolicy{.kind = kind}, 10, seed);
}

}  // namespace

TEST_CASE("targets are the extreme agents") {
  const std::vector<double> v{-2, -1, 0, 1, 2};
  CHECK(select_targets(v, 2) == std::vector<std::size_t>{0, 4});
  CHECK(select_targets(v, 1) == std::vector<std::size_t>{0, 1, 3, 4});
  CHECK(select_targets(std::vector<double>{0, 0, 1}, 2).empty());
}

TEST_CASE("active nudge quotes the most opposed agent") {
  const std::vector<double> v{-2, -1, 0, 1, 2};
  const auto ops = labels(5);
  const auto g = path_graph(5);
  CHECK(active_nudge_content(0, v, ops, g) == std::string(kOpposingPrefix) + "opinion of 4");
  CHECK(active_nudge_content(4, v, ops, g) == std::string(kOpposingPrefix) + "opinion of 0");
  CHECK(active_nudge_content(3, v, ops, g) == std::string(kOpposingPrefix) + "opinion of 0");
}

TEST_CASE("active nudge needs someone of the opposite sign") {
  const std::vector<double> v{2, 1, 0, 2};
  CHECK_FALSE(active_nudge_content(0, v, labels(4), path_graph(4)).has_value());
  // A neutral target has no opposite side.
  const std::vector<double> w{0, -2, 2};
  CHECK_FALSE(active_nudge_content(0, w, labels(3), path_graph(3)).has_value());
}

TEST_CASE("active nudge tie-break prefers fewer hops then lower index") {
  // 0 - 1 - 2 - 3 - 4 - 5 ; target 2 is +2, agents 0 and 4 both hold -2.
  const std::vector<double> v{-2, 0, 2, 0, -2, -2};
  const auto ops = labels(6);
  CHECK(active_nudge_content(2, v, ops, path_graph(6)) ==
        std::string(kOpposingPrefix) + "opinion of 0");

  NetworkGraph g = path_graph(6);
  g.add_edge(2, 4);
  CHECK(active_nudge_content(2, v, ops, g) == std::string(kOpposingPrefix) + "opinion of 4");

  // Unreachable candidates lose to reachable ones.
  NetworkGraph split(4);
  split.add_edge(0, 2);
  const std::vector<double> u{2, -2, -2, 0};
  CHECK(active_nudge_content(0, u, labels(4), split) ==
        std::string(kOpposingPrefix) + "opinion of 2");
}

TEST_CASE("passive nudger cycles through its texts") {
  const std::vector<std::string> texts{"a", "b", "c"};
  Rng rng(5);
  PassiveNudger nudger(texts, rng);
  const auto first = nudger.next();
  const auto start = std::find(texts.begin(), texts.end(), first) - texts.begin();
  REQUIRE(start < 3);
  for (std::size_t k = 1; k < 10; ++k) CHECK(nudger.next() == texts[(start + k) % 3]);

  Rng rng1(9);
  PassiveNudger single({"only"}, rng1);
  for (int k = 0; k < 4; ++k) CHECK(single.next() == "only");

  Rng a(11), b(11);
  PassiveNudger x(texts, a), y(texts, b);
  for (int k = 0; k < 5; ++k) CHECK(x.next() == y.next());
}

TEST_CASE("default passive texts") {
  const auto texts = default_passive_texts();
  CHECK(texts.size() >= 2);
  for (const auto& t : texts) CHECK_FALSE(t.empty());
}

TEST_CASE("passive texts from file") {
  const auto path = std::filesystem::temp_directory_path() / "echo_passive_texts.txt";
  {
    std::ofstream out(path);
    out << "first line\r\n\n   \nsecond line\n";
  }
  CHECK(load_passive_texts(path) == std::vector<std::string>{"first line", "second line"});
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_passive_texts(path), IoError);
}

TEST_CASE("policy validation") {
  NudgePolicy p;
  CHECK_NOTHROW(p.validate());
  p.extremity_threshold = 3;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p.extremity_threshold = 1;
  p.kind = NudgeKind::passive;
  p.passive_texts.clear();
  CHECK_THROWS_AS(p.validate(), ParameterError);
  CHECK(nudge_kind_from_string(to_string(NudgeKind::active)) == NudgeKind::active);
  CHECK_THROWS_AS(nudge_kind_from_string("loud"), ParameterError);
}

TEST_CASE("no nudge events without a policy") {
  const auto run = mock_run(NudgeKind::none, 1);
  for (const auto& e : run.transcript) CHECK(e.kind != EventKind::nudge);
}

TEST_CASE("nudge events target extremes at the start of the day") {
  for (auto kind : {NudgeKind::active, NudgeKind::passive}) {
    const auto run = mock_run(kind, 2);
    const auto texts = default_passive_texts();
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::size_t count = 0;
    for (const auto& e : run.transcript) {
      if (e.kind != EventKind::nudge) continue;
      ++count;
      CHECK(seen.insert({e.day, e.agent}).second);
      CHECK(std::abs(run.beliefs[e.day - 1][e.agent]) == 2.0);
      if (kind == NudgeKind::active) {
        CHECK(e.payload.rfind(kOpposingPrefix, 0) == 0);
      } else {
        CHECK(std::find(texts.begin(), texts.end(), e.payload) != texts.end());
      }
    }
    CHECK(count > 0);
  }
}

TEST_CASE("passive nudge is reproducible for a seed") {
  const auto a = mock_run(NudgeKind::passive, 3);
  const auto b = mock_run(NudgeKind::passive, 3);
  CHECK(a.transcript == b.transcript);
}

TEST_CASE("passive policy without a text source is rejected by the day step") {
  NetworkGraph g(1);
  Population pop;
  pop.topic = "t";
  pop.grid = true;
  pop.beliefs = {2};
  pop.personas.resize(1);
  MockBackend mock;
  Rng rng(1);
  CHECK_THROWS_AS(ssf_day(1, g, pop, initial_states(pop), mock, SsfParams{},
                          NudgePolicy{.kind = NudgeKind::passive}, nullptr, rng),
                  ParameterError);
}
