#include <doctest.h>

#include <set>
#include <sstream>

#include "echo/errors.hpp"
#include "echo/population.hpp"

using namespace echo;

TEST_CASE("population is reproducible per seed") {
  Rng a(1);
  Rng b(1);
  CHECK(init_population(2, std::string(kDefaultTopic), false, a) ==
        init_population(2, std::string(kDefaultTopic), false, b));

  Rng c(2);
  Rng d(3);
  CHECK_FALSE(init_population(20, "t", false, c) == init_population(20, "t", false, d));
}

TEST_CASE("continuous beliefs are centred over many seeds") {
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    Rng rng(seed);
    const auto pop = init_population(50, "t", false, rng);
    double sum = 0.0;
    for (double v : pop.beliefs) {
      CHECK(v >= kBeliefMin);
      CHECK(v < kBeliefMax);
      sum += v;
    }
    total += sum / 50.0;
  }
  CHECK(std::abs(total / 1000.0) <= 0.15);
}

TEST_CASE("grid beliefs stay on the integer grid") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed);
    const auto pop = init_population(50, "t", true, rng);
    for (double v : pop.beliefs) {
      CHECK(v == std::round(v));
      CHECK(v >= -2.0);
      CHECK(v <= 2.0);
    }
  }
  Rng rng(9);
  const auto pop = init_population(500, "t", true, rng);
  CHECK(std::set<double>(pop.beliefs.begin(), pop.beliefs.end()) ==
        std::set<double>{-2, -1, 0, 1, 2});
}

TEST_CASE("persona attributes are in range and traits are fair coins") {
  Rng rng(4);
  const auto pop = init_population(1000, "t", false, rng);
  std::array<int, kTraitCount> positives{};
  std::set<int> ages;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const auto& p = pop.personas[i];
    CHECK(p.index == i);
    CHECK(p.age >= kMinAge);
    CHECK(p.age <= kMaxAge);
    ages.insert(p.age);
    for (std::size_t t = 0; t < kTraitCount; ++t) positives[t] += p.positive[t] ? 1 : 0;
  }
  CHECK(*ages.begin() == kMinAge);
  CHECK(*ages.rbegin() == kMaxAge);
  for (int count : positives) {
    CHECK(count >= 450);
    CHECK(count <= 550);
  }
}

TEST_CASE("invalid population requests") {
  Rng rng(1);
  CHECK_THROWS_AS(init_population(1, "t", false, rng), ParameterError);
  CHECK_THROWS_AS(init_population(10, "", false, rng), ParameterError);
}

TEST_CASE("persona card rendering") {
  Persona p;
  p.index = 12;
  p.gender = Gender::male;
  p.age = 33;
  p.education = Education::master;
  p.positive = {false, true, true, false, true};

  const auto card = persona_card(p);
  CHECK(card.find("Agent 12") != std::string::npos);
  CHECK(card.find("33") != std::string::npos);
  CHECK(card.find("male") != std::string::npos);
  CHECK(card.find("master") != std::string::npos);
  for (std::size_t t = 0; t < kTraitCount; ++t) {
    CHECK(card.find(trait_adjective(static_cast<Trait>(t), p.positive[t])) != std::string::npos);
  }
  CHECK(card.find("conventional") != std::string::npos);
  CHECK(card.find("spontaneous") != std::string::npos);
  CHECK(card == persona_card(p));
}

TEST_CASE("population record has one line per agent") {
  Rng rng(2);
  const auto pop = init_population(5, "t", true, rng);
  std::ostringstream out;
  write_population(out, pop);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("index,gender,age,education", 0) == 0);
  int lines = 0;
  for (std::string line; std::getline(in, line);) {
    ++lines;
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
  }
  CHECK(lines == 5);
}
