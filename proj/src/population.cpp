#include "echo/population.hpp"

#include <ostream>

#include <fmt/format.h>

#include "echo/errors.hpp"

namespace echo {
namespace {

struct TraitWords {
  std::string_view positive;
  std::string_view negative;
};

// Indexed by Trait.
constexpr std::array<TraitWords, kTraitCount> kTraitLexicon{{
    {"curious", "conventional"},
    {"organized", "careless"},
    {"spontaneous", "reserved"},
    {"cooperative", "critical"},
    {"anxious", "calm"},
}};

constexpr std::array<Gender, 2> kGenders{Gender::female, Gender::male};
constexpr std::array<Education, 4> kEducation{Education::high_school, Education::bachelor,
                                              Education::master, Education::doctorate};

}  // namespace

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::female: return "female";
    case Gender::male: return "male";
  }
  return "unknown";
}

std::string_view to_string(Education e) {
  switch (e) {
    case Education::high_school: return "high school";
    case Education::bachelor: return "bachelor";
    case Education::master: return "master";
    case Education::doctorate: return "doctorate";
  }
  return "unknown";
}

std::string_view to_string(Trait t) {
  switch (t) {
    case Trait::openness: return "openness";
    case Trait::conscientiousness: return "conscientiousness";
    case Trait::extraversion: return "extraversion";
    case Trait::agreeableness: return "agreeableness";
    case Trait::neuroticism: return "neuroticism";
  }
  return "unknown";
}

std::string_view trait_adjective(Trait trait, bool positive) {
  const auto& words = kTraitLexicon.at(static_cast<std::size_t>(trait));
  return positive ? words.positive : words.negative;
}

Population init_population(std::size_t n, std::string topic, bool grid, Rng& rng) {
  if (n < 2) throw ParameterError(fmt::format("population needs n >= 2, got {}", n));
  if (topic.empty()) throw ParameterError("population topic must be non-empty");

  Population pop;
  pop.topic = std::move(topic);
  pop.grid = grid;
  pop.personas.reserve(n);
  pop.beliefs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Persona p;
    p.index = i;
    p.gender = kGenders[rng.below(kGenders.size())];
    p.age = rng.range(kMinAge, kMaxAge);
    p.education = kEducation[rng.below(kEducation.size())];
    for (auto& pole : p.positive) pole = rng.coin();
    pop.personas.push_back(p);
  }
  // Beliefs drawn after personas so persona attributes and beliefs stay
  // independent streams of the same seed.
  for (std::size_t i = 0; i < n; ++i) {
    pop.beliefs.push_back(grid ? static_cast<double>(rng.range(-2, 2))
                               : rng.uniform(kBeliefMin, kBeliefMax));
  }
  return pop;
}

std::string persona_card(const Persona& p) {
  std::string traits;
  for (std::size_t t = 0; t < kTraitCount; ++t) {
    if (!traits.empty()) traits += ", ";
    traits += trait_adjective(static_cast<Trait>(t), p.positive[t]);
  }
  return fmt::format("Agent {}: a {}-year-old {} with a {} education. Personality: {}.",
                     p.index, p.age, to_string(p.gender), to_string(p.education), traits);
}

void write_population(std::ostream& out, const Population& pop) {
  out << "index,gender,age,education,openness,conscientiousness,extraversion,"
         "agreeableness,neuroticism,belief\n";
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const auto& p = pop.personas[i];
    out << fmt::format("{},{},{},{}", p.index, to_string(p.gender), p.age, to_string(p.education));
    for (bool pole : p.positive) out << ',' << (pole ? '+' : '-');
    out << fmt::format(",{}\n", pop.beliefs[i]);
  }
}

}  // namespace echo
