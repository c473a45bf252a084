#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "echo/rng.hpp"

namespace echo {

enum class Gender { female, male };
enum class Education { high_school, bachelor, master, doctorate };

// Big Five dimensions, in this order.
enum class Trait { openness, conscientiousness, extraversion, agreeableness, neuroticism };
inline constexpr std::size_t kTraitCount = 5;

inline constexpr int kMinAge = 18;
inline constexpr int kMaxAge = 64;
inline constexpr double kBeliefMin = -2.0;
inline constexpr double kBeliefMax = 2.0;

inline constexpr std::string_view kDefaultTopic = "Euthanasia should be legal.";

std::string_view to_string(Gender g);
std::string_view to_string(Education e);
std::string_view to_string(Trait t);

struct Persona {
  std::size_t index = 0;
  Gender gender = Gender::female;
  int age = kMinAge;
  Education education = Education::high_school;
  // true = positive pole of the dimension.
  std::array<bool, kTraitCount> positive{};

  friend bool operator==(const Persona&, const Persona&) = default;
};

// Adjective shown for each pole of each trait dimension.
std::string_view trait_adjective(Trait trait, bool positive);

struct Population {
  std::vector<Persona> personas;
  std::vector<double> beliefs;
  std::string topic;
  bool grid = false;  // beliefs restricted to {-2,-1,0,1,2}

  std::size_t size() const { return personas.size(); }

  friend bool operator==(const Population&, const Population&) = default;
};

// Ages uniform on [18, 64], fair-coin traits, beliefs uniform on [-2, 2]
// (or on the integer grid when grid is set).
Population init_population(std::size_t n, std::string topic, bool grid, Rng& rng);

// Deterministic text rendering of a persona for prompts.
std::string persona_card(const Persona& p);

// One agent per line:
// index,gender,age,education,openness,conscientiousness,extraversion,agreeableness,neuroticism,belief
// Traits are written as + or -.
void write_population(std::ostream& out, const Population& pop);

}  // namespace echo
