#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "echo/graph.hpp"
#include "echo/rng.hpp"

namespace echo {

enum class NudgeKind { none, active, passive };

std::string to_string(NudgeKind kind);
NudgeKind nudge_kind_from_string(const std::string& name);

std::vector<std::string> default_passive_texts();

struct NudgePolicy {
  NudgeKind kind = NudgeKind::none;
  int extremity_threshold = 2;
  std::vector<std::string> passive_texts = default_passive_texts();

  void validate() const;
};

// Agents with |v| >= threshold.
std::vector<std::size_t> select_targets(std::span<const double> beliefs, double threshold);

inline constexpr std::string_view kOpposingPrefix = "An opposing perspective: ";

// The stated opinion of the agent most opposed to `target`: opposite sign,
// largest |v_target - v_j|, then fewest hops from target, then lowest index.
// nullopt when nobody holds the opposite sign.
std::optional<std::string> active_nudge_content(std::size_t target,
                                                std::span<const double> beliefs,
                                                std::span<const std::string> opinions,
                                                const NetworkGraph& g);

// Cycles through the passive texts from a seeded starting offset.
class PassiveNudger {
 public:
  PassiveNudger(std::vector<std::string> texts, Rng& rng);

  std::string next();

 private:
  std::vector<std::string> texts_;
  std::size_t cursor_ = 0;
};

// One text per non-blank line.
std::vector<std::string> load_passive_texts(const std::filesystem::path& path);

}  // namespace echo
