#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "echo/memory.hpp"
#include "echo/population.hpp"

namespace echo {

// Markers shared by the prompt templates and the mock backend that reads them.
namespace prompt_marker {
inline constexpr std::string_view kReflectionTag = "[reflection]";
inline constexpr std::string_view kSummaryTag = "[memory-summary]";
inline constexpr std::string_view kTopic = "Topic: ";
inline constexpr std::string_view kMemoryHeader = "## What you remember from earlier days";
inline constexpr std::string_view kExposureHeader = "## Opinions you read today";
inline constexpr std::string_view kNudgeHeader = "## Note shown to you";
inline constexpr std::string_view kCurrentBelief = "Current belief: ";
inline constexpr std::string_view kCurrentOpinion = "Current opinion: ";
inline constexpr std::string_view kBudget = "Budget: ";
inline constexpr std::string_view kEarlierMemory = "## Earlier memory";
inline constexpr std::string_view kNewItems = "## New items";
}  // namespace prompt_marker

inline constexpr int kGridMin = -2;
inline constexpr int kGridMax = 2;

struct OpinionOutput {
  std::string opinion_text;
  int belief = 0;

  friend bool operator==(const OpinionOutput&, const OpinionOutput&) = default;
};

struct ParsedOpinion {
  OpinionOutput output;
  bool clamped = false;  // model gave a belief outside [-2, 2]
};

std::string build_reflection_prompt(const Persona& persona, std::string_view topic,
                                    const MemoryStore& memory, const OpinionOutput& current,
                                    const std::optional<std::string>& nudge);

std::string build_compression_prompt(const std::string& old_summary,
                                     std::span<const ExposureItem> day_items, std::size_t budget);

// Reads the first "BELIEF: <int>" and the text after "OPINION:". Throws
// ParseError when either is missing.
ParsedOpinion parse_opinion_output(std::string_view raw);

// Canned stance sentence for a grid belief; used for day-0 opinions and by
// the mock backend.
std::string stance_sentence(int belief, std::string_view topic);

}  // namespace echo
