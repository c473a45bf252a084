#include "echo/prompt.hpp"

#include <algorithm>
#include <regex>

#include <fmt/format.h>

#include "echo/errors.hpp"

namespace echo {
namespace {

std::string single_line(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool space = false;
  for (char c : text) {
    if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string build_reflection_prompt(const Persona& persona, std::string_view topic,
                                    const MemoryStore& memory, const OpinionOutput& current,
                                    const std::optional<std::string>& nudge) {
  using namespace prompt_marker;
  std::string p;
  p += fmt::format("{}\n", kReflectionTag);
  p += "You are taking part in an online discussion that continues over several days.\n";
  p += fmt::format("Your profile: {}\n", persona_card(persona));
  p += fmt::format("{}{}\n", kTopic, single_line(topic));
  p += "Belief scale: -2 strong rejection, -1 moderate rejection, 0 neutral, "
       "1 moderate support, 2 strong support.\n";

  if (!memory.long_term.empty()) {
    p += fmt::format("\n{}\n{}\n", kMemoryHeader, single_line(memory.long_term));
  }
  if (!memory.short_term.empty()) {
    p += fmt::format("\n{}\n", kExposureHeader);
    for (const auto& item : memory.short_term) p += fmt::format("- {}\n", render_exposure(item));
  }
  if (nudge) {
    p += fmt::format("\n{}\n{}\n", kNudgeHeader, single_line(*nudge));
  }

  p += "\n## Your current position\n";
  p += fmt::format("{}{}\n", kCurrentBelief, current.belief);
  p += fmt::format("{}{}\n", kCurrentOpinion, single_line(current.opinion_text));
  p += "\nReflect on what you read today in light of your personality and your memory, "
       "then say where you stand now. Answer in exactly this format:\n"
       "BELIEF: <integer from -2 to 2>\n"
       "OPINION: <your opinion in one to three sentences>\n";
  return p;
}

std::string build_compression_prompt(const std::string& old_summary,
                                     std::span<const ExposureItem> day_items, std::size_t budget) {
  using namespace prompt_marker;
  std::string p;
  p += fmt::format("{}\n", kSummaryTag);
  p += "Merge an agent's earlier memory with what it read today into a single summary. "
       "Keep who held which position. Stay within the character budget.\n";
  p += fmt::format("{}{}\n", kBudget, budget);
  p += fmt::format("\n{}\n{}\n", kEarlierMemory,
                   old_summary.empty() ? std::string("(empty)") : single_line(old_summary));
  p += fmt::format("\n{}\n", kNewItems);
  for (const auto& item : day_items) p += fmt::format("- {}\n", render_exposure(item));
  p += "\nReply with the summary text only.\n";
  return p;
}

ParsedOpinion parse_opinion_output(std::string_view raw) {
  static const std::regex belief_re(R"(BELIEF:\s*([+-]?)(\d+))");
  static const std::regex opinion_re(R"(OPINION:)");

  const std::string text(raw);
  std::smatch belief_match;
  if (!std::regex_search(text, belief_match, belief_re)) {
    throw ParseError("no BELIEF line in model output");
  }
  std::smatch opinion_match;
  if (!std::regex_search(text, opinion_match, opinion_re)) {
    throw ParseError("no OPINION line in model output");
  }

  const std::string digits = belief_match[2].str();
  const bool negative = belief_match[1].str() == "-";
  // Anything with more than two digits is far off the grid; avoid overflow.
  long magnitude = digits.size() > 2 ? 99 : std::stol(digits);
  long value = negative ? -magnitude : magnitude;

  ParsedOpinion out;
  out.clamped = value < kGridMin || value > kGridMax;
  out.output.belief = static_cast<int>(std::clamp<long>(value, kGridMin, kGridMax));

  // Opinion runs from the tag to the end, or to a later BELIEF tag.
  std::string rest = opinion_match.suffix().str();
  if (auto cut = rest.find("BELIEF:"); cut != std::string::npos) rest.resize(cut);
  out.output.opinion_text = single_line(rest);
  if (out.output.opinion_text.empty()) throw ParseError("empty OPINION in model output");
  return out;
}

std::string stance_sentence(int belief, std::string_view topic) {
  const std::string t = single_line(topic);
  switch (std::clamp(belief, kGridMin, kGridMax)) {
    case -2: return fmt::format("I strongly reject the statement \"{}\"", t);
    case -1: return fmt::format("I lean against the statement \"{}\"", t);
    case 0: return fmt::format("I am undecided about the statement \"{}\"", t);
    case 1: return fmt::format("I lean toward supporting the statement \"{}\"", t);
    default: return fmt::format("I strongly support the statement \"{}\"", t);
  }
}

}  // namespace echo
