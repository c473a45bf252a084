#include "echo/backend.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <regex>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "echo/memory.hpp"
#include "echo/prompt.hpp"

namespace echo {
namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

struct ListedItem {
  std::string source;
  int belief = 0;
};

// Items of the "- Agent j (belief b): ..." list that follows `header`.
std::vector<ListedItem> list_after(const std::vector<std::string>& lines, std::string_view header) {
  static const std::regex item_re(R"(^- Agent (\d+) \(belief (-?\d+)\):)");
  std::vector<ListedItem> out;
  auto it = std::find(lines.begin(), lines.end(), header);
  if (it == lines.end()) return out;
  for (++it; it != lines.end() && !it->empty(); ++it) {
    std::smatch m;
    if (std::regex_search(*it, m, item_re)) out.push_back({m[1].str(), std::stoi(m[2].str())});
  }
  return out;
}

std::optional<std::string> value_after(const std::vector<std::string>& lines,
                                       std::string_view prefix) {
  for (const auto& line : lines) {
    if (starts_with(line, prefix)) return line.substr(prefix.size());
  }
  return std::nullopt;
}

}  // namespace

std::string mock_reflection_rule(std::string_view prompt) {
  using namespace prompt_marker;
  const auto lines = lines_of(prompt);
  const int own = std::stoi(value_after(lines, kCurrentBelief).value_or("0"));
  const std::string topic = value_after(lines, kTopic).value_or("the topic");

  int target = own;
  const auto exposed = list_after(lines, kExposureHeader);
  if (!exposed.empty()) {
    double sum = 0.0;
    for (const auto& item : exposed) sum += item.belief;
    const double mean = sum / static_cast<double>(exposed.size());
    target = static_cast<int>(std::lround(0.7 * own + 0.3 * mean));
  }
  const bool nudged = std::find(lines.begin(), lines.end(), kNudgeHeader) != lines.end();
  if (nudged && std::abs(own) == kGridMax) {
    if (target > 0) --target;
    else if (target < 0) ++target;
  }
  target = std::clamp(target, kGridMin, kGridMax);
  return fmt::format("BELIEF: {}\nOPINION: {}.", target, stance_sentence(target, topic));
}

std::string mock_summary_rule(std::string_view prompt) {
  using namespace prompt_marker;
  const auto lines = lines_of(prompt);
  const std::size_t budget = std::stoul(value_after(lines, kBudget).value_or("0"));
  const auto items = list_after(lines, kNewItems);

  const std::size_t first = items.size() > kMockSummaryItems ? items.size() - kMockSummaryItems : 0;
  std::string digest;
  for (std::size_t k = first; k < items.size(); ++k) {
    digest += fmt::format("{}Agent {} held {}", digest.empty() ? "Recently heard: " : "; ",
                          items[k].source, items[k].belief);
  }
  return truncate_front(digest, budget);
}

std::string MockBackend::complete(const std::string& prompt, std::size_t, double) {
  if (starts_with(prompt, prompt_marker::kSummaryTag)) return mock_summary_rule(prompt);
  return mock_reflection_rule(prompt);
}

}  // namespace echo
