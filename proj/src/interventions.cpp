#include "echo/interventions.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "echo/errors.hpp"

namespace echo {

std::string to_string(NudgeKind kind) {
  switch (kind) {
    case NudgeKind::none: return "none";
    case NudgeKind::active: return "active";
    case NudgeKind::passive: return "passive";
  }
  return "unknown";
}

NudgeKind nudge_kind_from_string(const std::string& name) {
  if (name == "none") return NudgeKind::none;
  if (name == "active") return NudgeKind::active;
  if (name == "passive") return NudgeKind::passive;
  throw ParameterError(fmt::format("unknown nudge kind '{}'", name));
}

std::vector<std::string> default_passive_texts() {
  return {
      "Most questions have more than two sides.",
      "Public debates usually involve many interacting considerations.",
      "Thoughtful people can look at the same facts and reach different conclusions.",
      "Hearing out other viewpoints can sharpen your own thinking.",
  };
}

void NudgePolicy::validate() const {
  if (extremity_threshold != 1 && extremity_threshold != 2) {
    throw ParameterError(
        fmt::format("nudge extremity threshold must be 1 or 2, got {}", extremity_threshold));
  }
  if (kind == NudgeKind::passive && passive_texts.empty()) {
    throw ParameterError("passive nudge needs at least one text");
  }
}

std::vector<std::size_t> select_targets(std::span<const double> beliefs, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < beliefs.size(); ++i) {
    if (std::abs(beliefs[i]) >= threshold) out.push_back(i);
  }
  return out;
}

std::optional<std::string> active_nudge_content(std::size_t target,
                                                std::span<const double> beliefs,
                                                std::span<const std::string> opinions,
                                                const NetworkGraph& g) {
  if (target >= beliefs.size() || opinions.size() != beliefs.size() || g.size() != beliefs.size()) {
    throw ParameterError("active nudge: target or vector sizes out of range");
  }
  const double own = beliefs[target];
  if (own == 0.0) return std::nullopt;

  std::vector<std::size_t> hops;  // computed on first tie
  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < beliefs.size(); ++j) {
    if (j == target || !(own * beliefs[j] < 0.0)) continue;
    if (!best) {
      best = j;
      continue;
    }
    const double gap = std::abs(own - beliefs[j]);
    const double best_gap = std::abs(own - beliefs[*best]);
    if (gap > best_gap) {
      best = j;
    } else if (gap == best_gap) {
      if (hops.empty()) hops = bfs_distances(g, target);
      // Ascending scan: an equal hop count keeps the lower index.
      if (hops[j] < hops[*best]) best = j;
    }
  }
  if (!best) return std::nullopt;
  return std::string(kOpposingPrefix) + opinions[*best];
}

PassiveNudger::PassiveNudger(std::vector<std::string> texts, Rng& rng) : texts_(std::move(texts)) {
  if (texts_.empty()) throw ParameterError("passive nudge needs at least one text");
  cursor_ = rng.below(texts_.size());
}

std::string PassiveNudger::next() {
  const std::string& out = texts_[cursor_];
  cursor_ = (cursor_ + 1) % texts_.size();
  return out;
}

std::vector<std::string> load_passive_texts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read passive texts from {}", path.string()));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) out.push_back(line);
  }
  return out;
}

}  // namespace echo
