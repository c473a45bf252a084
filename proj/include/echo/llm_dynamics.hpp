#pragma once

#include <cstddef>
#include <iosfwd>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "echo/backend.hpp"
#include "echo/graph.hpp"
#include "echo/interventions.hpp"
#include "echo/memory.hpp"
#include "echo/numeric_dynamics.hpp"
#include "echo/population.hpp"
#include "echo/prompt.hpp"
#include "echo/recommendation.hpp"
#include "echo/rng.hpp"

namespace echo {

struct AgentState {
  int belief = 0;
  std::string opinion;
  MemoryStore memory;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

enum class EventKind { exposure, nudge, reflection, update };
std::string to_string(EventKind kind);

struct TranscriptEvent {
  std::size_t day = 0;
  std::size_t agent = 0;
  EventKind kind = EventKind::reflection;
  std::string payload;
  int belief_before = 0;
  int belief_after = 0;
  // Comma-separated flags: clamped, parse_retry, parse_failed, summary_fallback.
  std::string note;

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

// Append-only event log. Appends may come from several threads; events()
// orders by (day, agent) and keeps each agent's append order.
class Transcript {
 public:
  void append(TranscriptEvent event);
  void append(std::span<const TranscriptEvent> events);
  std::vector<TranscriptEvent> events() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::vector<TranscriptEvent> events_;
};

// One JSON object per line.
void write_transcript_jsonl(std::ostream& out, std::span<const TranscriptEvent> events);

struct SsfParams {
  ExposureMode exposure = ExposureMode::recommended;
  double threshold = kRecommendationThreshold;
  std::size_t exposure_cap = 8;
  std::size_t parse_retries = 2;
  std::size_t memory_budget = kDefaultMemoryBudget;
  std::size_t max_tokens = 256;
  double temperature = 0.7;
  std::size_t max_in_flight = 4;

  void validate() const;
};

struct SsfDay {
  std::vector<AgentState> states;
  std::vector<TranscriptEvent> events;
};

// One synchronous day: exposure against start-of-day opinions, optional
// nudges, one reflection per agent, then memory compression. Exposure
// sampling and passive rotation consume `rng` and `passive` in agent order
// before any backend call, so results do not depend on call scheduling.
SsfDay ssf_day(std::size_t day, const NetworkGraph& g, const Population& pop,
               std::span<const AgentState> states, TextBackend& backend, const SsfParams& params,
               const NudgePolicy& policy, PassiveNudger* passive, Rng& rng);

std::vector<AgentState> initial_states(const Population& pop);

struct SsfRun {
  Trajectory beliefs;                          // days + 1 entries
  std::vector<std::vector<std::string>> opinions;  // aligned with beliefs
  std::vector<TranscriptEvent> transcript;
  std::size_t max_long_term = 0;               // largest summary seen, in bytes
};

SsfRun run_ssf(const NetworkGraph& g, const Population& pop, TextBackend& backend,
               const SsfParams& params, const NudgePolicy& policy, std::size_t days,
               std::uint64_t seed);

}  // namespace echo
