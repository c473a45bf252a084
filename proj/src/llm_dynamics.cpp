#include "echo/llm_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "echo/errors.hpp"
#include "parallel.hpp"

namespace echo {
namespace {

void add_flag(std::string& note, std::string_view flag) {
  if (!note.empty()) note += ',';
  note += flag;
}

std::vector<double> beliefs_of(std::span<const AgentState> states) {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(static_cast<double>(s.belief));
  return out;
}

}  // namespace

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::exposure: return "exposure";
    case EventKind::nudge: return "nudge";
    case EventKind::reflection: return "reflection";
    case EventKind::update: return "update";
  }
  return "unknown";
}

void Transcript::append(TranscriptEvent event) {
  std::lock_guard lock(mutex_);
  events_.push_back(std::move(event));
}

void Transcript::append(std::span<const TranscriptEvent> events) {
  std::lock_guard lock(mutex_);
  events_.insert(events_.end(), events.begin(), events.end());
}

std::vector<TranscriptEvent> Transcript::events() const {
  std::vector<TranscriptEvent> out;
  {
    std::lock_guard lock(mutex_);
    out = events_;
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.day, a.agent) < std::tie(b.day, b.agent);
  });
  return out;
}

std::size_t Transcript::size() const {
  std::lock_guard lock(mutex_);
  return events_.size();
}

void write_transcript_jsonl(std::ostream& out, std::span<const TranscriptEvent> events) {
  for (const auto& e : events) {
    nlohmann::ordered_json j;
    j["day"] = e.day;
    j["agent"] = e.agent;
    j["kind"] = to_string(e.kind);
    j["belief_before"] = e.belief_before;
    j["belief_after"] = e.belief_after;
    j["payload"] = e.payload;
    if (!e.note.empty()) j["note"] = e.note;
    out << j.dump() << '\n';
  }
}

void SsfParams::validate() const {
  if (!(threshold >= 0.0)) throw ParameterError("recommendation threshold must be >= 0");
  if (exposure_cap < 1) throw ParameterError("exposure cap must be >= 1");
  if (memory_budget < 1) throw ParameterError("memory budget must be >= 1");
  if (max_tokens < 1) throw ParameterError("max_tokens must be >= 1");
  if (max_in_flight < 1) throw ParameterError("max_in_flight must be >= 1");
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw ParameterError(fmt::format("temperature must lie in [0, 2], got {}", temperature));
  }
}

std::vector<AgentState> initial_states(const Population& pop) {
  std::vector<AgentState> out;
  out.reserve(pop.size());
  for (double v : pop.beliefs) {
    const double rounded = std::round(v);
    if (rounded != v || v < kGridMin || v > kGridMax) {
      throw ParameterError(fmt::format("language agents need grid beliefs, got {}", v));
    }
    AgentState s;
    s.belief = static_cast<int>(rounded);
    s.opinion = stance_sentence(s.belief, pop.topic) + ".";
    out.push_back(std::move(s));
  }
  return out;
}

SsfDay ssf_day(std::size_t day, const NetworkGraph& g, const Population& pop,
               std::span<const AgentState> states, TextBackend& backend, const SsfParams& params,
               const NudgePolicy& policy, PassiveNudger* passive, Rng& rng) {
  params.validate();
  policy.validate();
  const std::size_t n = g.size();
  if (states.size() != n || pop.size() != n) {
    throw ParameterError("agent states, population and graph sizes differ");
  }
  if (policy.kind == NudgeKind::passive && passive == nullptr) {
    throw ParameterError("passive nudge policy without a passive text source");
  }

  const std::vector<double> start = beliefs_of(states);
  std::vector<std::string> start_opinions;
  start_opinions.reserve(n);
  for (const auto& s : states) start_opinions.push_back(s.opinion);

  SsfDay out;
  out.states.assign(states.begin(), states.end());
  std::vector<std::vector<TranscriptEvent>> events(n);

  // Exposure: everyone reads start-of-day opinions.
  for (std::size_t i = 0; i < n; ++i) {
    auto& memory = out.states[i].memory;
    memory.short_term.clear();
    for (std::size_t j :
         exposure_set(g, start, i, params.exposure, params.exposure_cap, &rng, params.threshold)) {
      ExposureItem item{j, states[j].belief, start_opinions[j]};
      events[i].push_back({day, i, EventKind::exposure, render_exposure(item), states[i].belief,
                           states[i].belief, {}});
      memory.short_term.push_back(std::move(item));
    }
  }

  // Nudges, at most one per agent.
  std::vector<std::optional<std::string>> nudges(n);
  if (policy.kind != NudgeKind::none) {
    for (std::size_t i : select_targets(start, policy.extremity_threshold)) {
      nudges[i] = policy.kind == NudgeKind::active
                      ? active_nudge_content(i, start, start_opinions, g)
                      : std::optional<std::string>(passive->next());
      if (nudges[i]) {
        events[i].push_back(
            {day, i, EventKind::nudge, *nudges[i], states[i].belief, states[i].belief, {}});
      }
    }
  }

  // Reflection and memory compression, one task per agent.
  detail::parallel_for(n, params.max_in_flight, [&](std::size_t i) {
    AgentState& agent = out.states[i];
    const int before = agent.belief;
    const std::string prompt =
        build_reflection_prompt(pop.personas[i], pop.topic, agent.memory,
                                OpinionOutput{agent.opinion, agent.belief}, nudges[i]);

    std::string raw;
    std::string note;
    std::optional<ParsedOpinion> parsed;
    for (std::size_t attempt = 0; attempt <= params.parse_retries && !parsed; ++attempt) {
      raw = backend.complete(prompt, params.max_tokens, params.temperature);
      try {
        parsed = parse_opinion_output(raw);
      } catch (const ParseError&) {
        add_flag(note, attempt < params.parse_retries ? "parse_retry" : "parse_failed");
      }
    }
    if (parsed) {
      if (parsed->clamped) add_flag(note, "clamped");
      agent.belief = parsed->output.belief;
      agent.opinion = parsed->output.opinion_text;
    }
    events[i].push_back({day, i, EventKind::reflection, raw, before, agent.belief, note});
    if (agent.belief != before) {
      events[i].push_back({day, i, EventKind::update, agent.opinion, before, agent.belief, {}});
    }

    auto summary =
        compress_long_term(backend, agent.memory.long_term, agent.memory.short_term,
                           params.memory_budget);
    agent.memory.long_term = std::move(summary.summary);
    agent.memory.short_term.clear();
    if (summary.error) {
      // Flag on the reflection event: the log has no separate memory kind.
      for (auto& e : events[i]) {
        if (e.kind == EventKind::reflection) add_flag(e.note, "summary_fallback");
      }
    }
  });

  for (auto& per_agent : events) {
    std::move(per_agent.begin(), per_agent.end(), std::back_inserter(out.events));
  }
  return out;
}

SsfRun run_ssf(const NetworkGraph& g, const Population& pop, TextBackend& backend,
               const SsfParams& params, const NudgePolicy& policy, std::size_t days,
               std::uint64_t seed) {
  if (days < 1) throw ParameterError("a run needs at least one day");
  Rng exposure_rng = Rng::stream(seed, "ssf-exposure");
  Rng nudge_rng = Rng::stream(seed, "passive-nudge");
  std::optional<PassiveNudger> passive;
  if (policy.kind == NudgeKind::passive) passive.emplace(policy.passive_texts, nudge_rng);

  auto states = initial_states(pop);
  SsfRun run;
  auto record = [&](const std::vector<AgentState>& s) {
    run.beliefs.push_back(beliefs_of(s));
    std::vector<std::string> texts;
    texts.reserve(s.size());
    for (const auto& a : s) {
      texts.push_back(a.opinion);
      run.max_long_term = std::max(run.max_long_term, a.memory.long_term.size());
    }
    run.opinions.push_back(std::move(texts));
  };
  record(states);

  Transcript transcript;
  for (std::size_t day = 1; day <= days; ++day) {
    auto next = ssf_day(day, g, pop, states, backend, params, policy,
                        passive ? &*passive : nullptr, exposure_rng);
    transcript.append(next.events);
    states = std::move(next.states);
    record(states);
  }
  run.transcript = transcript.events();
  return run;
}

}  // namespace echo
