#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "echo/backend.hpp"
#include "echo/config.hpp"
#include "echo/graph.hpp"
#include "echo/llm_dynamics.hpp"
#include "echo/metrics.hpp"
#include "echo/population.hpp"

namespace echo {

// Agents depend on (seed, n, topic, engine grid) only, never on the graph,
// so runs that differ only in structure share their population.
Population make_population(const RunConfig& config);
NetworkGraph make_graph(const RunConfig& config);

// Mock, or remote with credentials from the environment (CredentialsError
// when missing).
std::unique_ptr<TextBackend> make_backend(const RunConfig& config);

struct RunResult {
  RunConfig config;
  Population population;
  NetworkGraph graph;
  Trajectory beliefs;                              // days + 1 entries
  std::vector<std::vector<std::string>> opinions;  // ssf only
  std::vector<TranscriptEvent> transcript;         // ssf only
  std::vector<MetricsSnapshot> snapshots;          // days + 1 entries
  std::string backend_identity;                    // empty for numeric engines
  std::size_t backend_calls = 0;
  std::size_t max_long_term = 0;

  MetricsDelta delta() const { return echo::delta(snapshots); }
};

// In-memory run. For ssf, `backend` overrides the configured one.
RunResult simulate(const RunConfig& config, TextBackend* backend = nullptr);

struct RunArtifacts {
  std::filesystem::path dir;
  std::vector<std::string> files;
};

// Writes config.json, manifest.txt, graph.txt, population.csv, metrics.csv,
// trajectory.jsonl, projection.csv and (ssf) transcript.jsonl. Throws IoError.
RunArtifacts write_artifacts(const RunResult& result, const std::filesystem::path& dir);

// Validate, create the output directory, simulate, write.
RunArtifacts run(const RunConfig& config, TextBackend* backend = nullptr);

// Final beliefs with force-directed coordinates:
// agent,x,y,degree,initial_belief,final_belief
void write_projection_csv(std::ostream& out, const NetworkGraph& g, std::uint64_t seed,
                          std::span<const double> initial, std::span<const double> final_beliefs);

std::string column_label(const RunConfig& config);

struct CompareColumn {
  std::string label;
  MetricsDelta delta;
};

struct CompareTable {
  std::vector<CompareColumn> columns;
};

// One column per config. All configs must share n, topic and seed.
CompareTable compare(std::span<const RunConfig> configs, TextBackend* backend = nullptr);

// Rows are the three deltas, columns the runs. Undefined NCI deltas are blank.
void write_compare_csv(std::ostream& out, const CompareTable& table);
std::string format_compare_text(const CompareTable& table);

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::optional<MetricsDelta> delta;
  std::optional<MetricsSnapshot> final_state;
  std::string error;  // non-empty when the run failed
};

struct SweepStat {
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  std::size_t count = 0;
};

struct SweepSummary {
  std::vector<SeedOutcome> outcomes;
  std::vector<SweepStat> stats;
  std::size_t failures = 0;

  const SweepStat& stat(std::string_view metric) const;
};

struct SweepOptions {
  std::optional<std::filesystem::path> output_root;  // seed_<s>/ per seed when set
  std::size_t jobs = 1;
  TextBackend* backend = nullptr;
};

// Runs base with each seed. A failing seed is recorded and the rest continue.
SweepSummary sweep(const RunConfig& base, std::span<const std::uint64_t> seeds,
                   const SweepOptions& options = {});

// metric,mean,stddev,count
void write_aggregate_csv(std::ostream& out, const SweepSummary& summary);
// seed,status,delta_polarization,delta_global_disagreement,delta_nci,final_polarization,...
void write_seed_csv(std::ostream& out, const SweepSummary& summary);

}  // namespace echo
