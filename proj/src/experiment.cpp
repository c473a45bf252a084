#include "echo/experiment.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "echo/errors.hpp"
#include "echo/layout.hpp"
#include "echo/remote_backend.hpp"
#include "parallel.hpp"

namespace echo {
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  body(out);
  out.flush();
  if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError(fmt::format("cannot create output directory {}: {}", dir.string(),
                              ec ? ec.message() : "not a directory"));
  }
  // Probe writability up front so a bad directory fails before any work.
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError(fmt::format("output directory {} is not writable", dir.string()));
  }
  fs::remove(probe, ec);
}

void write_trajectory_jsonl(std::ostream& out, const RunResult& r) {
  for (std::size_t t = 0; t < r.beliefs.size(); ++t) {
    for (std::size_t i = 0; i < r.beliefs[t].size(); ++i) {
      nlohmann::ordered_json j;
      j["day"] = t;
      j["agent"] = i;
      j["belief"] = r.beliefs[t][i];
      if (!r.opinions.empty()) j["opinion"] = r.opinions[t][i];
      out << j.dump() << '\n';
    }
  }
}

void write_manifest(std::ostream& out, const RunResult& r, std::span<const std::string> files) {
  const auto& c = r.config;
  out << "code_version=" << ECHO_VERSION << '\n';
  out << "config_hash=" << config_hash(c) << '\n';
  out << "engine=" << to_string(c.engine) << '\n';
  out << "graph=" << to_string(c.graph.kind) << '\n';
  out << "n=" << c.n << '\n';
  out << "days=" << c.days << '\n';
  out << "seed=" << c.seed << '\n';
  out << "backend=" << (c.engine == EngineKind::ssf ? r.backend_identity : "none") << '\n';
  out << "backend_calls=" << r.backend_calls << '\n';
  out << "reproducible=" << (c.reproducible() ? "true" : "false") << '\n';
  out << "graph_connected=" << (is_connected(r.graph) ? "true" : "false") << '\n';
  out << "graph_edges=" << r.graph.edge_count() << '\n';
  out << "artifacts=";
  for (std::size_t k = 0; k < files.size(); ++k) out << (k ? "," : "") << files[k];
  out << '\n';
}

std::string format_optional(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

}  // namespace

Population make_population(const RunConfig& config) {
  Rng rng = Rng::stream(config.seed, "population");
  return init_population(config.n, config.topic, config.engine == EngineKind::ssf, rng);
}

NetworkGraph make_graph(const RunConfig& config) {
  Rng rng = Rng::stream(config.seed, "graph");
  return generate(config.graph, rng);
}

std::unique_ptr<TextBackend> make_backend(const RunConfig& config) {
  if (config.backend == BackendKind::remote) return RemoteBackend::from_environment(config.remote);
  return std::make_unique<MockBackend>();
}

RunResult simulate(const RunConfig& config, TextBackend* backend) {
  config.validate();
  RunResult r;
  r.config = config;
  r.population = make_population(config);
  r.graph = make_graph(config);

  switch (config.engine) {
    case EngineKind::bcm:
      r.beliefs = run_numeric(r.graph, r.population, config.bcm_params(), config.days);
      break;
    case EngineKind::fj:
      r.beliefs = run_numeric(r.graph, r.population, config.fj_params(), config.days);
      break;
    case EngineKind::ssf: {
      std::unique_ptr<TextBackend> owned;
      if (backend == nullptr) {
        owned = make_backend(config);
        backend = owned.get();
      }
      CountingBackend counter(*backend);
      auto ssf = run_ssf(r.graph, r.population, counter, config.ssf_params(), config.nudge,
                         config.days, config.seed);
      r.beliefs = std::move(ssf.beliefs);
      r.opinions = std::move(ssf.opinions);
      r.transcript = std::move(ssf.transcript);
      r.max_long_term = ssf.max_long_term;
      r.backend_identity = backend->identity();
      r.backend_calls = counter.calls();
      break;
    }
  }

  r.snapshots.reserve(r.beliefs.size());
  for (std::size_t t = 0; t < r.beliefs.size(); ++t) {
    r.snapshots.push_back(snapshot(t, r.graph, r.beliefs[t]));
  }
  return r;
}

void write_projection_csv(std::ostream& out, const NetworkGraph& g, std::uint64_t seed,
                          std::span<const double> initial, std::span<const double> final_beliefs) {
  const auto pos = force_directed_layout(g, seed);
  out << "agent,x,y,degree,initial_belief,final_belief\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << fmt::format("{},{},{},{},{},{}\n", i, pos[i].x, pos[i].y, g.degree(i), initial[i],
                       final_beliefs[i]);
  }
}

RunArtifacts write_artifacts(const RunResult& r, const fs::path& dir) {
  ensure_directory(dir);
  RunArtifacts out;
  out.dir = dir;
  auto emit = [&](const std::string& name, const std::function<void(std::ostream&)>& body) {
    write_file(dir / name, body);
    out.files.push_back(name);
  };

  emit("config.json", [&](std::ostream& o) { o << to_json(r.config, false).dump(2) << '\n'; });
  emit("graph.txt", [&](std::ostream& o) { write_edge_list(o, r.graph); });
  emit("population.csv", [&](std::ostream& o) { write_population(o, r.population); });
  emit("metrics.csv", [&](std::ostream& o) { write_metrics_csv(o, r.snapshots); });
  emit("trajectory.jsonl", [&](std::ostream& o) { write_trajectory_jsonl(o, r); });
  if (r.config.engine == EngineKind::ssf) {
    emit("transcript.jsonl", [&](std::ostream& o) { write_transcript_jsonl(o, r.transcript); });
  }
  emit("projection.csv", [&](std::ostream& o) {
    write_projection_csv(o, r.graph, r.config.seed, r.beliefs.front(), r.beliefs.back());
  });
  const auto files = out.files;
  emit("manifest.txt", [&](std::ostream& o) { write_manifest(o, r, files); });
  return out;
}

RunArtifacts run(const RunConfig& config, TextBackend* backend) {
  config.validate();
  std::unique_ptr<TextBackend> owned;
  if (config.engine == EngineKind::ssf && backend == nullptr) {
    owned = make_backend(config);  // fails fast on missing credentials
    backend = owned.get();
  }
  ensure_directory(config.output_dir);
  return write_artifacts(simulate(config, backend), config.output_dir);
}

std::string column_label(const RunConfig& config) {
  std::string label = fmt::format("{}/{}", to_string(config.engine), to_string(config.graph.kind));
  if (config.nudge.kind != NudgeKind::none) label += "/" + to_string(config.nudge.kind);
  return label;
}

CompareTable compare(std::span<const RunConfig> configs, TextBackend* backend) {
  if (configs.empty()) throw ParameterError("compare needs at least one config");
  const auto& first = configs.front();
  for (const auto& c : configs) {
    if (c.n != first.n || c.topic != first.topic || c.seed != first.seed) {
      throw ParameterError(fmt::format(
          "compare needs a shared population: '{}' differs from '{}' in n, topic or seed",
          column_label(c), column_label(first)));
    }
  }
  CompareTable table;
  for (const auto& c : configs) {
    table.columns.push_back({column_label(c), simulate(c, backend).delta()});
  }
  return table;
}

void write_compare_csv(std::ostream& out, const CompareTable& table) {
  out << "metric";
  for (const auto& col : table.columns) out << ',' << col.label;
  out << '\n';
  out << "delta_polarization";
  for (const auto& col : table.columns) out << fmt::format(",{}", col.delta.polarization);
  out << "\ndelta_global_disagreement";
  for (const auto& col : table.columns) out << fmt::format(",{}", col.delta.global_disagreement);
  out << "\ndelta_nci";
  for (const auto& col : table.columns) out << ',' << format_optional(col.delta.nci);
  out << '\n';
}

std::string format_compare_text(const CompareTable& table) {
  std::size_t width = 12;
  for (const auto& col : table.columns) width = std::max(width, col.label.size() + 2);
  std::string out = fmt::format("{:<28}", "");
  for (const auto& col : table.columns) out += fmt::format("{:>{}}", col.label, width);
  out += '\n';
  auto row = [&](std::string_view name, auto value_of) {
    out += fmt::format("{:<28}", name);
    for (const auto& col : table.columns) out += fmt::format("{:>{}}", value_of(col.delta), width);
    out += '\n';
  };
  row("dPolarization", [](const MetricsDelta& d) { return fmt::format("{:+.3f}", d.polarization); });
  row("dGlobalDisagreement",
      [](const MetricsDelta& d) { return fmt::format("{:+.3f}", d.global_disagreement); });
  row("dNCI", [](const MetricsDelta& d) {
    return d.nci ? fmt::format("{:+.3f}", *d.nci) : std::string("n/a");
  });
  return out;
}

const SweepStat& SweepSummary::stat(std::string_view metric) const {
  for (const auto& s : stats) {
    if (s.metric == metric) return s;
  }
  throw ParameterError(fmt::format("no sweep statistic named '{}'", metric));
}

SweepSummary sweep(const RunConfig& base, std::span<const std::uint64_t> seeds,
                   const SweepOptions& options) {
  if (seeds.empty()) throw ParameterError("sweep needs at least one seed");
  base.validate();

  SweepSummary summary;
  summary.outcomes.resize(seeds.size());
  std::unique_ptr<TextBackend> owned;
  TextBackend* backend = options.backend;
  if (base.engine == EngineKind::ssf && backend == nullptr) {
    owned = make_backend(base);
    backend = owned.get();
  }

  detail::parallel_for(seeds.size(), options.jobs, [&](std::size_t k) {
    SeedOutcome& o = summary.outcomes[k];
    o.seed = seeds[k];
    try {
      RunConfig c = base;
      c.seed = seeds[k];
      const RunResult r = simulate(c, backend);
      o.delta = r.delta();
      o.final_state = r.snapshots.back();
      o.final_state->beliefs.clear();
      if (options.output_root) {
        write_artifacts(r, *options.output_root / fmt::format("seed_{}", c.seed));
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
  });

  struct Series {
    std::string name;
    std::function<std::optional<double>(const SeedOutcome&)> get;
  };
  const std::vector<Series> series{
      {"delta_polarization", [](const SeedOutcome& o) { return std::optional(o.delta->polarization); }},
      {"delta_global_disagreement",
       [](const SeedOutcome& o) { return std::optional(o.delta->global_disagreement); }},
      {"delta_nci", [](const SeedOutcome& o) { return o.delta->nci; }},
      {"final_polarization",
       [](const SeedOutcome& o) { return std::optional(o.final_state->polarization); }},
      {"final_global_disagreement",
       [](const SeedOutcome& o) { return std::optional(o.final_state->global_disagreement); }},
      {"final_nci", [](const SeedOutcome& o) { return o.final_state->nci; }},
  };
  for (const auto& o : summary.outcomes) {
    if (!o.error.empty()) ++summary.failures;
  }
  for (const auto& s : series) {
    std::vector<double> xs;
    for (const auto& o : summary.outcomes) {
      if (!o.error.empty()) continue;
      if (auto v = s.get(o)) xs.push_back(*v);
    }
    SweepStat stat{s.name, std::nan(""), std::nan(""), xs.size()};
    if (!xs.empty()) {
      double sum = 0.0;
      for (double x : xs) sum += x;
      stat.mean = sum / static_cast<double>(xs.size());
      double ss = 0.0;
      for (double x : xs) ss += (x - stat.mean) * (x - stat.mean);
      stat.stddev = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    }
    summary.stats.push_back(stat);
  }
  return summary;
}

void write_aggregate_csv(std::ostream& out, const SweepSummary& summary) {
  out << "metric,mean,stddev,count\n";
  for (const auto& s : summary.stats) {
    if (s.count == 0) {
      out << fmt::format("{},,,0\n", s.metric);
    } else {
      out << fmt::format("{},{},{},{}\n", s.metric, s.mean, s.stddev, s.count);
    }
  }
}

void write_seed_csv(std::ostream& out, const SweepSummary& summary) {
  out << "seed,status,delta_polarization,delta_global_disagreement,delta_nci,"
         "final_polarization,final_global_disagreement,final_nci\n";
  for (const auto& o : summary.outcomes) {
    if (!o.error.empty()) {
      out << fmt::format("{},failed,,,,,,\n", o.seed);
      continue;
    }
    out << fmt::format("{},ok,{},{},{},{},{},{}\n", o.seed, o.delta->polarization,
                       o.delta->global_disagreement, format_optional(o.delta->nci),
                       o.final_state->polarization, o.final_state->global_disagreement,
                       format_optional(o.final_state->nci));
  }
}

}  // namespace echo
