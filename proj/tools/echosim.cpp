// echosim: run, compare and sweep opinion-dynamics experiments.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "echo/config.hpp"
#include "echo/errors.hpp"
#include "echo/experiment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBackend = 3;
constexpr int kExitIo = 4;

// Flags shared by every subcommand that resolves a RunConfig.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app, bool with_config_option = true) {
    if (with_config_option) {
      app->add_option("-c,--config", config_path, "JSON run configuration");
    }
    for (const char* key : {"seed", "days", "n", "topic", "engine", "graph", "exposure",
                            "threshold", "nudge", "backend", "out"}) {
      app->add_option_function<std::string>(
          fmt::format("--{}", key), [this, key](const std::string& v) { overrides[key] = v; },
          fmt::format("override {}", key));
    }
  }

  json raw(const std::string& path) const {
    json j = path.empty() ? json::object() : echo::read_config_json(path);
    for (const auto& [key, value] : overrides) echo::apply_override(j, key, value);
    return j;
  }

  echo::RunConfig resolve(const std::string& path) const {
    return echo::config_from_json(raw(path));
  }
  echo::RunConfig resolve() const { return resolve(config_path); }
};

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    if (part.empty()) continue;
    try {
      const auto dash = part.find('-');
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dash));
        const auto hi = std::stoull(part.substr(dash + 1));
        if (hi < lo) throw echo::ConfigError(fmt::format("empty seed range '{}'", part));
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw echo::ConfigError(fmt::format("bad seed list entry '{}'", part));
    }
  }
  return seeds;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw echo::IoError(fmt::format("cannot open {} for writing", path.string()));
  out << text;
  if (!out) throw echo::IoError(fmt::format("write to {} failed", path.string()));
}

template <typename Fn>
void write_stream(const fs::path& path, Fn body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw echo::IoError(fmt::format("cannot open {} for writing", path.string()));
  body(out);
  if (!out) throw echo::IoError(fmt::format("write to {} failed", path.string()));
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw echo::IoError(fmt::format("cannot create directory {}", dir.string()));
  }
}

int cmd_run(const ConfigFlags& flags) {
  const auto config = flags.resolve();
  const auto artifacts = echo::run(config);
  std::cout << fmt::format("run complete: {} ({} files, config {})\n", artifacts.dir.string(),
                           artifacts.files.size(), echo::config_hash(config));
  return kExitOk;
}

int cmd_validate(const ConfigFlags& flags, bool print_defaults) {
  if (print_defaults) {
    std::cout << echo::defaults_reference();
    return kExitOk;
  }
  const auto config = flags.resolve();
  std::cout << echo::to_json(config).dump(2) << '\n';
  std::cout << "config_hash=" << echo::config_hash(config) << '\n';
  return kExitOk;
}

int cmd_sweep(const ConfigFlags& flags, const std::string& seed_text, std::size_t jobs) {
  const auto base = flags.resolve();
  const auto seeds = parse_seeds(seed_text);
  if (seeds.size() < 2) throw echo::ConfigError("sweep needs at least two seeds");

  const fs::path root = base.output_dir;
  make_dir(root);
  echo::SweepOptions options;
  options.output_root = root;
  options.jobs = jobs;
  const auto summary = echo::sweep(base, seeds, options);

  write_stream(root / "aggregate.csv", [&](std::ostream& o) { echo::write_aggregate_csv(o, summary); });
  write_stream(root / "seeds.csv", [&](std::ostream& o) { echo::write_seed_csv(o, summary); });
  echo::write_aggregate_csv(std::cout, summary);
  for (const auto& o : summary.outcomes) {
    if (!o.error.empty()) std::cerr << fmt::format("seed {} failed: {}\n", o.seed, o.error);
  }
  if (summary.failures > 0) {
    std::cerr << fmt::format("{} of {} seeds failed\n", summary.failures, seeds.size());
    return summary.failures == seeds.size() ? kExitBackend : 1;
  }
  return kExitOk;
}

int cmd_compare(const ConfigFlags& flags, const std::vector<std::string>& config_paths,
                const std::string& engines, const std::string& graphs,
                const std::string& seed_text, std::size_t jobs) {
  std::vector<echo::RunConfig> configs;
  if (!engines.empty() || !graphs.empty()) {
    if (config_paths.size() > 1) {
      throw echo::ConfigError("--engines/--graphs expand a single base config");
    }
    const json base = flags.raw(config_paths.empty() ? std::string() : config_paths.front());
    const auto engine_list = engines.empty() ? std::vector<std::string>{base.value("engine", json::object()).value("kind", "bcm")}
                                             : split_list(engines);
    const auto graph_list = graphs.empty() ? std::vector<std::string>{base.value("graph", json::object()).value("kind", "small_world")}
                                           : split_list(graphs);
    for (const auto& g : graph_list) {
      for (const auto& e : engine_list) {
        json j = base;
        echo::apply_override(j, "graph", g);
        echo::apply_override(j, "engine", e);
        configs.push_back(echo::config_from_json(j));
      }
    }
  } else if (config_paths.empty()) {
    configs.push_back(flags.resolve(""));
  } else {
    for (const auto& path : config_paths) configs.push_back(flags.resolve(path));
  }

  try {
    echo::CompareTable table;
    if (seed_text.empty()) {
      table = echo::compare(configs);
    } else {
      // Same population check as the single-seed path.
      for (const auto& c : configs) {
        if (c.n != configs.front().n || c.topic != configs.front().topic) {
          throw echo::ParameterError("compare needs configs with the same n and topic");
        }
      }
      // Seed-averaged columns.
      const auto seeds = parse_seeds(seed_text);
      for (const auto& c : configs) {
        echo::SweepOptions options;
        options.jobs = jobs;
        const auto s = echo::sweep(c, seeds, options);
        if (s.failures > 0) throw echo::TransportError(fmt::format("{} seeds failed", s.failures));
        echo::MetricsDelta d;
        d.polarization = s.stat("delta_polarization").mean;
        d.global_disagreement = s.stat("delta_global_disagreement").mean;
        if (s.stat("delta_nci").count > 0) d.nci = s.stat("delta_nci").mean;
        table.columns.push_back({echo::column_label(c), d});
      }
    }
    const fs::path root = configs.front().output_dir;
    make_dir(root);
    write_stream(root / "table.csv", [&](std::ostream& o) { echo::write_compare_csv(o, table); });
    const std::string text = echo::format_compare_text(table);
    write_text(root / "table.txt", text);
    std::cout << text;
  } catch (const echo::ParameterError& e) {
    throw echo::ConfigError(e.what());
  }
  return kExitOk;
}

int cmd_export_projection(const std::string& run_dir, std::string out_path) {
  const fs::path dir = run_dir;
  const auto config = echo::load_config(dir / "config.json");

  std::ifstream graph_in(dir / "graph.txt");
  if (!graph_in) throw echo::IoError(fmt::format("cannot read {}", (dir / "graph.txt").string()));
  const auto graph = echo::read_edge_list(graph_in);

  std::ifstream traj_in(dir / "trajectory.jsonl");
  if (!traj_in) throw echo::IoError(fmt::format("cannot read {}", (dir / "trajectory.jsonl").string()));
  std::vector<double> initial(graph.size());
  std::vector<double> final_beliefs(graph.size());
  std::size_t last_day = 0;
  for (std::string line; std::getline(traj_in, line);) {
    if (line.empty()) continue;
    const auto j = json::parse(line);
    const auto day = j.at("day").get<std::size_t>();
    const auto agent = j.at("agent").get<std::size_t>();
    if (agent >= graph.size()) throw echo::IoError("trajectory agent index exceeds graph size");
    const double belief = j.at("belief").get<double>();
    if (day == 0) initial[agent] = belief;
    if (day >= last_day) {
      last_day = day;
      final_beliefs[agent] = belief;
    }
  }

  if (out_path.empty()) out_path = (dir / "projection.csv").string();
  write_stream(out_path, [&](std::ostream& o) {
    echo::write_projection_csv(o, graph, config.seed, initial, final_beliefs);
  });
  std::cout << "projection written to " << out_path << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"echosim: opinion dynamics and echo-chamber experiments"};
  app.require_subcommand(1);

  ConfigFlags run_flags;
  auto* run = app.add_subcommand("run", "run one experiment and write its artifacts");
  run_flags.attach(run);

  ConfigFlags validate_flags;
  bool print_defaults = false;
  auto* validate = app.add_subcommand("validate-config", "check a config and print it resolved");
  validate_flags.attach(validate);
  validate->add_flag("--print-defaults", print_defaults, "print every key with its default");

  ConfigFlags sweep_flags;
  std::string sweep_seeds = "1-10";
  std::size_t sweep_jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "run a config over several seeds and aggregate");
  sweep_flags.attach(sweep);
  sweep->add_option("--seeds", sweep_seeds, "seed list, e.g. 1,2,5 or 1-10")->capture_default_str();
  sweep->add_option("--jobs", sweep_jobs, "seeds run in parallel")->capture_default_str();

  ConfigFlags compare_flags;
  std::vector<std::string> compare_configs;
  std::string compare_engines;
  std::string compare_graphs;
  std::string compare_seeds;
  std::size_t compare_jobs = 1;
  auto* compare = app.add_subcommand("compare", "tabulate metric deltas across runs");
  compare->add_option("-c,--config", compare_configs, "config file (repeatable)");
  compare_flags.attach(compare, false);
  compare->add_option("--engines", compare_engines, "expand the base config over engines, e.g. fj,bcm");
  compare->add_option("--graphs", compare_graphs,
                      "expand the base config over graphs, e.g. small_world,scale_free,random");
  compare->add_option("--seeds", compare_seeds, "average each column over these seeds");
  compare->add_option("--jobs", compare_jobs, "seeds run in parallel")->capture_default_str();

  std::string projection_dir;
  std::string projection_out;
  auto* projection = app.add_subcommand("export-projection",
                                        "write final beliefs with layout coordinates for a run");
  projection->add_option("--run-dir", projection_dir, "run directory")->required();
  projection->add_option("-o,--output", projection_out, "output CSV (default <run-dir>/projection.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (validate->parsed()) return cmd_validate(validate_flags, print_defaults);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_seeds, sweep_jobs);
    if (compare->parsed()) {
      return cmd_compare(compare_flags, compare_configs, compare_engines, compare_graphs,
                         compare_seeds, compare_jobs);
    }
    if (projection->parsed()) return cmd_export_projection(projection_dir, projection_out);
  } catch (const echo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const echo::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const echo::TransportError& e) {
    std::cerr << "backend error: " << e.what() << '\n';
    return kExitBackend;
  } catch (const echo::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const json::exception& e) {
    std::cerr << "i/o error: malformed record: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitConfig;
}
