#include "echo/config.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>

#include "echo/errors.hpp"

namespace echo {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                std::string_view where) {
  if (!obj.is_object()) throw ConfigError(fmt::format("'{}' must be an object", where));
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError(fmt::format("unknown key '{}' in {}", key, where));
  }
}

std::uint64_t get_uint(const json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  const bool ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  if (!ok) {
    throw ConfigError(fmt::format("'{}' must be a non-negative integer", key));
  }
  return v.get<std::uint64_t>();
}

double get_double(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(fmt::format("'{}' must be a number", key));
  return v.get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(fmt::format("'{}' must be a string", key));
  return v.get<std::string>();
}

// Name lookups throw ParameterError; surface them as config errors.
template <typename Fn>
auto parse_name(Fn fn, const std::string& name) {
  try {
    return fn(name);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("--{} expects a non-negative integer, got '{}'", key, text));
  }
  return v;
}

double parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("--{} expects a number, got '{}'", key, text));
}

}  // namespace

std::string to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::bcm: return "bcm";
    case EngineKind::fj: return "fj";
    case EngineKind::ssf: return "ssf";
  }
  return "unknown";
}

EngineKind engine_kind_from_string(const std::string& name) {
  if (name == "bcm") return EngineKind::bcm;
  if (name == "fj") return EngineKind::fj;
  if (name == "ssf") return EngineKind::ssf;
  throw ParameterError(fmt::format("unknown engine '{}'", name));
}

std::string to_string(BackendKind kind) {
  return kind == BackendKind::mock ? "mock" : "remote";
}

BackendKind backend_kind_from_string(const std::string& name) {
  if (name == "mock") return BackendKind::mock;
  if (name == "remote") return BackendKind::remote;
  throw ParameterError(fmt::format("unknown backend '{}'", name));
}

BcmParams RunConfig::bcm_params() const {
  BcmParams p = bcm;
  p.use_recommendation = exposure == ExposureMode::recommended;
  p.threshold = threshold;
  return p;
}

FjParams RunConfig::fj_params() const {
  FjParams p = fj;
  p.use_recommendation = exposure == ExposureMode::recommended;
  p.threshold = threshold;
  return p;
}

SsfParams RunConfig::ssf_params() const {
  SsfParams p = ssf;
  p.exposure = exposure;
  p.threshold = threshold;
  return p;
}

void RunConfig::validate() const {
  try {
    if (n < 2) throw ConfigError(fmt::format("n must be >= 2, got {}", n));
    if (days < 1) throw ConfigError("days must be >= 1");
    if (topic.empty()) throw ConfigError("topic must be non-empty");
    if (graph.n != n) throw ConfigError("graph.n must equal n");
    graph.validate();
    if (!(threshold >= 0.0)) throw ConfigError("exposure threshold must be >= 0");
    switch (engine) {
      case EngineKind::bcm: bcm_params().validate(); break;
      case EngineKind::fj: fj_params().validate(); break;
      case EngineKind::ssf: ssf_params().validate(); break;
    }
    nudge.validate();
    if (nudge.kind != NudgeKind::none && engine != EngineKind::ssf) {
      throw ConfigError("nudges apply only to the ssf engine");
    }
    if (backend == BackendKind::remote) {
      if (remote.api_key_env.empty()) throw ConfigError("backend.api_key_env must be set");
      if (remote.model.empty()) throw ConfigError("backend.model must be set");
      if (!(remote.timeout_seconds > 0.0)) throw ConfigError("backend.timeout_seconds must be > 0");
      if (!(remote.backoff_seconds >= 0.0)) throw ConfigError("backend.backoff_seconds must be >= 0");
    }
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::ordered_json to_json(const RunConfig& c, bool include_output_dir) {
  ojson j;
  j["n"] = c.n;
  j["days"] = c.days;
  j["seed"] = c.seed;
  j["topic"] = c.topic;

  ojson g;
  g["kind"] = to_string(c.graph.kind);
  switch (c.graph.kind) {
    case GraphKind::small_world:
      g["k"] = c.graph.k;
      g["p_rewire"] = c.graph.p_rewire;
      break;
    case GraphKind::scale_free: g["m"] = c.graph.m; break;
    case GraphKind::random: g["p_edge"] = c.graph.p_edge; break;
  }
  j["graph"] = g;

  ojson e;
  e["kind"] = to_string(c.engine);
  switch (c.engine) {
    case EngineKind::bcm:
      e["epsilon"] = c.bcm.epsilon;
      e["mu"] = c.bcm.mu;
      break;
    case EngineKind::fj: e["susceptibility"] = c.fj.susceptibility; break;
    case EngineKind::ssf:
      e["exposure_cap"] = c.ssf.exposure_cap;
      e["parse_retries"] = c.ssf.parse_retries;
      e["memory_budget"] = c.ssf.memory_budget;
      e["max_tokens"] = c.ssf.max_tokens;
      e["temperature"] = c.ssf.temperature;
      e["max_in_flight"] = c.ssf.max_in_flight;
      break;
  }
  j["engine"] = e;

  j["exposure"] = ojson{{"mode", to_string(c.exposure)}, {"threshold", c.threshold}};

  ojson nd;
  nd["kind"] = to_string(c.nudge.kind);
  nd["threshold"] = c.nudge.extremity_threshold;
  if (c.nudge.kind == NudgeKind::passive) nd["passive_texts"] = c.nudge.passive_texts;
  j["nudge"] = nd;

  ojson b;
  b["kind"] = to_string(c.backend);
  if (c.backend == BackendKind::remote) {
    b["base_url"] = c.remote.base_url;
    b["model"] = c.remote.model;
    b["api_key_env"] = c.remote.api_key_env;
    b["timeout_seconds"] = c.remote.timeout_seconds;
    b["max_retries"] = c.remote.max_retries;
    b["backoff_seconds"] = c.remote.backoff_seconds;
    b["log_path"] = c.remote.log_path;
  }
  j["backend"] = b;

  if (include_output_dir) j["output_dir"] = c.output_dir;
  return j;
}

RunConfig config_from_json(const json& j) {
  check_keys(j, {"n", "days", "seed", "topic", "graph", "engine", "exposure", "nudge", "backend",
                 "output_dir"},
             "config");
  RunConfig c;
  c.n = get_uint(j, "n", c.n);
  c.days = get_uint(j, "days", c.days);
  c.seed = get_uint(j, "seed", c.seed);
  c.topic = get_string(j, "topic", c.topic);
  c.output_dir = get_string(j, "output_dir", c.output_dir);
  c.graph.n = c.n;

  if (j.contains("graph")) {
    const auto& g = j.at("graph");
    check_keys(g, {"kind", "k", "p_rewire", "m", "p_edge"}, "graph");
    c.graph.kind = parse_name(graph_kind_from_string, get_string(g, "kind", "small_world"));
    switch (c.graph.kind) {
      case GraphKind::small_world:
        check_keys(g, {"kind", "k", "p_rewire"}, "small_world graph");
        c.graph.k = get_uint(g, "k", c.graph.k);
        c.graph.p_rewire = get_double(g, "p_rewire", c.graph.p_rewire);
        break;
      case GraphKind::scale_free:
        check_keys(g, {"kind", "m"}, "scale_free graph");
        c.graph.m = get_uint(g, "m", c.graph.m);
        break;
      case GraphKind::random:
        check_keys(g, {"kind", "p_edge"}, "random graph");
        c.graph.p_edge = get_double(g, "p_edge", c.graph.p_edge);
        break;
    }
  }

  if (j.contains("engine")) {
    const auto& e = j.at("engine");
    if (!e.is_object()) throw ConfigError("'engine' must be an object");
    c.engine = parse_name(engine_kind_from_string, get_string(e, "kind", "bcm"));
    switch (c.engine) {
      case EngineKind::bcm:
        check_keys(e, {"kind", "epsilon", "mu"}, "bcm engine");
        c.bcm.epsilon = get_double(e, "epsilon", c.bcm.epsilon);
        c.bcm.mu = get_double(e, "mu", c.bcm.mu);
        break;
      case EngineKind::fj:
        check_keys(e, {"kind", "susceptibility"}, "fj engine");
        c.fj.susceptibility = get_double(e, "susceptibility", c.fj.susceptibility);
        break;
      case EngineKind::ssf:
        check_keys(e,
                   {"kind", "exposure_cap", "parse_retries", "memory_budget", "max_tokens",
                    "temperature", "max_in_flight"},
                   "ssf engine");
        c.ssf.exposure_cap = get_uint(e, "exposure_cap", c.ssf.exposure_cap);
        c.ssf.parse_retries = get_uint(e, "parse_retries", c.ssf.parse_retries);
        c.ssf.memory_budget = get_uint(e, "memory_budget", c.ssf.memory_budget);
        c.ssf.max_tokens = get_uint(e, "max_tokens", c.ssf.max_tokens);
        c.ssf.temperature = get_double(e, "temperature", c.ssf.temperature);
        c.ssf.max_in_flight = get_uint(e, "max_in_flight", c.ssf.max_in_flight);
        break;
    }
  }

  if (j.contains("exposure")) {
    const auto& x = j.at("exposure");
    check_keys(x, {"mode", "threshold"}, "exposure");
    c.exposure = parse_name(exposure_mode_from_string, get_string(x, "mode", "recommended"));
    c.threshold = get_double(x, "threshold", c.threshold);
  }

  if (j.contains("nudge")) {
    const auto& nd = j.at("nudge");
    check_keys(nd, {"kind", "threshold", "passive_texts", "passive_texts_file"}, "nudge");
    c.nudge.kind = parse_name(nudge_kind_from_string, get_string(nd, "kind", "none"));
    const auto t = get_uint(nd, "threshold", 2);
    c.nudge.extremity_threshold = static_cast<int>(std::min<std::uint64_t>(t, 1000));
    if (nd.contains("passive_texts") && nd.contains("passive_texts_file")) {
      throw ConfigError("give either nudge.passive_texts or nudge.passive_texts_file, not both");
    }
    if (nd.contains("passive_texts")) {
      const auto& texts = nd.at("passive_texts");
      if (!texts.is_array()) throw ConfigError("nudge.passive_texts must be an array of strings");
      c.nudge.passive_texts.clear();
      for (const auto& t : texts) {
        if (!t.is_string()) throw ConfigError("nudge.passive_texts must be an array of strings");
        c.nudge.passive_texts.push_back(t.get<std::string>());
      }
    }
    if (nd.contains("passive_texts_file")) {
      c.nudge.passive_texts = load_passive_texts(get_string(nd, "passive_texts_file", ""));
    }
  }

  if (j.contains("backend")) {
    const auto& b = j.at("backend");
    check_keys(b,
               {"kind", "base_url", "model", "api_key_env", "timeout_seconds", "max_retries",
                "backoff_seconds", "log_path"},
               "backend");
    c.backend = parse_name(backend_kind_from_string, get_string(b, "kind", "mock"));
    if (c.backend == BackendKind::mock && b.size() > 1) {
      throw ConfigError("mock backend takes no settings");
    }
    c.remote.base_url = get_string(b, "base_url", c.remote.base_url);
    c.remote.model = get_string(b, "model", c.remote.model);
    c.remote.api_key_env = get_string(b, "api_key_env", c.remote.api_key_env);
    c.remote.timeout_seconds = get_double(b, "timeout_seconds", c.remote.timeout_seconds);
    c.remote.max_retries = get_uint(b, "max_retries", c.remote.max_retries);
    c.remote.backoff_seconds = get_double(b, "backoff_seconds", c.remote.backoff_seconds);
    c.remote.log_path = get_string(b, "log_path", c.remote.log_path);
  }

  c.validate();
  return c;
}

json read_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read config file {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_config_json(path));
}

void apply_override(json& j, const std::string& key, const std::string& value) {
  if (j.is_null()) j = json::object();
  auto set_kind = [&](const char* block, std::initializer_list<const char*> keep) {
    json& obj = j[block];
    if (!obj.is_object()) obj = json::object();
    const std::string old = obj.value("kind", "");
    if (old != value) {
      json fresh = json::object();
      for (const char* k : keep) {
        if (obj.contains(k)) fresh[k] = obj[k];
      }
      obj = fresh;
    }
    obj["kind"] = value;
  };

  if (key == "seed" || key == "days" || key == "n") {
    j[key] = parse_unsigned(key, value);
  } else if (key == "topic") {
    j["topic"] = value;
  } else if (key == "out") {
    j["output_dir"] = value;
  } else if (key == "graph") {
    set_kind("graph", {});
  } else if (key == "engine") {
    set_kind("engine", {});
  } else if (key == "exposure") {
    j["exposure"]["mode"] = value;
  } else if (key == "threshold") {
    j["exposure"]["threshold"] = parse_number(key, value);
  } else if (key == "nudge") {
    set_kind("nudge", {"threshold", "passive_texts", "passive_texts_file"});
    if (value != "passive") {
      j["nudge"].erase("passive_texts");
      j["nudge"].erase("passive_texts_file");
    }
  } else if (key == "backend") {
    set_kind("backend", {});
  } else {
    throw ConfigError(fmt::format("no override for '{}'", key));
  }
}

std::string config_hash(const RunConfig& config) {
  return fmt::format("{:016x}", fnv1a64(to_json(config, false).dump()));
}

std::string defaults_reference() {
  const RunConfig d;
  std::ostringstream out;
  out << "# Run configuration reference (JSON). Missing keys take these defaults.\n"
      << "# Command-line flags override file values.\n\n";
  auto row = [&](std::string_view key, const std::string& value, std::string_view what) {
    out << fmt::format("{:<28} {:<34} {}\n", key, value, what);
  };
  row("n", fmt::format("{}", d.n), "number of agents");
  row("days", fmt::format("{}", d.days), "simulated days T");
  row("seed", fmt::format("{}", d.seed), "run seed (population, graph, sampling)");
  row("topic", fmt::format("\"{}\"", d.topic), "statement agents take a position on");
  row("graph.kind", "small_world", "small_world | scale_free | random");
  row("graph.k", fmt::format("{}", d.graph.k), "small_world: even ring degree");
  row("graph.p_rewire", fmt::format("{}", d.graph.p_rewire), "small_world: rewiring probability");
  row("graph.m", fmt::format("{}", d.graph.m), "scale_free: edges per new node");
  row("graph.p_edge", fmt::format("{}", d.graph.p_edge), "random: edge probability");
  row("engine.kind", "bcm", "bcm | fj | ssf");
  row("engine.epsilon", fmt::format("{}", d.bcm.epsilon), "bcm: confidence bound");
  row("engine.mu", fmt::format("{}", d.bcm.mu), "bcm: convergence rate, (0, 0.5]");
  row("engine.susceptibility", fmt::format("{}", d.fj.susceptibility), "fj: anchor weight in [0, 1]");
  row("engine.exposure_cap", fmt::format("{}", d.ssf.exposure_cap), "ssf: max opinions read per day");
  row("engine.parse_retries", fmt::format("{}", d.ssf.parse_retries), "ssf: retries on unparseable output");
  row("engine.memory_budget", fmt::format("{}", d.ssf.memory_budget), "ssf: long-term memory size, bytes");
  row("engine.max_tokens", fmt::format("{}", d.ssf.max_tokens), "ssf: reply token budget");
  row("engine.temperature", fmt::format("{}", d.ssf.temperature), "ssf: sampling temperature");
  row("engine.max_in_flight", fmt::format("{}", d.ssf.max_in_flight), "ssf: concurrent backend calls");
  row("exposure.mode", "recommended", "recommended | all_neighbors");
  row("exposure.threshold", fmt::format("{}", d.threshold), "recommendation similarity threshold");
  row("nudge.kind", "none", "none | active | passive (ssf only)");
  row("nudge.threshold", fmt::format("{}", d.nudge.extremity_threshold), "|belief| that triggers a nudge, 1 or 2");
  row("nudge.passive_texts", "built-in list", "passive nudge statements");
  row("nudge.passive_texts_file", "unset", "file with one passive statement per line");
  row("backend.kind", "mock", "mock | remote (ssf only)");
  row("backend.base_url", d.remote.base_url, "remote: chat-completion endpoint root");
  row("backend.model", d.remote.model, "remote: model name");
  row("backend.api_key_env", d.remote.api_key_env, "remote: environment variable with the key");
  row("backend.timeout_seconds", fmt::format("{}", d.remote.timeout_seconds), "remote: per-request timeout");
  row("backend.max_retries", fmt::format("{}", d.remote.max_retries), "remote: retries on 429/5xx/network");
  row("backend.backoff_seconds", fmt::format("{}", d.remote.backoff_seconds), "remote: first retry delay");
  row("backend.log_path", "unset", "remote: request/response log (key redacted)");
  row("output_dir", d.output_dir, "run directory");
  return out.str();
}

}  // namespace echo
