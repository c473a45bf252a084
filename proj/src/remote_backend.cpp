#include "echo/remote_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <regex>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "echo/errors.hpp"

namespace echo {
namespace {

std::string redact(std::string text, const std::string& secret) {
  if (secret.empty()) return text;
  for (auto pos = text.find(secret); pos != std::string::npos; pos = text.find(secret, pos)) {
    text.replace(pos, secret.size(), "[REDACTED]");
  }
  return text;
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

RemoteBackend::RemoteBackend(RemoteSettings settings, std::string api_key)
    : settings_(std::move(settings)), api_key_(std::move(api_key)) {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(settings_.base_url, m, url_re)) {
    throw ConfigError(fmt::format("remote base_url '{}' is not an http(s) URL", settings_.base_url));
  }
  scheme_host_port_ = m[1].str();
  std::string prefix = m[2].str();
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/chat/completions";

  if (!settings_.log_path.empty()) {
    log_.open(settings_.log_path, std::ios::app);
    if (!log_) throw IoError(fmt::format("cannot open request log {}", settings_.log_path));
  }
}

RemoteBackend::~RemoteBackend() = default;

std::unique_ptr<RemoteBackend> RemoteBackend::from_environment(const RemoteSettings& settings) {
  const char* key = std::getenv(settings.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw CredentialsError(fmt::format(
        "remote backend selected but environment variable {} is not set", settings.api_key_env));
  }
  return std::make_unique<RemoteBackend>(settings, key);
}

std::string RemoteBackend::identity() const {
  return fmt::format("remote:{}@{}", settings_.model, settings_.base_url);
}

void RemoteBackend::log_exchange(const std::string& request, int status,
                                 const std::string& response) {
  if (!log_.is_open()) return;
  nlohmann::ordered_json entry;
  entry["endpoint"] = scheme_host_port_ + path_;
  entry["status"] = status;
  entry["request"] = redact(request, api_key_);
  entry["response"] = redact(response, api_key_);
  std::lock_guard lock(log_mutex_);
  log_ << entry.dump() << '\n';
  log_.flush();
}

std::string RemoteBackend::complete(const std::string& prompt, std::size_t max_length,
                                    double temperature) {
  nlohmann::ordered_json body;
  body["model"] = settings_.model;
  body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
  body["max_tokens"] = max_length;
  body["temperature"] = temperature;
  const std::string request = body.dump();

  const auto timeout = std::chrono::duration<double>(settings_.timeout_seconds);
  const httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};

  std::string last_error;
  double delay = settings_.backoff_seconds;
  for (std::size_t attempt = 0; attempt <= settings_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
      delay *= 2.0;
    }

    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

    auto res = client.Post(path_, headers, request, "application/json");
    if (!res) {
      last_error = fmt::format("request failed: {}", httplib::to_string(res.error()));
      log_exchange(request, 0, last_error);
      continue;
    }
    log_exchange(request, res->status, res->body);
    if (res->status == 200) {
      try {
        const auto reply = nlohmann::json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw TransportError(fmt::format("malformed completion response: {}", e.what()));
      }
    }
    last_error = fmt::format("HTTP {}: {}", res->status, redact(res->body, api_key_));
    if (!retryable(res->status)) break;
  }
  throw TransportError(fmt::format("completion failed after retries: {}", last_error));
}

}  // namespace echo
