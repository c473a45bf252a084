#pragma once

#include <cstddef>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>

#include "echo/backend.hpp"

namespace echo {

struct RemoteSettings {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o-mini";
  // Name of the environment variable holding the API key. The key itself
  // never appears in configuration files.
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout_seconds = 60.0;
  std::size_t max_retries = 4;
  double backoff_seconds = 1.0;  // first retry delay, doubled each attempt
  std::string log_path;          // request/response log, empty to disable
};

// Chat-completion client for OpenAI-compatible endpoints. Retries connection
// failures, 429 and 5xx responses with exponential backoff.
class RemoteBackend final : public TextBackend {
 public:
  RemoteBackend(RemoteSettings settings, std::string api_key);
  ~RemoteBackend() override;

  // Reads the key from settings.api_key_env; throws CredentialsError when it
  // is unset or empty.
  static std::unique_ptr<RemoteBackend> from_environment(const RemoteSettings& settings);

  std::string complete(const std::string& prompt, std::size_t max_length,
                       double temperature) override;
  std::string identity() const override;

 private:
  void log_exchange(const std::string& request, int status, const std::string& response);

  RemoteSettings settings_;
  std::string api_key_;
  std::string scheme_host_port_;
  std::string path_;
  std::mutex log_mutex_;
  std::ofstream log_;
};

}  // namespace echo
