#include "crowdlab/openai_client.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "crowdlab/error.hpp"

namespace crowdlab {

void validate(const EndpointConfig& cfg) {
  if (cfg.base_url.empty()) throw ConfigError("endpoint base_url is empty");
  if (cfg.base_url.find("://") == std::string::npos)
    throw ConfigError("endpoint base_url needs a scheme: " + cfg.base_url);
  if (cfg.model_name.empty()) throw ConfigError("endpoint model_name is empty");
  if (cfg.max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  if (cfg.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (cfg.max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
  if (cfg.timeout_seconds <= 0.0) throw ConfigError("timeout must be positive");
}

struct ChatClient::Impl {
  EndpointConfig cfg;
  std::string api_key;
  std::string path;  // request path, "<prefix>/chat/completions"
  httplib::Client client;

  static std::string host_part(const std::string& base_url) {
    const std::size_t scheme = base_url.find("://");
    const std::size_t path_start = base_url.find('/', scheme + 3);
    return path_start == std::string::npos ? base_url : base_url.substr(0, path_start);
  }

  static std::string path_prefix(const std::string& base_url) {
    const std::size_t scheme = base_url.find("://");
    const std::size_t path_start = base_url.find('/', scheme + 3);
    if (path_start == std::string::npos) return "/v1";
    std::string prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return prefix.empty() ? "/v1" : prefix;
  }

  explicit Impl(const EndpointConfig& c)
      : cfg(c), path(path_prefix(c.base_url) + "/chat/completions"), client(host_part(c.base_url)) {
    if (const char* key = std::getenv(cfg.api_key_env.c_str()); key != nullptr && *key != '\0')
      api_key = key;
    const auto timeout = std::chrono::milliseconds(
        static_cast<long>(cfg.timeout_seconds * 1000.0));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    if (!api_key.empty())
      client.set_default_headers({{"Authorization", "Bearer " + api_key}});
  }
};

ChatClient::ChatClient(const EndpointConfig& cfg) : impl_(std::make_unique<Impl>(cfg)) {
  validate(cfg);
}

ChatClient::~ChatClient() = default;
ChatClient::ChatClient(ChatClient&&) noexcept = default;
ChatClient& ChatClient::operator=(ChatClient&&) noexcept = default;

ChatResult ChatClient::complete(const std::string& prompt, double temperature) {
  nlohmann::json messages = nlohmann::json::array();
  if (impl_->cfg.system_prompt)
    messages.push_back({{"role", "system"}, {"content", *impl_->cfg.system_prompt}});
  messages.push_back({{"role", "user"}, {"content", prompt}});

  const nlohmann::json body = {
      {"model", impl_->cfg.model_name},
      {"temperature", temperature},
      {"max_tokens", impl_->cfg.max_tokens},
      {"messages", messages},
  };
  const std::string payload = body.dump();

  ChatResult result;
  for (int attempt = 0; attempt <= impl_->cfg.max_retries; ++attempt) {
    result.retries = attempt;
    if (attempt > 0) {
      const int backoff_ms = std::min(100 << (attempt - 1), 2000);
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
    }

    auto res = impl_->client.Post(impl_->path, payload, "application/json");
    if (!res) {
      result.status = 0;
      result.error = "transport: " + httplib::to_string(res.error());
      continue;  // retryable
    }
    result.status = res->status;
    if (res->status == 429 || res->status >= 500) {
      result.error = "http " + std::to_string(res->status);
      continue;  // retryable
    }
    if (res->status != 200) {
      result.error = "http " + std::to_string(res->status) + ": " + res->body;
      return result;  // client error, don't retry
    }
    try {
      const nlohmann::json reply = nlohmann::json::parse(res->body);
      result.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
      result.ok = true;
      result.error.clear();
      return result;
    } catch (const nlohmann::json::exception& e) {
      result.error = std::string("malformed completion body: ") + e.what();
      return result;
    }
  }
  return result;
}

}  // namespace crowdlab
