#pragma once

#include <memory>
#include <optional>
#include <string>

namespace crowdlab {

// One OpenAI-compatible chat-completions endpoint. The API key is read from
// the named environment variable, never from files or flags.
struct EndpointConfig {
  std::string base_url;  // scheme://host[:port][/prefix]; "/v1" appended when no prefix given
  std::string model_name;
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout_seconds = 60.0;
  int max_retries = 3;
  int max_in_flight = 4;
  int max_tokens = 512;
  std::optional<std::string> system_prompt;  // none by default
};

void validate(const EndpointConfig& cfg);

struct ChatResult {
  bool ok = false;
  std::string text;
  int status = 0;      // HTTP status of the final attempt, 0 on transport failure
  std::string error;   // empty on success
  int retries = 0;     // attempts beyond the first
};

// Blocking chat client; one instance per worker thread. Retries transport
// errors, 429 and 5xx with exponential backoff.
class ChatClient {
 public:
  explicit ChatClient(const EndpointConfig& cfg);
  ~ChatClient();
  ChatClient(ChatClient&&) noexcept;
  ChatClient& operator=(ChatClient&&) noexcept;

  ChatResult complete(const std::string& prompt, double temperature);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace crowdlab
