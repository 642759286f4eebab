// Copyright 2026 The sumrefine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUMREFINE_LLM_GATEWAY_HPP
#define SUMREFINE_LLM_GATEWAY_HPP

#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumrefine/prompt_engine.hpp"

namespace sumrefine::gateway {

enum class BackendKind { kHttpChat, kScriptedMock };

std::string_view backend_kind_name(BackendKind kind);
std::optional<BackendKind> parse_backend_kind(std::string_view name);

inline constexpr std::string_view kDefaultApiKeyEnv = "CHALLENGE_API_KEY";

struct BackendSpec {
  BackendKind kind = BackendKind::kScriptedMock;
  /// Full chat-completion URL, e.g. https://host/v1/chat/completions.
  std::string endpoint_url;
  std::string model_name;
  std::chrono::duration<double> timeout{60.0};
  int max_retries = 3;
  double temperature = 0.0;
  /// Environment variable holding the bearer token. Unset or empty
  /// variables send no Authorization header.
  std::string api_key_env{kDefaultApiKeyEnv};
  /// Delay before the first retry; doubles per further retry.
  std::chrono::milliseconds initial_backoff{1000};
  /// Upper bound on concurrent requests the harness routes to this backend;
  /// 0 means unbounded.
  std::size_t max_concurrency = 0;

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

struct CompletionRequest {
  std::string system_text;
  std::string user_text;
  int max_output_tokens = 1024;

  friend bool operator==(const CompletionRequest&, const CompletionRequest&) = default;
};

/// A text-completion backend. Implementations must tolerate concurrent
/// calls from several workers.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

/// Replays queued responses in FIFO order and records every request.
class ScriptedMock final : public Backend {
 public:
  ScriptedMock() = default;
  explicit ScriptedMock(std::vector<std::string> responses);

  void enqueue(std::string response);
  /// Throws MockExhaustedError when the queue is empty.
  std::string complete(const CompletionRequest& request) override;

  std::vector<CompletionRequest> call_log() const;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::deque<std::string> responses_;
  std::vector<CompletionRequest> call_log_;
};

/// Chat-completion client over HTTP(S).
///
/// Sends {"model", "messages": [system?, user], "temperature", "max_tokens"}
/// and reads choices[0].message.content. 5xx, 429 and transport failures are
/// retried up to max_retries times with exponential backoff; other non-2xx
/// statuses raise RequestRejectedError.
class HttpChatBackend final : public Backend {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpChatBackend(BackendSpec spec, Sleeper sleeper = {});

  std::string complete(const CompletionRequest& request) override;

  const BackendSpec& spec() const { return spec_; }

 private:
  struct Endpoint {
    std::string scheme_host_port;
    std::string path;
  };

  BackendSpec spec_;
  Endpoint endpoint_;
  Sleeper sleeper_;
};

/// Delay before retry number `retry` (0-based): initial * 2^retry.
std::chrono::milliseconds backoff_delay(std::chrono::milliseconds initial, int retry);

/// Builds the request body sent by HttpChatBackend.
std::string chat_request_body(const BackendSpec& spec, const CompletionRequest& request);

/// Pulls choices[0].message.content out of a response body. Throws
/// ProtocolError when the shape does not match.
std::string extract_chat_content(std::string_view body);

/// Builds the backend named by `spec`. Scripted mocks start with
/// `scripted_responses` queued.
std::shared_ptr<Backend> make_backend(const BackendSpec& spec,
                                      std::vector<std::string> scripted_responses = {});

/// Validates the request and forwards it. Throws PreconditionError on an
/// empty user_text or a non-positive token cap.
std::string complete(Backend& backend, const CompletionRequest& request);

/// Generator call: system = composed prompt, user = source. Returns the
/// trimmed output.
std::string generate_summary(Backend& backend, const prompt::PromptBundle& prompt,
                             std::string_view source, int max_output_tokens = 1024);

}  // namespace sumrefine::gateway

#endif  // SUMREFINE_LLM_GATEWAY_HPP
