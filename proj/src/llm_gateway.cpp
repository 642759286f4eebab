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

#include "sumrefine/llm_gateway.hpp"

#include <cstdlib>
#include <regex>
#include <thread>
#include <utility>

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "sumrefine/error.hpp"
#include "sumrefine/text.hpp"

namespace sumrefine::gateway {
namespace {

using json = nlohmann::json;

bool is_retryable_status(int status) { return status >= 500 || status == 429; }

void set_timeouts(httplib::Client& client, std::chrono::duration<double> timeout) {
  const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  const time_t sec = static_cast<time_t>(usec.count() / 1'000'000);
  const time_t rem = static_cast<time_t>(usec.count() % 1'000'000);
  client.set_connection_timeout(sec, rem);
  client.set_read_timeout(sec, rem);
  client.set_write_timeout(sec, rem);
}

}  // namespace

std::string_view backend_kind_name(BackendKind kind) {
  return kind == BackendKind::kHttpChat ? "http_chat" : "scripted_mock";
}

std::optional<BackendKind> parse_backend_kind(std::string_view name) {
  if (name == "http_chat") return BackendKind::kHttpChat;
  if (name == "scripted_mock") return BackendKind::kScriptedMock;
  return std::nullopt;
}

void BackendSpec::validate() const {
  if (kind == BackendKind::kHttpChat) {
    if (endpoint_url.empty()) throw ConfigError("http_chat backend needs endpoint_url");
    if (model_name.empty()) throw ConfigError("http_chat backend needs model_name");
  }
  if (!(timeout.count() > 0.0)) throw ConfigError("backend timeout must be > 0");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (initial_backoff.count() < 0) throw ConfigError("initial_backoff must be >= 0");
}

ScriptedMock::ScriptedMock(std::vector<std::string> responses)
    : responses_(std::make_move_iterator(responses.begin()),
                 std::make_move_iterator(responses.end())) {}

void ScriptedMock::enqueue(std::string response) {
  std::lock_guard lock(mu_);
  responses_.push_back(std::move(response));
}

std::string ScriptedMock::complete(const CompletionRequest& request) {
  std::lock_guard lock(mu_);
  if (responses_.empty()) {
    throw MockExhaustedError("scripted mock has no queued response left");
  }
  call_log_.push_back(request);
  std::string out = std::move(responses_.front());
  responses_.pop_front();
  return out;
}

std::vector<CompletionRequest> ScriptedMock::call_log() const {
  std::lock_guard lock(mu_);
  return call_log_;
}

std::size_t ScriptedMock::remaining() const {
  std::lock_guard lock(mu_);
  return responses_.size();
}

std::chrono::milliseconds backoff_delay(std::chrono::milliseconds initial, int retry) {
  const int shift = std::min(retry, 30);
  return initial * (std::int64_t{1} << shift);
}

std::string chat_request_body(const BackendSpec& spec, const CompletionRequest& request) {
  json messages = json::array();
  if (!request.system_text.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system_text}});
  }
  messages.push_back({{"role", "user"}, {"content", request.user_text}});
  json body = {
      {"model", spec.model_name},
      {"messages", std::move(messages)},
      {"temperature", spec.temperature},
      {"max_tokens", request.max_output_tokens},
      {"stream", false},
  };
  return body.dump();
}

std::string extract_chat_content(std::string_view body) {
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw ProtocolError("chat response is not JSON");
  const json* content = nullptr;
  if (doc.is_object() && doc.contains("choices") && doc["choices"].is_array() &&
      !doc["choices"].empty()) {
    const json& choice = doc["choices"][0];
    if (choice.is_object() && choice.contains("message") && choice["message"].is_object() &&
        choice["message"].contains("content")) {
      content = &choice["message"]["content"];
    }
  }
  if (content == nullptr || !content->is_string()) {
    throw ProtocolError("chat response lacks choices[0].message.content");
  }
  return content->get<std::string>();
}

HttpChatBackend::HttpChatBackend(BackendSpec spec, Sleeper sleeper)
    : spec_(std::move(spec)), sleeper_(std::move(sleeper)) {
  spec_.validate();
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(spec_.endpoint_url, m, kUrl)) {
    throw ConfigError("endpoint_url is not an http(s) URL: " + spec_.endpoint_url);
  }
  endpoint_.scheme_host_port = m[1].str();
  endpoint_.path = m[2].matched ? m[2].str() : "/";
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::string HttpChatBackend::complete(const CompletionRequest& request) {
  const std::string body = chat_request_body(spec_, request);
  httplib::Headers headers;
  if (!spec_.api_key_env.empty()) {
    if (const char* token = std::getenv(spec_.api_key_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  // One client per call keeps concurrent callers independent.
  httplib::Client client(endpoint_.scheme_host_port);
  set_timeouts(client, spec_.timeout);

  int last_status = 0;
  std::string last_error;
  for (int attempt = 0; attempt <= spec_.max_retries; ++attempt) {
    if (attempt > 0) sleeper_(backoff_delay(spec_.initial_backoff, attempt - 1));

    auto res = client.Post(endpoint_.path, headers, body, "application/json");
    if (!res) {
      last_status = 0;
      last_error = httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    if (res->status >= 200 && res->status < 300) return extract_chat_content(res->body);
    if (!is_retryable_status(res->status)) throw RequestRejectedError(res->status, res->body);
    last_error = "HTTP " + std::to_string(res->status);
  }
  throw BackendUnavailableError("backend " + spec_.endpoint_url + " unavailable after " +
                                    std::to_string(spec_.max_retries + 1) +
                                    " attempts: " + last_error,
                                last_status);
}

std::shared_ptr<Backend> make_backend(const BackendSpec& spec,
                                      std::vector<std::string> scripted_responses) {
  spec.validate();
  if (spec.kind == BackendKind::kHttpChat) return std::make_shared<HttpChatBackend>(spec);
  return std::make_shared<ScriptedMock>(std::move(scripted_responses));
}

std::string complete(Backend& backend, const CompletionRequest& request) {
  if (request.user_text.empty()) throw PreconditionError("completion request has no user text");
  if (request.max_output_tokens < 1) throw PreconditionError("max_output_tokens must be >= 1");
  return backend.complete(request);
}

std::string generate_summary(Backend& backend, const prompt::PromptBundle& prompt,
                             std::string_view source, int max_output_tokens) {
  if (source.empty()) throw PreconditionError("cannot summarize an empty source");
  CompletionRequest request{prompt.composed, std::string(source), max_output_tokens};
  return text::trim(complete(backend, request));
}

}  // namespace sumrefine::gateway
