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

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "sumrefine/error.hpp"
#include "sumrefine/prompt_engine.hpp"

namespace sumrefine::gateway {
namespace {

using namespace std::chrono_literals;

std::string chat_body(std::string_view content) {
  return nlohmann::json{{"id", "x"},
                        {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}}}}
      .dump();
}

// Local chat endpoint answering with a scripted list of (status, body) pairs;
// the last entry repeats.
class StubServer {
 public:
  explicit StubServer(std::vector<std::pair<int, std::string>> replies)
      : replies_(std::move(replies)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      requests_.push_back(req.body);
      authorization_.push_back(req.get_header_value("Authorization"));
      const auto& [status, body] = replies_[std::min(hits_, replies_.size() - 1)];
      ++hits_;
      res.status = status;
      res.set_content(body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
  }
  std::size_t hits() const {
    std::lock_guard lock(mu_);
    return hits_;
  }
  std::vector<std::string> requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }
  std::vector<std::string> authorization() const {
    std::lock_guard lock(mu_);
    return authorization_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mu_;
  std::vector<std::pair<int, std::string>> replies_;
  std::size_t hits_ = 0;
  std::vector<std::string> requests_;
  std::vector<std::string> authorization_;
};

BackendSpec http_spec(const std::string& url) {
  BackendSpec spec;
  spec.kind = BackendKind::kHttpChat;
  spec.endpoint_url = url;
  spec.model_name = "stub-model";
  spec.timeout = 5s;
  spec.api_key_env = "SUMREFINE_TEST_API_KEY";
  return spec;
}

struct RecordingSleeper {
  std::shared_ptr<std::vector<std::chrono::milliseconds>> delays =
      std::make_shared<std::vector<std::chrono::milliseconds>>();
  HttpChatBackend::Sleeper fn() const {
    auto d = delays;
    return [d](std::chrono::milliseconds ms) { d->push_back(ms); };
  }
};

TEST(ScriptedMock, SingleAndFifo) {
  ScriptedMock one({"A"});
  EXPECT_EQ(complete(one, {"sys", "u1", 10}), "A");
  EXPECT_EQ(one.call_log().size(), 1u);
  EXPECT_EQ(one.call_log()[0].user_text, "u1");

  ScriptedMock two({"A", "B"});
  EXPECT_EQ(two.complete({"", "x", 1}), "A");
  EXPECT_EQ(two.complete({"", "y", 1}), "B");
  EXPECT_EQ(two.remaining(), 0u);
  EXPECT_THROW(two.complete({"", "z", 1}), MockExhaustedError);
  EXPECT_EQ(two.call_log().size(), 2u);  // the failed call is not logged
}

TEST(ScriptedMock, Deterministic) {
  auto run = [] {
    ScriptedMock m({"a", "b", "c"});
    std::vector<std::string> out;
    for (const char* u : {"1", "2", "3"}) out.push_back(m.complete({"s", u, 5}));
    return std::make_pair(out, m.call_log().size());
  };
  EXPECT_EQ(run(), run());
}

TEST(ScriptedMock, ConcurrentCallersEachGetOneResponse) {
  std::vector<std::string> responses;
  for (int i = 0; i < 200; ++i) responses.push_back(std::to_string(i));
  ScriptedMock m(responses);
  std::mutex mu;
  std::multiset<std::string> got;
  {
    std::vector<std::jthread> workers;
    for (int w = 0; w < 4; ++w) {
      workers.emplace_back([&] {
        for (int i = 0; i < 50; ++i) {
          std::string r = m.complete({"", "u", 1});
          std::lock_guard lock(mu);
          got.insert(r);
        }
      });
    }
  }
  EXPECT_EQ(got, std::multiset<std::string>(responses.begin(), responses.end()));
  EXPECT_EQ(m.call_log().size(), 200u);
}

TEST(Complete, ValidatesRequest) {
  ScriptedMock m({"A"});
  EXPECT_THROW(complete(m, {"s", "", 10}), PreconditionError);
  EXPECT_THROW(complete(m, {"s", "u", 0}), PreconditionError);
  EXPECT_EQ(m.remaining(), 1u);
}

TEST(GenerateSummary, PassthroughTrimAndPromptBytes) {
  const prompt::PromptBundle base = prompt::compose_generation_prompt(prompt::PromptConfig(50));
  ScriptedMock m({"the summary", "  s  \n"});
  EXPECT_EQ(generate_summary(m, base, "source"), "the summary");
  const prompt::PromptBundle fb =
      prompt::with_feedback(base, {std::string(prompt::kFluencyFeedback)});
  EXPECT_EQ(generate_summary(m, fb, "source"), "s");
  const auto log = m.call_log();
  EXPECT_EQ(log[0].system_text, base.composed);
  EXPECT_EQ(log[1].system_text, fb.composed);
  EXPECT_NE(log[1].system_text.find(prompt::kFluencyFeedback), std::string::npos);
  EXPECT_EQ(log[1].user_text, "source");
  EXPECT_THROW(generate_summary(m, base, ""), PreconditionError);
}

TEST(BackendSpec, Validation) {
  BackendSpec spec;
  EXPECT_NO_THROW(spec.validate());
  spec.kind = BackendKind::kHttpChat;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.endpoint_url = "http://localhost/x";
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.model_name = "m";
  EXPECT_NO_THROW(spec.validate());
  spec.timeout = 0s;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.timeout = 1s;
  spec.max_retries = -1;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.max_retries = 0;
  spec.temperature = -0.1;
  EXPECT_THROW(spec.validate(), ConfigError);
  EXPECT_EQ(parse_backend_kind("http_chat"), BackendKind::kHttpChat);
  EXPECT_EQ(parse_backend_kind("grpc"), std::nullopt);
}

TEST(WireFormat, RequestBodyAndContentExtraction) {
  BackendSpec spec = http_spec("http://h/v1");
  spec.temperature = 0.25;
  const auto body = nlohmann::json::parse(chat_request_body(spec, {"sys", "user", 77}));
  EXPECT_EQ(body["model"], "stub-model");
  EXPECT_EQ(body["temperature"], 0.25);
  EXPECT_EQ(body["max_tokens"], 77);
  ASSERT_EQ(body["messages"].size(), 2u);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"], "user");
  const auto no_system = nlohmann::json::parse(chat_request_body(spec, {"", "user", 77}));
  EXPECT_EQ(no_system["messages"].size(), 1u);

  EXPECT_EQ(extract_chat_content(chat_body("hello")), "hello");
  EXPECT_THROW(extract_chat_content("{}"), ProtocolError);
  EXPECT_THROW(extract_chat_content("not json"), ProtocolError);
  EXPECT_THROW(extract_chat_content(R"({"choices":[]})"), ProtocolError);
}

TEST(BackoffDelay, StartsAtInitialAndDoubles) {
  EXPECT_EQ(backoff_delay(1000ms, 0), 1000ms);
  EXPECT_EQ(backoff_delay(1000ms, 1), 2000ms);
  EXPECT_EQ(backoff_delay(1000ms, 3), 8000ms);
}

TEST(HttpChatBackend, ExtractsContentFromStub) {
  StubServer stub({{200, chat_body("stub summary")}});
  HttpChatBackend backend(http_spec(stub.url()));
  EXPECT_EQ(backend.complete({"sys", "text", 64}), "stub summary");
  ASSERT_EQ(stub.requests().size(), 1u);
  const auto sent = nlohmann::json::parse(stub.requests()[0]);
  EXPECT_EQ(sent["messages"][1]["content"], "text");
}

TEST(HttpChatBackend, SendsBearerTokenFromEnvironment) {
  StubServer stub({{200, chat_body("ok")}});
  ::setenv("SUMREFINE_TEST_API_KEY", "secret-token", 1);
  HttpChatBackend backend(http_spec(stub.url()));
  backend.complete({"", "x", 8});
  ::unsetenv("SUMREFINE_TEST_API_KEY");
  backend.complete({"", "x", 8});
  ASSERT_EQ(stub.authorization().size(), 2u);
  EXPECT_EQ(stub.authorization()[0], "Bearer secret-token");
  EXPECT_EQ(stub.authorization()[1], "");
}

TEST(HttpChatBackend, RetriesTransientFailuresWithBackoff) {
  StubServer stub({{503, "busy"}, {500, "oops"}, {429, "slow down"}, {200, chat_body("finally")}});
  RecordingSleeper sleeper;
  HttpChatBackend backend(http_spec(stub.url()), sleeper.fn());
  EXPECT_EQ(backend.complete({"", "x", 8}), "finally");
  EXPECT_EQ(stub.hits(), 4u);
  EXPECT_EQ(*sleeper.delays, (std::vector<std::chrono::milliseconds>{1000ms, 2000ms, 4000ms}));
}

TEST(HttpChatBackend, GivesUpAfterMaxRetries) {
  StubServer stub({{502, "bad gateway"}});
  RecordingSleeper sleeper;
  BackendSpec spec = http_spec(stub.url());
  spec.max_retries = 2;
  HttpChatBackend backend(spec, sleeper.fn());
  try {
    backend.complete({"", "x", 8});
    FAIL() << "expected BackendUnavailableError";
  } catch (const BackendUnavailableError& e) {
    EXPECT_EQ(e.last_status(), 502);
  }
  EXPECT_EQ(stub.hits(), 3u);
  EXPECT_EQ(sleeper.delays->size(), 2u);
}

TEST(HttpChatBackend, ClientErrorsAreNotRetried) {
  StubServer stub({{401, "{\"error\":\"bad key\"}"}});
  RecordingSleeper sleeper;
  HttpChatBackend backend(http_spec(stub.url()), sleeper.fn());
  try {
    backend.complete({"", "x", 8});
    FAIL() << "expected RequestRejectedError";
  } catch (const RequestRejectedError& e) {
    EXPECT_EQ(e.status(), 401);
    EXPECT_EQ(e.body(), "{\"error\":\"bad key\"}");
  }
  EXPECT_EQ(stub.hits(), 1u);
  EXPECT_TRUE(sleeper.delays->empty());
}

TEST(HttpChatBackend, UnreachableEndpointIsUnavailable) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  RecordingSleeper sleeper;
  BackendSpec spec = http_spec("http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions");
  spec.max_retries = 1;
  spec.timeout = 1s;
  HttpChatBackend backend(spec, sleeper.fn());
  try {
    backend.complete({"", "x", 8});
    FAIL() << "expected BackendUnavailableError";
  } catch (const BackendUnavailableError& e) {
    EXPECT_EQ(e.last_status(), 0);
  }
  EXPECT_EQ(sleeper.delays->size(), 1u);
}

TEST(HttpChatBackend, MalformedSuccessBodyIsProtocolError) {
  StubServer stub({{200, "{\"choices\":[{}]}"}});
  HttpChatBackend backend(http_spec(stub.url()));
  EXPECT_THROW(backend.complete({"", "x", 8}), ProtocolError);
}

TEST(MakeBackend, BuildsRequestedKind) {
  auto mock = make_backend(BackendSpec{}, {"r"});
  EXPECT_EQ(mock->complete({"", "u", 1}), "r");
  EXPECT_NE(dynamic_cast<HttpChatBackend*>(make_backend(http_spec("http://localhost:1/x")).get()),
            nullptr);
  EXPECT_THROW(make_backend(http_spec("ftp://nope")), ConfigError);
}

}  // namespace
}  // namespace sumrefine::gateway
