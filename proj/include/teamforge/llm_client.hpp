// Copyright 2026 The TeamForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "teamforge/corpus.hpp"
#include "teamforge/error.hpp"
#include "teamforge/trait.hpp"

namespace teamforge {

inline constexpr std::string_view kDefaultModel = "gpt-3.5-turbo-1106";
inline constexpr std::string_view kDefaultEndpoint = "https://api.openai.com/v1/chat/completions";
inline constexpr std::string_view kApiKeyEnv = "TEAMFORGE_API_KEY";

struct ChatRequest {
  std::string model_id{kDefaultModel};
  std::vector<ChatMessage> messages;
  // Classification wants a one-word deterministic answer.
  double temperature = 0.0;
  int max_output_tokens = 4;
};

/// Throws Error(kInvalidArgument) on an empty message list, negative
/// temperature or non-positive token limit.
void validate_request(const ChatRequest& request);

struct ChatResponse {
  std::string content;
  int attempts_used = 1;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{1000};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{30000};
  int max_parallel = 4;

  /// Throws Error(kInvalidArgument) when a field is out of range.
  void validate() const;

  /// Wait after failed attempt `attempt` (1-based):
  /// base_delay * multiplier^(attempt-1), capped at max_delay.
  std::chrono::milliseconds delay_for(int attempt) const;
};

/// A single attempt against a chat-completion service. Implementations report
/// failures by throwing `Error` with one of the backend error codes;
/// kRateLimited and kTransportError are treated as retryable.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string send(const ChatRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// "Yes" iff the lower-cased text contains any characteristic listed for
/// `trait` in `lexicon`. A test oracle, not a personality model.
std::string mock_answer(Trait trait, std::string_view text,
                        const DescriptorSet& lexicon = default_descriptors());

/// Offline backend. Reads the trait and text out of the classification prompt
/// in the last user message and answers with `mock_answer`; prompts it cannot
/// interpret get "No".
class MockBackend : public ChatBackend {
 public:
  explicit MockBackend(DescriptorSet lexicon = default_descriptors())
      : lexicon_(std::move(lexicon)) {}

  std::string send(const ChatRequest& request) override;
  std::string name() const override { return "mock"; }

 private:
  DescriptorSet lexicon_;
};

struct HttpBackendOptions {
  std::string endpoint{kDefaultEndpoint};
  std::string api_key;
  std::chrono::seconds timeout{60};
};

/// Standard chat-completions JSON body: model, messages, temperature,
/// max_tokens.
std::string encode_chat_request(const ChatRequest& request);

/// Extracts choices[0].message.content. Throws Error(kModelError).
std::string decode_chat_response(std::string_view body);

class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);

  /// Error mapping: no key, 401, 403 -> kAuthError; 429 -> kRateLimited;
  /// connection failure or 5xx -> kTransportError; other non-2xx or an
  /// unreadable body -> kModelError.
  std::string send(const ChatRequest& request) override;
  std::string name() const override { return "real"; }

 private:
  HttpBackendOptions options_;
  std::string scheme_host_port_;
  std::string path_;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Retrying, concurrency-bounded front end over a backend. Safe to share
/// between threads; at most `policy.max_parallel` backend calls are in flight
/// at any moment.
class ChatClient {
 public:
  explicit ChatClient(std::shared_ptr<ChatBackend> backend, RetryPolicy policy = {},
                      Sleeper sleeper = {});
  ~ChatClient();

  ChatClient(const ChatClient&) = delete;
  ChatClient& operator=(const ChatClient&) = delete;

  /// Throws kRateLimited or kTransportError once retries are exhausted;
  /// kAuthError and kModelError are not retried.
  ChatResponse complete(const ChatRequest& request) const;

  const RetryPolicy& policy() const { return policy_; }
  std::string backend_name() const { return backend_->name(); }

 private:
  class Gate;

  std::shared_ptr<ChatBackend> backend_;
  RetryPolicy policy_;
  Sleeper sleeper_;
  std::unique_ptr<Gate> gate_;
};

}  // namespace teamforge
