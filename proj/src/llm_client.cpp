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

#include "teamforge/llm_client.hpp"

#include <cmath>
#include <condition_variable>
#include <mutex>
#include <regex>
#include <thread>

#include "teamforge/error.hpp"
#include "teamforge/io.hpp"

namespace teamforge {

void validate_request(const ChatRequest& request) {
  if (request.messages.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "chat request has no messages");
  }
  if (!(request.temperature >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
  if (request.max_output_tokens <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_output_tokens must be positive");
  }
}

void RetryPolicy::validate() const {
  if (max_attempts < 1) throw Error(ErrorCode::kInvalidArgument, "max_attempts must be >= 1");
  if (!(multiplier > 1.0)) throw Error(ErrorCode::kInvalidArgument, "multiplier must be > 1");
  if (max_parallel < 1) throw Error(ErrorCode::kInvalidArgument, "max_parallel must be >= 1");
  if (base_delay.count() < 0 || max_delay.count() < 0) {
    throw Error(ErrorCode::kInvalidArgument, "delays must be non-negative");
  }
}

std::chrono::milliseconds RetryPolicy::delay_for(int attempt) const {
  const double raw =
      static_cast<double>(base_delay.count()) * std::pow(multiplier, std::max(0, attempt - 1));
  const double cap = static_cast<double>(max_delay.count());
  return std::chrono::milliseconds(static_cast<long long>(std::min(raw, cap)));
}

// --- mock -------------------------------------------------------------------

std::string mock_answer(Trait trait, std::string_view text, const DescriptorSet& lexicon) {
  const auto* d = find_descriptor(lexicon, trait);
  if (d == nullptr) return "No";
  const std::string lowered = io::to_lower(text);
  for (const auto& keyword : d->characteristics) {
    if (lowered.find(io::to_lower(keyword)) != std::string::npos) return "Yes";
  }
  return "No";
}

std::string MockBackend::send(const ChatRequest& request) {
  validate_request(request);
  const ChatMessage* last_user = nullptr;
  for (const auto& m : request.messages) {
    if (m.role == Role::kUser) last_user = &m;
  }
  if (last_user == nullptr) return "No";

  static const std::regex kQuestion(R"(associated with the ([A-Za-z]+) trait)");
  std::smatch match;
  const std::string& prompt = last_user->content;
  if (!std::regex_search(prompt, match, kQuestion)) return "No";
  auto trait = parse_trait(match[1].str());
  if (!trait) return "No";

  static constexpr std::string_view kTextMarker = "Text: ";
  auto after = static_cast<std::size_t>(match.position(0) + match.length(0));
  auto pos = prompt.find(kTextMarker, after);
  std::string_view text = pos == std::string::npos
                              ? std::string_view()
                              : std::string_view(prompt).substr(pos + kTextMarker.size());
  return mock_answer(*trait, text, lexicon_);
}

// --- client -----------------------------------------------------------------

class ChatClient::Gate {
 public:
  explicit Gate(int limit) : limit_(limit) {}

  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < limit_; });
    ++in_flight_;
  }

  void release() {
    {
      std::lock_guard lock(mu_);
      --in_flight_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
  int limit_;
};

namespace {

bool is_retryable(ErrorCode code) {
  return code == ErrorCode::kRateLimited || code == ErrorCode::kTransportError;
}

}  // namespace

ChatClient::ChatClient(std::shared_ptr<ChatBackend> backend, RetryPolicy policy, Sleeper sleeper)
    : backend_(std::move(backend)), policy_(policy), sleeper_(std::move(sleeper)) {
  if (!backend_) throw Error(ErrorCode::kInvalidArgument, "chat client needs a backend");
  policy_.validate();
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  gate_ = std::make_unique<Gate>(policy_.max_parallel);
}

ChatClient::~ChatClient() = default;

ChatResponse ChatClient::complete(const ChatRequest& request) const {
  validate_request(request);
  for (int attempt = 1;; ++attempt) {
    try {
      std::string content;
      gate_->acquire();
      try {
        content = backend_->send(request);
      } catch (...) {
        gate_->release();
        throw;
      }
      gate_->release();
      return ChatResponse{std::move(content), attempt};
    } catch (const Error& e) {
      if (!is_retryable(e.code())) throw;
      if (attempt >= policy_.max_attempts) {
        throw Error(e.code(),
                    "giving up after " + std::to_string(attempt) + " attempt(s): " + e.message());
      }
    }
    sleeper_(policy_.delay_for(attempt));
  }
}

}  // namespace teamforge
