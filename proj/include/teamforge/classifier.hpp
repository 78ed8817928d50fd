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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamforge/error.hpp"
#include "teamforge/llm_client.hpp"
#include "teamforge/trait.hpp"

namespace teamforge {

enum class Verdict { kPositive, kNegative, kUnparseable };

std::string_view verdict_name(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view s);

struct ClassificationResult {
  std::string sample_id;
  Trait trait = Trait::kAgreeableness;
  Verdict predicted = Verdict::kUnparseable;
  std::string raw_reply;
  int attempts_used = 0;
  /// Set when the sample's call failed; such results count as excluded.
  std::optional<std::string> error;

  bool failed() const { return error.has_value(); }

  bool operator==(const ClassificationResult&) const = default;
};

struct ClassifyOptions {
  std::string model_id{kDefaultModel};
  double temperature = 0.0;
  int max_output_tokens = 4;
  bool strip_prompt_prefix = false;
};

/// The trait question for `text`. Throws Error(kEmptyText) for blank text.
std::string build_prompt(Trait trait, std::string_view text, bool strip_prompt_prefix = false);

/// Trims, lower-cases and strips surrounding punctuation, then maps "yes" and
/// "no"; anything else is Unparseable.
Verdict parse_response(std::string_view raw);

struct TextSample {
  std::string id;
  std::string text;
};

/// Sends the prompt as the only (user) message. An unparseable reply is asked
/// once more. `attempts_used` totals backend calls over both asks.
ClassificationResult classify(const ChatClient& client, Trait trait, const TextSample& sample,
                              const ClassifyOptions& options = {});

/// Results come back in input order. A sample whose call fails is recorded
/// with `error` set and the batch carries on, except for kAuthError, which no
/// other sample could escape and is rethrown. Throws kBatchEmpty.
std::vector<ClassificationResult> classify_batch(const ChatClient& client, Trait trait,
                                                 const std::vector<TextSample>& samples,
                                                 int parallelism,
                                                 const ClassifyOptions& options = {});

std::string result_to_json(const ClassificationResult& r);
ClassificationResult result_from_json(std::string_view line);

}  // namespace teamforge
