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

#include "teamforge/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "teamforge/error.hpp"
#include "teamforge/io.hpp"
#include "teamforge/prompt.hpp"

namespace teamforge {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPositive:
      return "Positive";
    case Verdict::kNegative:
      return "Negative";
    case Verdict::kUnparseable:
      return "Unparseable";
  }
  return "";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  for (auto v : {Verdict::kPositive, Verdict::kNegative, Verdict::kUnparseable}) {
    if (s == verdict_name(v)) return v;
  }
  return std::nullopt;
}

std::string build_prompt(Trait trait, std::string_view text, bool strip_prompt_prefix) {
  if (io::trim(text).empty()) throw Error(ErrorCode::kEmptyText, "nothing to classify");
  auto tmpl = kClassificationPromptTemplate;
  if (strip_prompt_prefix) tmpl.remove_prefix(kPromptPrefix.size());
  return render_template(tmpl, trait, text);
}

Verdict parse_response(std::string_view raw) {
  std::string s = io::to_lower(io::trim(raw));
  auto is_punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
  auto b = std::find_if_not(s.begin(), s.end(), is_punct);
  auto e = std::find_if_not(s.rbegin(), s.rend(), is_punct).base();
  std::string core = b < e ? io::trim(std::string(b, e)) : std::string();
  if (core == "yes") return Verdict::kPositive;
  if (core == "no") return Verdict::kNegative;
  return Verdict::kUnparseable;
}

ClassificationResult classify(const ChatClient& client, Trait trait, const TextSample& sample,
                              const ClassifyOptions& options) {
  ChatRequest request;
  request.model_id = options.model_id;
  request.temperature = options.temperature;
  request.max_output_tokens = options.max_output_tokens;
  request.messages.push_back(
      {Role::kUser, build_prompt(trait, sample.text, options.strip_prompt_prefix)});

  ClassificationResult result;
  result.sample_id = sample.id;
  result.trait = trait;
  for (int ask = 0; ask < 2; ++ask) {
    auto response = client.complete(request);
    result.attempts_used += response.attempts_used;
    result.raw_reply = std::move(response.content);
    result.predicted = parse_response(result.raw_reply);
    if (result.predicted != Verdict::kUnparseable) break;
  }
  return result;
}

std::vector<ClassificationResult> classify_batch(const ChatClient& client, Trait trait,
                                                 const std::vector<TextSample>& samples,
                                                 int parallelism, const ClassifyOptions& options) {
  if (samples.empty()) throw Error(ErrorCode::kBatchEmpty, "no samples to classify");
  const std::size_t workers = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(1, std::min(parallelism, client.policy().max_parallel))), 1,
      samples.size());

  std::vector<ClassificationResult> results(samples.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr fatal;
  std::mutex fatal_mu;

  auto work = [&] {
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= samples.size()) return;
      auto& out = results[i];
      try {
        out = classify(client, trait, samples[i], options);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kAuthError) {
          std::lock_guard lock(fatal_mu);
          if (!fatal) fatal = std::current_exception();
          abort.store(true);
          return;
        }
        out = ClassificationResult{samples[i].id, trait, Verdict::kUnparseable, "", 0, e.what()};
      } catch (const std::exception& e) {
        out = ClassificationResult{samples[i].id, trait, Verdict::kUnparseable, "", 0, e.what()};
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (fatal) std::rethrow_exception(fatal);
  return results;
}

std::string result_to_json(const ClassificationResult& r) {
  nlohmann::ordered_json doc;
  doc["sample_id"] = r.sample_id;
  doc["trait"] = trait_code(r.trait);
  doc["predicted"] = verdict_name(r.predicted);
  doc["raw_reply"] = r.raw_reply;
  doc["attempts_used"] = r.attempts_used;
  doc["error"] = r.error ? nlohmann::ordered_json(*r.error) : nlohmann::ordered_json(nullptr);
  return doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

ClassificationResult result_from_json(std::string_view line) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, e.what());
  }
  auto str = [&](const char* key) -> std::string {
    if (!doc.is_object() || !doc.contains(key) || !doc[key].is_string()) {
      throw Error(ErrorCode::kFormatError, std::string("missing string \"") + key + "\"");
    }
    return doc[key].get<std::string>();
  };
  ClassificationResult r;
  r.sample_id = str("sample_id");
  r.trait = require_trait(str("trait"));
  auto verdict = parse_verdict(str("predicted"));
  if (!verdict) throw Error(ErrorCode::kFormatError, "bad \"predicted\" value");
  r.predicted = *verdict;
  if (doc.contains("raw_reply") && doc["raw_reply"].is_string()) {
    r.raw_reply = doc["raw_reply"].get<std::string>();
  }
  if (doc.contains("attempts_used") && doc["attempts_used"].is_number_integer()) {
    r.attempts_used = doc["attempts_used"].get<int>();
  }
  if (doc.contains("error") && doc["error"].is_string()) r.error = doc["error"].get<std::string>();
  return r;
}

}  // namespace teamforge
