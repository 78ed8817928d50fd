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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "teamforge/error.hpp"
#include "teamforge/prompt.hpp"
#include "teamforge/trait.hpp"

namespace teamforge {

struct LabeledSample {
  std::string id;
  std::string text;
  TraitArray<std::optional<Label>> labels;

  std::optional<Label> label(Trait t) const { return labels[t]; }

  bool operator==(const LabeledSample&) const = default;
};

enum class Role { kSystem, kUser, kAssistant };

std::string_view role_name(Role r);
std::optional<Role> parse_role(std::string_view s);

struct ChatMessage {
  Role role;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

/// One fine-tuning example: system, user, assistant, with the assistant
/// answering exactly "Yes" or "No".
struct FineTuneRecord {
  std::vector<ChatMessage> messages;

  bool operator==(const FineTuneRecord&) const = default;
};

/// Empty optional when `r` is well formed, otherwise the violated rule.
std::optional<std::string> validate_record(const FineTuneRecord& r);

struct DatasetStats {
  TraitArray<std::size_t> positive{0};
  TraitArray<std::size_t> negative{0};
  std::size_t total = 0;

  bool operator==(const DatasetStats&) const = default;
};

DatasetStats compute_stats(const std::vector<LabeledSample>& samples);

struct LoadedDataset {
  std::vector<LabeledSample> samples;
  DatasetStats stats;
};

// --- cleaning ---------------------------------------------------------------

/// Strips scene-header lines (`sNN_eNN_cNN(k) ...`, optionally wrapped in
/// emphasis markers), HTML tags, and the five standard HTML entities from a
/// raw dialogue scene. Speaker prefixes and line breaks between turns are
/// kept. Idempotent: the rules are applied until the text stops changing.
std::string clean_scene(std::string_view raw);

// --- records ----------------------------------------------------------------

/// Throws Error(kMissingLabel) when `sample` has no label for `trait`.
FineTuneRecord make_finetune_record(const LabeledSample& sample, Trait trait,
                                    const PromptTemplates& templates = {});

// --- splitting --------------------------------------------------------------

inline constexpr double kDefaultTrainFraction = 0.8;
inline constexpr std::uint64_t kDefaultSeed = 42;

struct Split {
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> val;
};

/// floor(train_fraction * N) training samples after a seeded shuffle.
std::size_t train_size_for(std::size_t n, double train_fraction);

Split split_train_val(const std::vector<LabeledSample>& samples, std::uint64_t seed,
                      double train_fraction = kDefaultTrainFraction);

// --- JSON Lines -------------------------------------------------------------

/// Compact `{"messages":[{"role":...,"content":...},...]}` with role before
/// content. No trailing newline.
std::string record_to_json(const FineTuneRecord& r);
FineTuneRecord record_from_json(std::string_view line);

/// One record per line, each terminated by "\n".
std::string records_to_jsonl(const std::vector<FineTuneRecord>& records);
std::vector<FineTuneRecord> parse_jsonl(std::string_view content);

/// Validates every record, then writes atomically. Returns the line count.
std::size_t emit_jsonl(const std::vector<FineTuneRecord>& records,
                       const std::filesystem::path& destination);

// --- datasets ---------------------------------------------------------------

/// Parses a labeled dataset: JSON Lines when the first non-blank character is
/// '{', else comma- or tab-separated with a header row. Columns `id`, `text`,
/// and optional `cAGR,cCON,cEXT,cOPN,cNEU` with values 0/1 or empty.
/// Texts are trimmed but not otherwise cleaned. Throws kFormatError (citing
/// the line) or kEmptyDataset.
std::vector<LabeledSample> parse_dataset(std::string_view content);

std::vector<LabeledSample> read_dataset(const std::filesystem::path& path);

/// Dialogue corpus loader: every text passes through `clean_scene`.
LoadedDataset load_friends_persona(const std::filesystem::path& path);

/// Essay corpus loader. With `balance`, see `balance_labels`.
LoadedDataset load_essays(const std::filesystem::path& path, bool balance,
                          std::uint64_t seed = kDefaultSeed);

/// For each trait, drops the label of randomly chosen majority-class samples
/// until both classes have the minority count. Samples left with no labels
/// are removed. Order of surviving samples is preserved.
std::vector<LabeledSample> balance_labels(std::vector<LabeledSample> samples, std::uint64_t seed);

/// JSON Lines form of a prepared dataset; absent labels are omitted.
std::string samples_to_jsonl(const std::vector<LabeledSample>& samples);

}  // namespace teamforge
