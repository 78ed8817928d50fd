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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "teamforge/classifier.hpp"
#include "teamforge/error.hpp"
#include "teamforge/trait.hpp"

namespace teamforge {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  /// Unparseable or failed predictions; never counted in the four cells.
  std::size_t excluded = 0;

  std::size_t total() const { return tp + fp + tn + fn + excluded; }
  bool operator==(const ConfusionCounts&) const = default;
};

using GoldLabels = std::unordered_map<std::string, Label>;

/// Gold labels for `trait`, keyed by sample id; unlabeled samples are skipped.
GoldLabels gold_labels(const std::vector<LabeledSample>& samples, Trait trait);

/// Throws Error(kUnknownId) if a counted prediction has no gold label.
ConfusionCounts confusion(const std::vector<ClassificationResult>& predictions,
                          const GoldLabels& golds);

enum class MetricFlag {
  kNoPositivePredictions,  // tp + fp == 0, precision reported as 0
  kNoPositiveGold,         // tp + fn == 0, recall reported as 0
  kZeroPrecisionRecall,    // precision + recall == 0, f1 reported as 0
};

std::string_view metric_flag_name(MetricFlag f);

struct TraitMetrics {
  Trait trait = Trait::kAgreeableness;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<MetricFlag> flags;
  std::optional<ConfusionCounts> counts;

  bool has_flag(MetricFlag f) const;
  bool operator==(const TraitMetrics&) const = default;
};

/// 2PR/(P+R), or 0 when P+R is 0.
double harmonic_f1(double precision, double recall);

TraitMetrics metrics_from_counts(const ConfusionCounts& counts, Trait trait);

struct RunMetadata {
  std::string backend;
  std::string model_id;
  std::uint64_t seed = 42;
  std::optional<std::string> timestamp;

  bool operator==(const RunMetadata&) const = default;
};

struct MetricsReport {
  /// "baseline", "fine-tuned", or any custom label.
  std::string model_label = "custom";
  /// At most one entry per trait, kept in reporting order.
  std::vector<TraitMetrics> traits;
  RunMetadata metadata;

  const TraitMetrics* find(Trait t) const;
  /// Inserts or replaces the entry for `m.trait`.
  void set(TraitMetrics m);

  bool operator==(const MetricsReport&) const = default;
};

struct MetricDelta {
  Trait trait = Trait::kAgreeableness;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool pass = false;
};

struct Comparison {
  std::string reference_label;
  double tolerance = 0.0;
  std::vector<MetricDelta> deltas;
  bool pass = false;
};

/// Absolute per-metric differences over the traits both reports cover.
/// Throws Error(kDisjointTraits) when they share none.
Comparison compare_to_reference(const MetricsReport& report, const MetricsReport& reference,
                                double tolerance);

struct ReferenceTable {
  MetricsReport baseline;
  MetricsReport fine_tuned;
};

/// Reference precision/recall/F1 on the essay test set, to three
/// decimals, for the base model and the personality fine-tuned model.
const ReferenceTable& reference_table3();

/// Plain-text table (Personality, Model, Precision, Recall, F1 Score) with
/// three decimals.
std::string render_table(const std::vector<MetricsReport>& reports);

std::string report_to_json(const MetricsReport& report,
                           const std::optional<Comparison>& comparison = std::nullopt);
MetricsReport report_from_json(std::string_view text);

}  // namespace teamforge
