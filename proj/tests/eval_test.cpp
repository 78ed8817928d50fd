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

#include "teamforge/eval.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace teamforge {
namespace {

ClassificationResult pred(std::string id, Verdict v) {
  return {std::move(id), Trait::kAgreeableness, v, std::string(verdict_name(v)), 1, std::nullopt};
}

TEST(Confusion, HandCounted) {
  GoldLabels gold = {{"1", Label::kPositive}, {"2", Label::kNegative}, {"3", Label::kNegative}};
  auto c = confusion(
      {pred("1", Verdict::kPositive), pred("2", Verdict::kPositive), pred("3", Verdict::kNegative)},
      gold);
  EXPECT_EQ(c, (ConfusionCounts{1, 1, 1, 0, 0}));
}

TEST(Confusion, AllUnparseable) {
  GoldLabels gold = {{"1", Label::kPositive}, {"2", Label::kNegative}};
  auto c = confusion({pred("1", Verdict::kUnparseable), pred("2", Verdict::kUnparseable)}, gold);
  EXPECT_EQ(c, (ConfusionCounts{0, 0, 0, 0, 2}));
}

TEST(Confusion, FailedCountsAsExcluded) {
  GoldLabels gold = {{"1", Label::kPositive}};
  auto p = pred("1", Verdict::kPositive);
  p.error = "down";
  EXPECT_EQ(confusion({p}, gold).excluded, 1u);
}

TEST(Confusion, UnknownId) {
  try {
    confusion({pred("zz", Verdict::kPositive)}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownId);
  }
}

struct Naive {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0, ex = 0;
};

TEST(Confusion, BruteForceOracle) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 20;
    GoldLabels gold;
    std::vector<ClassificationResult> preds;
    Naive naive;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = std::to_string(i);
      const bool g = rng() % 2;
      gold[id] = g ? Label::kPositive : Label::kNegative;
      const auto k = rng() % 3;
      const Verdict v = k == 0   ? Verdict::kPositive
                        : k == 1 ? Verdict::kNegative
                                 : Verdict::kUnparseable;
      preds.push_back(pred(id, v));
      if (v == Verdict::kUnparseable) {
        ++naive.ex;
      } else if (v == Verdict::kPositive) {
        ++(g ? naive.tp : naive.fp);
      } else {
        ++(g ? naive.fn : naive.tn);
      }
    }
    auto c = confusion(preds, gold);
    EXPECT_EQ(c, (ConfusionCounts{naive.tp, naive.fp, naive.tn, naive.fn, naive.ex}));
  }
}

TEST(Metrics, ReferenceRowExamples) {
  EXPECT_NEAR(harmonic_f1(0.597, 0.187), 0.285, 0.001);
  EXPECT_NEAR(harmonic_f1(0.530, 0.760), 0.625, 0.001);
}

TEST(Metrics, PerfectClassifier) {
  auto m = metrics_from_counts({7, 0, 3, 0, 0}, Trait::kOpenness);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1, 1.0);
  EXPECT_TRUE(m.flags.empty());
}

TEST(Metrics, ZeroDivisionFlags) {
  auto m = metrics_from_counts({0, 0, 5, 0, 0}, Trait::kOpenness);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
  EXPECT_TRUE(m.has_flag(MetricFlag::kNoPositivePredictions));
  EXPECT_TRUE(m.has_flag(MetricFlag::kNoPositiveGold));
  EXPECT_TRUE(m.has_flag(MetricFlag::kZeroPrecisionRecall));

  auto fp_only = metrics_from_counts({0, 3, 0, 2, 0}, Trait::kOpenness);
  EXPECT_FALSE(fp_only.has_flag(MetricFlag::kNoPositivePredictions));
  EXPECT_TRUE(fp_only.has_flag(MetricFlag::kZeroPrecisionRecall));
}

TEST(Metrics, InvariantsProperty) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 2000; ++i) {
    ConfusionCounts c{rng() % 15, rng() % 15, rng() % 15, rng() % 15, 0};
    auto m = metrics_from_counts(c, Trait::kAgreeableness);
    EXPECT_GE(m.f1, 0.0);
    EXPECT_LE(m.f1, 1.0);
    EXPECT_LE(m.f1, 2 * std::min(m.precision, m.recall) + 1e-12);
    EXPECT_LE(m.f1, std::max(m.precision, m.recall) + 1e-12);
    if (c.tp > 0) {
      const double p = double(c.tp) / double(c.tp + c.fp), r = double(c.tp) / double(c.tp + c.fn);
      EXPECT_NEAR(m.f1, 2 * p * r / (p + r), 1e-12);
    }
  }
}

TEST(Reference, EmbeddedValues) {
  const auto& t = reference_table3();
  auto con = *t.fine_tuned.find(Trait::kConscientiousness);
  EXPECT_EQ(con.precision, 0.505);
  EXPECT_EQ(con.recall, 0.596);
  EXPECT_EQ(con.f1, 0.547);
  auto ext = *t.baseline.find(Trait::kExtraversion);
  EXPECT_EQ(ext.precision, 0.547);
  EXPECT_EQ(ext.recall, 0.266);
  EXPECT_EQ(ext.f1, 0.358);
  EXPECT_EQ(t.baseline.model_label, "baseline");
  EXPECT_EQ(t.fine_tuned.model_label, "fine-tuned");
}

TEST(Reference, EveryRowHarmonicWithinTolerance) {
  const auto& t = reference_table3();
  for (const auto* report : {&t.baseline, &t.fine_tuned}) {
    ASSERT_EQ(report->traits.size(), 5u);
    for (const auto& m : report->traits) {
      EXPECT_NEAR(harmonic_f1(m.precision, m.recall), m.f1, 0.001)
          << report->model_label << " " << trait_code(m.trait);
    }
  }
}

TEST(Compare, IdenticalPasses) {
  const auto& ref = reference_table3().baseline;
  for (double tol : {0.0, 0.05}) {
    auto c = compare_to_reference(ref, ref, tol);
    EXPECT_TRUE(c.pass);
    ASSERT_EQ(c.deltas.size(), 5u);
    for (const auto& d : c.deltas) {
      EXPECT_EQ(d.precision, 0.0);
      EXPECT_EQ(d.recall, 0.0);
      EXPECT_EQ(d.f1, 0.0);
    }
  }
}

TEST(Compare, FailsOnF1Gap) {
  MetricsReport r;
  r.set({Trait::kAgreeableness, 0.574, 0.514, 0.50, {}, std::nullopt});
  auto c = compare_to_reference(r, reference_table3().fine_tuned, 0.02);
  EXPECT_FALSE(c.pass);
  ASSERT_EQ(c.deltas.size(), 1u);
  EXPECT_NEAR(c.deltas[0].f1, 0.042, 1e-9);
  EXPECT_EQ(c.deltas[0].precision, 0.0);
  EXPECT_FALSE(c.deltas[0].pass);
}

TEST(Compare, DisjointTraits) {
  MetricsReport a, b;
  a.set({Trait::kAgreeableness, 1, 1, 1, {}, std::nullopt});
  b.set({Trait::kOpenness, 1, 1, 1, {}, std::nullopt});
  try {
    compare_to_reference(a, b, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDisjointTraits);
  }
}

TEST(Report, SetKeepsTraitOrder) {
  MetricsReport r;
  r.set({Trait::kNeuroticism, 0, 0, 0, {}, std::nullopt});
  r.set({Trait::kAgreeableness, 0, 0, 0, {}, std::nullopt});
  r.set({Trait::kNeuroticism, 1, 1, 1, {}, std::nullopt});
  ASSERT_EQ(r.traits.size(), 2u);
  EXPECT_EQ(r.traits[0].trait, Trait::kAgreeableness);
  EXPECT_EQ(r.traits[1].f1, 1.0);
}

TEST(Report, JsonRoundTrip) {
  MetricsReport r;
  r.model_label = "fine-tuned";
  r.metadata = {"mock", "m", 7, "2026-01-01T00:00:00Z"};
  r.set(metrics_from_counts({3, 1, 4, 2, 1}, Trait::kExtraversion));
  r.set(metrics_from_counts({0, 0, 4, 0, 0}, Trait::kOpenness));
  EXPECT_EQ(report_from_json(report_to_json(r)), r);
  EXPECT_EQ(report_from_json(report_to_json(r, compare_to_reference(r, r, 0.01))), r);
}

TEST(Report, TableFormatting) {
  auto table = render_table({reference_table3().baseline});
  EXPECT_NE(table.find("Personality"), std::string::npos);
  EXPECT_NE(table.find("F1 Score"), std::string::npos);
  EXPECT_NE(table.find("0.597"), std::string::npos);
  EXPECT_NE(table.find("Neuroticism"), std::string::npos);
}

}  // namespace
}  // namespace teamforge
