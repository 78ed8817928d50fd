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

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "teamforge/error.hpp"

namespace teamforge {

using ordered_json = nlohmann::ordered_json;

GoldLabels gold_labels(const std::vector<LabeledSample>& samples, Trait trait) {
  GoldLabels golds;
  for (const auto& s : samples) {
    if (auto l = s.label(trait)) golds.emplace(s.id, *l);
  }
  return golds;
}

ConfusionCounts confusion(const std::vector<ClassificationResult>& predictions,
                          const GoldLabels& golds) {
  ConfusionCounts c;
  for (const auto& p : predictions) {
    if (p.failed() || p.predicted == Verdict::kUnparseable) {
      ++c.excluded;
      continue;
    }
    auto it = golds.find(p.sample_id);
    if (it == golds.end()) {
      throw Error(ErrorCode::kUnknownId, "no gold label for '" + p.sample_id + "'");
    }
    const bool predicted_pos = p.predicted == Verdict::kPositive;
    const bool gold_pos = it->second == Label::kPositive;
    if (predicted_pos) {
      ++(gold_pos ? c.tp : c.fp);
    } else {
      ++(gold_pos ? c.fn : c.tn);
    }
  }
  return c;
}

std::string_view metric_flag_name(MetricFlag f) {
  switch (f) {
    case MetricFlag::kNoPositivePredictions:
      return "NoPositivePredictions";
    case MetricFlag::kNoPositiveGold:
      return "NoPositiveGold";
    case MetricFlag::kZeroPrecisionRecall:
      return "ZeroPrecisionRecall";
  }
  return "";
}

bool TraitMetrics::has_flag(MetricFlag f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

double harmonic_f1(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

TraitMetrics metrics_from_counts(const ConfusionCounts& c, Trait trait) {
  TraitMetrics m;
  m.trait = trait;
  m.counts = c;
  if (c.tp + c.fp == 0) {
    m.flags.push_back(MetricFlag::kNoPositivePredictions);
  } else {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  if (c.tp + c.fn == 0) {
    m.flags.push_back(MetricFlag::kNoPositiveGold);
  } else {
    m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  }
  if (m.precision + m.recall == 0.0) m.flags.push_back(MetricFlag::kZeroPrecisionRecall);
  m.f1 = harmonic_f1(m.precision, m.recall);
  return m;
}

const TraitMetrics* MetricsReport::find(Trait t) const {
  auto it = std::find_if(traits.begin(), traits.end(),
                         [t](const TraitMetrics& m) { return m.trait == t; });
  return it == traits.end() ? nullptr : &*it;
}

void MetricsReport::set(TraitMetrics m) {
  auto it = std::find_if(traits.begin(), traits.end(),
                         [&](const TraitMetrics& x) { return x.trait == m.trait; });
  if (it != traits.end()) {
    *it = std::move(m);
    return;
  }
  auto pos = std::find_if(traits.begin(), traits.end(), [&](const TraitMetrics& x) {
    return trait_index(x.trait) > trait_index(m.trait);
  });
  traits.insert(pos, std::move(m));
}

Comparison compare_to_reference(const MetricsReport& report, const MetricsReport& reference,
                                double tolerance) {
  // Absorbs binary rounding so that e.g. |0.55 - 0.50| passes at 0.05.
  constexpr double kSlack = 1e-12;
  Comparison out;
  out.reference_label = reference.model_label;
  out.tolerance = tolerance;
  out.pass = true;
  for (const auto& m : report.traits) {
    const auto* ref = reference.find(m.trait);
    if (ref == nullptr) continue;
    MetricDelta d;
    d.trait = m.trait;
    d.precision = std::abs(m.precision - ref->precision);
    d.recall = std::abs(m.recall - ref->recall);
    d.f1 = std::abs(m.f1 - ref->f1);
    d.pass = d.precision <= tolerance + kSlack && d.recall <= tolerance + kSlack &&
             d.f1 <= tolerance + kSlack;
    out.pass = out.pass && d.pass;
    out.deltas.push_back(d);
  }
  if (out.deltas.empty()) {
    throw Error(ErrorCode::kDisjointTraits, "reports share no trait");
  }
  return out;
}

namespace {

MetricsReport make_reference(std::string label, std::initializer_list<std::array<double, 3>> rows) {
  MetricsReport r;
  r.model_label = std::move(label);
  r.metadata.backend = "reference";
  r.metadata.model_id = "gpt-3.5-turbo-1106";
  std::size_t i = 0;
  for (const auto& row : rows) {
    TraitMetrics m;
    m.trait = kAllTraits[i++];
    m.precision = row[0];
    m.recall = row[1];
    m.f1 = row[2];
    r.traits.push_back(std::move(m));
  }
  return r;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

const ReferenceTable& reference_table3() {
  static const ReferenceTable kTable{
      make_reference("baseline", {{0.597, 0.187, 0.285},
                                  {0.482, 0.157, 0.237},
                                  {0.547, 0.266, 0.358},
                                  {0.553, 0.363, 0.439},
                                  {0.569, 0.614, 0.590}}),
      make_reference("fine-tuned", {{0.574, 0.514, 0.542},
                                    {0.505, 0.596, 0.547},
                                    {0.558, 0.201, 0.296},
                                    {0.564, 0.511, 0.536},
                                    {0.530, 0.760, 0.625}}),
  };
  return kTable;
}

std::string render_table(const std::vector<MetricsReport>& reports) {
  std::size_t model_width = 5;
  for (const auto& r : reports) model_width = std::max(model_width, r.model_label.size());
  model_width += 2;

  std::string out = pad("Personality", 19) + pad("Model", model_width) + pad("Precision", 11) +
                    pad("Recall", 8) + "F1 Score\n";
  for (Trait t : kAllTraits) {
    bool first = true;
    for (const auto& r : reports) {
      const auto* m = r.find(t);
      if (m == nullptr) continue;
      out += pad(first ? std::string(trait_name(t)) : std::string(), 19);
      out += pad(r.model_label, model_width);
      out += pad(fixed3(m->precision), 11) + pad(fixed3(m->recall), 8) + fixed3(m->f1) + "\n";
      first = false;
    }
  }
  return out;
}

std::string report_to_json(const MetricsReport& report,
                           const std::optional<Comparison>& comparison) {
  ordered_json doc;
  doc["model_label"] = report.model_label;
  ordered_json meta;
  meta["backend"] = report.metadata.backend;
  meta["model_id"] = report.metadata.model_id;
  meta["seed"] = report.metadata.seed;
  meta["timestamp"] =
      report.metadata.timestamp ? ordered_json(*report.metadata.timestamp) : ordered_json(nullptr);
  doc["metadata"] = std::move(meta);
  doc["traits"] = ordered_json::array();
  for (const auto& m : report.traits) {
    ordered_json e;
    e["trait"] = trait_code(m.trait);
    e["name"] = trait_name(m.trait);
    e["precision"] = m.precision;
    e["recall"] = m.recall;
    e["f1"] = m.f1;
    e["flags"] = ordered_json::array();
    for (auto f : m.flags) e["flags"].push_back(metric_flag_name(f));
    if (m.counts) {
      e["counts"] = {{"tp", m.counts->tp},
                     {"fp", m.counts->fp},
                     {"tn", m.counts->tn},
                     {"fn", m.counts->fn},
                     {"excluded", m.counts->excluded}};
    }
    doc["traits"].push_back(std::move(e));
  }
  if (comparison) {
    ordered_json c;
    c["reference"] = comparison->reference_label;
    c["tolerance"] = comparison->tolerance;
    c["pass"] = comparison->pass;
    c["deltas"] = ordered_json::array();
    for (const auto& d : comparison->deltas) {
      c["deltas"].push_back({{"trait", trait_code(d.trait)},
                             {"precision", d.precision},
                             {"recall", d.recall},
                             {"f1", d.f1},
                             {"pass", d.pass}});
    }
    doc["comparison"] = std::move(c);
  }
  return doc.dump(2) + "\n";
}

MetricsReport report_from_json(std::string_view text) {
  try {
    auto doc = nlohmann::json::parse(text);
    MetricsReport r;
    r.model_label = doc.at("model_label").get<std::string>();
    const auto& meta = doc.at("metadata");
    r.metadata.backend = meta.at("backend").get<std::string>();
    r.metadata.model_id = meta.at("model_id").get<std::string>();
    r.metadata.seed = meta.at("seed").get<std::uint64_t>();
    if (meta.contains("timestamp") && meta["timestamp"].is_string()) {
      r.metadata.timestamp = meta["timestamp"].get<std::string>();
    }
    for (const auto& e : doc.at("traits")) {
      TraitMetrics m;
      m.trait = require_trait(e.at("trait").get<std::string>());
      m.precision = e.at("precision").get<double>();
      m.recall = e.at("recall").get<double>();
      m.f1 = e.at("f1").get<double>();
      for (const auto& f : e.at("flags")) {
        for (auto flag : {MetricFlag::kNoPositivePredictions, MetricFlag::kNoPositiveGold,
                          MetricFlag::kZeroPrecisionRecall}) {
          if (f.get<std::string>() == metric_flag_name(flag)) m.flags.push_back(flag);
        }
      }
      if (e.contains("counts")) {
        const auto& c = e["counts"];
        m.counts = ConfusionCounts{c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                                   c.at("tn").get<std::size_t>(), c.at("fn").get<std::size_t>(),
                                   c.at("excluded").get<std::size_t>()};
      }
      r.set(std::move(m));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("metrics report: ") + e.what());
  }
}

}  // namespace teamforge
