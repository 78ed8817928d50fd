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

#include "teamforge/trait.hpp"

#include <algorithm>
#include <cctype>

#include "teamforge/error.hpp"
#include "teamforge/prompt.hpp"

namespace teamforge {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kUsage:
      return "UsageError";
    case ErrorCode::kIoFailure:
      return "IoFailure";
    case ErrorCode::kFormatError:
      return "FormatError";
    case ErrorCode::kEmptyDataset:
      return "EmptyDataset";
    case ErrorCode::kMissingLabel:
      return "MissingLabel";
    case ErrorCode::kInvalidRecord:
      return "InvalidRecord";
    case ErrorCode::kEmptyText:
      return "EmptyText";
    case ErrorCode::kBatchEmpty:
      return "BatchEmpty";
    case ErrorCode::kUnknownId:
      return "UnknownId";
    case ErrorCode::kDisjointTraits:
      return "DisjointTraits";
    case ErrorCode::kNoTexts:
      return "NoTexts";
    case ErrorCode::kEmptyPattern:
      return "EmptyPattern";
    case ErrorCode::kDuplicateMember:
      return "DuplicateMember";
    case ErrorCode::kUnconstrainedSlot:
      return "UnconstrainedSlot";
    case ErrorCode::kAuthError:
      return "AuthError";
    case ErrorCode::kRateLimited:
      return "RateLimited";
    case ErrorCode::kTransportError:
      return "TransportError";
    case ErrorCode::kModelError:
      return "ModelError";
  }
  return "Unknown";
}

bool is_backend_error(ErrorCode code) {
  return code == ErrorCode::kAuthError || code == ErrorCode::kRateLimited ||
         code == ErrorCode::kTransportError || code == ErrorCode::kModelError;
}

std::string_view trait_name(Trait t) {
  switch (t) {
    case Trait::kAgreeableness:
      return "Agreeableness";
    case Trait::kConscientiousness:
      return "Conscientiousness";
    case Trait::kExtraversion:
      return "Extraversion";
    case Trait::kOpenness:
      return "Openness";
    case Trait::kNeuroticism:
      return "Neuroticism";
  }
  return "";
}

std::string_view trait_code(Trait t) {
  switch (t) {
    case Trait::kAgreeableness:
      return "AGR";
    case Trait::kConscientiousness:
      return "CON";
    case Trait::kExtraversion:
      return "EXT";
    case Trait::kOpenness:
      return "OPN";
    case Trait::kNeuroticism:
      return "NEU";
  }
  return "";
}

std::string label_column(Trait t) { return "c" + std::string(trait_code(t)); }

std::optional<Trait> parse_trait(std::string_view text) {
  for (Trait t : kAllTraits) {
    if (iequals(text, trait_code(t)) || iequals(text, trait_name(t)) ||
        iequals(text, label_column(t))) {
      return t;
    }
  }
  return std::nullopt;
}

Trait require_trait(std::string_view text) {
  if (auto t = parse_trait(text)) return *t;
  throw Error(ErrorCode::kInvalidArgument, "unknown trait '" + std::string(text) + "'");
}

std::string_view label_name(Label l) { return l == Label::kPositive ? "Positive" : "Negative"; }

const DescriptorSet& default_descriptors() {
  static const DescriptorSet kSet = {
      {Trait::kAgreeableness,
       "Tendency towards cooperation and social harmony",
       {"compassionate", "cooperative", "empathetic", "trusting", "helpful"}},
      {Trait::kConscientiousness,
       "Tendency towards organization and planning",
       {"self-discipline", "organised", "reliable", "cautious", "hardworking"}},
      {Trait::kExtraversion,
       "Outward orientation towards social world",
       {"sociability", "assertiveness", "high energy", "positive emotions", "expressiveness"}},
      {Trait::kOpenness,
       "Openness to new experiences",
       {"curiosity", "creativity", "sensitivity to art and beauty",
        "willingness to try new things"}},
      {Trait::kNeuroticism,
       "Tendency to experience negative emotions",
       {"anxiety", "sadness", "moodiness", "emotional instability", "prone to stress"}},
  };
  return kSet;
}

const TraitDescriptor* find_descriptor(const DescriptorSet& set, Trait t) {
  auto it =
      std::find_if(set.begin(), set.end(), [t](const TraitDescriptor& d) { return d.trait == t; });
  return it == set.end() ? nullptr : &*it;
}

std::string join_characteristics(const TraitDescriptor& d) {
  std::string out;
  for (const auto& c : d.characteristics) {
    if (!out.empty()) out += ", ";
    out += c;
  }
  return out;
}

std::string render_template(std::string_view tmpl, Trait trait, std::string_view text) {
  static constexpr std::string_view kTraitKey = "{trait}";
  static constexpr std::string_view kTextKey = "{text}";
  std::string out;
  out.reserve(tmpl.size() + text.size() + 32);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl.compare(i, kTraitKey.size(), kTraitKey) == 0) {
      out += trait_name(trait);
      i += kTraitKey.size();
    } else if (tmpl.compare(i, kTextKey.size(), kTextKey) == 0) {
      out += text;
      i += kTextKey.size();
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

}  // namespace teamforge
