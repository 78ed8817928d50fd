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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace teamforge {

/// The Big Five personality traits, in reporting order.
enum class Trait { kAgreeableness, kConscientiousness, kExtraversion, kOpenness, kNeuroticism };

inline constexpr std::size_t kTraitCount = 5;

inline constexpr std::array<Trait, kTraitCount> kAllTraits = {
    Trait::kAgreeableness, Trait::kConscientiousness, Trait::kExtraversion, Trait::kOpenness,
    Trait::kNeuroticism};

/// Fixed-size per-trait storage indexed by `Trait`.
template <typename T>
class TraitArray {
 public:
  TraitArray() = default;
  explicit TraitArray(const T& fill) { values_.fill(fill); }

  T& operator[](Trait t) { return values_[static_cast<std::size_t>(t)]; }
  const T& operator[](Trait t) const { return values_[static_cast<std::size_t>(t)]; }

  bool operator==(const TraitArray&) const = default;

 private:
  std::array<T, kTraitCount> values_{};
};

constexpr std::size_t trait_index(Trait t) { return static_cast<std::size_t>(t); }

/// "Agreeableness", "Conscientiousness", ...
std::string_view trait_name(Trait t);

/// "AGR", "CON", "EXT", "OPN", "NEU".
std::string_view trait_code(Trait t);

/// Dataset column for the trait's gold label, e.g. "cAGR".
std::string label_column(Trait t);

/// Accepts the three-letter code, the full name, or the label column,
/// case-insensitively.
std::optional<Trait> parse_trait(std::string_view text);

/// Parses like `parse_trait` but throws Error(kInvalidArgument) on failure.
Trait require_trait(std::string_view text);

enum class Label { kPositive, kNegative };

std::string_view label_name(Label l);

struct TraitDescriptor {
  Trait trait;
  std::string description;
  std::vector<std::string> characteristics;
};

using DescriptorSet = std::vector<TraitDescriptor>;

/// One descriptor per trait: a short description and the
/// characteristic adjectives used for prompts and the mock lexicon.
const DescriptorSet& default_descriptors();

/// Looks up the descriptor for `t`; nullptr when absent.
const TraitDescriptor* find_descriptor(const DescriptorSet& set, Trait t);

/// "a, b, c" rendering of a descriptor's characteristics.
std::string join_characteristics(const TraitDescriptor& d);

}  // namespace teamforge
