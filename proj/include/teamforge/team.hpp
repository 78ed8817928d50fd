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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamforge/classifier.hpp"
#include "teamforge/error.hpp"
#include "teamforge/llm_client.hpp"
#include "teamforge/trait.hpp"

namespace teamforge {

// --- profiles ---------------------------------------------------------------

struct PersonalityProfile {
  std::string member_id;
  /// Share of the member's texts judged Positive, over parseable replies.
  TraitArray<std::optional<double>> scores;
  /// Parseable replies behind each score.
  TraitArray<std::size_t> evidence{0};
  std::vector<std::string> warnings;

  bool operator==(const PersonalityProfile&) const = default;
};

struct ProfileOptions {
  ClassifyOptions classify;
  int parallelism = 4;
};

/// Classifies every text for every trait. A trait with no parseable reply is
/// left unscored and a warning is recorded. Throws kNoTexts.
PersonalityProfile profile_member(const ChatClient& client, const std::string& member_id,
                                  const std::vector<std::string>& texts,
                                  const ProfileOptions& options = {});

// --- roles, slots, members --------------------------------------------------

/// A project role. Operator, Leader, Engineer and Developer are built in;
/// any other name is a user-defined role.
struct TeamRole {
  std::string name;

  bool operator==(const TeamRole&) const = default;
  auto operator<=>(const TeamRole&) const = default;
};

const std::vector<TeamRole>& builtin_roles();

/// Built-in names match case-insensitively and come back canonicalised.
/// Throws kInvalidArgument for a blank name.
TeamRole parse_team_role(std::string_view name);

struct TraitBounds {
  double min = 0.0;
  double max = 1.0;

  bool contains(double v) const { return v >= min && v <= max; }
  bool operator==(const TraitBounds&) const = default;
};

struct CompositionSlot {
  std::string slot_id;
  std::optional<TeamRole> role;
  TraitArray<std::optional<TraitBounds>> bounds;
  bool required = true;

  bool has_bounds() const;
  bool operator==(const CompositionSlot&) const = default;
};

/// Throws kInvalidArgument on a blank id or bounds outside 0 <= min <= max <= 1.
void validate_slot(const CompositionSlot& slot);

struct TeamMember {
  std::string member_id;
  std::optional<TeamRole> declared_role;
  PersonalityProfile profile;
};

/// Role compatible (either side undeclared, or equal) and every bounded trait
/// scored and within bounds.
bool is_eligible(const TeamMember& member, const CompositionSlot& slot);

// --- gap analysis -----------------------------------------------------------

inline constexpr double kDefaultThreshold = 0.5;

struct GapReport {
  /// slot_id -> member_id
  std::map<std::string, std::string> filled;
  /// Required slots left unfilled, in slot_id order.
  std::vector<CompositionSlot> unfilled_slots;
  /// Optional slots left unfilled.
  std::vector<std::string> vacant_optional;
  std::vector<std::string> diversity_notes;
  double threshold = kDefaultThreshold;

  bool operator==(const GapReport&) const = default;
};

/// Assigns members to slots with a maximum-cardinality bipartite matching
/// (augmenting paths, required slots first, ties by ascending slot_id then
/// member_id), then reports the required slots nobody can fill.
/// Throws kEmptyPattern, kDuplicateMember, or kInvalidArgument for a bad slot.
GapReport analyze_gaps(const std::vector<TeamMember>& team,
                       const std::vector<CompositionSlot>& pattern,
                       double threshold = kDefaultThreshold);

/// One required slot per built-in role. Leader: EXT >= 0.5 and AGR >= 0.5.
/// Engineer, Developer: CON >= 0.5. Operator: OPN >= 0.5. All: NEU <= 0.7.
/// This is a starting point, not an empirically derived pattern.
std::vector<CompositionSlot> default_pattern();

// --- personas ---------------------------------------------------------------

struct AgentPersona {
  std::string name;
  TeamRole role;
  TraitArray<std::optional<Label>> target_traits;
  std::string system_prompt;
  std::string origin_slot;
};

/// Placeholders: {name}, {role}, {slot_id}, {traits}. {traits} expands to one
/// instruction line per targeted trait.
inline constexpr std::string_view kDefaultPersonaTemplate =
    "You are {name}, a GenAI agent joining a project team in the {role} role.\n"
    "{traits}"
    "Stay in this role and personality in every reply.";

/// Targets Positive for traits with min >= threshold and Negative for traits
/// with max < threshold. Throws kUnconstrainedSlot for a slot with neither a
/// role nor bounds.
AgentPersona synthesize_persona(const CompositionSlot& slot,
                                const DescriptorSet& descriptors = default_descriptors(),
                                std::string_view tmpl = kDefaultPersonaTemplate,
                                double threshold = kDefaultThreshold);

// --- file formats -----------------------------------------------------------

std::string pattern_to_json(const std::vector<CompositionSlot>& pattern);
std::vector<CompositionSlot> pattern_from_json(std::string_view text);

struct TeamMemberSpec {
  std::string member_id;
  std::optional<TeamRole> role;
  std::vector<std::string> texts;
};

/// Members with inline "texts" or a "texts_file" (relative to `base_dir`;
/// JSON Lines with a "text" key, or one text per line).
std::vector<TeamMemberSpec> team_from_json(std::string_view text,
                                           const std::filesystem::path& base_dir);

/// Includes each member's profile alongside the report.
std::string gap_report_to_json(const GapReport& report, const std::vector<TeamMember>& team);
GapReport gap_report_from_json(std::string_view text);

std::string persona_to_json(const AgentPersona& persona);

}  // namespace teamforge
