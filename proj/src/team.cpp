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

#include "teamforge/team.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <numeric>
#include <set>

#include "json.hpp"
#include "teamforge/error.hpp"
#include "teamforge/io.hpp"

namespace teamforge {

using ordered_json = nlohmann::ordered_json;

// --- profiles ---------------------------------------------------------------

PersonalityProfile profile_member(const ChatClient& client, const std::string& member_id,
                                  const std::vector<std::string>& texts,
                                  const ProfileOptions& options) {
  if (texts.empty()) throw Error(ErrorCode::kNoTexts, "member '" + member_id + "' has no texts");
  std::vector<TextSample> samples;
  samples.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    samples.push_back({member_id + "#" + std::to_string(i), texts[i]});
  }

  PersonalityProfile profile;
  profile.member_id = member_id;
  for (Trait t : kAllTraits) {
    auto results = classify_batch(client, t, samples, options.parallelism, options.classify);
    std::size_t positives = 0, parseable = 0;
    for (const auto& r : results) {
      if (r.failed() || r.predicted == Verdict::kUnparseable) continue;
      ++parseable;
      if (r.predicted == Verdict::kPositive) ++positives;
    }
    profile.evidence[t] = parseable;
    if (parseable == 0) {
      profile.warnings.push_back(std::string(trait_name(t)) +
                                 ": no parseable classification; trait left unscored");
      continue;
    }
    profile.scores[t] = static_cast<double>(positives) / static_cast<double>(parseable);
  }
  return profile;
}

// --- roles, slots, members --------------------------------------------------

const std::vector<TeamRole>& builtin_roles() {
  static const std::vector<TeamRole> kRoles = {
      {"Operator"}, {"Leader"}, {"Engineer"}, {"Developer"}};
  return kRoles;
}

TeamRole parse_team_role(std::string_view name) {
  auto trimmed = io::trim(name);
  if (trimmed.empty()) throw Error(ErrorCode::kInvalidArgument, "blank role name");
  const auto lowered = io::to_lower(trimmed);
  for (const auto& r : builtin_roles()) {
    if (io::to_lower(r.name) == lowered) return r;
  }
  return TeamRole{trimmed};
}

bool CompositionSlot::has_bounds() const {
  return std::any_of(kAllTraits.begin(), kAllTraits.end(),
                     [&](Trait t) { return bounds[t].has_value(); });
}

void validate_slot(const CompositionSlot& slot) {
  if (io::trim(slot.slot_id).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "slot with blank slot_id");
  }
  for (Trait t : kAllTraits) {
    const auto& b = slot.bounds[t];
    if (b && !(0.0 <= b->min && b->min <= b->max && b->max <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "slot '" + slot.slot_id +
                                                   "': " + std::string(trait_code(t)) +
                                                   " bounds must satisfy 0 <= min <= max <= 1");
    }
  }
}

bool is_eligible(const TeamMember& member, const CompositionSlot& slot) {
  if (slot.role && member.declared_role && *slot.role != *member.declared_role) return false;
  for (Trait t : kAllTraits) {
    const auto& b = slot.bounds[t];
    if (!b) continue;
    const auto& score = member.profile.scores[t];
    if (!score || !b->contains(*score)) return false;
  }
  return true;
}

// --- gap analysis -----------------------------------------------------------

namespace {

/// Kuhn's augmenting-path matching from slots (left) to members (right).
class SlotMatcher {
 public:
  SlotMatcher(std::vector<std::vector<std::size_t>> adjacency, std::size_t members)
      : adjacency_(std::move(adjacency)),
        slot_of_member_(members, kNone),
        member_of_slot_(adjacency_.size(), kNone) {}

  bool augment_from(std::size_t slot) {
    visited_.assign(slot_of_member_.size(), false);
    return try_slot(slot);
  }

  std::size_t member_of(std::size_t slot) const { return member_of_slot_[slot]; }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

 private:
  bool try_slot(std::size_t slot) {
    for (std::size_t m : adjacency_[slot]) {
      if (visited_[m]) continue;
      visited_[m] = true;
      if (slot_of_member_[m] == kNone || try_slot(slot_of_member_[m])) {
        slot_of_member_[m] = slot;
        member_of_slot_[slot] = m;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::size_t> slot_of_member_;
  std::vector<std::size_t> member_of_slot_;
  std::vector<bool> visited_;
};

std::string format_fraction(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::vector<std::string> diversity_notes(const std::vector<const TeamMember*>& members,
                                         double threshold) {
  std::vector<std::string> notes;
  if (members.empty()) return notes;
  const auto thr = format_fraction(threshold);

  const bool all_anxious = std::all_of(members.begin(), members.end(), [&](const TeamMember* m) {
    const auto& s = m->profile.scores[Trait::kNeuroticism];
    return s && *s > threshold;
  });
  if (all_anxious) {
    notes.push_back("Every member scores above " + thr +
                    " on Neuroticism; the team lacks an emotionally steady counterweight.");
  }
  for (Trait t : kAllTraits) {
    if (t == Trait::kNeuroticism) continue;
    bool any_scored = false;
    bool any_high = false;
    for (const auto* m : members) {
      if (const auto& s = m->profile.scores[t]) {
        any_scored = true;
        any_high = any_high || *s > threshold;
      }
    }
    if (any_scored && !any_high) {
      notes.push_back("No member scores above " + thr + " on " + std::string(trait_name(t)) +
                      "; consider an agent that brings it.");
    }
  }
  std::set<std::string> roles;
  bool all_declared = true;
  for (const auto* m : members) {
    if (m->declared_role) {
      roles.insert(m->declared_role->name);
    } else {
      all_declared = false;
    }
  }
  if (members.size() > 1 && all_declared && roles.size() == 1) {
    notes.push_back("All members declare the " + *roles.begin() +
                    " role; the team has no role diversity.");
  }
  return notes;
}

}  // namespace

GapReport analyze_gaps(const std::vector<TeamMember>& team,
                       const std::vector<CompositionSlot>& pattern, double threshold) {
  if (pattern.empty()) throw Error(ErrorCode::kEmptyPattern, "composition pattern has no slots");
  {
    std::set<std::string> ids;
    for (const auto& m : team) {
      if (!ids.insert(m.member_id).second) {
        throw Error(ErrorCode::kDuplicateMember, "member '" + m.member_id + "' listed twice");
      }
    }
    std::set<std::string> slot_ids;
    for (const auto& s : pattern) {
      validate_slot(s);
      if (!slot_ids.insert(s.slot_id).second) {
        throw Error(ErrorCode::kInvalidArgument, "slot '" + s.slot_id + "' listed twice");
      }
    }
  }

  std::vector<const CompositionSlot*> slots;
  for (const auto& s : pattern) slots.push_back(&s);
  std::sort(slots.begin(), slots.end(), [](const CompositionSlot* a, const CompositionSlot* b) {
    if (a->required != b->required) return a->required;
    return a->slot_id < b->slot_id;
  });
  std::vector<const TeamMember*> members;
  for (const auto& m : team) members.push_back(&m);
  std::sort(members.begin(), members.end(),
            [](const TeamMember* a, const TeamMember* b) { return a->member_id < b->member_id; });

  std::vector<std::vector<std::size_t>> adjacency(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (is_eligible(*members[m], *slots[s])) adjacency[s].push_back(m);
    }
  }

  // Augmenting never unmatches a slot, so matching the required slots first
  // keeps their count maximal while the total still reaches the maximum.
  SlotMatcher matcher(std::move(adjacency), members.size());
  for (std::size_t s = 0; s < slots.size(); ++s) matcher.augment_from(s);

  GapReport report;
  report.threshold = threshold;
  std::vector<const CompositionSlot*> unfilled;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const auto m = matcher.member_of(s);
    if (m != SlotMatcher::kNone) {
      report.filled.emplace(slots[s]->slot_id, members[m]->member_id);
    } else if (slots[s]->required) {
      report.unfilled_slots.push_back(*slots[s]);
    } else {
      report.vacant_optional.push_back(slots[s]->slot_id);
    }
  }
  report.diversity_notes = diversity_notes(members, threshold);
  return report;
}

std::vector<CompositionSlot> default_pattern() {
  auto slot = [](std::string id, std::string role) {
    CompositionSlot s;
    s.slot_id = std::move(id);
    s.role = TeamRole{std::move(role)};
    s.bounds[Trait::kNeuroticism] = TraitBounds{0.0, 0.7};
    return s;
  };
  auto at_least = [](double v) { return TraitBounds{v, 1.0}; };

  auto op = slot("operator", "Operator");
  op.bounds[Trait::kOpenness] = at_least(0.5);
  auto leader = slot("leader", "Leader");
  leader.bounds[Trait::kExtraversion] = at_least(0.5);
  leader.bounds[Trait::kAgreeableness] = at_least(0.5);
  auto engineer = slot("engineer", "Engineer");
  engineer.bounds[Trait::kConscientiousness] = at_least(0.5);
  auto developer = slot("developer", "Developer");
  developer.bounds[Trait::kConscientiousness] = at_least(0.5);
  return {op, leader, engineer, developer};
}

// --- personas ---------------------------------------------------------------

AgentPersona synthesize_persona(const CompositionSlot& slot, const DescriptorSet& descriptors,
                                std::string_view tmpl, double threshold) {
  if (!slot.role && !slot.has_bounds()) {
    throw Error(ErrorCode::kUnconstrainedSlot,
                "slot '" + slot.slot_id + "' has neither a role nor trait bounds");
  }
  AgentPersona p;
  p.role = slot.role.value_or(TeamRole{"Generalist"});
  p.origin_slot = slot.slot_id;
  p.name = p.role.name + " Agent " + slot.slot_id;

  std::string traits;
  for (Trait t : kAllTraits) {
    const auto& b = slot.bounds[t];
    if (!b) continue;
    const auto* d = find_descriptor(descriptors, t);
    if (d == nullptr) continue;
    if (b->min >= threshold) {
      p.target_traits[t] = Label::kPositive;
      traits += "- High " + std::string(trait_name(t)) + " (" + io::to_lower(d->description) +
                "): show these characteristics: " + join_characteristics(*d) + ".\n";
    } else if (b->max < threshold) {
      p.target_traits[t] = Label::kNegative;
      traits += "- Low " + std::string(trait_name(t)) + ": avoid showing " +
                join_characteristics(*d) + ".\n";
    }
  }

  std::string out;
  for (std::size_t i = 0; i < tmpl.size();) {
    auto try_key = [&](std::string_view key, std::string_view value) {
      if (tmpl.compare(i, key.size(), key) != 0) return false;
      out += value;
      i += key.size();
      return true;
    };
    if (try_key("{name}", p.name) || try_key("{role}", p.role.name) ||
        try_key("{slot_id}", slot.slot_id) || try_key("{traits}", traits)) {
      continue;
    }
    out += tmpl[i++];
  }
  p.system_prompt = std::move(out);
  return p;
}

// --- file formats -----------------------------------------------------------

namespace {

ordered_json slot_to_json(const CompositionSlot& s) {
  ordered_json j;
  j["slot_id"] = s.slot_id;
  j["role"] = s.role ? ordered_json(s.role->name) : ordered_json(nullptr);
  j["required"] = s.required;
  ordered_json traits = ordered_json::object();
  for (Trait t : kAllTraits) {
    if (const auto& b = s.bounds[t]) {
      traits[std::string(trait_code(t))] = {{"min", b->min}, {"max", b->max}};
    }
  }
  j["traits"] = std::move(traits);
  return j;
}

CompositionSlot slot_from_json(const nlohmann::json& j) {
  CompositionSlot s;
  s.slot_id = j.at("slot_id").get<std::string>();
  if (j.contains("role") && !j["role"].is_null()) {
    s.role = parse_team_role(j["role"].get<std::string>());
  }
  s.required = j.value("required", true);
  if (j.contains("traits")) {
    for (const auto& [key, bounds] : j["traits"].items()) {
      TraitBounds b;
      b.min = bounds.value("min", 0.0);
      b.max = bounds.value("max", 1.0);
      s.bounds[require_trait(key)] = b;
    }
  }
  validate_slot(s);
  return s;
}

template <typename F>
auto with_format_errors(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string(what) + ": " + e.what());
  }
}

ordered_json trait_map(const TraitArray<std::optional<double>>& values) {
  ordered_json j = ordered_json::object();
  for (Trait t : kAllTraits) {
    if (values[t]) j[std::string(trait_code(t))] = *values[t];
  }
  return j;
}

}  // namespace

std::string pattern_to_json(const std::vector<CompositionSlot>& pattern) {
  ordered_json doc;
  doc["slots"] = ordered_json::array();
  for (const auto& s : pattern) doc["slots"].push_back(slot_to_json(s));
  return doc.dump(2) + "\n";
}

std::vector<CompositionSlot> pattern_from_json(std::string_view text) {
  return with_format_errors("pattern file", [&] {
    auto doc = nlohmann::json::parse(text);
    std::vector<CompositionSlot> out;
    for (const auto& s : doc.at("slots")) out.push_back(slot_from_json(s));
    return out;
  });
}

std::vector<TeamMemberSpec> team_from_json(std::string_view text,
                                           const std::filesystem::path& base_dir) {
  return with_format_errors("team file", [&] {
    auto doc = nlohmann::json::parse(text);
    std::vector<TeamMemberSpec> out;
    for (const auto& m : doc.at("members")) {
      TeamMemberSpec spec;
      spec.member_id = m.at("member_id").get<std::string>();
      if (m.contains("role") && !m["role"].is_null()) {
        spec.role = parse_team_role(m["role"].get<std::string>());
      }
      if (m.contains("texts")) {
        for (const auto& t : m["texts"]) spec.texts.push_back(t.get<std::string>());
      }
      if (m.contains("texts_file")) {
        auto path = base_dir / m["texts_file"].get<std::string>();
        auto content = io::read_file(path);
        const bool jsonl = path.extension() == ".jsonl";
        std::size_t start = 0;
        while (start <= content.size()) {
          auto nl = content.find('\n', start);
          auto line = io::trim(std::string_view(content).substr(
              start, nl == std::string::npos ? std::string::npos : nl - start));
          if (!line.empty()) {
            spec.texts.push_back(jsonl ? nlohmann::json::parse(line).at("text").get<std::string>()
                                       : line);
          }
          if (nl == std::string::npos) break;
          start = nl + 1;
        }
      }
      out.push_back(std::move(spec));
    }
    return out;
  });
}

std::string gap_report_to_json(const GapReport& report, const std::vector<TeamMember>& team) {
  ordered_json doc;
  doc["threshold"] = report.threshold;
  doc["filled"] = ordered_json::object();
  for (const auto& [slot, member] : report.filled) doc["filled"][slot] = member;
  doc["unfilled_slots"] = ordered_json::array();
  for (const auto& s : report.unfilled_slots) doc["unfilled_slots"].push_back(slot_to_json(s));
  doc["vacant_optional"] = report.vacant_optional;
  doc["diversity_notes"] = report.diversity_notes;
  doc["members"] = ordered_json::array();
  for (const auto& m : team) {
    ordered_json j;
    j["member_id"] = m.member_id;
    j["role"] = m.declared_role ? ordered_json(m.declared_role->name) : ordered_json(nullptr);
    j["scores"] = trait_map(m.profile.scores);
    ordered_json evidence = ordered_json::object();
    for (Trait t : kAllTraits) evidence[std::string(trait_code(t))] = m.profile.evidence[t];
    j["evidence"] = std::move(evidence);
    j["warnings"] = m.profile.warnings;
    doc["members"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

GapReport gap_report_from_json(std::string_view text) {
  return with_format_errors("gap report", [&] {
    auto doc = nlohmann::json::parse(text);
    GapReport r;
    r.threshold = doc.value("threshold", kDefaultThreshold);
    if (doc.contains("filled")) {
      for (const auto& [slot, member] : doc["filled"].items()) {
        r.filled.emplace(slot, member.get<std::string>());
      }
    }
    for (const auto& s : doc.at("unfilled_slots")) r.unfilled_slots.push_back(slot_from_json(s));
    if (doc.contains("vacant_optional")) {
      r.vacant_optional = doc["vacant_optional"].get<std::vector<std::string>>();
    }
    if (doc.contains("diversity_notes")) {
      r.diversity_notes = doc["diversity_notes"].get<std::vector<std::string>>();
    }
    return r;
  });
}

std::string persona_to_json(const AgentPersona& persona) {
  ordered_json doc;
  doc["name"] = persona.name;
  doc["role"] = persona.role.name;
  doc["origin_slot"] = persona.origin_slot;
  ordered_json targets = ordered_json::object();
  for (Trait t : kAllTraits) {
    if (const auto& l = persona.target_traits[t]) {
      targets[std::string(trait_code(t))] = label_name(*l);
    }
  }
  doc["target_traits"] = std::move(targets);
  doc["system_prompt"] = persona.system_prompt;
  return doc.dump(2) + "\n";
}

}  // namespace teamforge
