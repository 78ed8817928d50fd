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

// Synthetic corpora and random instances shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "teamforge/classifier.hpp"
#include "teamforge/corpus.hpp"
#include "teamforge/io.hpp"
#include "teamforge/team.hpp"
#include "teamforge/trait.hpp"

namespace teamforge::testing {

struct ClassCounts {
  std::size_t negative;
  std::size_t positive;
};

// FriendsPersona label counts, in trait order.
inline constexpr std::array<ClassCounts, kTraitCount> kFriendsCounts = {
    {{306, 405}, {381, 330}, {399, 312}, {249, 462}, {379, 332}}};
inline constexpr std::size_t kFriendsSize = 711;

// Essay minority-class counts after balancing, in trait order.
inline constexpr std::array<std::size_t, kTraitCount> kEssayBalanced = {1157, 1214, 1191, 1196,
                                                                        1234};

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Per trait, exactly `positives` of `n` samples get label 1 and the rest 0,
// scattered by `seed`.
inline std::vector<std::array<int, kTraitCount>> scattered_labels(
    std::size_t n, const std::array<std::size_t, kTraitCount>& positives, std::uint64_t seed) {
  std::vector<std::array<int, kTraitCount>> labels(n);
  for (Trait t : kAllTraits) {
    std::vector<int> column(n, 0);
    std::fill_n(column.begin(), positives[trait_index(t)], 1);
    io::deterministic_shuffle(column, io::mix_seed(seed, trait_index(t)));
    for (std::size_t i = 0; i < n; ++i) labels[i][trait_index(t)] = column[i];
  }
  return labels;
}

// Scene in the raw scraped form: emphasised episode header, HTML breaks and
// entities.
inline std::string raw_scene(std::size_t i) {
  const std::size_t season = 1 + i % 4, episode = 1 + i % 24, scene = i % 17;
  char header[64];
  std::snprintf(header, sizeof header, "**s%02zu_e%02zu_c%02zu(%zu) for Ross Geller**", season,
                episode, scene, i % 3);
  return std::string(header) + "\nRoss: Scene " + std::to_string(i) +
         " &amp; a &quot;break&quot;<br>Rachel: <i>We were</i> on a break!";
}

inline std::string friends_fixture_csv(std::uint64_t seed = 7) {
  std::array<std::size_t, kTraitCount> pos{};
  for (Trait t : kAllTraits) pos[trait_index(t)] = kFriendsCounts[trait_index(t)].positive;
  const auto labels = scattered_labels(kFriendsSize, pos, seed);
  std::string out = "id,text,cAGR,cCON,cEXT,cOPN,cNEU\n";
  for (std::size_t i = 0; i < kFriendsSize; ++i) {
    out += "f" + std::to_string(i) + "," + csv_quote(raw_scene(i));
    for (int v : labels[i]) out += "," + std::to_string(v);
    out += "\n";
  }
  return out;
}

// Unbalanced essays: every trait's minority class has exactly the balanced
// count, on alternating sides.
inline std::string essays_fixture_csv(std::size_t n = 2600, std::uint64_t seed = 11) {
  std::array<std::size_t, kTraitCount> pos{};
  for (Trait t : kAllTraits) {
    const auto minority = kEssayBalanced[trait_index(t)];
    pos[trait_index(t)] = trait_index(t) % 2 == 0 ? minority : n - minority;
  }
  const auto labels = scattered_labels(n, pos, seed);
  std::string out = "id\ttext\tcAGR\tcCON\tcEXT\tcOPN\tcNEU\n";
  for (std::size_t i = 0; i < n; ++i) {
    out += "e" + std::to_string(i) + "\tStream of consciousness essay number " + std::to_string(i);
    for (int v : labels[i]) out += "\t" + std::to_string(v);
    out += "\n";
  }
  return out;
}

inline LabeledSample make_sample(std::string id, std::string text,
                                 std::initializer_list<std::pair<Trait, Label>> labels) {
  LabeledSample s{std::move(id), std::move(text), {}};
  for (auto [t, l] : labels) s.labels[t] = l;
  return s;
}

inline std::vector<LabeledSample> numbered_samples(std::size_t n) {
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(
        make_sample("s" + std::to_string(i), "text " + std::to_string(i),
                    {{Trait::kExtraversion, i % 2 ? Label::kPositive : Label::kNegative}}));
  }
  return out;
}

inline std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "hello",       "caf\xC3\xA9", "\"quoted\"",
      "back\\slash", "new\nline",   "tab\there",
      "{text}",      "{trait}",     "emoji \xF0\x9F\x98\x80",
      "<b>bold</b>", "plain words"};
  std::string out;
  const auto k = 1 + rng() % 4;
  for (std::size_t i = 0; i < k; ++i) out += pieces[rng() % pieces.size()] + " ";
  return out;
}

inline FineTuneRecord random_record(std::mt19937_64& rng) {
  const Trait t = kAllTraits[rng() % kTraitCount];
  const auto label = rng() % 2 ? Label::kPositive : Label::kNegative;
  LabeledSample s = make_sample("r", random_text(rng), {{t, label}});
  PromptTemplates templates;
  if (rng() % 3 == 0) templates.system = random_text(rng);
  return make_finetune_record(s, t, templates);
}

// Random slots with bounds split at 0.5 and members scored 0, 0.5, 1 or
// unscored, so eligibility varies widely between instances.
struct RandomTeam {
  std::vector<TeamMember> members;
  std::vector<CompositionSlot> slots;
};

inline RandomTeam random_team(std::mt19937_64& rng, std::size_t max_members = 6,
                              std::size_t max_slots = 6) {
  RandomTeam rt;
  const std::size_t nm = rng() % (max_members + 1);
  const std::size_t ns = 1 + rng() % max_slots;
  const std::vector<std::string> roles = {"Operator", "Leader", "Engineer", "Developer"};
  for (std::size_t s = 0; s < ns; ++s) {
    CompositionSlot slot;
    slot.slot_id = "slot" + std::to_string(s);
    if (rng() % 2) slot.role = TeamRole{roles[rng() % roles.size()]};
    for (Trait t : kAllTraits) {
      switch (rng() % 4) {
        case 0:
          slot.bounds[t] = TraitBounds{0.5, 1.0};
          break;
        case 1:
          slot.bounds[t] = TraitBounds{0.0, 0.5};
          break;
        default:
          break;
      }
    }
    slot.required = rng() % 4 != 0;
    rt.slots.push_back(std::move(slot));
  }
  for (std::size_t m = 0; m < nm; ++m) {
    TeamMember member;
    member.member_id = "m" + std::to_string(m);
    if (rng() % 2) member.declared_role = TeamRole{roles[rng() % roles.size()]};
    member.profile.member_id = member.member_id;
    for (Trait t : kAllTraits) {
      const auto pick = rng() % 4;
      if (pick == 3) continue;  // unscored
      member.profile.scores[t] = static_cast<double>(pick) / 2.0;
    }
    rt.members.push_back(std::move(member));
  }
  return rt;
}

// Largest number of slots any injective member -> slot assignment fills,
// found by trying everything.
inline std::size_t brute_force_max_matching(const std::vector<TeamMember>& members,
                                            const std::vector<CompositionSlot>& slots) {
  std::vector<std::vector<bool>> ok(members.size(), std::vector<bool>(slots.size()));
  for (std::size_t m = 0; m < members.size(); ++m) {
    for (std::size_t s = 0; s < slots.size(); ++s) ok[m][s] = is_eligible(members[m], slots[s]);
  }
  std::vector<bool> used(slots.size(), false);
  std::size_t best = 0;
  auto search = [&](auto&& self, std::size_t m, std::size_t filled) -> void {
    if (m == members.size()) {
      best = std::max(best, filled);
      return;
    }
    self(self, m + 1, filled);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (used[s] || !ok[m][s]) continue;
      used[s] = true;
      self(self, m + 1, filled + 1);
      used[s] = false;
    }
  };
  search(search, 0, 0);
  return best;
}

// Largest number of required slots filled over all assignments; used to
// check that required slots take priority.
inline std::size_t brute_force_max_required(const std::vector<TeamMember>& members,
                                            const std::vector<CompositionSlot>& slots) {
  std::vector<CompositionSlot> required;
  for (const auto& s : slots) {
    if (s.required) required.push_back(s);
  }
  return brute_force_max_matching(members, required);
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("teamforge_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

}  // namespace teamforge::testing
