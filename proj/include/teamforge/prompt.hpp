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

#include <string>
#include <string_view>

#include "teamforge/trait.hpp"

namespace teamforge {

/// Placeholders `{trait}` and `{text}` are substituted in a single pass, so
/// braces inside the substituted text are never re-expanded.
inline constexpr std::string_view kClassificationPromptTemplate =
    "Prompt: I require an analysis to classify the following text under one of "
    "the Big Five personality traits (Agreeableness, Conscientiousness, "
    "Extraversion, Openness, Neuroticism). The question is: Does the provided "
    "text demonstrate or suggest personality associated with the {trait} trait? "
    "Please respond exclusively with 'Yes' or 'No'. Text: {text}";

inline constexpr std::string_view kPromptPrefix = "Prompt: ";

inline constexpr std::string_view kDefaultSystemInstruction =
    "You are a personality analyst. Answer questions about Big Five personality "
    "traits with exactly Yes or No.";

/// Wording used for fine-tune records.
struct PromptTemplates {
  std::string system{kDefaultSystemInstruction};
  std::string user{kClassificationPromptTemplate};
};

/// Replaces `{trait}` with the trait's full name and `{text}` with `text`.
std::string render_template(std::string_view tmpl, Trait trait, std::string_view text);

}  // namespace teamforge
