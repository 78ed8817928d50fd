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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "teamforge/llm_client.hpp"

namespace teamforge {

/// Resolved settings. Each field comes from the first source that sets it:
/// command-line flag, then environment, then config file, then default.
struct Config {
  std::string backend = "mock";
  std::string model_id{kDefaultModel};
  std::string api_url{kDefaultEndpoint};
  std::string api_key;
  RetryPolicy retry;
  std::uint64_t seed = 42;
  double temperature = 0.0;
  int max_output_tokens = 4;
};

struct ConfigOverrides {
  std::optional<std::string> backend;
  std::optional<std::string> model_id;
  std::optional<std::string> api_url;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_attempts;
  std::optional<int> max_parallel;
};

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

/// Reads the real process environment.
EnvLookup process_env();

/// $XDG_CONFIG_HOME/teamforge/config.json, else ~/.config/teamforge/config.json.
std::optional<std::filesystem::path> default_config_path(const EnvLookup& env);

/// `config_file` is the JSON text of the config file, when one exists.
/// Environment: TEAMFORGE_BACKEND, TEAMFORGE_MODEL, TEAMFORGE_API_URL,
/// TEAMFORGE_SEED, TEAMFORGE_API_KEY. Throws kInvalidArgument / kFormatError.
Config resolve_config(const ConfigOverrides& flags, const EnvLookup& env,
                      const std::optional<std::string>& config_file);

/// "mock" or "real" backend behind a ChatClient configured from `config`.
/// Throws kInvalidArgument for an unknown backend name.
std::unique_ptr<ChatClient> make_client(const Config& config, Sleeper sleeper = {});

}  // namespace teamforge
