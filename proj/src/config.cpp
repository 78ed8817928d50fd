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

#include "teamforge/config.hpp"

#include <cstdlib>

#include "json.hpp"
#include "teamforge/error.hpp"

namespace teamforge {

EnvLookup process_env() {
  return [](std::string_view name) -> std::optional<std::string> {
    const char* v = std::getenv(std::string(name).c_str());
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
}

std::optional<std::filesystem::path> default_config_path(const EnvLookup& env) {
  if (auto xdg = env("XDG_CONFIG_HOME")) {
    return std::filesystem::path(*xdg) / "teamforge" / "config.json";
  }
  if (auto home = env("HOME")) {
    return std::filesystem::path(*home) / ".config" / "teamforge" / "config.json";
  }
  return std::nullopt;
}

namespace {

std::uint64_t parse_seed(const std::string& text, std::string_view source) {
  try {
    std::size_t used = 0;
    auto v = std::stoull(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidArgument,
              std::string(source) + ": seed must be a non-negative integer, got '" + text + "'");
}

void apply_file(Config& c, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    if (!doc.is_object()) throw Error(ErrorCode::kFormatError, "config file must be a JSON object");
    c.backend = doc.value("backend", c.backend);
    c.model_id = doc.value("model", c.model_id);
    c.api_url = doc.value("api_url", c.api_url);
    c.api_key = doc.value("api_key", c.api_key);
    c.seed = doc.value("seed", c.seed);
    c.temperature = doc.value("temperature", c.temperature);
    c.max_output_tokens = doc.value("max_tokens", c.max_output_tokens);
    if (doc.contains("retry")) {
      const auto& r = doc["retry"];
      c.retry.max_attempts = r.value("max_attempts", c.retry.max_attempts);
      c.retry.base_delay =
          std::chrono::milliseconds(r.value("base_delay_ms", c.retry.base_delay.count()));
      c.retry.multiplier = r.value("multiplier", c.retry.multiplier);
      c.retry.max_delay =
          std::chrono::milliseconds(r.value("max_delay_ms", c.retry.max_delay.count()));
      c.retry.max_parallel = r.value("max_parallel", c.retry.max_parallel);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("config file: ") + e.what());
  }
}

}  // namespace

Config resolve_config(const ConfigOverrides& flags, const EnvLookup& env,
                      const std::optional<std::string>& config_file) {
  Config c;
  if (config_file) apply_file(c, *config_file);

  if (auto v = env("TEAMFORGE_BACKEND")) c.backend = *v;
  if (auto v = env("TEAMFORGE_MODEL")) c.model_id = *v;
  if (auto v = env("TEAMFORGE_API_URL")) c.api_url = *v;
  if (auto v = env("TEAMFORGE_SEED")) c.seed = parse_seed(*v, "TEAMFORGE_SEED");
  if (auto v = env(kApiKeyEnv)) c.api_key = *v;

  if (flags.backend) c.backend = *flags.backend;
  if (flags.model_id) c.model_id = *flags.model_id;
  if (flags.api_url) c.api_url = *flags.api_url;
  if (flags.seed) c.seed = *flags.seed;
  if (flags.max_attempts) c.retry.max_attempts = *flags.max_attempts;
  if (flags.max_parallel) c.retry.max_parallel = *flags.max_parallel;

  if (c.backend != "mock" && c.backend != "real") {
    throw Error(ErrorCode::kInvalidArgument,
                "backend must be 'mock' or 'real', got '" + c.backend + "'");
  }
  c.retry.validate();
  return c;
}

std::unique_ptr<ChatClient> make_client(const Config& config, Sleeper sleeper) {
  std::shared_ptr<ChatBackend> backend;
  if (config.backend == "mock") {
    backend = std::make_shared<MockBackend>();
  } else if (config.backend == "real") {
    backend = std::make_shared<HttpBackend>(HttpBackendOptions{config.api_url, config.api_key});
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown backend '" + config.backend + "'");
  }
  return std::make_unique<ChatClient>(std::move(backend), config.retry, std::move(sleeper));
}

}  // namespace teamforge
