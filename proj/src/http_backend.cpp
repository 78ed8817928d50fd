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

#include <regex>

#include "httplib.h"
#include "json.hpp"
#include "teamforge/error.hpp"
#include "teamforge/llm_client.hpp"

namespace teamforge {

std::string encode_chat_request(const ChatRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = request.model_id;
  body["messages"] = nlohmann::ordered_json::array();
  for (const auto& m : request.messages) {
    body["messages"].push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_output_tokens;
  return body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string decode_chat_response(std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kModelError, std::string("unreadable response body: ") + e.what());
  }
  if (doc.contains("error") && !doc["error"].is_null()) {
    const auto& err = doc["error"];
    std::string msg = err.is_object() && err.contains("message") && err["message"].is_string()
                          ? err["message"].get<std::string>()
                          : err.dump();
    throw Error(ErrorCode::kModelError, msg);
  }
  const auto* content = [&]() -> const nlohmann::json* {
    if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
      return nullptr;
    }
    const auto& first = doc["choices"][0];
    if (!first.is_object() || !first.contains("message")) return nullptr;
    const auto& msg = first["message"];
    if (!msg.is_object() || !msg.contains("content") || !msg["content"].is_string()) {
      return nullptr;
    }
    return &msg["content"];
  }();
  if (content == nullptr) {
    throw Error(ErrorCode::kModelError, "response has no choices[0].message.content");
  }
  return content->get<std::string>();
}

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(options_.endpoint, m, kUrl)) {
    throw Error(ErrorCode::kInvalidArgument,
                "endpoint must be an http(s) URL: " + options_.endpoint);
  }
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
}

std::string HttpBackend::send(const ChatRequest& request) {
  validate_request(request);
  if (options_.api_key.empty()) {
    throw Error(ErrorCode::kAuthError,
                "no API key; set " + std::string(kApiKeyEnv) + " or api_key in the config file");
  }

  // httplib clients are not safe for concurrent requests, so each call owns one.
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  client.set_write_timeout(options_.timeout);
  httplib::Headers headers = {{"Authorization", "Bearer " + options_.api_key}};

  auto result = client.Post(path_, headers, encode_chat_request(request), "application/json");
  if (!result) {
    throw Error(ErrorCode::kTransportError,
                "request failed: " + httplib::to_string(result.error()));
  }
  const int status = result->status;
  if (status == 401 || status == 403) {
    throw Error(ErrorCode::kAuthError, "credential rejected (HTTP " + std::to_string(status) + ")");
  }
  if (status == 429) throw Error(ErrorCode::kRateLimited, "HTTP 429 from " + scheme_host_port_);
  if (status >= 500) {
    throw Error(ErrorCode::kTransportError, "HTTP " + std::to_string(status) + " from server");
  }
  if (status < 200 || status >= 300) {
    std::string detail;
    try {
      decode_chat_response(result->body);
    } catch (const Error& e) {
      detail = e.message();
    }
    throw Error(ErrorCode::kModelError, "HTTP " + std::to_string(status) + ": " + detail);
  }
  return decode_chat_response(result->body);
}

}  // namespace teamforge
