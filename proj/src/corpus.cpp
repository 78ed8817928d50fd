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

#include "teamforge/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "teamforge/error.hpp"
#include "teamforge/io.hpp"

namespace teamforge {

using ordered_json = nlohmann::ordered_json;

std::string_view role_name(Role r) {
  switch (r) {
    case Role::kSystem:
      return "system";
    case Role::kUser:
      return "user";
    case Role::kAssistant:
      return "assistant";
  }
  return "";
}

std::optional<Role> parse_role(std::string_view s) {
  if (s == "system") return Role::kSystem;
  if (s == "user") return Role::kUser;
  if (s == "assistant") return Role::kAssistant;
  return std::nullopt;
}

std::optional<std::string> validate_record(const FineTuneRecord& r) {
  static constexpr Role kOrder[] = {Role::kSystem, Role::kUser, Role::kAssistant};
  if (r.messages.size() != 3) {
    return "expected 3 messages, found " + std::to_string(r.messages.size());
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (r.messages[i].role != kOrder[i]) {
      return "message " + std::to_string(i) + " must have role " +
             std::string(role_name(kOrder[i]));
    }
  }
  const auto& answer = r.messages[2].content;
  if (answer != "Yes" && answer != "No") {
    return "assistant content must be \"Yes\" or \"No\"";
  }
  return std::nullopt;
}

DatasetStats compute_stats(const std::vector<LabeledSample>& samples) {
  DatasetStats stats;
  stats.total = samples.size();
  for (const auto& s : samples) {
    for (Trait t : kAllTraits) {
      if (auto l = s.label(t)) {
        ++(*l == Label::kPositive ? stats.positive[t] : stats.negative[t]);
      }
    }
  }
  return stats;
}

// --- cleaning ---------------------------------------------------------------

namespace {

const std::regex& header_regex() {
  static const std::regex re(R"(^[\s*_]*s\d+_e\d+_c\d+\(\d+\))", std::regex::icase);
  return re;
}

std::string strip_tags(std::string_view in) {
  static const std::regex br(R"(<br\s*/?>)", std::regex::icase);
  static const std::regex tag(R"(</?[A-Za-z][^<>]*>)");
  std::string s = std::regex_replace(std::string(in), br, "\n");
  return std::regex_replace(s, tag, "");
}

std::string decode_entities(std::string_view in) {
  static constexpr std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''}};
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size();) {
    bool matched = false;
    if (in[i] == '&') {
      for (const auto& [name, ch] : kEntities) {
        if (in.compare(i, name.size(), name) == 0) {
          out += ch;
          i += name.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out += in[i++];
  }
  return out;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (true) {
    auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(s.substr(start));
      break;
    }
    lines.emplace_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string rstrip(std::string_view s) {
  auto end = s.find_last_not_of(" \t\f\v");
  return end == std::string_view::npos ? std::string() : std::string(s.substr(0, end + 1));
}

// A header opened with "**" may wrap onto following lines before the closing
// "**"; returns how many lines the header spans starting at `i`.
std::size_t header_span(const std::vector<std::string>& lines, std::size_t i) {
  const auto& first = lines[i];
  auto lead = first.find_first_not_of(" \t");
  if (lead == std::string::npos || first.compare(lead, 2, "**") != 0) return 1;
  if (first.find("**", lead + 2) != std::string::npos) return 1;
  for (std::size_t j = i + 1; j < lines.size(); ++j) {
    if (lines[j].find("**") != std::string::npos) return j - i + 1;
    if (std::regex_search(lines[j], header_regex())) break;
  }
  return 1;
}

std::string clean_once(std::string_view raw) {
  std::string s;
  s.reserve(raw.size());
  for (char c : raw) {
    if (c != '\r') s += c;
  }
  s = decode_entities(strip_tags(s));

  auto lines = split_lines(s);
  std::string out;
  bool first = true;
  for (std::size_t i = 0; i < lines.size();) {
    if (std::regex_search(lines[i], header_regex())) {
      i += header_span(lines, i);
      continue;
    }
    if (!first) out += '\n';
    out += rstrip(lines[i]);
    first = false;
    ++i;
  }
  return io::trim(out);
}

}  // namespace

std::string clean_scene(std::string_view raw) {
  // Every rule either shortens the text or leaves it unchanged, so this
  // reaches a fixed point.
  std::string current = clean_once(raw);
  while (true) {
    std::string next = clean_once(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

// --- records ----------------------------------------------------------------

FineTuneRecord make_finetune_record(const LabeledSample& sample, Trait trait,
                                    const PromptTemplates& templates) {
  auto label = sample.label(trait);
  if (!label) {
    throw Error(ErrorCode::kMissingLabel,
                "sample '" + sample.id + "' has no " + std::string(trait_code(trait)) + " label");
  }
  FineTuneRecord r;
  r.messages.push_back({Role::kSystem, templates.system});
  r.messages.push_back({Role::kUser, render_template(templates.user, trait, sample.text)});
  r.messages.push_back({Role::kAssistant, *label == Label::kPositive ? "Yes" : "No"});
  return r;
}

// --- splitting --------------------------------------------------------------

std::size_t train_size_for(std::size_t n, double train_fraction) {
  // The small offset absorbs representation error in fractions such as 0.29
  // whose product with n should be an exact integer.
  return static_cast<std::size_t>(std::floor(static_cast<long double>(n) * train_fraction + 1e-9L));
}

Split split_train_val(const std::vector<LabeledSample>& samples, std::uint64_t seed,
                      double train_fraction) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyDataset, "nothing to split");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  io::deterministic_shuffle(order, seed);

  const std::size_t n_train = train_size_for(samples.size(), train_fraction);
  Split split;
  split.train.reserve(n_train);
  split.val.reserve(samples.size() - n_train);
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_train ? split.train : split.val).push_back(samples[order[k]]);
  }
  return split;
}

// --- JSON Lines -------------------------------------------------------------

std::string record_to_json(const FineTuneRecord& r) {
  ordered_json messages = ordered_json::array();
  for (const auto& m : r.messages) {
    ordered_json msg;
    msg["role"] = role_name(m.role);
    msg["content"] = m.content;
    messages.push_back(std::move(msg));
  }
  ordered_json doc;
  doc["messages"] = std::move(messages);
  try {
    return doc.dump();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidRecord, std::string("not encodable as JSON: ") + e.what());
  }
}

FineTuneRecord record_from_json(std::string_view line) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, e.what());
  }
  if (!doc.is_object() || !doc.contains("messages") || !doc["messages"].is_array()) {
    throw Error(ErrorCode::kFormatError, "expected an object with a \"messages\" array");
  }
  FineTuneRecord r;
  for (const auto& m : doc["messages"]) {
    if (!m.is_object() || !m.contains("role") || !m.contains("content") || !m["role"].is_string() ||
        !m["content"].is_string()) {
      throw Error(ErrorCode::kFormatError, "message needs string \"role\" and \"content\"");
    }
    auto role = parse_role(m["role"].get<std::string>());
    if (!role) {
      throw Error(ErrorCode::kFormatError, "unknown role '" + m["role"].get<std::string>() + "'");
    }
    r.messages.push_back({*role, m["content"].get<std::string>()});
  }
  return r;
}

std::string records_to_jsonl(const std::vector<FineTuneRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r);
    out += '\n';
  }
  return out;
}

std::vector<FineTuneRecord> parse_jsonl(std::string_view content) {
  std::vector<FineTuneRecord> records;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(content)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    try {
      records.push_back(record_from_json(line));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.message());
    }
    if (auto why = validate_record(records.back())) {
      throw Error(ErrorCode::kInvalidRecord, "line " + std::to_string(line_no) + ": " + *why);
    }
  }
  return records;
}

std::size_t emit_jsonl(const std::vector<FineTuneRecord>& records,
                       const std::filesystem::path& destination) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (auto why = validate_record(records[i])) {
      throw Error(ErrorCode::kInvalidRecord, "record " + std::to_string(i) + ": " + *why);
    }
  }
  io::write_file_atomic(destination, records_to_jsonl(records));
  return records.size();
}

// --- datasets ---------------------------------------------------------------

namespace {

[[noreturn]] void format_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kFormatError, "line " + std::to_string(line) + ": " + what);
}

std::optional<Label> parse_label_text(std::string_view raw, std::size_t line,
                                      std::string_view column) {
  auto v = io::trim(raw);
  if (v.empty()) return std::nullopt;
  if (v == "1") return Label::kPositive;
  if (v == "0") return Label::kNegative;
  format_error(line, "column " + std::string(column) + " must be 0, 1 or empty, got '" + v + "'");
}

std::optional<Label> parse_label_json(const nlohmann::json& v, std::size_t line,
                                      std::string_view column) {
  if (v.is_null()) return std::nullopt;
  if (v.is_boolean()) return v.get<bool>() ? Label::kPositive : Label::kNegative;
  if (v.is_number_integer()) {
    auto n = v.get<long long>();
    if (n == 1) return Label::kPositive;
    if (n == 0) return Label::kNegative;
  }
  if (v.is_string()) return parse_label_text(v.get<std::string>(), line, column);
  format_error(line, "column " + std::string(column) + " must be 0, 1 or absent");
}

void finish_sample(LabeledSample& s, std::size_t line, std::unordered_set<std::string>& ids) {
  if (s.id.empty()) format_error(line, "empty id");
  if (!io::is_valid_utf8(s.id) || !io::is_valid_utf8(s.text)) {
    format_error(line, "text is not valid UTF-8");
  }
  s.text = io::trim(s.text);
  if (s.text.empty()) format_error(line, "empty text for id '" + s.id + "'");
  if (!ids.insert(s.id).second) format_error(line, "duplicate id '" + s.id + "'");
}

std::vector<LabeledSample> parse_jsonl_dataset(std::string_view content) {
  std::vector<LabeledSample> out;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(content)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      format_error(line_no, e.what());
    }
    if (!doc.is_object()) format_error(line_no, "expected a JSON object");
    LabeledSample s;
    if (!doc.contains("id")) format_error(line_no, "missing \"id\"");
    const auto& id = doc["id"];
    if (id.is_string()) {
      s.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
      s.id = std::to_string(id.get<long long>());
    } else {
      format_error(line_no, "\"id\" must be a string or integer");
    }
    if (!doc.contains("text") || !doc["text"].is_string()) {
      format_error(line_no, "missing string \"text\"");
    }
    s.text = doc["text"].get<std::string>();
    for (Trait t : kAllTraits) {
      auto col = label_column(t);
      if (doc.contains(col)) s.labels[t] = parse_label_json(doc[col], line_no, col);
    }
    finish_sample(s, line_no, ids);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<LabeledSample> parse_delimited_dataset(std::string_view content) {
  auto first_line = content.substr(0, content.find('\n'));
  const char delimiter = first_line.find('\t') != std::string_view::npos ? '\t' : ',';
  auto rows = io::parse_delimited(content, delimiter);
  if (rows.empty()) return {};

  const auto& header = rows.front();
  std::optional<std::size_t> id_col, text_col;
  TraitArray<std::optional<std::size_t>> label_cols;
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    auto name = io::trim(header.fields[i]);
    if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name.erase(0, 3);
    if (name == "id") {
      id_col = i;
    } else if (name == "text") {
      text_col = i;
    } else if (name.size() == 4 && name[0] == 'c') {
      if (auto t = parse_trait(name)) label_cols[*t] = i;
    }
  }
  if (!id_col || !text_col) format_error(header.line, "header must name 'id' and 'text'");

  std::vector<LabeledSample> out;
  std::unordered_set<std::string> ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != header.fields.size()) {
      format_error(row.line, "expected " + std::to_string(header.fields.size()) +
                                 " fields, found " + std::to_string(row.fields.size()));
    }
    LabeledSample s;
    s.id = io::trim(row.fields[*id_col]);
    s.text = row.fields[*text_col];
    for (Trait t : kAllTraits) {
      if (auto c = label_cols[t]) {
        s.labels[t] = parse_label_text(row.fields[*c], row.line, label_column(t));
      }
    }
    finish_sample(s, row.line, ids);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<LabeledSample> parse_dataset(std::string_view content) {
  auto start = content.find_first_not_of(" \t\r\n");
  if (start == std::string_view::npos) {
    throw Error(ErrorCode::kEmptyDataset, "dataset has no rows");
  }
  auto samples =
      content[start] == '{' ? parse_jsonl_dataset(content) : parse_delimited_dataset(content);
  if (samples.empty()) throw Error(ErrorCode::kEmptyDataset, "dataset has no rows");
  return samples;
}

std::vector<LabeledSample> read_dataset(const std::filesystem::path& path) {
  try {
    return parse_dataset(io::read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIoFailure) throw;
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

LoadedDataset load_friends_persona(const std::filesystem::path& path) {
  auto samples = read_dataset(path);
  for (auto& s : samples) {
    s.text = clean_scene(s.text);
    if (s.text.empty()) {
      throw Error(ErrorCode::kFormatError,
                  path.string() + ": sample '" + s.id + "' is empty after cleaning");
    }
  }
  LoadedDataset out{std::move(samples), {}};
  out.stats = compute_stats(out.samples);
  return out;
}

LoadedDataset load_essays(const std::filesystem::path& path, bool balance, std::uint64_t seed) {
  auto samples = read_dataset(path);
  if (balance) samples = balance_labels(std::move(samples), seed);
  LoadedDataset out{std::move(samples), {}};
  out.stats = compute_stats(out.samples);
  return out;
}

std::vector<LabeledSample> balance_labels(std::vector<LabeledSample> samples, std::uint64_t seed) {
  for (Trait t : kAllTraits) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (auto l = samples[i].label(t)) (*l == Label::kPositive ? pos : neg).push_back(i);
    }
    auto& majority = pos.size() > neg.size() ? pos : neg;
    const std::size_t excess =
        pos.size() > neg.size() ? pos.size() - neg.size() : neg.size() - pos.size();
    io::deterministic_shuffle(majority, io::mix_seed(seed, trait_index(t)));
    for (std::size_t k = 0; k < excess; ++k) samples[majority[k]].labels[t].reset();
  }
  std::erase_if(samples, [](const LabeledSample& s) {
    return std::none_of(kAllTraits.begin(), kAllTraits.end(),
                        [&](Trait t) { return s.label(t).has_value(); });
  });
  return samples;
}

std::string samples_to_jsonl(const std::vector<LabeledSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    ordered_json doc;
    doc["id"] = s.id;
    doc["text"] = s.text;
    for (Trait t : kAllTraits) {
      if (auto l = s.label(t)) doc[label_column(t)] = *l == Label::kPositive ? 1 : 0;
    }
    out += doc.dump();
    out += '\n';
  }
  return out;
}

}  // namespace teamforge
