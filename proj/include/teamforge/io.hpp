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
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace teamforge::io {

/// Reads the whole file. Throws Error(kIoFailure).
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so a failed
/// write never leaves partial output behind. Throws Error(kIoFailure).
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

bool is_valid_utf8(std::string_view s);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

/// One parsed row of a delimiter-separated file with the 1-based line number
/// on which the row starts.
struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// RFC 4180 style reader: quoted fields may contain delimiters, doubled quotes
/// and line breaks. Blank lines are skipped. Throws Error(kFormatError) on an
/// unterminated quote.
std::vector<CsvRow> parse_delimited(std::string_view content, char delimiter);

/// Uniform draws that are reproducible across standard library
/// implementations (std::uniform_int_distribution is not).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Fisher-Yates with `SeededRng`.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::uint64_t seed) {
  SeededRng rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace teamforge::io
