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

#include "teamforge/cli.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "support/fixtures.hpp"
#include "teamforge/eval.hpp"
#include "teamforge/io.hpp"

namespace teamforge {
namespace {

using testing::TempDir;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
  std::ostringstream out, err;
  EnvLookup lookup = [env = std::move(env)](std::string_view name) -> std::optional<std::string> {
    auto it = env.find(std::string(name));
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  const int code = cli::run(args, out, err, lookup, [](std::chrono::milliseconds) {});
  return {code, out.str(), err.str()};
}

std::size_t line_count(const std::filesystem::path& p) {
  const auto s = io::read_file(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

const std::string kEssays = std::string(TEAMFORGE_TEST_DATA) + "/essays_40.csv";

TEST(Cli, ExitCodeMapping) {
  EXPECT_EQ(cli::exit_code_for(ErrorCode::kFormatError), 1);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::kUsage), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::kAuthError), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::kTransportError), 3);
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  auto r = run_cli({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("prepare"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(run_cli({}).code, 2);
}

TEST(Cli, HelpAndVersionEverywhere) {
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"--version"}).code, 0);
  for (const char* sub :
       {"prepare", "export-finetune", "classify", "evaluate", "team-analyze", "persona-gen"}) {
    auto help = run_cli({sub, "--help"});
    EXPECT_EQ(help.code, 0) << sub;
    EXPECT_NE(help.out.find(sub), std::string::npos) << sub;
    auto version = run_cli({sub, "--version"});
    EXPECT_EQ(version.code, 0) << sub;
    EXPECT_FALSE(version.out.empty()) << sub;
  }
}

TEST(Cli, MissingRequiredFlagIsUsageError) {
  EXPECT_EQ(run_cli({"prepare", "--input", "x.csv"}).code, 2);
}

TEST(Cli, PrepareFriends) {
  TempDir dir;
  io::write_file_atomic(dir / "friends.csv", testing::friends_fixture_csv());
  auto r = run_cli({"prepare", "--input", (dir / "friends.csv").string(), "--out",
                    (dir / "clean.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(dir / "clean.jsonl"), 711u);
  EXPECT_NE(r.out.find("Agreeableness      306    405"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("seed: 42"), std::string::npos);
}

TEST(Cli, PrepareMissingFileIsDomainError) {
  TempDir dir;
  auto r = run_cli(
      {"prepare", "--input", (dir / "nope.csv").string(), "--out", (dir / "o.jsonl").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("IoFailure"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir / "o.jsonl"));
}

TEST(Cli, ExportFinetuneCanonicalExt) {
  TempDir dir;
  io::write_file_atomic(dir / "friends.csv", testing::friends_fixture_csv());
  ASSERT_EQ(run_cli({"prepare", "--input", (dir / "friends.csv").string(), "--out",
                     (dir / "clean.jsonl").string()})
                .code,
            0);
  auto r = run_cli({"export-finetune", "--input", (dir / "clean.jsonl").string(), "--out-dir",
                    (dir / "ft").string(), "--trait", "EXT"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(dir / "ft" / "EXT.train.jsonl"), 568u);
  EXPECT_EQ(line_count(dir / "ft" / "EXT.val.jsonl"), 143u);
  auto manifest = nlohmann::json::parse(io::read_file(dir / "ft" / "manifest.json"));
  EXPECT_EQ(manifest["seed"], 42);
  EXPECT_EQ(manifest["traits"][0]["train"], 568);
  EXPECT_EQ(manifest["traits"][0]["val"], 143);
  for (const auto& rec : parse_jsonl(io::read_file(dir / "ft" / "EXT.val.jsonl"))) {
    EXPECT_FALSE(validate_record(rec).has_value());
  }
}

TEST(Cli, ExportMergedIsAdditive) {
  TempDir dir;
  auto per = run_cli({"export-finetune", "--input", kEssays, "--out-dir", (dir / "per").string()});
  ASSERT_EQ(per.code, 0) << per.err;
  auto merged = run_cli(
      {"export-finetune", "--input", kEssays, "--out-dir", (dir / "m").string(), "--merged"});
  ASSERT_EQ(merged.code, 0) << merged.err;
  std::size_t total = 0;
  for (Trait t : kAllTraits) {
    const std::string code(trait_code(t));
    total += line_count(dir / "per" / (code + ".train.jsonl"));
    total += line_count(dir / "per" / (code + ".val.jsonl"));
  }
  EXPECT_EQ(total, 5u * 40u);
  EXPECT_EQ(
      line_count(dir / "m" / "merged.train.jsonl") + line_count(dir / "m" / "merged.val.jsonl"),
      total);
}

TEST(Cli, ExportEmptyDatasetExitsOne) {
  TempDir dir;
  io::write_file_atomic(dir / "empty.jsonl", "");
  auto r = run_cli({"export-finetune", "--input", (dir / "empty.jsonl").string(), "--out-dir",
                    (dir / "ft").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("EmptyDataset"), std::string::npos) << r.err;
}

TEST(Cli, ClassifyRealWithoutKeyExitsThree) {
  TempDir dir;
  auto r = run_cli({"classify", "--trait", "AGR", "--input", kEssays, "--backend", "real", "--out",
                    (dir / "p.jsonl").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("AuthError"), std::string::npos) << r.err;
  EXPECT_FALSE(std::filesystem::exists(dir / "p.jsonl"));
}

TEST(Cli, ClassifyUnknownTraitIsUsageError) {
  TempDir dir;
  auto r = run_cli(
      {"classify", "--trait", "XYZ", "--input", kEssays, "--out", (dir / "p.jsonl").string()});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, MockPipelineIsDeterministic) {
  TempDir dir;
  auto pipeline = [&](const std::string& tag) {
    const auto clean = (dir / (tag + ".clean.jsonl")).string();
    const auto pred = (dir / (tag + ".pred.jsonl")).string();
    const auto report = (dir / (tag + ".report.json")).string();
    EXPECT_EQ(run_cli({"prepare", "--input", kEssays, "--out", clean, "--dataset", "essays"}).code,
              0);
    EXPECT_EQ(run_cli({"classify", "--trait", "CON", "--input", clean, "--out", pred}).code, 0);
    auto ev = run_cli({"evaluate", "--pred", pred, "--gold", clean, "--report", report, "--compare",
                       "table3-finetuned"});
    EXPECT_EQ(ev.code, 0) << ev.err;
    return io::read_file(report);
  };
  const auto a = pipeline("a");
  const auto b = pipeline("b");
  EXPECT_EQ(a, b);
  auto parsed = report_from_json(a);
  ASSERT_EQ(parsed.traits.size(), 1u);
  EXPECT_EQ(parsed.traits[0].trait, Trait::kConscientiousness);
  EXPECT_EQ(parsed.metadata.backend, "mock");
  EXPECT_FALSE(parsed.metadata.timestamp.has_value());
  EXPECT_NE(a.find("\"comparison\""), std::string::npos);
}

TEST(Cli, EvaluateTimestampFromEnvironment) {
  TempDir dir;
  const auto pred = (dir / "p.jsonl").string();
  ASSERT_EQ(run_cli({"classify", "--trait", "OPN", "--input", kEssays, "--out", pred}).code, 0);
  auto r = run_cli(
      {"evaluate", "--pred", pred, "--gold", kEssays, "--report", (dir / "r.json").string()},
      {{"SOURCE_DATE_EPOCH", "0"}});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(report_from_json(io::read_file(dir / "r.json")).metadata.timestamp,
            "1970-01-01T00:00:00Z");
}

TEST(Cli, TeamAnalyzeAndPersonaGen) {
  TempDir dir;
  io::write_file_atomic(dir / "team.json", R"({"members":[
    {"member_id":"ann","role":"Engineer","texts":["I am organised and reliable","hardworking always"]},
    {"member_id":"bob","role":"Developer","texts":["self-discipline matters","hello"]}]})");
  auto r = run_cli({"team-analyze", "--team", (dir / "team.json").string(), "--report",
                    (dir / "gaps.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto gaps = gap_report_from_json(io::read_file(dir / "gaps.json"));
  EXPECT_EQ(gaps.filled.at("engineer"), "ann");
  EXPECT_EQ(gaps.filled.at("developer"), "bob");
  ASSERT_EQ(gaps.unfilled_slots.size(), 2u);

  auto p = run_cli({"persona-gen", "--gaps", (dir / "gaps.json").string(), "--out",
                    (dir / "personas").string()});
  ASSERT_EQ(p.code, 0) << p.err;
  auto leader = nlohmann::json::parse(io::read_file(dir / "personas" / "leader.json"));
  EXPECT_EQ(leader["name"], "Leader Agent leader");
  EXPECT_NE(leader["system_prompt"].get<std::string>().find("sociability"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "personas" / "operator.json"));
}

TEST(Cli, ConfigFileFlag) {
  TempDir dir;
  io::write_file_atomic(dir / "cfg.json", R"({"backend":"real"})");
  auto r = run_cli({"classify", "--config", (dir / "cfg.json").string(), "--trait", "AGR",
                    "--input", kEssays, "--out", (dir / "p.jsonl").string()});
  EXPECT_EQ(r.code, 3);
}

}  // namespace
}  // namespace teamforge
