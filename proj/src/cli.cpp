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

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "teamforge/classifier.hpp"
#include "teamforge/corpus.hpp"
#include "teamforge/eval.hpp"
#include "teamforge/io.hpp"
#include "teamforge/team.hpp"

#ifndef TEAMFORGE_VERSION
#define TEAMFORGE_VERSION "0.0.0"
#endif

namespace teamforge::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

int exit_code_for(ErrorCode code) {
  if (code == ErrorCode::kUsage) return kUsageError;
  if (is_backend_error(code)) return kBackendError;
  return kDomainError;
}

namespace {

struct Common {
  std::optional<std::string> config_path;
  ConfigOverrides overrides;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  const EnvLookup& env;
  const Sleeper& sleeper;
  Common common;

  Config config() const {
    std::optional<std::string> file;
    if (common.config_path) {
      file = io::read_file(*common.config_path);
    } else if (auto p = default_config_path(env); p && fs::exists(*p)) {
      file = io::read_file(*p);
    }
    return resolve_config(common.overrides, env, file);
  }
};

void add_common(CLI::App* sub, Common& c, bool backend_options) {
  sub->set_version_flag("--version", TEAMFORGE_VERSION);
  sub->add_option("--config", c.config_path, "Config file (JSON)");
  sub->add_option("--seed", c.overrides.seed, "Seed for shuffling and sampling (default 42)");
  if (!backend_options) return;
  sub->add_option("--backend", c.overrides.backend, "Chat backend")
      ->check(CLI::IsMember({"mock", "real"}));
  sub->add_option("--model", c.overrides.model_id, "Model identifier");
  sub->add_option("--api-url", c.overrides.api_url, "Chat-completions endpoint URL");
  sub->add_option("--max-attempts", c.overrides.max_attempts, "Attempts per request")
      ->check(CLI::PositiveNumber);
  sub->add_option("--parallel", c.overrides.max_parallel, "Concurrent requests")
      ->check(CLI::PositiveNumber);
}

std::vector<Trait> parse_traits(const std::vector<std::string>& names) {
  std::vector<Trait> traits;
  for (const auto& n : names) {
    auto t = parse_trait(n);
    if (!t) throw Error(ErrorCode::kUsage, "unknown trait '" + n + "'");
    if (std::find(traits.begin(), traits.end(), *t) == traits.end()) traits.push_back(*t);
  }
  std::sort(traits.begin(), traits.end(),
            [](Trait a, Trait b) { return trait_index(a) < trait_index(b); });
  return traits;
}

std::string render_stats(const DatasetStats& stats) {
  std::string out = "Personality        Neg.   Pos.\n";
  for (Trait t : kAllTraits) {
    char line[96];
    std::snprintf(line, sizeof line, "%-18s %-6zu %zu\n", std::string(trait_name(t)).c_str(),
                  stats.negative[t], stats.positive[t]);
    out += line;
  }
  out += "samples: " + std::to_string(stats.total) + "\n";
  return out;
}

std::optional<std::string> resolve_timestamp(const std::optional<std::string>& flag,
                                             const EnvLookup& env) {
  std::optional<std::time_t> when;
  if (flag) {
    if (*flag != "now") return *flag;
    when = std::time(nullptr);
  } else if (auto epoch = env("SOURCE_DATE_EPOCH")) {
    try {
      when = static_cast<std::time_t>(std::stoll(*epoch));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "SOURCE_DATE_EPOCH must be an integer");
    }
  }
  if (!when) return std::nullopt;
  std::tm tm{};
  gmtime_r(&*when, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

std::string safe_file_stem(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "slot";
  return out;
}

// --- prepare ----------------------------------------------------------------

struct PrepareArgs {
  std::string input;
  std::string out;
  std::string dataset = "friends";
  bool balance = false;
};

int do_prepare(const Context& ctx, const PrepareArgs& a) {
  const auto config = ctx.config();
  auto loaded = a.dataset == "essays" ? load_essays(a.input, a.balance, config.seed)
                                      : load_friends_persona(a.input);
  if (a.balance && a.dataset != "essays") {
    loaded.samples = balance_labels(std::move(loaded.samples), config.seed);
    loaded.stats = compute_stats(loaded.samples);
  }
  io::write_file_atomic(a.out, samples_to_jsonl(loaded.samples));
  ctx.out << render_stats(loaded.stats) << "seed: " << config.seed << "\n";
  return kOk;
}

// --- export-finetune --------------------------------------------------------

struct ExportArgs {
  std::string input;
  std::string out_dir;
  std::vector<std::string> traits;
  bool merged = false;
  double train_fraction = kDefaultTrainFraction;
  std::optional<std::string> system_prompt_file;
  std::optional<std::string> user_template_file;
};

int do_export(const Context& ctx, const ExportArgs& a) {
  const auto config = ctx.config();
  const auto samples = read_dataset(a.input);
  const auto traits = a.traits.empty() ? std::vector<Trait>(kAllTraits.begin(), kAllTraits.end())
                                       : parse_traits(a.traits);
  PromptTemplates templates;
  if (a.system_prompt_file) templates.system = io::trim(io::read_file(*a.system_prompt_file));
  if (a.user_template_file) templates.user = io::trim(io::read_file(*a.user_template_file));

  struct TraitOutput {
    Trait trait;
    std::vector<FineTuneRecord> train, val;
  };
  std::vector<TraitOutput> outputs;
  for (Trait t : traits) {
    std::vector<LabeledSample> labeled;
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(labeled),
                 [t](const LabeledSample& s) { return s.label(t).has_value(); });
    TraitOutput o{t, {}, {}};
    if (labeled.empty()) {
      ctx.err << "warning: no samples labeled for " << trait_code(t) << "; skipped\n";
    } else {
      auto split = split_train_val(labeled, config.seed, a.train_fraction);
      for (const auto& s : split.train) o.train.push_back(make_finetune_record(s, t, templates));
      for (const auto& s : split.val) o.val.push_back(make_finetune_record(s, t, templates));
    }
    outputs.push_back(std::move(o));
  }
  const bool any = std::any_of(outputs.begin(), outputs.end(), [](const TraitOutput& o) {
    return !o.train.empty() || !o.val.empty();
  });
  if (!any) throw Error(ErrorCode::kEmptyDataset, "no labeled samples for the selected traits");

  fs::create_directories(a.out_dir);
  ordered_json manifest;
  manifest["seed"] = config.seed;
  manifest["train_fraction"] = a.train_fraction;
  manifest["merged"] = a.merged;
  manifest["traits"] = ordered_json::array();
  manifest["files"] = ordered_json::array();

  std::vector<std::pair<fs::path, std::vector<FineTuneRecord>>> files;
  std::vector<FineTuneRecord> merged_train, merged_val;
  for (auto& o : outputs) {
    const std::string code(trait_code(o.trait));
    manifest["traits"].push_back({{"trait", code},
                                  {"records", o.train.size() + o.val.size()},
                                  {"train", o.train.size()},
                                  {"val", o.val.size()}});
    if (a.merged) {
      merged_train.insert(merged_train.end(), o.train.begin(), o.train.end());
      merged_val.insert(merged_val.end(), o.val.begin(), o.val.end());
    } else if (!o.train.empty() || !o.val.empty()) {
      files.emplace_back(fs::path(a.out_dir) / (code + ".train.jsonl"), std::move(o.train));
      files.emplace_back(fs::path(a.out_dir) / (code + ".val.jsonl"), std::move(o.val));
    }
  }
  if (a.merged) {
    files.emplace_back(fs::path(a.out_dir) / "merged.train.jsonl", std::move(merged_train));
    files.emplace_back(fs::path(a.out_dir) / "merged.val.jsonl", std::move(merged_val));
  }
  for (const auto& [path, records] : files) {
    const auto n = emit_jsonl(records, path);
    manifest["files"].push_back({{"path", path.filename().string()}, {"lines", n}});
    ctx.out << path.string() << ": " << n << " records\n";
  }
  io::write_file_atomic(fs::path(a.out_dir) / "manifest.json", manifest.dump(2) + "\n");
  return kOk;
}

// --- classify ---------------------------------------------------------------

struct ClassifyArgs {
  std::string trait;
  std::string input;
  std::string out;
  bool strip_prompt_prefix = false;
};

int do_classify(const Context& ctx, const ClassifyArgs& a) {
  const auto config = ctx.config();
  const Trait trait = parse_traits({a.trait}).front();
  const auto samples = read_dataset(a.input);
  std::vector<TextSample> texts;
  texts.reserve(samples.size());
  for (const auto& s : samples) texts.push_back({s.id, s.text});

  auto client = make_client(config, ctx.sleeper);
  ClassifyOptions options;
  options.model_id = config.model_id;
  options.temperature = config.temperature;
  options.max_output_tokens = config.max_output_tokens;
  options.strip_prompt_prefix = a.strip_prompt_prefix;
  const auto results = classify_batch(*client, trait, texts, config.retry.max_parallel, options);

  std::string body;
  std::size_t pos = 0, neg = 0, unparseable = 0, failed = 0;
  for (const auto& r : results) {
    auto line = ordered_json::parse(result_to_json(r));
    line["backend"] = config.backend;
    line["model"] = config.model_id;
    body += line.dump() + "\n";
    if (r.failed()) {
      ++failed;
    } else if (r.predicted == Verdict::kPositive) {
      ++pos;
    } else if (r.predicted == Verdict::kNegative) {
      ++neg;
    } else {
      ++unparseable;
    }
  }
  io::write_file_atomic(a.out, body);
  ctx.out << "classified " << results.size() << " samples for " << trait_code(trait) << ": " << pos
          << " Yes, " << neg << " No, " << unparseable << " unparseable, " << failed << " failed\n";
  if (failed == results.size()) {
    ctx.err << "error: every request failed; first error: " << *results.front().error << "\n";
    return kBackendError;
  }
  if (failed > 0) ctx.err << "warning: " << failed << " sample(s) failed and will be excluded\n";
  return kOk;
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string pred;
  std::string gold;
  std::vector<std::string> traits;
  std::string report;
  std::string label = "custom";
  std::optional<std::string> compare;
  double tolerance = 0.05;
  std::optional<std::string> table;
  std::optional<std::string> timestamp;
  bool strict = false;
};

int do_evaluate(const Context& ctx, const EvaluateArgs& a) {
  const auto config = ctx.config();
  const auto content = io::read_file(a.pred);
  std::vector<ClassificationResult> predictions;
  std::string backend = "unknown", model = config.model_id;
  std::size_t line_no = 0, start = 0;
  while (start < content.size()) {
    auto nl = content.find('\n', start);
    auto line = std::string_view(content).substr(
        start, nl == std::string::npos ? std::string::npos : nl - start);
    start = nl == std::string::npos ? content.size() : nl + 1;
    ++line_no;
    if (io::trim(line).empty()) continue;
    try {
      predictions.push_back(result_from_json(line));
      if (predictions.size() == 1) {
        auto doc = nlohmann::json::parse(line);
        backend = doc.value("backend", backend);
        model = doc.value("model", model);
      }
    } catch (const Error& e) {
      throw Error(e.code(), a.pred + ": line " + std::to_string(line_no) + ": " + e.message());
    }
  }
  if (predictions.empty()) throw Error(ErrorCode::kEmptyDataset, a.pred + ": no predictions");

  std::vector<Trait> traits;
  if (a.traits.empty()) {
    std::set<std::size_t> seen;
    for (const auto& p : predictions) seen.insert(trait_index(p.trait));
    for (auto i : seen) traits.push_back(kAllTraits[i]);
  } else {
    traits = parse_traits(a.traits);
  }

  const auto gold = read_dataset(a.gold);
  MetricsReport report;
  report.model_label = a.label;
  report.metadata =
      RunMetadata{backend, model, config.seed, resolve_timestamp(a.timestamp, ctx.env)};
  for (Trait t : traits) {
    std::vector<ClassificationResult> subset;
    std::copy_if(predictions.begin(), predictions.end(), std::back_inserter(subset),
                 [t](const ClassificationResult& r) { return r.trait == t; });
    if (subset.empty()) {
      ctx.err << "warning: no predictions for " << trait_code(t) << "\n";
      continue;
    }
    report.set(metrics_from_counts(confusion(subset, gold_labels(gold, t)), t));
  }

  std::optional<Comparison> comparison;
  std::vector<MetricsReport> shown = {report};
  if (a.compare) {
    const auto& ref = *a.compare == "table3-baseline" ? reference_table3().baseline
                                                      : reference_table3().fine_tuned;
    comparison = compare_to_reference(report, ref, a.tolerance);
    MetricsReport ref_view = ref;
    ref_view.model_label = "reference:" + ref.model_label;
    shown.push_back(std::move(ref_view));
  }

  io::write_file_atomic(a.report, report_to_json(report, comparison));
  const auto table = render_table(shown);
  if (a.table) io::write_file_atomic(*a.table, table);
  ctx.out << table;
  for (const auto& m : report.traits) {
    if (m.counts && m.counts->excluded > 0) {
      ctx.out << trait_code(m.trait) << ": " << m.counts->excluded
              << " excluded (unparseable or failed)\n";
    }
  }
  if (comparison) {
    ctx.out << "comparison against " << *a.compare << " at tolerance " << a.tolerance << ": "
            << (comparison->pass ? "PASS" : "FAIL") << "\n";
    if (a.strict && !comparison->pass) return kDomainError;
  }
  return kOk;
}

// --- team-analyze -----------------------------------------------------------

struct TeamArgs {
  std::string team;
  std::optional<std::string> pattern;
  std::string report;
  double threshold = kDefaultThreshold;
};

int do_team_analyze(const Context& ctx, const TeamArgs& a) {
  const auto config = ctx.config();
  const auto specs = team_from_json(io::read_file(a.team), fs::path(a.team).parent_path());
  const auto pattern = a.pattern ? pattern_from_json(io::read_file(*a.pattern)) : default_pattern();

  auto client = make_client(config, ctx.sleeper);
  ProfileOptions options;
  options.classify.model_id = config.model_id;
  options.classify.temperature = config.temperature;
  options.classify.max_output_tokens = config.max_output_tokens;
  options.parallelism = config.retry.max_parallel;

  std::vector<TeamMember> members;
  for (const auto& spec : specs) {
    TeamMember m{spec.member_id, spec.role,
                 profile_member(*client, spec.member_id, spec.texts, options)};
    for (const auto& w : m.profile.warnings) {
      ctx.err << "warning: " << spec.member_id << ": " << w << "\n";
    }
    members.push_back(std::move(m));
  }
  const auto gaps = analyze_gaps(members, pattern, a.threshold);
  io::write_file_atomic(a.report, gap_report_to_json(gaps, members));

  ctx.out << "filled " << gaps.filled.size() << " of " << pattern.size() << " slots\n";
  for (const auto& [slot, member] : gaps.filled)
    ctx.out << "  " << slot << " <- " << member << "\n";
  for (const auto& s : gaps.unfilled_slots) ctx.out << "  gap: " << s.slot_id << "\n";
  for (const auto& n : gaps.diversity_notes) ctx.out << "  note: " << n << "\n";
  return kOk;
}

// --- persona-gen ------------------------------------------------------------

struct PersonaArgs {
  std::string gaps;
  std::string out_dir;
  std::optional<std::string> template_file;
  std::optional<double> threshold;
};

int do_persona_gen(const Context& ctx, const PersonaArgs& a) {
  const auto gaps = gap_report_from_json(io::read_file(a.gaps));
  const std::string tmpl =
      a.template_file ? io::read_file(*a.template_file) : std::string(kDefaultPersonaTemplate);
  const double threshold = a.threshold.value_or(gaps.threshold);

  std::vector<std::pair<fs::path, std::string>> files;
  std::set<std::string> stems;
  for (const auto& slot : gaps.unfilled_slots) {
    auto persona = synthesize_persona(slot, default_descriptors(), tmpl, threshold);
    auto stem = safe_file_stem(slot.slot_id);
    while (!stems.insert(stem).second) stem += "_";
    files.emplace_back(fs::path(a.out_dir) / (stem + ".json"), persona_to_json(persona));
  }
  fs::create_directories(a.out_dir);
  for (const auto& [path, body] : files) {
    io::write_file_atomic(path, body);
    ctx.out << path.string() << "\n";
  }
  if (files.empty()) ctx.out << "no unfilled slots; nothing to generate\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env, const Sleeper& sleeper) {
  CLI::App app{"teamforge: personality corpora, trait classification and team gap analysis",
               "teamforge"};
  app.set_version_flag("--version", TEAMFORGE_VERSION);
  app.require_subcommand(1);

  Context ctx{out, err, env, sleeper, {}};

  PrepareArgs prepare;
  auto* prep = app.add_subcommand("prepare", "Clean and validate a labeled dataset");
  add_common(prep, ctx.common, false);
  prep->add_option("--input", prepare.input, "Raw dataset (CSV, TSV or JSON Lines)")->required();
  prep->add_option("--out", prepare.out, "Prepared dataset (JSON Lines)")->required();
  prep->add_option("--dataset", prepare.dataset, "Corpus kind")
      ->check(CLI::IsMember({"friends", "essays"}));
  prep->add_flag("--balance", prepare.balance, "Down-sample each trait's majority class");

  ExportArgs exp;
  auto* expc = app.add_subcommand("export-finetune", "Write fine-tuning JSON Lines files");
  add_common(expc, ctx.common, false);
  expc->add_option("--input", exp.input, "Prepared dataset")->required();
  expc->add_option("--out-dir", exp.out_dir, "Output directory")->required();
  expc->add_option("--trait", exp.traits, "Trait(s) to export (default: all)");
  expc->add_flag("--merged", exp.merged, "One train and one val file across traits");
  expc->add_option("--train-fraction", exp.train_fraction, "Training share (default 0.8)");
  expc->add_option("--system-prompt-file", exp.system_prompt_file, "System message text");
  expc->add_option("--user-template-file", exp.user_template_file,
                   "User message template with {trait} and {text}");

  ClassifyArgs cls;
  auto* clsc = app.add_subcommand("classify", "Ask the model a yes/no trait question per text");
  add_common(clsc, ctx.common, true);
  clsc->add_option("--trait", cls.trait, "Trait code or name")->required();
  clsc->add_option("--input", cls.input, "Texts (any dataset format)")->required();
  clsc->add_option("--out", cls.out, "Results (JSON Lines)")->required();
  clsc->add_flag("--strip-prompt-prefix", cls.strip_prompt_prefix,
                 "Drop the leading 'Prompt: ' from the question");

  EvaluateArgs ev;
  auto* evc = app.add_subcommand("evaluate", "Precision, recall and F1 against gold labels");
  add_common(evc, ctx.common, false);
  evc->add_option("--pred", ev.pred, "Results from classify")->required();
  evc->add_option("--gold", ev.gold, "Labeled dataset")->required();
  evc->add_option("--trait", ev.traits, "Trait(s) to score (default: all predicted)");
  evc->add_option("--report", ev.report, "Metrics report (JSON)")->required();
  evc->add_option("--label", ev.label, "Model label: baseline, fine-tuned or custom");
  evc->add_option("--compare", ev.compare, "Reference table")
      ->check(CLI::IsMember({"table3-baseline", "table3-finetuned"}));
  evc->add_option("--tolerance", ev.tolerance, "Allowed absolute difference (default 0.05)")
      ->check(CLI::NonNegativeNumber);
  evc->add_option("--table", ev.table, "Also write the text table here");
  evc->add_option("--timestamp", ev.timestamp, "Run timestamp, or 'now'");
  evc->add_flag("--strict", ev.strict, "Exit 1 when the comparison fails");

  TeamArgs team;
  auto* teamc = app.add_subcommand("team-analyze", "Profile members and find composition gaps");
  add_common(teamc, ctx.common, true);
  teamc->add_option("--team", team.team, "Team file (JSON)")->required();
  teamc->add_option("--pattern", team.pattern, "Pattern file (JSON; default pattern if omitted)");
  teamc->add_option("--report", team.report, "Gap report (JSON)")->required();
  teamc->add_option("--threshold", team.threshold, "Trait positivity threshold")
      ->check(CLI::Range(0.0, 1.0));

  PersonaArgs persona;
  auto* perc = app.add_subcommand("persona-gen", "Write an agent persona per unfilled slot");
  add_common(perc, ctx.common, false);
  perc->add_option("--gaps", persona.gaps, "Gap report from team-analyze")->required();
  perc->add_option("--out", persona.out_dir, "Output directory")->required();
  perc->add_option("--template", persona.template_file, "Persona prompt template file");
  perc->add_option("--threshold", persona.threshold, "Override the report's threshold")
      ->check(CLI::Range(0.0, 1.0));

  if (!args.empty() && !args.front().starts_with("-") &&
      app.get_subcommand_no_throw(args.front()) == nullptr) {
    err << "error: unknown subcommand '" << args.front() << "'\n\n" << app.help();
    return kUsageError;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  try {
    if (prep->parsed()) return do_prepare(ctx, prepare);
    if (expc->parsed()) return do_export(ctx, exp);
    if (clsc->parsed()) return do_classify(ctx, cls);
    if (evc->parsed()) return do_evaluate(ctx, ev);
    if (teamc->parsed()) return do_team_analyze(ctx, team);
    if (perc->parsed()) return do_persona_gen(ctx, persona);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: IoFailure: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  err << app.help();
  return kUsageError;
}

}  // namespace teamforge::cli
