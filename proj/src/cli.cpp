// Copyright 2026 The Rulegraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rulegraph/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "rulegraph/bench.hpp"

namespace rulegraph::cli {
namespace {

struct Options {
  std::string task;
  std::string config_path;
  std::string trace_path;
  std::string dataset_path;
  std::string report_path;
  std::string out_path;
  std::string run_id;
  int concurrency = 0;
  bool deterministic = false;
};

AppConfig resolve_config(const Options& o, const EnvLookup& env) {
  AppConfig c = o.config_path.empty() ? AppConfig{} : load_config(o.config_path);
  apply_env(c, env);
  if (o.deterministic) c.run.deterministic = true;
  if (!o.run_id.empty()) c.run.run_id = o.run_id;
  if (o.concurrency > 0) c.run.concurrency = o.concurrency;
  c.run.validate();
  if (c.run.deterministic && c.provider.kind == ProviderSettings::Kind::kLive) {
    throw Error(ErrorKind::kInvalidConfig,
                "--deterministic cannot be combined with a live provider");
  }
  return c;
}

std::string read_task(const std::string& arg) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(arg, ec)) return arg;
  std::ifstream in(arg);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cmd(const Options& o, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  const AppConfig config = resolve_config(o, env);
  auto provider = make_provider(config.provider);
  const std::string task = read_task(o.task);
  try {
    RunOutcome outcome = execute_task(*provider, task, config.run);
    if (!o.trace_path.empty()) write_trace_file(outcome.trace, o.trace_path);
    out << outcome.final.answer_text << "\n";
    err << "run " << config.run.run_id << ": " << outcome.provider_calls
        << " provider calls, " << outcome.graph_final.subtask_ids().size()
        << " subtasks in the final graph\n";
    return kOk;
  } catch (const RunFailure& e) {
    if (!o.trace_path.empty()) write_trace_file(e.trace(), o.trace_path);
    throw;
  }
}

int bench_cmd(const Options& o, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  const AppConfig config = resolve_config(o, env);
  auto provider = make_provider(config.provider);
  const std::vector<Sample> dataset = load_dataset(o.dataset_path);
  const std::string name = std::filesystem::path(o.dataset_path).stem().string();
  const ScoreReport report = run_benchmark(name, dataset, *provider, config.run);
  if (!o.report_path.empty()) {
    std::ofstream file(o.report_path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::kSinkUnavailable, "cannot write " + o.report_path);
    file << to_json(report).dump(2) << "\n";
  }
  out << format_table(report);
  int failures = 0;
  for (const SampleReport& r : report.per_sample) failures += r.error_kind ? 1 : 0;
  if (failures > 0) err << failures << " sample(s) failed; scored as 0\n";
  return kOk;
}

int export_dot_cmd(const Options& o, std::ostream& out) {
  std::ifstream in(o.trace_path);
  if (!in) throw Error(ErrorKind::kMalformedRecord, "cannot open trace " + o.trace_path);
  const auto [graph, memberships] = graph_from_trace(read_trace(in));
  const std::string dot = export_dot(graph, memberships);
  if (o.out_path.empty()) {
    out << dot;
  } else {
    std::ofstream file(o.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::kSinkUnavailable, "cannot write " + o.out_path);
    file << dot;
  }
  return kOk;
}

int validate_cmd(const Options& o, std::ostream& out, const EnvLookup& env) {
  const AppConfig config = resolve_config(o, env);
  if (config.provider.kind == ProviderSettings::Kind::kMock) {
    (void)make_provider(config.provider);
  }
  const RunConfig& r = config.run;
  out << "config ok: provider="
      << (config.provider.kind == ProviderSettings::Kind::kLive ? "live" : "mock")
      << " k_rules=" << r.k_rules << " max_reprocess=" << r.max_reprocess
      << " max_depth=" << r.max_depth << " max_chain=" << r.max_chain
      << " threshold=" << to_string(r.threshold)
      << " cluster_mode=" << to_string(r.cluster_mode)
      << " catalog=" << r.catalog.names().size() << " domains\n";
  return kOk;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidConfig:
    case ErrorKind::kMissingSlot:
      return kConfig;
    case ErrorKind::kPlanningFailure:
      return kPlanning;
    case ErrorKind::kAllPathsFailed:
      return kAllPathsFailed;
    case ErrorKind::kProviderFailure:
    case ErrorKind::kTimeout:
    case ErrorKind::kRateLimited:
    case ErrorKind::kTransportError:
    case ErrorKind::kScriptMiss:
    case ErrorKind::kMalformedFusion:
      return kProvider;
    case ErrorKind::kSinkUnavailable:
      return kIo;
    case ErrorKind::kMalformedRecord:
    case ErrorKind::kMissingField:
    case ErrorKind::kEmptyDataset:
      return kData;
    default:
      return kRunFailed;
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const EnvLookup& env) {
  CLI::App app{"Rule-driven multi-agent task graph runner", "rulegraph"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Execute one task");
  run->add_option("--task", o.task, "Task text, or a file containing it")->required();
  run->add_option("--config", o.config_path, "Config file");
  run->add_option("--trace", o.trace_path, "Write the run trace here");
  run->add_option("--run-id", o.run_id, "Run identifier used in provider keys");
  run->add_option("--concurrency", o.concurrency, "Nodes processed at once");
  run->add_flag("--deterministic", o.deterministic, "Zero timestamps, refuse live providers");

  auto* bench = app.add_subcommand("bench", "Score a dataset");
  bench->add_option("--dataset", o.dataset_path, "JSON-lines dataset")->required();
  bench->add_option("--config", o.config_path, "Config file");
  bench->add_option("--report", o.report_path, "Write the JSON report here");
  bench->add_option("--concurrency", o.concurrency, "Nodes processed at once");
  bench->add_flag("--deterministic", o.deterministic, "Zero timestamps, refuse live providers");

  auto* dot = app.add_subcommand("export-dot", "Render the final graph of a trace");
  dot->add_option("--trace", o.trace_path, "Trace file")->required();
  dot->add_option("--out", o.out_path, "Write DOT here instead of stdout");

  auto* validate = app.add_subcommand("validate-config", "Check a config and its catalog");
  validate->add_option("--config", o.config_path, "Config file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (run->parsed()) return run_cmd(o, out, err, env);
    if (bench->parsed()) return bench_cmd(o, out, err, env);
    if (dot->parsed()) return export_dot_cmd(o, out);
    if (validate->parsed()) return validate_cmd(o, out, env);
  } catch (const Error& e) {
    err << "error [" << kind_name(e.kind()) << "]: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRunFailed;
  }
  return kUsage;
}

}  // namespace rulegraph::cli
