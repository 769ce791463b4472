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

#include "rulegraph/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rulegraph {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line); }

const json& field(const json& record, const char* name, std::size_t line) {
  auto it = record.find(name);
  if (it == record.end()) throw Error::missing_field(name, at_line(line));
  return *it;
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::kMalformedRecord, at_line(line) + ": " + what);
}

Sample parse_record(const json& record, std::size_t line) {
  if (!record.is_object()) malformed(line, "record must be an object");
  Sample s;
  const json& id = field(record, "id", line);
  const json& task = field(record, "task", line);
  const json& questions = field(record, "questions", line);
  const json& targets = field(record, "targets", line);
  if (!id.is_string() || id.get_ref<const std::string&>().empty()) {
    malformed(line, "id must be a non-empty string");
  }
  if (!task.is_string()) malformed(line, "task must be a string");
  s.id = id.get<std::string>();
  s.task_text = task.get<std::string>();
  if (!questions.is_array() || questions.empty()) {
    malformed(line, "questions must be a non-empty array");
  }
  for (const json& q : questions) {
    if (!q.is_string()) malformed(line, "questions must be strings");
    s.questions.push_back(q.get<std::string>());
  }
  if (!targets.is_array() || targets.size() != questions.size()) {
    malformed(line, "targets must hold one list per question");
  }
  for (const json& list : targets) {
    if (!list.is_array() || list.empty()) {
      malformed(line, "every question needs at least one target");
    }
    std::vector<std::string> answers;
    for (const json& t : list) {
      if (!t.is_string() || t.get_ref<const std::string&>().empty()) {
        malformed(line, "targets must be non-empty strings");
      }
      answers.push_back(t.get<std::string>());
    }
    s.targets.push_back(std::move(answers));
  }
  return s;
}

}  // namespace

std::vector<Sample> parse_dataset(std::istream& in) {
  std::vector<Sample> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded()) malformed(line, "not valid JSON");
    out.push_back(parse_record(record, line));
  }
  return out;
}

std::vector<Sample> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kMalformedRecord, "cannot open dataset " + path);
  return parse_dataset(in);
}

SampleScore score_sample(std::string_view output, const Sample& sample) {
  const std::string haystack = lower(output);
  SampleScore s;
  for (const auto& answers : sample.targets) {
    const bool hit = std::any_of(answers.begin(), answers.end(), [&](const std::string& t) {
      return haystack.find(lower(t)) != std::string::npos;
    });
    if (hit) ++s.correct;
  }
  const std::size_t n = sample.questions.size();
  s.score = n == 0 ? 0.0 : static_cast<double>(s.correct) / static_cast<double>(n);
  return s;
}

ScoreReport run_benchmark(std::string dataset_name, const std::vector<Sample>& dataset,
                          Provider& provider, const RunConfig& config) {
  if (dataset.empty()) throw Error(ErrorKind::kEmptyDataset, "dataset has no samples");
  const auto start = std::chrono::steady_clock::now();
  ScoreReport report;
  report.dataset_name = std::move(dataset_name);
  double total = 0.0;
  for (const Sample& sample : dataset) {
    SampleReport r;
    r.id = sample.id;
    r.questions = static_cast<int>(sample.questions.size());
    RunConfig run_config = config;
    run_config.run_id = sample.id;
    try {
      RunOutcome outcome = execute_task(provider, sample.task_text, run_config);
      const SampleScore s = score_sample(outcome.final.answer_text, sample);
      r.correct = s.correct;
      r.score = s.score;
      r.provider_calls = outcome.provider_calls;
      report.token_usage += outcome.token_usage;
    } catch (const RunFailure& e) {
      r.error_kind = std::string(kind_name(e.kind()));
      r.error_message = e.what();
      r.provider_calls = e.provider_calls();
      report.token_usage += e.token_usage();
    } catch (const Error& e) {
      r.error_kind = std::string(kind_name(e.kind()));
      r.error_message = e.what();
    }
    report.provider_calls += r.provider_calls;
    total += r.score;
    report.per_sample.push_back(std::move(r));
  }
  report.aggregate = total / static_cast<double>(dataset.size());
  if (!config.deterministic) {
    report.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
  }
  return report;
}

ordered_json to_json(const ScoreReport& report) {
  ordered_json samples = ordered_json::array();
  for (const SampleReport& r : report.per_sample) {
    ordered_json j;
    j["id"] = r.id;
    j["correct"] = r.correct;
    j["questions"] = r.questions;
    j["score"] = r.score;
    j["provider_calls"] = r.provider_calls;
    if (r.error_kind) {
      j["error"] = *r.error_kind;
      j["error_message"] = r.error_message;
    }
    samples.push_back(std::move(j));
  }
  ordered_json out;
  out["dataset_name"] = report.dataset_name;
  out["per_sample"] = std::move(samples);
  out["aggregate"] = report.aggregate;
  out["run_stats"] = {{"provider_calls", report.provider_calls},
                      {"prompt_tokens", report.token_usage.prompt_tokens},
                      {"completion_tokens", report.token_usage.completion_tokens},
                      {"wall_time_ms", report.wall_time_ms}};
  return out;
}

std::string format_table(const ScoreReport& report) {
  std::size_t id_width = 6;
  for (const SampleReport& r : report.per_sample) id_width = std::max(id_width, r.id.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(id_width)) << "sample" << "  "
      << std::right << std::setw(7) << "correct" << "  " << std::setw(6) << "score"
      << "  " << "error" << "\n";
  out << std::fixed << std::setprecision(3);
  for (const SampleReport& r : report.per_sample) {
    const std::string correct = std::to_string(r.correct) + "/" + std::to_string(r.questions);
    out << std::left << std::setw(static_cast<int>(id_width)) << r.id << "  "
        << std::right << std::setw(7) << correct << "  " << std::setw(6) << r.score
        << "  " << r.error_kind.value_or("-") << "\n";
  }
  out << std::left << std::setw(static_cast<int>(id_width)) << "mean" << "  "
      << std::right << std::setw(7) << "" << "  " << std::setw(6) << report.aggregate
      << "\n";
  out << report.dataset_name << ": " << report.per_sample.size() << " samples, "
      << report.provider_calls << " provider calls\n";
  return out.str();
}

}  // namespace rulegraph
