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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rulegraph/engine.hpp"

namespace rulegraph {

struct Sample {
  std::string id;
  std::string task_text;
  std::vector<std::string> questions;
  std::vector<std::vector<std::string>> targets;  // acceptable answers per question
};

// JSON lines with fields id, task, questions, targets. Blank lines are
// skipped. Throws kMalformedRecord or kMissingField naming the line.
std::vector<Sample> parse_dataset(std::istream& in);
std::vector<Sample> load_dataset(const std::string& path);

struct SampleScore {
  int correct = 0;
  double score = 0.0;
};

// A question counts as correct when any of its targets occurs in the output
// as a case-insensitive substring; score = correct / question count.
SampleScore score_sample(std::string_view output, const Sample& sample);

struct SampleReport {
  std::string id;
  int correct = 0;
  int questions = 0;
  double score = 0.0;
  std::optional<std::string> error_kind;
  std::string error_message;
  int provider_calls = 0;
};

struct ScoreReport {
  std::string dataset_name;
  std::vector<SampleReport> per_sample;  // dataset order
  double aggregate = 0.0;                // mean of per-sample scores
  int provider_calls = 0;
  TokenUsage token_usage;
  std::int64_t wall_time_ms = 0;  // zero in deterministic mode
};

// Each sample runs with run_id = sample id. A failing sample scores 0 and
// carries its error kind. Throws Error(kEmptyDataset).
ScoreReport run_benchmark(std::string dataset_name, const std::vector<Sample>& dataset,
                          Provider& provider, const RunConfig& config);

ordered_json to_json(const ScoreReport& report);
std::string format_table(const ScoreReport& report);

}  // namespace rulegraph
