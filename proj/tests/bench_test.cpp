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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "testing/oracles.hpp"
#include "testing/scripts.hpp"

namespace rulegraph {
namespace {

Sample sample(std::vector<std::vector<std::string>> targets) {
  Sample s;
  s.id = "s";
  s.task_text = "task";
  for (std::size_t i = 0; i < targets.size(); ++i) s.questions.push_back("q" + std::to_string(i));
  s.targets = std::move(targets);
  return s;
}

RunConfig bench_config() {
  RunConfig c;
  c.deterministic = true;
  return c;
}

TEST(ScoreSample, Examples) {
  const Sample five = sample({{"Mars"}, {"Shakespeare"}, {"Tokyo"}, {"Oxygen"}, {"da Vinci"}});
  const SampleScore s = score_sample(
      "On the red plains of Mars, a traveller read Shakespeare aloud, dreamed of Kyoto, "
      "breathed oxygen and sketched like da Vinci.",
      five);
  EXPECT_EQ(s.correct, 4);
  EXPECT_DOUBLE_EQ(s.score, 0.8);

  EXPECT_DOUBLE_EQ(score_sample("", five).score, 0.0);
  EXPECT_DOUBLE_EQ(
      score_sample("Hepburn won for Guess Who's Coming to Dinner (1967).",
                   sample({{"guess who's coming to dinner"}}))
          .score,
      1.0);
  // Any alternative target counts once.
  EXPECT_EQ(score_sample("William Shakespeare", sample({{"Shakespeare", "William Shakespeare"}})).correct,
            1);
  EXPECT_DOUBLE_EQ(score_sample("anything", sample({})).score, 0.0);
}

std::string random_word(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {"river", "Lantern", "harvest", "EMBER",
                                                 "compass", "violin", "glacier", "orchard"};
  return testing::pick(rng, words);
}

TEST(ScoreProperties, RangeOracleAndMonotonicity) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::vector<std::string>> targets;
    const int q = testing::uniform(rng, 1, 5);
    for (int j = 0; j < q; ++j) {
      std::vector<std::string> alts;
      for (int k = testing::uniform(rng, 1, 2); k > 0; --k) alts.push_back(random_word(rng));
      targets.push_back(alts);
    }
    const Sample s = sample(targets);
    std::string output;
    for (int w = testing::uniform(rng, 0, 4); w > 0; --w) output += random_word(rng) + " ";
    const SampleScore sc = score_sample(output, s);
    ASSERT_GE(sc.score, 0.0);
    ASSERT_LE(sc.score, 1.0);
    ASSERT_DOUBLE_EQ(sc.score, testing::reference_score(output, targets));
    ASSERT_DOUBLE_EQ(sc.score, static_cast<double>(sc.correct) / q);
    // Appending text never lowers the score.
    const SampleScore more = score_sample(output + " " + random_word(rng), s);
    ASSERT_GE(more.score, sc.score);
  }
}

TEST(ParseDataset, ValidAndBlankLines) {
  std::istringstream in(
      "{\"id\":\"a\",\"task\":\"t\",\"questions\":[\"q\"],\"targets\":[[\"x\"]]}\n\n"
      "{\"id\":\"b\",\"task\":\"t2\",\"questions\":[\"q\"],\"targets\":[[\"y\",\"z\"]]}\n");
  const auto d = parse_dataset(in);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].targets, (std::vector<std::vector<std::string>>{{"x"}}));
  EXPECT_EQ(d[1].id, "b");
}

ErrorKind parse_error(const std::string& text, std::string* message = nullptr) {
  std::istringstream in(text);
  try {
    parse_dataset(in);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorKind::kUnrecognizedLabel;
}

TEST(ParseDataset, Errors) {
  std::string msg;
  EXPECT_EQ(parse_error("{\"id\":\"a\",\"task\":\"t\",\"questions\":[\"q\"],\"targets\":[[\"x\"]]}\n"
                        "{\"id\":\"b\",\"questions\":[\"q\"],\"targets\":[[\"x\"]]}\n",
                        &msg),
            ErrorKind::kMissingField);
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("task"), std::string::npos) << msg;
  EXPECT_EQ(parse_error("not json\n"), ErrorKind::kMalformedRecord);
  EXPECT_EQ(parse_error("{\"id\":\"a\",\"task\":\"t\",\"questions\":[],\"targets\":[]}\n"),
            ErrorKind::kMalformedRecord);
  EXPECT_EQ(parse_error("[1,2]\n"), ErrorKind::kMalformedRecord);
  // questions and targets must line up.
  EXPECT_EQ(parse_error("{\"id\":\"a\",\"task\":\"t\",\"questions\":[\"q\"],\"targets\":[]}\n"),
            ErrorKind::kMalformedRecord);
  EXPECT_EQ(parse_error("{\"id\":\"a\",\"task\":\"t\",\"questions\":[\"q\"],\"targets\":[\"x\"]}\n"),
            ErrorKind::kMalformedRecord);
  EXPECT_THROW(load_dataset(testing::fixture_path("does_not_exist.jsonl")), Error);
}

TEST(ParseDataset, EveryRequiredSchemaFieldIsEnforced) {
  const json schema = json::parse(testing::read_file(testing::fixture_path("dataset.schema.json")));
  const json valid = {{"id", "a"}, {"task", "t"}, {"questions", {"q"}}, {"targets", {{"x"}}}};
  for (const auto& name : schema["required"]) {
    json record = valid;
    record.erase(name.get<std::string>());
    std::string msg;
    EXPECT_EQ(parse_error(record.dump() + "\n", &msg), ErrorKind::kMissingField) << name;
    EXPECT_NE(msg.find(name.get<std::string>()), std::string::npos) << msg;
  }
}

struct Expected {
  std::string file;
  std::vector<double> scores;
};

TEST(RunBenchmark, FixtureDatasetsMatchHandScores) {
  const std::vector<Expected> cases = {
      {"tcw5.jsonl", {0.8, 2.0 / 3.0, 0.0, 1.0, 1.0}},
      {"cc.jsonl", {1.0, 0.5, 0.0}},
      {"lgp.jsonl", {1.0, 0.5, 1.0, 0.0}},
  };
  for (const Expected& c : cases) {
    MockProvider mock = testing::fixture_script("bench_script.json");
    const auto dataset = load_dataset(testing::fixture_path(c.file));
    const ScoreReport r = run_benchmark(c.file, dataset, mock, bench_config());
    ASSERT_EQ(r.per_sample.size(), c.scores.size()) << c.file;
    double sum = 0;
    for (std::size_t i = 0; i < c.scores.size(); ++i) {
      EXPECT_NEAR(r.per_sample[i].score, c.scores[i], 1e-12) << c.file << " " << i;
      EXPECT_EQ(r.per_sample[i].id, dataset[i].id);
      EXPECT_FALSE(r.per_sample[i].error_kind.has_value());
      sum += c.scores[i];
    }
    EXPECT_NEAR(r.aggregate, sum / c.scores.size(), 1e-12) << c.file;
    EXPECT_EQ(r.wall_time_ms, 0);
    int calls = 0;
    for (const auto& s : r.per_sample) calls += s.provider_calls;
    EXPECT_EQ(r.provider_calls, calls);
  }
}

TEST(RunBenchmark, CommonConceptAggregate) {
  MockProvider mock = testing::fixture_script("bench_script.json");
  const ScoreReport r =
      run_benchmark("cc", load_dataset(testing::fixture_path("cc.jsonl")), mock, bench_config());
  EXPECT_NEAR(r.aggregate, 0.5, 1e-12);
  const ordered_json j = to_json(r);
  EXPECT_EQ(j["dataset_name"], "cc");
  EXPECT_EQ(j["per_sample"].size(), 3u);
  const std::string table = format_table(r);
  EXPECT_NE(table.find("cc-2"), std::string::npos);
  EXPECT_NE(table.find("0.500"), std::string::npos);
}

TEST(RunBenchmark, FailingSampleScoresZero) {
  std::vector<ScriptEntry> script = testing::happy_script(1, "alpha beta");
  ScriptEntry bad = testing::error_entry(RoleKind::kPlanner, "timeout", "T", 1);
  bad.run_id = "broken";
  script.push_back(bad);
  MockProvider mock(script);
  std::vector<Sample> dataset = {sample({{"alpha"}, {"beta"}}), sample({{"alpha"}})};
  dataset[0].id = "ok";
  dataset[1].id = "broken";
  const ScoreReport r = run_benchmark("x", dataset, mock, bench_config());
  EXPECT_DOUBLE_EQ(r.per_sample[0].score, 1.0);
  EXPECT_DOUBLE_EQ(r.per_sample[1].score, 0.0);
  EXPECT_EQ(r.per_sample[1].error_kind, "planning_failure");
  EXPECT_EQ(r.per_sample[1].questions, 1);
  EXPECT_DOUBLE_EQ(r.aggregate, 0.5);
}

TEST(RunBenchmark, EmptyDataset) {
  MockProvider mock(testing::happy_script(1));
  try {
    run_benchmark("empty", {}, mock, bench_config());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyDataset);
  }
}

}  // namespace
}  // namespace rulegraph
