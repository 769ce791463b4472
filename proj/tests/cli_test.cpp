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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "rulegraph/trace.hpp"
#include "testing/scripts.hpp"

namespace rulegraph::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
  args.insert(args.begin(), "rulegraph");
  std::ostringstream out, err;
  const int code = dispatch(
      args, out, err, [env](const std::string& name) -> std::optional<std::string> {
        auto it = env.find(name);
        if (it == env.end()) return std::nullopt;
        return it->second;
      });
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("rulegraph_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  static std::string fixture(const std::string& name) { return testing::fixture_path(name); }

  fs::path dir_;
};

TEST_F(CliTest, RunWritesAnswerAndTrace) {
  const Result r = cli({"run", "--task", fixture("email_task.txt"), "--config",
                        fixture("email_config.json"), "--trace", path("t.jsonl"),
                        "--deterministic"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("Dear Editor", 0), 0u);
  EXPECT_NE(r.err.find("59 provider calls"), std::string::npos) << r.err;
  EXPECT_EQ(r.out.find("provider calls"), std::string::npos);

  std::ifstream in(path("t.jsonl"));
  const auto trace = read_trace(in);
  ASSERT_FALSE(trace.empty());
  EXPECT_EQ(trace.back().kind, EventKind::kFinal);
}

TEST_F(CliTest, DeterministicOutputsAreByteIdentical) {
  for (const char* concurrency : {"1", "4"}) {
    const std::string name = std::string("t") + concurrency + ".jsonl";
    ASSERT_EQ(cli({"run", "--task", fixture("email_task.txt"), "--config",
                   fixture("email_config.json"), "--trace", path(name), "--deterministic",
                   "--concurrency", concurrency})
                  .code,
              kOk);
  }
  EXPECT_EQ(testing::read_file(path("t1.jsonl")), testing::read_file(path("t4.jsonl")));
}

TEST_F(CliTest, FailedRunStillWritesTrace) {
  const Result r = cli({"run", "--task", "anything", "--config", fixture("adversarial_config.json"),
                        "--trace", path("adv.jsonl"), "--deterministic"});
  EXPECT_EQ(r.code, kAllPathsFailed);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("all_paths_failed"), std::string::npos) << r.err;
  std::ifstream in(path("adv.jsonl"));
  EXPECT_GT(read_trace(in).size(), 400u);
}

TEST_F(CliTest, BenchWritesReportAndTable) {
  const Result r = cli({"bench", "--dataset", fixture("cc.jsonl"), "--config",
                        fixture("bench_config.json"), "--report", path("r.json"),
                        "--deterministic"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("cc-3"), std::string::npos);
  const json report = json::parse(testing::read_file(path("r.json")));
  EXPECT_EQ(report["dataset_name"], "cc");
  EXPECT_DOUBLE_EQ(report["aggregate"].get<double>(), 0.5);
  EXPECT_EQ(report["per_sample"].size(), 3u);
}

TEST_F(CliTest, BenchDataErrors) {
  EXPECT_EQ(cli({"bench", "--dataset", write("empty.jsonl", "\n"), "--config",
                 fixture("bench_config.json")})
                .code,
            kData);
  const Result r = cli({"bench", "--dataset", write("bad.jsonl", "{\"id\":\"a\"}\n"), "--config",
                        fixture("bench_config.json")});
  EXPECT_EQ(r.code, kData);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
}

TEST_F(CliTest, ExportDotFromTrace) {
  ASSERT_EQ(cli({"run", "--task", fixture("email_task.txt"), "--config",
                 fixture("email_config.json"), "--trace", path("t.jsonl"), "--deterministic"})
                .code,
            kOk);
  const Result r = cli({"export-dot", "--trace", path("t.jsonl")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u);
  EXPECT_NE(r.out.find("T3c"), std::string::npos);
  EXPECT_EQ(r.out.find("\"T3\""), std::string::npos);

  ASSERT_EQ(cli({"export-dot", "--trace", path("t.jsonl"), "--out", path("g.dot")}).code, kOk);
  EXPECT_EQ(testing::read_file(path("g.dot")), r.out);
  EXPECT_EQ(cli({"export-dot", "--trace", path("nope.jsonl")}).code, kData);
}

TEST_F(CliTest, ValidateConfig) {
  const Result ok = cli({"validate-config", "--config", fixture("email_config.json")});
  EXPECT_EQ(ok.code, kOk) << ok.err;
  EXPECT_NE(ok.out.find("config ok"), std::string::npos);
  EXPECT_EQ(cli({"validate-config", "--config", write("bad.json", "{\"k_rulez\": 2}")}).code,
            kConfig);
  EXPECT_EQ(cli({"validate-config", "--config", write("broken.json", "{")}).code, kConfig);
  EXPECT_EQ(cli({"validate-config", "--config", path("missing.json")}).code, kConfig);
}

TEST_F(CliTest, DeterministicRefusesLiveProvider) {
  const std::string cfg = write("live.json", "{\"provider\": {\"kind\": \"live\"}}");
  const Result r = cli({"run", "--task", "x", "--config", cfg, "--deterministic"});
  EXPECT_EQ(r.code, kConfig);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}).code, kUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kUsage);
  const Result unknown = cli({"run", "--task", "x", "--bogus"});
  EXPECT_EQ(unknown.code, kUsage);
  EXPECT_NE(unknown.err.find("bogus"), std::string::npos);
  EXPECT_EQ(cli({"run"}).code, kUsage);
  EXPECT_EQ(cli({"run", "--task", "x", "--concurrency", "many"}).code, kUsage);
  EXPECT_EQ(cli({"--help"}).code, kOk);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorKind::kInvalidConfig), kConfig);
  EXPECT_EQ(exit_code_for(ErrorKind::kMissingSlot), kConfig);
  EXPECT_EQ(exit_code_for(ErrorKind::kPlanningFailure), kPlanning);
  EXPECT_EQ(exit_code_for(ErrorKind::kAllPathsFailed), kAllPathsFailed);
  for (ErrorKind k : {ErrorKind::kProviderFailure, ErrorKind::kTimeout, ErrorKind::kRateLimited,
                      ErrorKind::kTransportError, ErrorKind::kScriptMiss,
                      ErrorKind::kMalformedFusion}) {
    EXPECT_EQ(exit_code_for(k), kProvider);
  }
  EXPECT_EQ(exit_code_for(ErrorKind::kSinkUnavailable), kIo);
  for (ErrorKind k : {ErrorKind::kMalformedRecord, ErrorKind::kMissingField,
                      ErrorKind::kEmptyDataset}) {
    EXPECT_EQ(exit_code_for(k), kData);
  }
  EXPECT_EQ(exit_code_for(ErrorKind::kCyclicPlan), kRunFailed);
}

}  // namespace
}  // namespace rulegraph::cli
