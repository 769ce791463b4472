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

#include "rulegraph/structured.hpp"

#include <gtest/gtest.h>

#include <random>

#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

std::string violation_field(std::string_view text, SchemaId schema) {
  try {
    parse_structured(text, schema);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchemaViolation) << e.what();
    return e.field();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

TEST(ExtractDocument, FencedBlock) {
  const json doc = parse_structured(
      "Assessment follows.\n```json\n{\"membership\": \"H\", \"diff_text\": \"\"}\n```\n",
      SchemaId::kAssessment);
  EXPECT_EQ(doc["membership"], "H");
}

TEST(ExtractDocument, SkipsProseAndTakesFirstDocument) {
  const json doc = extract_document(
      "I think {this is not json} but here: {\"answer\": \"one\"} and {\"answer\": \"two\"}");
  EXPECT_EQ(doc["answer"], "one");
}

TEST(ExtractDocument, BracesInsideStrings) {
  const json doc = extract_document(R"(x {"answer": "a } tricky { one \" }"} y)");
  EXPECT_EQ(doc["answer"], "a } tricky { one \" }");
}

TEST(ExtractDocument, NestedObjects) {
  const json doc = extract_document(R"(... {"a": {"b": {"c": 1}}, "d": [1, {"e": 2}]} tail)");
  EXPECT_EQ(doc["a"]["b"]["c"], 1);
  EXPECT_EQ(doc["d"][1]["e"], 2);
}

TEST(ExtractDocument, NoDocument) {
  for (const char* text : {"", "plain prose", "{unbalanced", "[1, 2, 3]", "{not: json}"}) {
    try {
      extract_document(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kNoDocumentFound);
    }
  }
}

TEST(ExtractDocument, IdempotentOnRandomWrappers) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> noise = {"", "text ", "```json\n", "\n```", "{bad} ", "}}", "Note: "};
  for (int i = 0; i < 200; ++i) {
    json inner = {{"answer", "value " + std::to_string(i)}, {"n", i}};
    std::string text;
    for (int k = 0; k < 3; ++k) text += noise[rng() % noise.size()];
    text += inner.dump();
    for (int k = 0; k < 3; ++k) text += noise[rng() % noise.size()];
    text += json{{"answer", "later"}}.dump();
    const json once = extract_document(text);
    EXPECT_EQ(once, inner);
    EXPECT_EQ(extract_document(once.dump()), once);
  }
}

TEST(ValidateSchema, AssessmentNeedsDiffBelowThreshold) {
  EXPECT_EQ(violation_field(R"({"membership": "L"})", SchemaId::kAssessment), "diff_text");
  EXPECT_EQ(violation_field(R"({"membership": "Lr", "diff_text": "  "})", SchemaId::kAssessment),
            "diff_text");
  EXPECT_NO_THROW(parse_structured(R"({"membership": "ML"})", SchemaId::kAssessment));
  EXPECT_NO_THROW(parse_structured(R"({"membership": "L", "diff_text": "gap"})",
                                   SchemaId::kAssessment));
  // Threshold is a parameter.
  EXPECT_THROW(parse_structured(R"({"membership": "M"})", SchemaId::kAssessment,
                                MembershipLabel::kH),
               Error);
  EXPECT_EQ(violation_field(R"({"membership": "great"})", SchemaId::kAssessment), "membership");
  EXPECT_EQ(violation_field(R"({"diff_text": "x"})", SchemaId::kAssessment), "membership");
}

TEST(ValidateSchema, Plan) {
  EXPECT_NO_THROW(parse_structured(
      R"({"global_goal": "g", "subtasks": [{"id": "T1", "statement": "s"}]})", SchemaId::kPlan));
  EXPECT_EQ(violation_field(R"({"subtasks": [{"id": "T1", "statement": "s"}]})", SchemaId::kPlan),
            "global_goal");
  EXPECT_EQ(violation_field(R"({"global_goal": "g", "subtasks": []})", SchemaId::kPlan),
            "subtasks");
  EXPECT_EQ(violation_field(R"({"global_goal": "g", "subtasks": [{"id": "T1"}]})", SchemaId::kPlan),
            "subtasks[0].statement");
  EXPECT_EQ(violation_field(
                R"({"global_goal": "g", "subtasks": [{"id": "a", "statement": "s"}], "edges": [["a"]]})",
                SchemaId::kPlan),
            "edges[0]");
}

TEST(ValidateSchema, RulesetCandidateFusionClassification) {
  EXPECT_NO_THROW(parse_structured(
      R"({"rules": [{"domain": "History", "antecedent": "a", "membership": "Sub-High", "consequent_prompt": "p"}]})",
      SchemaId::kRuleset));
  EXPECT_EQ(violation_field(
                R"({"rules": [{"domain": "History", "antecedent": "a", "membership": "?", "consequent_prompt": "p"}]})",
                SchemaId::kRuleset),
            "rules[0].membership");
  EXPECT_EQ(violation_field(R"({"rules": []})", SchemaId::kRuleset), "rules");
  EXPECT_EQ(violation_field(R"({"text": "x"})", SchemaId::kCandidate), "answer");
  EXPECT_EQ(violation_field(R"({"answer": ""})", SchemaId::kCandidate), "answer");
  EXPECT_NO_THROW(parse_structured(R"({"cluster_keys": ["a", "b"]})", SchemaId::kFusion));
  EXPECT_EQ(violation_field(R"({"cluster_keys": ["a", 3]})", SchemaId::kFusion), "cluster_keys[1]");
  EXPECT_EQ(violation_field(R"({})", SchemaId::kFusion), "answer");
  EXPECT_NO_THROW(parse_structured(R"({"scenario": "too_complex"})",
                                   SchemaId::kFailureClassification));
  EXPECT_EQ(violation_field(R"({"scenario": "hard"})", SchemaId::kFailureClassification),
            "scenario");
}

TEST(SchemaId, NamesRoundTrip) {
  for (SchemaId s : {SchemaId::kPlan, SchemaId::kRuleset, SchemaId::kCandidate, SchemaId::kFusion,
                     SchemaId::kAssessment, SchemaId::kFailureClassification}) {
    EXPECT_EQ(parse_schema_id(to_string(s)), s);
  }
  EXPECT_THROW(parse_schema_id("essay"), Error);
}

}  // namespace
}  // namespace rulegraph
