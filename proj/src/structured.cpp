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

#include <string>

#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

// End of the brace-balanced object starting at `open`, or npos. String
// literals are skipped so braces inside them do not count.
std::size_t matching_brace(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::string_view::npos;
}

const json& require_array(const json& doc, const std::string& field) {
  auto it = doc.find(field);
  if (it == doc.end()) throw Error::schema_violation(field, "field is missing");
  if (!it->is_array()) throw Error::schema_violation(field, "must be an array");
  return *it;
}

const std::string& require_text(const json& doc, const std::string& field,
                                const std::string& path) {
  auto it = doc.find(field);
  if (it == doc.end()) throw Error::schema_violation(path, "field is missing");
  if (!it->is_string()) throw Error::schema_violation(path, "must be a string");
  const std::string& s = it->get_ref<const std::string&>();
  if (s.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error::schema_violation(path, "must not be empty");
  }
  return s;
}

MembershipLabel require_label(const json& doc, const std::string& field,
                              const std::string& path) {
  auto it = doc.find(field);
  if (it == doc.end()) throw Error::schema_violation(path, "field is missing");
  if (!it->is_string()) throw Error::schema_violation(path, "must be a label token");
  try {
    return parse_label(it->get_ref<const std::string&>());
  } catch (const Error& e) {
    throw Error::schema_violation(path, e.what());
  }
}

void validate_plan(const json& doc) {
  require_text(doc, "global_goal", "global_goal");
  const json& subtasks = require_array(doc, "subtasks");
  if (subtasks.empty()) {
    throw Error::schema_violation("subtasks", "at least one subtask required");
  }
  for (std::size_t i = 0; i < subtasks.size(); ++i) {
    const std::string path = "subtasks[" + std::to_string(i) + "]";
    if (!subtasks[i].is_object()) {
      throw Error::schema_violation(path, "must be an object");
    }
    require_text(subtasks[i], "id", path + ".id");
    require_text(subtasks[i], "statement", path + ".statement");
  }
  if (auto it = doc.find("edges"); it != doc.end()) {
    if (!it->is_array()) throw Error::schema_violation("edges", "must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& e = (*it)[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() ||
          !e[1].is_string()) {
        throw Error::schema_violation("edges[" + std::to_string(i) + "]",
                                      "must be a pair of subtask ids");
      }
    }
  }
}

void validate_ruleset(const json& doc) {
  const json& rules = require_array(doc, "rules");
  if (rules.empty()) throw Error::schema_violation("rules", "at least one rule required");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string path = "rules[" + std::to_string(i) + "]";
    if (!rules[i].is_object()) throw Error::schema_violation(path, "must be an object");
    require_text(rules[i], "domain", path + ".domain");
    require_text(rules[i], "antecedent", path + ".antecedent");
    require_label(rules[i], "membership", path + ".membership");
    require_text(rules[i], "consequent_prompt", path + ".consequent_prompt");
  }
}

void validate_fusion(const json& doc) {
  const bool has_answer = doc.contains("answer");
  const bool has_keys = doc.contains("cluster_keys");
  if (!has_answer && !has_keys) {
    throw Error::schema_violation("answer", "fusion output needs answer or cluster_keys");
  }
  if (has_answer) require_text(doc, "answer", "answer");
  if (has_keys) {
    const json& keys = require_array(doc, "cluster_keys");
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (!keys[i].is_string() || keys[i].get_ref<const std::string&>().empty()) {
        throw Error::schema_violation("cluster_keys[" + std::to_string(i) + "]",
                                      "must be a non-empty string");
      }
    }
  }
}

void validate_assessment(const json& doc, MembershipLabel threshold) {
  const MembershipLabel m = require_label(doc, "membership", "membership");
  auto it = doc.find("diff_text");
  if (it != doc.end() && !it->is_string()) {
    throw Error::schema_violation("diff_text", "must be a string");
  }
  if (below(m, threshold)) require_text(doc, "diff_text", "diff_text");
}

void validate_classification(const json& doc) {
  const std::string& scenario = require_text(doc, "scenario", "scenario");
  if (scenario != "irrelevant" && scenario != "too_complex") {
    throw Error::schema_violation("scenario",
                                  "must be 'irrelevant' or 'too_complex'");
  }
}

}  // namespace

std::string_view to_string(SchemaId schema) {
  switch (schema) {
    case SchemaId::kPlan: return "plan";
    case SchemaId::kRuleset: return "ruleset";
    case SchemaId::kCandidate: return "candidate";
    case SchemaId::kFusion: return "fusion";
    case SchemaId::kAssessment: return "assessment";
    case SchemaId::kFailureClassification: return "failure_classification";
  }
  return "plan";
}

SchemaId parse_schema_id(std::string_view text) {
  for (SchemaId s : {SchemaId::kPlan, SchemaId::kRuleset, SchemaId::kCandidate,
                     SchemaId::kFusion, SchemaId::kAssessment,
                     SchemaId::kFailureClassification}) {
    if (to_string(s) == text) return s;
  }
  throw Error::schema_violation("schema", "unknown schema id '" +
                                              std::string(text) + "'");
}

json extract_document(std::string_view text) {
  for (std::size_t pos = text.find('{'); pos != std::string_view::npos;
       pos = text.find('{', pos + 1)) {
    const std::size_t end = matching_brace(text, pos);
    if (end == std::string_view::npos) continue;
    json doc = json::parse(text.substr(pos, end - pos + 1), nullptr,
                           /*allow_exceptions=*/false);
    if (!doc.is_discarded() && doc.is_object()) return doc;
  }
  throw Error(ErrorKind::kNoDocumentFound,
              "response contains no structured document");
}

void validate_schema(const json& doc, SchemaId schema, MembershipLabel threshold) {
  if (!doc.is_object()) throw Error::schema_violation("$", "document must be an object");
  switch (schema) {
    case SchemaId::kPlan: validate_plan(doc); break;
    case SchemaId::kRuleset: validate_ruleset(doc); break;
    case SchemaId::kCandidate: require_text(doc, "answer", "answer"); break;
    case SchemaId::kFusion: validate_fusion(doc); break;
    case SchemaId::kAssessment: validate_assessment(doc, threshold); break;
    case SchemaId::kFailureClassification: validate_classification(doc); break;
  }
}

json parse_structured(std::string_view text, SchemaId schema,
                      MembershipLabel threshold) {
  json doc = extract_document(text);
  validate_schema(doc, schema, threshold);
  return doc;
}

}  // namespace rulegraph
