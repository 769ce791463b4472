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

#include <string_view>

#include "json.hpp"
#include "rulegraph/membership.hpp"

namespace rulegraph {

using json = nlohmann::json;

// Structured-output schemas emitted by the agent roles. Field layouts are
// documented in docs/schemas.md.
enum class SchemaId {
  kPlan,
  kRuleset,
  kCandidate,
  kFusion,
  kAssessment,
  kFailureClassification,
};

std::string_view to_string(SchemaId schema);
SchemaId parse_schema_id(std::string_view text);

// First JSON object embedded in `text`, in order of appearance. Prose and
// markdown fences around it are skipped. Throws Error(kNoDocumentFound).
json extract_document(std::string_view text);

// Throws Error(kSchemaViolation) naming the offending field. Assessments
// must carry a non-empty diff_text whenever membership is below
// `threshold`.
void validate_schema(const json& doc, SchemaId schema,
                     MembershipLabel threshold = kDefaultThreshold);

// extract_document followed by validate_schema.
json parse_structured(std::string_view text, SchemaId schema,
                      MembershipLabel threshold = kDefaultThreshold);

}  // namespace rulegraph
