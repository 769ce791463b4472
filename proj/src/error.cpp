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

#include "rulegraph/error.hpp"

namespace rulegraph {

std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnrecognizedLabel: return "unrecognized_label";
    case ErrorKind::kCyclicPlan: return "cyclic_plan";
    case ErrorKind::kEmptyPlan: return "empty_plan";
    case ErrorKind::kDanglingEdge: return "dangling_edge";
    case ErrorKind::kDuplicateNodeId: return "duplicate_node_id";
    case ErrorKind::kUnknownNode: return "unknown_node";
    case ErrorKind::kMissingPredecessor: return "missing_predecessor";
    case ErrorKind::kNotASubtask: return "not_a_subtask";
    case ErrorKind::kEmptyChain: return "empty_chain";
    case ErrorKind::kInvalidGraph: return "invalid_graph";
    case ErrorKind::kProviderFailure: return "provider_failure";
    case ErrorKind::kTimeout: return "timeout";
    case ErrorKind::kRateLimited: return "rate_limited";
    case ErrorKind::kTransportError: return "transport_error";
    case ErrorKind::kScriptMiss: return "script_miss";
    case ErrorKind::kMissingSlot: return "missing_slot";
    case ErrorKind::kNoDocumentFound: return "no_document_found";
    case ErrorKind::kSchemaViolation: return "schema_violation";
    case ErrorKind::kMalformedPlan: return "malformed_plan";
    case ErrorKind::kMalformedAnalysis: return "malformed_analysis";
    case ErrorKind::kMalformedAssessment: return "malformed_assessment";
    case ErrorKind::kMalformedClassification: return "malformed_classification";
    case ErrorKind::kMalformedFusion: return "malformed_fusion";
    case ErrorKind::kRuleExecutionFailure: return "rule_execution_failure";
    case ErrorKind::kAllRulesFailed: return "all_rules_failed";
    case ErrorKind::kPlanningFailure: return "planning_failure";
    case ErrorKind::kAllPathsFailed: return "all_paths_failed";
    case ErrorKind::kSinkUnavailable: return "sink_unavailable";
    case ErrorKind::kMalformedRecord: return "malformed_record";
    case ErrorKind::kMissingField: return "missing_field";
    case ErrorKind::kEmptyDataset: return "empty_dataset";
    case ErrorKind::kInvalidConfig: return "invalid_config";
  }
  return "unknown";
}

bool is_retryable(ErrorKind kind) {
  return kind == ErrorKind::kTimeout || kind == ErrorKind::kRateLimited ||
         kind == ErrorKind::kTransportError;
}

Error::Error(ErrorKind kind, std::string message)
    : std::runtime_error(std::move(message)), kind_(kind) {}

Error Error::schema_violation(std::string field, std::string detail) {
  Error e(ErrorKind::kSchemaViolation,
          "schema violation at '" + field + "': " + detail);
  e.field_ = std::move(field);
  return e;
}

Error Error::missing_field(std::string field, std::string detail) {
  Error e(ErrorKind::kMissingField,
          "missing field '" + field + "': " + detail);
  e.field_ = std::move(field);
  return e;
}

}  // namespace rulegraph
