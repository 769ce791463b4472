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

#include <stdexcept>
#include <string>
#include <string_view>

namespace rulegraph {

enum class ErrorKind {
  kUnrecognizedLabel,
  // graph
  kCyclicPlan,
  kEmptyPlan,
  kDanglingEdge,
  kDuplicateNodeId,
  kUnknownNode,
  kMissingPredecessor,
  kNotASubtask,
  kEmptyChain,
  kInvalidGraph,
  // provider boundary
  kProviderFailure,
  kTimeout,
  kRateLimited,
  kTransportError,
  kScriptMiss,
  kMissingSlot,
  // structured output
  kNoDocumentFound,
  kSchemaViolation,
  kMalformedPlan,
  kMalformedAnalysis,
  kMalformedAssessment,
  kMalformedClassification,
  kMalformedFusion,
  // rule execution
  kRuleExecutionFailure,
  kAllRulesFailed,
  // run level
  kPlanningFailure,
  kAllPathsFailed,
  kSinkUnavailable,
  // datasets and config
  kMalformedRecord,
  kMissingField,
  kEmptyDataset,
  kInvalidConfig,
};

// Stable snake_case name used in traces, reports and CLI diagnostics.
std::string_view kind_name(ErrorKind kind);

// Transport-level failures that a live provider retries on its own.
bool is_retryable(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message);

  ErrorKind kind() const noexcept { return kind_; }
  // Offending field for kSchemaViolation / kMissingField, empty otherwise.
  const std::string& field() const noexcept { return field_; }

  static Error schema_violation(std::string field, std::string detail);
  static Error missing_field(std::string field, std::string detail);

 private:
  ErrorKind kind_;
  std::string field_;
};

}  // namespace rulegraph
