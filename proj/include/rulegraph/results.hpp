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

#include <optional>
#include <string>
#include <vector>

#include "rulegraph/membership.hpp"

namespace rulegraph {

using NodeId = std::string;

// Output of one domain rule.
struct CandidateResult {
  int rule_index = 0;  // 1..K
  std::string domain_name;
  MembershipLabel membership = MembershipLabel::kL;
  std::string answer_text;
  std::string semantic_key;  // assigned by clustering

  bool operator==(const CandidateResult&) const = default;
};

// Candidates that carry the same meaning. Vote count and strength are
// derived from the members so they cannot drift from them.
struct SemanticCluster {
  std::string key;
  std::vector<CandidateResult> members;

  int votes() const { return static_cast<int>(members.size()); }
  MembershipLabel max_membership() const;
  int min_rule_index() const;

  bool operator==(const SemanticCluster&) const = default;
};

// Accepted output of a subtask node.
struct SubtaskResult {
  NodeId subtask_id;
  std::string answer_text;
  SemanticCluster winning_cluster;
  int attempts_used = 0;
  MembershipLabel membership_vs_goal = MembershipLabel::kL;

  bool operator==(const SubtaskResult&) const = default;
};

struct FinalResult {
  std::string answer_text;
  std::vector<NodeId> contributing_nodes;

  bool operator==(const FinalResult&) const = default;
};

// One entry of a predecessor result set. The original task node contributes
// its statement and has no membership.
struct PredecessorResult {
  NodeId node_id;
  std::string text;
  std::optional<MembershipLabel> membership;

  bool operator==(const PredecessorResult&) const = default;
};

using ResultSet = std::vector<PredecessorResult>;

}  // namespace rulegraph
