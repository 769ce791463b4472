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

#include <string>
#include <string_view>
#include <vector>

#include "rulegraph/agents.hpp"
#include "rulegraph/results.hpp"

namespace rulegraph {

enum class ClusterMode { kModel, kLexical };
std::string_view to_string(ClusterMode mode);
ClusterMode parse_cluster_mode(std::string_view text);

// Which layer of the conflict mechanism decided the winner.
enum class DecisionLayer { kVotes, kMembership, kIndex };
std::string_view to_string(DecisionLayer layer);

// Lower-cased, punctuation stripped, whitespace collapsed and trimmed.
std::string lexical_key(std::string_view text);

// Partitions candidates into clusters ordered by their lowest rule index.
// Model mode asks the fusion expert for one key per candidate; if that call
// fails the lexical keys are used and a warning is recorded. Lexical mode
// makes no provider call and accepts a null session.
std::vector<SemanticCluster> cluster_candidates(std::vector<CandidateResult> candidates,
                                                ClusterMode mode, Session* session,
                                                std::string_view subtask_statement = {});

struct Resolution {
  SemanticCluster winner;
  DecisionLayer layer = DecisionLayer::kVotes;
};

// Most votes, then highest max membership, then lowest member rule index.
Resolution resolve_conflict(const std::vector<SemanticCluster>& clusters);

struct FusionOptions {
  ClusterMode mode = ClusterMode::kLexical;
  // Ask the fusion expert to synthesize the winning cluster into one answer.
  // When off, the strongest member of the winning cluster is used verbatim.
  bool synthesize = false;
};

struct SubtaskFusion {
  SubtaskResult result;  // attempts_used / membership_vs_goal set by caller
  std::vector<SemanticCluster> clusters;
  DecisionLayer layer = DecisionLayer::kVotes;
  ClusterMode mode_used = ClusterMode::kLexical;
};

// Highest-membership member, lowest rule index on ties.
const CandidateResult& strongest_member(const SemanticCluster& cluster);

SubtaskFusion fuse_subtask(const std::vector<CandidateResult>& candidates,
                           const TaskNode& subtask, const FusionOptions& options,
                           Session* session);

// Final-variant fusion expert call over the predecessor results of the
// fusion node.
FinalResult fuse_final(const ResultSet& preds, std::string_view original_task,
                       Session& session);

ordered_json to_json(const SubtaskFusion& fusion, int attempt);

}  // namespace rulegraph
