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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rulegraph/agents.hpp"
#include "rulegraph/fusion.hpp"
#include "rulegraph/mtpg.hpp"
#include "rulegraph/ruleset.hpp"
#include "rulegraph/trace.hpp"

namespace rulegraph {

struct RunConfig {
  int k_rules = 3;        // domain rules per subtask
  int max_reprocess = 3;  // goal-alignment attempts per node
  int max_depth = 2;      // reconstruction depth before forced removal
  int max_chain = 3;      // subtasks per decomposition chain
  MembershipLabel threshold = kDefaultThreshold;
  ClusterMode cluster_mode = ClusterMode::kLexical;
  bool synthesize = false;
  int concurrency = 4;  // nodes processed at once within a wave
  DomainCatalog catalog = DomainCatalog::defaults();
  AgentOptions agents;
  // Zero timestamps and refuse live providers.
  bool deterministic = false;
  std::string run_id = "run";

  // Throws Error(kInvalidConfig).
  void validate() const;
};

struct RunOutcome {
  FinalResult final;
  TaskGraph graph_final;
  std::map<NodeId, SubtaskResult> results;
  std::vector<TraceEvent> trace;
  int provider_calls = 0;
  TokenUsage token_usage;
};

// A run that stopped early. Carries what was traced up to the failure.
class RunFailure : public Error {
 public:
  RunFailure(ErrorKind kind, std::string message, std::vector<TraceEvent> trace,
             int provider_calls, TokenUsage usage);

  const std::vector<TraceEvent>& trace() const { return trace_; }
  int provider_calls() const { return provider_calls_; }
  const TokenUsage& token_usage() const { return usage_; }

 private:
  std::vector<TraceEvent> trace_;
  int provider_calls_;
  TokenUsage usage_;
};

// Plan, build the graph, execute subtask waves with goal alignment and
// repair, then fuse. Throws RunFailure with kPlanningFailure,
// kAllPathsFailed, kScriptMiss or the final fusion's error kind.
RunOutcome execute_task(Provider& provider, std::string_view task,
                        const RunConfig& config);

struct NodeOutcome {
  NodeId node;
  std::optional<SubtaskResult> result;  // set when accepted
  std::string last_diff;
  std::optional<Error> error;  // processing stopped by this error
  int attempts = 0;

  bool accepted() const { return result.has_value(); }
};

// Up to max_reprocess rounds of rules -> run -> fuse -> assess on one node.
// Provider errors end the loop and leave the node unaccepted.
NodeOutcome process_node(Session& session, const RunConfig& config,
                         const TaskGraph& graph, const TaskNode& node,
                         const ResultSet& preds);

struct GraphEdit {
  enum class Kind { kRemoved, kSpliced };
  Kind kind = Kind::kRemoved;
  NodeId node;
  std::vector<NodeId> chain;
  std::string reason;
  TaskGraph graph;
};

// Classifies a failed node and removes it or splices in a planner-built
// chain. Decomposition below max_depth only; otherwise removal with a
// warning.
GraphEdit handle_failure(Session& session, const RunConfig& config,
                         const TaskGraph& graph, const NodeId& node,
                         std::string_view last_diff);

// Planner subtasks in dependency order (listing order breaks ties).
std::vector<PlannedSubtask> chain_order(const PlannerPlan& plan);

// Worst-case provider calls for a run whose plan has `planned_subtasks`
// nodes, assuming well-formed responses unless `with_reasks` is set.
std::uint64_t provider_call_bound(const RunConfig& config, int planned_subtasks,
                                  bool with_reasks = false);

ordered_json graph_to_json(const TaskGraph& graph);
TaskGraph graph_from_json(const ordered_json& doc);

// Latest graph snapshot in a trace plus the goal membership of every node
// that finished. Throws Error(kMalformedRecord) when the trace has none.
std::pair<TaskGraph, std::map<NodeId, MembershipLabel>> graph_from_trace(
    const std::vector<TraceEvent>& trace);

}  // namespace rulegraph
