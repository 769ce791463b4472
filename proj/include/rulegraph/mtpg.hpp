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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rulegraph/results.hpp"

/// Multipolar task processing graph.
///
/// A single-root, single-sink DAG: the original task node, the subtask nodes
/// produced by planning (and later by reconstruction), and one fusion node.
/// Edges only encode dependencies. Graph values are immutable; the two repair
/// edits return a new graph and re-validate every invariant.
namespace rulegraph {

enum class NodeKind { kOriginal, kSubtask, kFusion };

std::string_view to_string(NodeKind kind);
NodeKind parse_node_kind(std::string_view text);

inline constexpr std::string_view kOriginalId = "T";
inline constexpr std::string_view kFusionId = "F";

struct TaskNode {
  NodeId id;
  NodeKind kind = NodeKind::kSubtask;
  std::string statement;
  int depth = 0;

  bool operator==(const TaskNode&) const = default;
};

using Edge = std::pair<NodeId, NodeId>;

struct PlannedSubtask {
  NodeId id;
  std::string statement;

  bool operator==(const PlannedSubtask&) const = default;
};

// Planner output: subtasks plus dependency edges between them. Root and sink
// attachment is left to build_graph.
struct PlannerPlan {
  std::string global_goal;
  std::vector<PlannedSubtask> subtasks;
  std::vector<Edge> edges;

  bool operator==(const PlannerPlan&) const = default;
};

class TaskGraph {
 public:
  // Validates every invariant; throws Error(kInvalidGraph) on violation.
  TaskGraph(std::vector<TaskNode> nodes, std::set<Edge> edges,
            std::string global_goal);

  const std::map<NodeId, TaskNode>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }
  const std::string& global_goal() const { return global_goal_; }

  bool contains(const NodeId& id) const { return nodes_.count(id) != 0; }
  // Throws Error(kUnknownNode).
  const TaskNode& node(const NodeId& id) const;
  const TaskNode& original() const;
  const TaskNode& fusion() const;

  // Sorted by node id.
  std::vector<NodeId> predecessors(const NodeId& id) const;
  std::vector<NodeId> successors(const NodeId& id) const;
  std::vector<NodeId> subtask_ids() const;

  bool operator==(const TaskGraph&) const = default;

 private:
  std::map<NodeId, TaskNode> nodes_;
  std::set<Edge> edges_;
  std::string global_goal_;
};

// Describes the first violated graph invariant, or nullopt when the parts
// form a valid graph. Used by the TaskGraph constructor and by tests.
std::optional<std::string> find_invariant_violation(
    const std::vector<TaskNode>& nodes, const std::set<Edge>& edges);

// Attaches the original node to every subtask without an in-plan
// predecessor and every subtask without an in-plan successor to the fusion
// node. The original node's statement is `original_task`, or the goal when
// that is empty. Throws kEmptyPlan, kDanglingEdge, kCyclicPlan or
// kDuplicateNodeId.
TaskGraph build_graph(const PlannerPlan& plan,
                      std::string_view original_task = {});

// Not-yet-completed subtask and fusion nodes whose predecessors are all
// completed. The original node always counts as completed.
std::set<NodeId> ready_nodes(const TaskGraph& graph,
                             const std::set<NodeId>& completed);

// Predecessor results of `node`, ordered by node id.
ResultSet predecessor_results(const TaskGraph& graph, const NodeId& node,
                              const std::map<NodeId, SubtaskResult>& results);

// Removes a subtask node and bridges each predecessor to each successor.
// A bridge from the original node straight to the fusion node is never
// added: a removed node contributes nothing to the final fusion.
TaskGraph remove_node(const TaskGraph& graph, const NodeId& node);

// Replaces a subtask node with a chain of new subtask nodes wired between
// the failed node's predecessors and successors. Chain depths are set to
// failed.depth + 1.
TaskGraph splice_chain(const TaskGraph& graph, const NodeId& failed,
                       std::vector<TaskNode> chain);

// Graphviz rendering with nodes and edges in id order. Nodes with an entry in
// `memberships` show their goal membership in the label.
std::string export_dot(const TaskGraph& graph,
                       const std::map<NodeId, MembershipLabel>& memberships = {});

std::map<NodeId, MembershipLabel> goal_memberships(
    const std::map<NodeId, SubtaskResult>& results);

}  // namespace rulegraph
