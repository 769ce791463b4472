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

#include "rulegraph/mtpg.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

using Adjacency = std::map<NodeId, std::vector<NodeId>>;

std::set<NodeId> reach(const Adjacency& adj, const NodeId& start) {
  std::set<NodeId> seen{start};
  std::deque<NodeId> queue{start};
  while (!queue.empty()) {
    NodeId cur = std::move(queue.front());
    queue.pop_front();
    auto it = adj.find(cur);
    if (it == adj.end()) continue;
    for (const NodeId& next : it->second) {
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return seen;
}

// Kahn's algorithm; returns false if a cycle remains.
bool is_acyclic(const std::set<NodeId>& ids, const std::set<Edge>& edges) {
  std::map<NodeId, int> indegree;
  Adjacency out;
  for (const NodeId& id : ids) indegree[id] = 0;
  for (const auto& [from, to] : edges) {
    out[from].push_back(to);
    ++indegree[to];
  }
  std::deque<NodeId> queue;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) queue.push_back(id);
  }
  std::size_t visited = 0;
  while (!queue.empty()) {
    NodeId cur = std::move(queue.front());
    queue.pop_front();
    ++visited;
    for (const NodeId& next : out[cur]) {
      if (--indegree[next] == 0) queue.push_back(next);
    }
  }
  return visited == ids.size();
}

std::string dot_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}

void require_subtask(const TaskGraph& graph, const NodeId& id) {
  const TaskNode& n = graph.node(id);
  if (n.kind != NodeKind::kSubtask) {
    throw Error(ErrorKind::kNotASubtask,
                "node '" + id + "' is a " + std::string(to_string(n.kind)) +
                    " node, not a subtask");
  }
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kOriginal: return "original";
    case NodeKind::kSubtask: return "subtask";
    case NodeKind::kFusion: return "fusion";
  }
  return "subtask";
}

NodeKind parse_node_kind(std::string_view text) {
  if (text == "original") return NodeKind::kOriginal;
  if (text == "subtask") return NodeKind::kSubtask;
  if (text == "fusion") return NodeKind::kFusion;
  throw Error(ErrorKind::kInvalidGraph,
              "unknown node kind '" + std::string(text) + "'");
}

std::optional<std::string> find_invariant_violation(
    const std::vector<TaskNode>& nodes, const std::set<Edge>& edges) {
  std::set<NodeId> ids;
  const TaskNode* original = nullptr;
  const TaskNode* fusion = nullptr;
  for (const TaskNode& n : nodes) {
    if (n.id.empty()) return "node with empty id";
    if (!ids.insert(n.id).second) return "duplicate node id '" + n.id + "'";
    if (n.depth < 0) return "negative depth on '" + n.id + "'";
    if (n.kind != NodeKind::kFusion && n.statement.empty()) {
      return "empty statement on '" + n.id + "'";
    }
    if (n.kind == NodeKind::kOriginal) {
      if (original != nullptr) return std::string("more than one original node");
      original = &n;
    } else if (n.kind == NodeKind::kFusion) {
      if (fusion != nullptr) return std::string("more than one fusion node");
      fusion = &n;
    }
  }
  if (original == nullptr) return std::string("no original node");
  if (fusion == nullptr) return std::string("no fusion node");

  Adjacency out, in;
  for (const auto& [from, to] : edges) {
    if (!ids.count(from) || !ids.count(to)) {
      return "edge (" + from + ", " + to + ") references an unknown node";
    }
    if (from == to) return "self edge on '" + from + "'";
    out[from].push_back(to);
    in[to].push_back(from);
  }
  if (in.count(original->id)) return std::string("original node has predecessors");
  if (out.count(fusion->id)) return std::string("fusion node has successors");
  if (!is_acyclic(ids, edges)) return std::string("graph contains a cycle");

  const std::set<NodeId> from_root = reach(out, original->id);
  const std::set<NodeId> to_sink = reach(in, fusion->id);
  for (const TaskNode& n : nodes) {
    if (n.kind != NodeKind::kSubtask) continue;
    if (!from_root.count(n.id)) {
      return "subtask '" + n.id + "' is unreachable from the original node";
    }
    if (!to_sink.count(n.id)) {
      return "subtask '" + n.id + "' does not reach the fusion node";
    }
  }
  return std::nullopt;
}

TaskGraph::TaskGraph(std::vector<TaskNode> nodes, std::set<Edge> edges,
                     std::string global_goal)
    : edges_(std::move(edges)), global_goal_(std::move(global_goal)) {
  if (auto violation = find_invariant_violation(nodes, edges_)) {
    throw Error(ErrorKind::kInvalidGraph, "invalid graph: " + *violation);
  }
  for (TaskNode& n : nodes) {
    NodeId id = n.id;
    nodes_.emplace(std::move(id), std::move(n));
  }
}

const TaskNode& TaskGraph::node(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw Error(ErrorKind::kUnknownNode, "unknown node '" + id + "'");
  }
  return it->second;
}

const TaskNode& TaskGraph::original() const {
  for (const auto& [id, n] : nodes_) {
    if (n.kind == NodeKind::kOriginal) return n;
  }
  throw Error(ErrorKind::kInvalidGraph, "no original node");
}

const TaskNode& TaskGraph::fusion() const {
  for (const auto& [id, n] : nodes_) {
    if (n.kind == NodeKind::kFusion) return n;
  }
  throw Error(ErrorKind::kInvalidGraph, "no fusion node");
}

std::vector<NodeId> TaskGraph::predecessors(const NodeId& id) const {
  std::vector<NodeId> out;
  for (const auto& [from, to] : edges_) {
    if (to == id) out.push_back(from);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> TaskGraph::successors(const NodeId& id) const {
  std::vector<NodeId> out;
  auto it = edges_.lower_bound(Edge{id, NodeId{}});
  for (; it != edges_.end() && it->first == id; ++it) out.push_back(it->second);
  return out;
}

std::vector<NodeId> TaskGraph::subtask_ids() const {
  std::vector<NodeId> out;
  for (const auto& [id, n] : nodes_) {
    if (n.kind == NodeKind::kSubtask) out.push_back(id);
  }
  return out;
}

TaskGraph build_graph(const PlannerPlan& plan, std::string_view original_task) {
  if (plan.subtasks.empty()) {
    throw Error(ErrorKind::kEmptyPlan, "plan contains no subtasks");
  }
  const NodeId root{kOriginalId};
  const NodeId sink{kFusionId};
  std::set<NodeId> ids;
  for (const PlannedSubtask& s : plan.subtasks) {
    if (s.id.empty() || s.id == root || s.id == sink || !ids.insert(s.id).second) {
      throw Error(ErrorKind::kDuplicateNodeId,
                  "subtask id '" + s.id + "' is empty, reserved or repeated");
    }
  }
  std::set<Edge> plan_edges;
  for (const Edge& e : plan.edges) {
    if (!ids.count(e.first) || !ids.count(e.second)) {
      throw Error(ErrorKind::kDanglingEdge, "edge (" + e.first + ", " +
                                                e.second +
                                                ") references an unknown subtask");
    }
    if (e.first == e.second) {
      throw Error(ErrorKind::kCyclicPlan, "self edge on '" + e.first + "'");
    }
    plan_edges.insert(e);
  }
  if (!is_acyclic(ids, plan_edges)) {
    throw Error(ErrorKind::kCyclicPlan, "plan edges contain a cycle");
  }

  std::set<NodeId> has_pred, has_succ;
  for (const auto& [from, to] : plan_edges) {
    has_succ.insert(from);
    has_pred.insert(to);
  }
  std::set<Edge> edges = plan_edges;
  std::vector<TaskNode> nodes;
  std::string statement(original_task.empty() ? std::string_view(plan.global_goal)
                                             : original_task);
  if (statement.empty()) statement = "task";
  nodes.push_back({root, NodeKind::kOriginal, std::move(statement), 0});
  nodes.push_back({sink, NodeKind::kFusion, "", 0});
  for (const PlannedSubtask& s : plan.subtasks) {
    nodes.push_back({s.id, NodeKind::kSubtask, s.statement, 0});
    if (!has_pred.count(s.id)) edges.insert({root, s.id});
    if (!has_succ.count(s.id)) edges.insert({s.id, sink});
  }
  return TaskGraph(std::move(nodes), std::move(edges), plan.global_goal);
}

std::set<NodeId> ready_nodes(const TaskGraph& graph,
                             const std::set<NodeId>& completed) {
  const NodeId& root = graph.original().id;
  auto done = [&](const NodeId& id) {
    return id == root || completed.count(id) != 0;
  };
  std::set<NodeId> out;
  for (const auto& [id, n] : graph.nodes()) {
    if (n.kind == NodeKind::kOriginal || done(id)) continue;
    const auto preds = graph.predecessors(id);
    if (std::all_of(preds.begin(), preds.end(), done)) out.insert(id);
  }
  return out;
}

ResultSet predecessor_results(const TaskGraph& graph, const NodeId& node,
                              const std::map<NodeId, SubtaskResult>& results) {
  ResultSet out;
  for (const NodeId& pred : graph.predecessors(node)) {
    const TaskNode& p = graph.node(pred);
    if (p.kind == NodeKind::kOriginal) {
      out.push_back({pred, p.statement, std::nullopt});
      continue;
    }
    auto it = results.find(pred);
    if (it == results.end()) {
      throw Error(ErrorKind::kMissingPredecessor,
                  "predecessor '" + pred + "' of '" + node + "' has no result");
    }
    out.push_back({pred, it->second.answer_text, it->second.membership_vs_goal});
  }
  return out;
}

TaskGraph remove_node(const TaskGraph& graph, const NodeId& node) {
  require_subtask(graph, node);
  const NodeId& root = graph.original().id;
  const NodeId& sink = graph.fusion().id;
  const auto preds = graph.predecessors(node);
  const auto succs = graph.successors(node);

  std::set<Edge> edges;
  for (const Edge& e : graph.edges()) {
    if (e.first != node && e.second != node) edges.insert(e);
  }
  for (const NodeId& p : preds) {
    for (const NodeId& s : succs) {
      if (p == root && s == sink) continue;
      edges.insert({p, s});
    }
  }
  std::vector<TaskNode> nodes;
  for (const auto& [id, n] : graph.nodes()) {
    if (id != node) nodes.push_back(n);
  }
  return TaskGraph(std::move(nodes), std::move(edges), graph.global_goal());
}

TaskGraph splice_chain(const TaskGraph& graph, const NodeId& failed,
                       std::vector<TaskNode> chain) {
  require_subtask(graph, failed);
  if (chain.empty()) {
    throw Error(ErrorKind::kEmptyChain, "replacement chain for '" + failed +
                                            "' is empty");
  }
  const int depth = graph.node(failed).depth + 1;
  std::set<NodeId> fresh;
  for (TaskNode& n : chain) {
    if (graph.contains(n.id) || !fresh.insert(n.id).second) {
      throw Error(ErrorKind::kDuplicateNodeId,
                  "chain node id '" + n.id + "' is not fresh");
    }
    n.kind = NodeKind::kSubtask;
    n.depth = depth;
  }
  const auto preds = graph.predecessors(failed);
  const auto succs = graph.successors(failed);

  std::set<Edge> edges;
  for (const Edge& e : graph.edges()) {
    if (e.first != failed && e.second != failed) edges.insert(e);
  }
  for (const NodeId& p : preds) edges.insert({p, chain.front().id});
  for (std::size_t i = 1; i < chain.size(); ++i) {
    edges.insert({chain[i - 1].id, chain[i].id});
  }
  for (const NodeId& s : succs) edges.insert({chain.back().id, s});

  std::vector<TaskNode> nodes;
  for (const auto& [id, n] : graph.nodes()) {
    if (id != failed) nodes.push_back(n);
  }
  for (TaskNode& n : chain) nodes.push_back(std::move(n));
  return TaskGraph(std::move(nodes), std::move(edges), graph.global_goal());
}

std::string export_dot(const TaskGraph& graph,
                       const std::map<NodeId, MembershipLabel>& memberships) {
  std::ostringstream out;
  out << "digraph mtpg {\n";
  out << "  rankdir=TB;\n";
  for (const auto& [id, n] : graph.nodes()) {
    std::string label = dot_escape(id) + "\\n" + std::string(to_string(n.kind));
    if (auto it = memberships.find(id); it != memberships.end()) {
      label += "\\nmembership=" + std::string(to_string(it->second));
    }
    const char* shape = n.kind == NodeKind::kSubtask ? "box" : "ellipse";
    out << "  \"" << dot_escape(id) << "\" [label=\"" << label
        << "\", shape=" << shape;
    if (n.depth > 0) out << ", style=dashed";
    out << "];\n";
  }
  for (const auto& [from, to] : graph.edges()) {
    out << "  \"" << dot_escape(from) << "\" -> \"" << dot_escape(to)
        << "\";\n";
  }
  out << "}\n";
  return out.str();
}

std::map<NodeId, MembershipLabel> goal_memberships(
    const std::map<NodeId, SubtaskResult>& results) {
  std::map<NodeId, MembershipLabel> out;
  for (const auto& [id, r] : results) out.emplace(id, r.membership_vs_goal);
  return out;
}

}  // namespace rulegraph
