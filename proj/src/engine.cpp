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

#include "rulegraph/engine.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <memory>
#include <set>
#include <thread>

namespace rulegraph {
namespace {

// Runs fn(0..n-1) on up to `cap` threads. Exceptions are rethrown in index
// order after every task has finished.
template <typename Fn>
void run_parallel(std::size_t n, int cap, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(n, std::max(cap, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string chain_id(const std::string& base, std::size_t i) {
  if (i < 26) return base + static_cast<char>('a' + i);
  return base + "_" + std::to_string(i + 1);
}

ordered_json plan_to_json(const PlannerPlan& plan) {
  ordered_json subtasks = ordered_json::array();
  for (const PlannedSubtask& s : plan.subtasks) {
    subtasks.push_back({{"id", s.id}, {"statement", s.statement}});
  }
  ordered_json edges = ordered_json::array();
  for (const Edge& e : plan.edges) edges.push_back({e.first, e.second});
  ordered_json j;
  j["global_goal"] = plan.global_goal;
  j["subtasks"] = std::move(subtasks);
  j["edges"] = std::move(edges);
  return j;
}

class Run {
 public:
  Run(Provider& provider, const RunConfig& config)
      : config_(config), agents_(provider, config.agents) {}

  RunOutcome execute(std::string_view task);

 private:
  CallContext context_for(const NodeId& node) {
    return CallContext(config_.run_id, node, config_.deterministic, counters_[node]);
  }

  void absorb(CallContext& ctx) {
    trace_.append_all(ctx.take_events());
    usage_ += ctx.usage();
    calls_ += ctx.calls();
    counters_[ctx.node_id()] = ctx.counters();
  }

  [[noreturn]] void fail(ErrorKind kind, const std::string& message) {
    throw RunFailure(kind, message, trace_.events(), calls_, usage_);
  }

  const RunConfig& config_;
  Agents agents_;
  Trace trace_;
  std::map<NodeId, std::map<RoleKind, int>> counters_;
  TokenUsage usage_;
  int calls_ = 0;
};

RunOutcome Run::execute(std::string_view task) {
  const NodeId root{kOriginalId};
  const NodeId sink{kFusionId};

  std::optional<TaskGraph> graph;
  {
    CallContext ctx = context_for(root);
    try {
      const PlannerPlan plan = agents_.plan(ctx, task);
      graph.emplace(build_graph(plan, task));
      ordered_json p;
      p["status"] = "ok";
      const ordered_json plan_json = plan_to_json(plan);
      for (const auto& [k, v] : plan_json.items()) p[k] = v;
      p["graph"] = graph_to_json(*graph);
      ctx.record(EventKind::kPlan, std::move(p));
      absorb(ctx);
    } catch (const Error& e) {
      ordered_json p;
      p["status"] = "failed";
      p["error"] = kind_name(e.kind());
      p["message"] = e.what();
      ctx.record(EventKind::kPlan, std::move(p));
      absorb(ctx);
      fail(ErrorKind::kPlanningFailure, std::string("planning failed: ") + e.what());
    }
  }

  std::set<NodeId> completed{root};
  std::map<NodeId, SubtaskResult> results;
  for (;;) {
    std::vector<NodeId> wave;
    for (const NodeId& id : ready_nodes(*graph, completed)) {
      if (graph->node(id).kind == NodeKind::kSubtask) wave.push_back(id);
    }
    if (wave.empty()) break;

    std::vector<ResultSet> preds;
    std::vector<CallContext> contexts;
    for (const NodeId& id : wave) {
      preds.push_back(predecessor_results(*graph, id, results));
      contexts.push_back(context_for(id));
    }
    std::vector<NodeOutcome> outcomes(wave.size());
    run_parallel(wave.size(), config_.concurrency, [&](std::size_t i) {
      Session session{agents_, contexts[i]};
      outcomes[i] = process_node(session, config_, *graph, graph->node(wave[i]), preds[i]);
    });

    std::vector<std::size_t> failed;
    for (std::size_t i = 0; i < wave.size(); ++i) {
      absorb(contexts[i]);
      if (outcomes[i].error && outcomes[i].error->kind() == ErrorKind::kScriptMiss) {
        fail(ErrorKind::kScriptMiss, outcomes[i].error->what());
      }
      if (outcomes[i].accepted()) {
        results.emplace(wave[i], *outcomes[i].result);
        completed.insert(wave[i]);
      } else {
        failed.push_back(i);
      }
    }
    for (std::size_t i : failed) {
      CallContext ctx = context_for(wave[i]);
      Session session{agents_, ctx};
      try {
        GraphEdit edit =
            handle_failure(session, config_, *graph, wave[i], outcomes[i].last_diff);
        graph.emplace(std::move(edit.graph));
      } catch (const Error& e) {
        absorb(ctx);
        fail(e.kind(), e.what());
      }
      absorb(ctx);
    }
  }

  if (graph->predecessors(sink).empty()) {
    fail(ErrorKind::kAllPathsFailed,
         "every subtask was removed; the fusion node has no inputs");
  }
  CallContext ctx = context_for(sink);
  Session session{agents_, ctx};
  FinalResult final;
  try {
    final = fuse_final(predecessor_results(*graph, sink, results), task, session);
  } catch (const Error& e) {
    absorb(ctx);
    fail(e.kind(), std::string("final fusion failed: ") + e.what());
  }
  ordered_json p;
  p["answer_text"] = final.answer_text;
  p["contributing_nodes"] = final.contributing_nodes;
  p["graph"] = graph_to_json(*graph);
  ctx.record(EventKind::kFinal, std::move(p));
  absorb(ctx);

  return RunOutcome{std::move(final), std::move(*graph), std::move(results),
                    trace_.events(), calls_, usage_};
}

}  // namespace

void RunConfig::validate() const {
  auto bad = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidConfig, what);
  };
  if (k_rules < 1) bad("k_rules must be >= 1");
  if (max_reprocess < 1) bad("max_reprocess must be >= 1");
  if (max_depth < 0) bad("max_depth must be >= 0");
  if (max_chain < 1) bad("max_chain must be >= 1");
  if (concurrency < 1) bad("concurrency must be >= 1");
  if (agents.max_reasks < 0) bad("max_reasks must be >= 0");
  if (run_id.empty()) bad("run_id must not be empty");
  if (static_cast<std::size_t>(k_rules) > catalog.names().size()) {
    bad("k_rules exceeds the number of catalog domains");
  }
}

RunFailure::RunFailure(ErrorKind kind, std::string message,
                       std::vector<TraceEvent> trace, int provider_calls,
                       TokenUsage usage)
    : Error(kind, std::move(message)),
      trace_(std::move(trace)),
      provider_calls_(provider_calls),
      usage_(usage) {}

RunOutcome execute_task(Provider& provider, std::string_view task,
                        const RunConfig& config) {
  config.validate();
  if (task.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorKind::kInvalidConfig, "task text is empty");
  }
  if (config.deterministic && provider.is_live()) {
    throw Error(ErrorKind::kInvalidConfig,
                "deterministic mode cannot use a live provider");
  }
  Run run(provider, config);
  return run.execute(task);
}

NodeOutcome process_node(Session& session, const RunConfig& config,
                         const TaskGraph& graph, const TaskNode& node,
                         const ResultSet& preds) {
  NodeOutcome out;
  out.node = node.id;
  {
    ordered_json p;
    p["node"] = node.id;
    p["depth"] = node.depth;
    p["statement"] = node.statement;
    ordered_json pred_ids = ordered_json::array();
    for (const PredecessorResult& r : preds) pred_ids.push_back(r.node_id);
    p["predecessors"] = std::move(pred_ids);
    session.ctx.record(EventKind::kNodeStart, std::move(p));
  }
  const GlobalRule global{graph.global_goal(), config.threshold};
  const FusionOptions fusion_options{config.cluster_mode, config.synthesize};
  std::optional<std::string> feedback;

  for (int attempt = 1; attempt <= config.max_reprocess; ++attempt) {
    out.attempts = attempt;
    if (feedback) {
      ordered_json p;
      p["node"] = node.id;
      p["attempt"] = attempt;
      p["feedback"] = *feedback;
      session.ctx.record(EventKind::kReprocess, std::move(p));
    }
    try {
      const RuleSet rules = construct_rules(
          session, node, config.catalog, config.k_rules, global,
          feedback ? std::optional<std::string_view>(*feedback) : std::nullopt);
      {
        ordered_json p;
        p["node"] = node.id;
        p["attempt"] = attempt;
        ordered_json list = ordered_json::array();
        for (const DomainRule& r : rules.rules) list.push_back(to_json(r, node.id));
        p["rules"] = std::move(list);
        session.ctx.record(EventKind::kRulesBuilt, std::move(p));
      }

      const RuleRun run = run_rules(session, rules, node.statement, preds);
      for (const RuleFailure& f : run.failures) {
        ordered_json p;
        p["code"] = "rule_failed";
        p["node"] = node.id;
        p["rule_index"] = f.rule_index;
        p["error"] = kind_name(f.kind);
        p["message"] = f.message;
        session.ctx.record(EventKind::kWarning, std::move(p));
      }
      for (const CandidateResult& c : run.candidates) {
        ordered_json p = to_json(rules.rules[c.rule_index - 1], node.id);
        p["attempt"] = attempt;
        p["answer_text"] = c.answer_text;
        session.ctx.record(EventKind::kRuleResult, std::move(p));
      }

      SubtaskFusion fusion = fuse_subtask(run.candidates, node, fusion_options, &session);
      session.ctx.record(EventKind::kFusion, to_json(fusion, attempt));

      const GlobalAssessment assessment =
          run_global_rule(session, global, node.statement, fusion.result);
      const bool passed = !below(assessment.membership, config.threshold);
      {
        ordered_json p;
        p["node"] = node.id;
        p["attempt"] = attempt;
        p["membership"] = to_string(assessment.membership);
        p["diff_text"] = assessment.diff_text;
        p["passed"] = passed;
        session.ctx.record(EventKind::kAssessment, std::move(p));
      }
      if (passed) {
        SubtaskResult result = std::move(fusion.result);
        result.attempts_used = attempt;
        result.membership_vs_goal = assessment.membership;
        ordered_json p;
        p["node"] = node.id;
        p["attempts_used"] = attempt;
        p["membership"] = to_string(assessment.membership);
        p["answer_text"] = result.answer_text;
        session.ctx.record(EventKind::kNodeDone, std::move(p));
        out.result = std::move(result);
        return out;
      }
      feedback = assessment.diff_text;
      out.last_diff = assessment.diff_text;
    } catch (const Error& e) {
      out.error = e;
      if (e.kind() != ErrorKind::kScriptMiss) {
        session.ctx.warn("node_error", std::string(kind_name(e.kind())) + ": " + e.what());
      }
      return out;
    }
  }
  return out;
}

std::vector<PlannedSubtask> chain_order(const PlannerPlan& plan) {
  std::map<NodeId, int> indegree;
  std::map<NodeId, std::vector<NodeId>> out;
  for (const PlannedSubtask& s : plan.subtasks) indegree[s.id] = 0;
  for (const Edge& e : plan.edges) {
    out[e.first].push_back(e.second);
    ++indegree[e.second];
  }
  std::vector<PlannedSubtask> ordered;
  std::set<NodeId> emitted;
  while (ordered.size() < plan.subtasks.size()) {
    bool progressed = false;
    for (const PlannedSubtask& s : plan.subtasks) {
      if (emitted.count(s.id) || indegree[s.id] != 0) continue;
      ordered.push_back(s);
      emitted.insert(s.id);
      for (const NodeId& next : out[s.id]) --indegree[next];
      progressed = true;
      break;
    }
    if (!progressed) {
      throw Error(ErrorKind::kCyclicPlan, "decomposition plan contains a cycle");
    }
  }
  return ordered;
}

GraphEdit handle_failure(Session& session, const RunConfig& config,
                         const TaskGraph& graph, const NodeId& node_id,
                         std::string_view last_diff) {
  const TaskNode& node = graph.node(node_id);
  std::string reason = "irrelevant";
  FailureScenario scenario = FailureScenario::kIrrelevant;
  try {
    scenario = session.agents.classify_failure(session.ctx, node, graph.global_goal(),
                                               last_diff);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kScriptMiss) throw;
    session.ctx.warn("classification_failed",
                     std::string("failure classification failed, removing node: ") +
                         e.what());
    reason = "classification_failed";
  }

  if (scenario == FailureScenario::kTooComplex) {
    if (node.depth >= config.max_depth) {
      session.ctx.warn("depth_limit", "node '" + node_id + "' at depth " +
                                          std::to_string(node.depth) +
                                          " reached the reconstruction limit; removing");
      reason = "depth_limit";
    } else {
      try {
        const PlannerPlan plan =
            session.agents.plan(session.ctx, node.statement, config.max_chain);
        std::vector<PlannedSubtask> ordered = chain_order(plan);
        if (static_cast<int>(ordered.size()) > config.max_chain) {
          session.ctx.warn("chain_truncated",
                           "decomposition of '" + node_id + "' returned " +
                               std::to_string(ordered.size()) + " subtasks; keeping " +
                               std::to_string(config.max_chain));
          ordered.resize(static_cast<std::size_t>(config.max_chain));
        }
        std::vector<TaskNode> chain;
        std::set<NodeId> used;
        for (std::size_t i = 0; i < ordered.size(); ++i) {
          NodeId id = chain_id(node_id, i);
          while (graph.contains(id) || used.count(id)) id += "_";
          used.insert(id);
          chain.push_back({id, NodeKind::kSubtask, ordered[i].statement, node.depth + 1});
        }
        TaskGraph next = splice_chain(graph, node_id, chain);
        GraphEdit edit{GraphEdit::Kind::kSpliced, node_id, {}, "too_complex", next};
        ordered_json p;
        p["node"] = node_id;
        ordered_json list = ordered_json::array();
        for (const TaskNode& n : chain) {
          edit.chain.push_back(n.id);
          list.push_back({{"id", n.id}, {"statement", n.statement}, {"depth", n.depth}});
        }
        p["chain"] = std::move(list);
        p["graph"] = graph_to_json(next);
        session.ctx.record(EventKind::kNodeSpliced, std::move(p));
        return edit;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::kScriptMiss) throw;
        session.ctx.warn("decomposition_failed",
                         std::string("decomposition failed, removing node: ") + e.what());
        reason = "decomposition_failed";
      }
    }
  }

  TaskGraph next = remove_node(graph, node_id);
  ordered_json p;
  p["node"] = node_id;
  p["reason"] = reason;
  p["graph"] = graph_to_json(next);
  session.ctx.record(EventKind::kNodeRemoved, std::move(p));
  return GraphEdit{GraphEdit::Kind::kRemoved, node_id, {}, reason, std::move(next)};
}

std::uint64_t provider_call_bound(const RunConfig& config, int planned_subtasks,
                                  bool with_reasks) {
  const std::uint64_t m = static_cast<std::uint64_t>(config.max_chain);
  std::uint64_t per_original = 0;  // executions spawned by one planned node
  std::uint64_t level = 1;
  for (int d = 0; d <= config.max_depth; ++d) {
    per_original += level;
    level *= m;
  }
  const std::uint64_t executions =
      static_cast<std::uint64_t>(planned_subtasks) * per_original;
  const int fusion_calls = (config.cluster_mode == ClusterMode::kModel ? 1 : 0) +
                           (config.synthesize ? 1 : 0);
  const std::uint64_t per_attempt =
      static_cast<std::uint64_t>(config.k_rules) + 2 +
      static_cast<std::uint64_t>(std::max(fusion_calls, 1));
  // attempts, then classify + decompose per execution; plan and final once.
  std::uint64_t bound =
      executions * (static_cast<std::uint64_t>(config.max_reprocess) * per_attempt + 2) + 2;
  if (with_reasks) bound *= static_cast<std::uint64_t>(1 + config.agents.max_reasks);
  return bound;
}

ordered_json graph_to_json(const TaskGraph& graph) {
  ordered_json nodes = ordered_json::array();
  for (const auto& [id, n] : graph.nodes()) {
    ordered_json j;
    j["id"] = n.id;
    j["kind"] = to_string(n.kind);
    j["statement"] = n.statement;
    j["depth"] = n.depth;
    nodes.push_back(std::move(j));
  }
  ordered_json edges = ordered_json::array();
  for (const auto& [from, to] : graph.edges()) edges.push_back({from, to});
  ordered_json out;
  out["global_goal"] = graph.global_goal();
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  return out;
}

TaskGraph graph_from_json(const ordered_json& doc) {
  try {
    std::vector<TaskNode> nodes;
    for (const auto& n : doc.at("nodes")) {
      nodes.push_back({n.at("id").get<std::string>(),
                       parse_node_kind(n.at("kind").get<std::string>()),
                       n.at("statement").get<std::string>(), n.at("depth").get<int>()});
    }
    std::set<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      edges.emplace(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    return TaskGraph(std::move(nodes), std::move(edges),
                     doc.value("global_goal", std::string()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedRecord, std::string("bad graph record: ") + e.what());
  }
}

std::pair<TaskGraph, std::map<NodeId, MembershipLabel>> graph_from_trace(
    const std::vector<TraceEvent>& trace) {
  const ordered_json* snapshot = nullptr;
  std::map<NodeId, MembershipLabel> memberships;
  for (const TraceEvent& e : trace) {
    if (e.payload.contains("graph")) snapshot = &e.payload["graph"];
    if (e.kind == EventKind::kNodeDone) {
      memberships[e.payload["node"].get<std::string>()] =
          parse_label(e.payload["membership"].get<std::string>());
    }
  }
  if (snapshot == nullptr) {
    throw Error(ErrorKind::kMalformedRecord, "trace contains no graph snapshot");
  }
  TaskGraph graph = graph_from_json(*snapshot);
  std::erase_if(memberships, [&](const auto& kv) { return !graph.contains(kv.first); });
  return {std::move(graph), std::move(memberships)};
}

}  // namespace rulegraph
