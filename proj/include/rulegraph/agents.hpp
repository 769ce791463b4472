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

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rulegraph/mtpg.hpp"
#include "rulegraph/provider.hpp"
#include "rulegraph/trace.hpp"

namespace rulegraph {

// Prompt variants. The fusion expert has a subtask and a final variant, plus
// the clustering request used by model-mode conflict resolution.
enum class Prompt {
  kPlan,
  kClassifyFailure,
  kAnalyzeDomains,
  kDomainAnswer,
  kClusterCandidates,
  kFuseSubtask,
  kFuseFinal,
  kAssessGoal,
};

std::string_view to_string(Prompt prompt);
RoleKind role_of(Prompt prompt);

// A role prompt with {{slot}} placeholders.
struct Role {
  RoleKind kind;
  std::string system_text;
  std::string template_text;

  // Slot names referenced by the template, in order of first use.
  std::vector<std::string> slots() const;
  // Throws Error(kMissingSlot) if a referenced slot is not supplied.
  std::string render(const std::map<std::string, std::string>& values) const;
};

const Role& default_role(Prompt prompt);

// Mutable state for the calls made on behalf of one node: per-role attempt
// counters, buffered trace events and usage totals. One context is owned by
// one thread at a time; the engine merges contexts at wave boundaries.
class CallContext {
 public:
  CallContext(std::string run_id, NodeId node_id, bool deterministic,
              std::map<RoleKind, int> counters = {});

  const std::string& run_id() const { return run_id_; }
  const NodeId& node_id() const { return node_id_; }

  ContextKey next_key(RoleKind role);
  void record(EventKind kind, ordered_json payload);
  void warn(std::string code, std::string message);
  void add_usage(const TokenUsage& usage) { usage_ += usage; }
  void count_call() { ++calls_; }

  const std::map<RoleKind, int>& counters() const { return counters_; }
  std::vector<PendingEvent> take_events() { return std::move(events_); }
  const std::vector<PendingEvent>& events() const { return events_; }
  const TokenUsage& usage() const { return usage_; }
  int calls() const { return calls_; }

 private:
  std::string run_id_;
  NodeId node_id_;
  bool deterministic_;
  std::map<RoleKind, int> counters_;
  std::vector<PendingEvent> events_;
  TokenUsage usage_;
  int calls_ = 0;
};

struct AgentOptions {
  // Decision roles default to 0; planner and domain experts are sampled.
  std::map<RoleKind, double> temperature = {
      {RoleKind::kPlanner, 0.7},      {RoleKind::kDomainAnalyst, 0.0},
      {RoleKind::kDomainExpert, 0.7}, {RoleKind::kFusionExpert, 0.0},
      {RoleKind::kGlobalExpert, 0.0}};
  // Re-asks after a malformed response, each with the violation appended.
  int max_reasks = 2;
};

enum class FailureScenario { kIrrelevant, kTooComplex };

std::string_view to_string(FailureScenario scenario);

// Extra check run on a document after schema validation. Throws
// Error::schema_violation to trigger a re-ask.
using DocumentCheck = std::function<void(const json&)>;

class Agents {
 public:
  Agents(Provider& provider, AgentOptions options = {});

  // One logical call: render, send, parse, validate, re-ask on violation.
  // Provider transport failures surface as kProviderFailure; kScriptMiss
  // passes through unchanged. Exhausted re-asks throw the schema's
  // malformed-output kind.
  json invoke(CallContext& ctx, Prompt prompt,
              const std::map<std::string, std::string>& slots, SchemaId schema,
              const DocumentCheck& check = nullptr,
              MembershipLabel threshold = kDefaultThreshold);

  // Planner call. `max_subtasks` > 0 is passed to the prompt as a limit.
  PlannerPlan plan(CallContext& ctx, std::string_view task, int max_subtasks = 0);

  FailureScenario classify_failure(CallContext& ctx, const TaskNode& node,
                                   std::string_view goal,
                                   std::string_view last_diff);

  Provider& provider() { return provider_; }
  const AgentOptions& options() const { return options_; }

 private:
  Provider& provider_;
  AgentOptions options_;
};

// Agents plus the context the calls are charged to.
struct Session {
  Agents& agents;
  CallContext& ctx;
};

// Converts a validated plan document; throws Error::schema_violation for
// duplicate or reserved ids, dangling edges and cycles.
PlannerPlan plan_from_document(const json& doc);

std::string format_results(const ResultSet& results);

}  // namespace rulegraph
