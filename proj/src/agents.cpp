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

#include "rulegraph/agents.hpp"

#include <set>
#include <sstream>

#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

// Prompt wording is this project's own; every role answers with a single
// JSON document so the structured parser can validate it.
const std::map<Prompt, Role>& role_table() {
  static const std::map<Prompt, Role> table = {
      {Prompt::kPlan,
       {RoleKind::kPlanner,
        "You are the Planner Agent of a multi-agent system. You decompose a "
        "task into simple subtasks and state the global goal the final answer "
        "must serve.",
        "Task:\n{{task}}\n\n"
        "Decompose the task into {{limit}} subtasks. Each subtask must be "
        "simple enough for a single expert to answer. Add an edge [a, b] only "
        "if subtask b needs the result of subtask a. Also state the global "
        "goal: the overall purpose any answer to this task must serve.\n\n"
        "Respond with one JSON document:\n"
        "{\"global_goal\": \"...\", \"subtasks\": [{\"id\": \"T1\", "
        "\"statement\": \"...\"}], \"edges\": [[\"T1\", \"T2\"]]}"}},
      {Prompt::kClassifyFailure,
       {RoleKind::kPlanner,
        "You are the Planner Agent of a multi-agent system. You repair task "
        "plans when a subtask cannot be completed.",
        "A subtask kept failing to align with the global goal after repeated "
        "attempts.\n\nGlobal goal:\n{{goal}}\n\nSubtask:\n{{subtask}}\n\n"
        "Last deviation reported:\n{{diff}}\n\n"
        "Decide why it failed: \"irrelevant\" if the subtask does not serve "
        "the global goal and should be dropped, \"too_complex\" if it serves "
        "the goal but is too uncertain or complex to answer in one step.\n\n"
        "Respond with one JSON document:\n"
        "{\"scenario\": \"irrelevant\", \"reason\": \"...\"}"}},
      {Prompt::kAnalyzeDomains,
       {RoleKind::kDomainAnalyst,
        "You are the Domain Analyst Agent. You build IF-THEN domain rules for "
        "a subtask.",
        "Subtask:\n{{task}}\n\nAvailable domains:\n{{catalog}}\n\n"
        "Select exactly {{k}} distinct domains from the list that are most "
        "relevant to the subtask. For each domain write one rule. The "
        "antecedent states, in that domain's terminology, when the subtask "
        "belongs to the domain. The membership rates how strongly the "
        "subtask belongs to the domain, using one of H (High), SH "
        "(Sub-High), M (Medium), ML (Mid-Low), Lr (Lower), L (Low). The "
        "consequent_prompt instructs a domain expert who will answer the "
        "subtask from that domain's perspective.\n\n"
        "Respond with one JSON document:\n"
        "{\"rules\": [{\"domain\": \"...\", \"antecedent\": \"IF the subtask "
        "...\", \"membership\": \"H\", \"consequent_prompt\": \"...\"}]}"}},
      {Prompt::kDomainAnswer,
       {RoleKind::kDomainExpert,
        "You are a Domain Expert Agent. You answer strictly from the "
        "perspective of your assigned domain.",
        "{{consequent_prompt}}\n\nDomain: {{domain}}\n\nSubtask:\n{{task}}\n\n"
        "Results of the preceding steps:\n{{context}}\n\n"
        "Respond with one JSON document:\n{\"answer\": \"...\"}"}},
      {Prompt::kClusterCandidates,
       {RoleKind::kFusionExpert,
        "You are the Fusion Expert Agent. You compare candidate answers and "
        "detect semantic conflicts between them.",
        "Candidate answers to the subtask below were produced by different "
        "domain experts.\n\nSubtask:\n{{task}}\n\nCandidates:\n{{candidates}}"
        "\n\nGive each candidate a short cluster key. Candidates that carry "
        "the same meaning must get the same key.\n\n"
        "Respond with one JSON document holding one key per candidate, in "
        "candidate order:\n{\"cluster_keys\": [\"...\"]}"}},
      {Prompt::kFuseSubtask,
       {RoleKind::kFusionExpert,
        "You are the Fusion Expert Agent. You fuse the answers of domain "
        "experts into one consistent answer.",
        "Subtask:\n{{task}}\n\nAnswers that agree with each other and won "
        "the conflict resolution:\n{{winners}}\n\nRejected answers:\n"
        "{{rejected}}\n\nFuse the agreeing answers into a single answer to "
        "the subtask. Leave out claims that appear only in rejected "
        "answers.\n\nRespond with one JSON document:\n{\"answer\": \"...\"}"}},
      {Prompt::kFuseFinal,
       {RoleKind::kFusionExpert,
        "You are the Fusion Expert Agent. You assemble the final answer from "
        "completed subtask results.",
        "Original task:\n{{task}}\n\nResults of the completed subtasks:\n"
        "{{results}}\n\nCombine the subtask results into one complete answer "
        "to the original task.\n\n"
        "Respond with one JSON document:\n{\"answer\": \"...\"}"}},
      {Prompt::kAssessGoal,
       {RoleKind::kGlobalExpert,
        "You are the Global Expert Agent. You check results against the "
        "global goal of the task.",
        "Global goal:\n{{goal}}\n\nSubtask:\n{{task}}\n\nFused result:\n"
        "{{result}}\n\nRate how well the fused result serves the global goal "
        "using one of H (High), SH (Sub-High), M (Medium), ML (Mid-Low), Lr "
        "(Lower), L (Low). If the rating is below ML, describe in diff_text "
        "how the result deviates from the goal and what must change.\n\n"
        "Respond with one JSON document:\n"
        "{\"membership\": \"H\", \"diff_text\": \"...\"}"}},
  };
  return table;
}

ErrorKind malformed_kind(SchemaId schema) {
  switch (schema) {
    case SchemaId::kPlan: return ErrorKind::kMalformedPlan;
    case SchemaId::kRuleset: return ErrorKind::kMalformedAnalysis;
    case SchemaId::kCandidate: return ErrorKind::kRuleExecutionFailure;
    case SchemaId::kFusion: return ErrorKind::kMalformedFusion;
    case SchemaId::kAssessment: return ErrorKind::kMalformedAssessment;
    case SchemaId::kFailureClassification:
      return ErrorKind::kMalformedClassification;
  }
  return ErrorKind::kSchemaViolation;
}

bool is_slot_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

// Calls `fn(name, begin, end)` for every {{name}} placeholder.
template <typename Fn>
void for_each_slot(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  while ((pos = text.find("{{", pos)) != std::string_view::npos) {
    const std::size_t close = text.find("}}", pos + 2);
    if (close == std::string_view::npos) return;
    std::string_view name = text.substr(pos + 2, close - pos - 2);
    bool valid = !name.empty();
    for (char c : name) valid = valid && is_slot_char(c);
    if (valid) {
      fn(name, pos, close + 2);
      pos = close + 2;
    } else {
      pos += 2;
    }
  }
}

}  // namespace

std::string_view to_string(Prompt prompt) {
  switch (prompt) {
    case Prompt::kPlan: return "plan";
    case Prompt::kClassifyFailure: return "classify_failure";
    case Prompt::kAnalyzeDomains: return "analyze_domains";
    case Prompt::kDomainAnswer: return "domain_answer";
    case Prompt::kClusterCandidates: return "cluster_candidates";
    case Prompt::kFuseSubtask: return "fuse_subtask";
    case Prompt::kFuseFinal: return "fuse_final";
    case Prompt::kAssessGoal: return "assess_goal";
  }
  return "plan";
}

RoleKind role_of(Prompt prompt) { return default_role(prompt).kind; }

const Role& default_role(Prompt prompt) { return role_table().at(prompt); }

std::vector<std::string> Role::slots() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for_each_slot(template_text, [&](std::string_view name, std::size_t, std::size_t) {
    if (seen.emplace(name).second) out.emplace_back(name);
  });
  return out;
}

std::string Role::render(const std::map<std::string, std::string>& values) const {
  std::string out;
  std::size_t copied = 0;
  for_each_slot(template_text, [&](std::string_view name, std::size_t begin,
                                   std::size_t end) {
    auto it = values.find(std::string(name));
    if (it == values.end()) {
      throw Error(ErrorKind::kMissingSlot,
                  "prompt slot '" + std::string(name) + "' was not supplied");
    }
    out.append(template_text, copied, begin - copied);
    out += it->second;
    copied = end;
  });
  out.append(template_text, copied, std::string::npos);
  return out;
}

CallContext::CallContext(std::string run_id, NodeId node_id, bool deterministic,
                         std::map<RoleKind, int> counters)
    : run_id_(std::move(run_id)),
      node_id_(std::move(node_id)),
      deterministic_(deterministic),
      counters_(std::move(counters)) {}

ContextKey CallContext::next_key(RoleKind role) {
  return ContextKey{run_id_, node_id_, role, ++counters_[role]};
}

void CallContext::record(EventKind kind, ordered_json payload) {
  validate_payload(kind, payload);
  events_.push_back({kind, std::move(payload), deterministic_ ? 0 : now_ms()});
}

void CallContext::warn(std::string code, std::string message) {
  ordered_json p;
  p["code"] = std::move(code);
  p["node"] = node_id_;
  p["message"] = std::move(message);
  record(EventKind::kWarning, std::move(p));
}

std::string_view to_string(FailureScenario scenario) {
  return scenario == FailureScenario::kIrrelevant ? "irrelevant" : "too_complex";
}

Agents::Agents(Provider& provider, AgentOptions options)
    : provider_(provider), options_(std::move(options)) {}

json Agents::invoke(CallContext& ctx, Prompt prompt,
                    const std::map<std::string, std::string>& slots,
                    SchemaId schema, const DocumentCheck& check,
                    MembershipLabel threshold) {
  const Role& role = default_role(prompt);
  const std::string base = role.render(slots);
  std::string text = base;
  std::string last_violation;

  for (int ask = 0; ask <= options_.max_reasks; ++ask) {
    ProviderRequest request;
    request.role = role.kind;
    request.system_prompt = role.system_text;
    request.rendered_prompt = text;
    request.response_schema = schema;
    auto t = options_.temperature.find(role.kind);
    request.temperature = t == options_.temperature.end() ? 0.0 : t->second;
    request.context_key = ctx.next_key(role.kind);

    ordered_json event;
    event["run"] = request.context_key.run_id;
    event["node"] = request.context_key.node_id;
    event["role"] = to_string(role.kind);
    event["attempt"] = request.context_key.attempt;
    event["prompt"] = to_string(prompt);
    event["schema"] = to_string(schema);
    event["temperature"] = request.temperature;

    ProviderResponse response;
    ctx.count_call();
    try {
      response = provider_.complete(request);
    } catch (const Error& e) {
      event["status"] = "error";
      event["error"] = kind_name(e.kind());
      ctx.record(EventKind::kProviderCall, std::move(event));
      if (e.kind() == ErrorKind::kScriptMiss) throw;
      throw Error(ErrorKind::kProviderFailure,
                  std::string(to_string(role.kind)) + " call " +
                      request.context_key.str() + " failed: " + e.what());
    }
    ctx.add_usage(response.token_usage);
    event["transport_attempts"] = response.transport_attempts;
    event["prompt_tokens"] = response.token_usage.prompt_tokens;
    event["completion_tokens"] = response.token_usage.completion_tokens;

    try {
      json doc = parse_structured(response.raw_text, schema, threshold);
      if (check) check(doc);
      event["status"] = "ok";
      ctx.record(EventKind::kProviderCall, std::move(event));
      return doc;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kSchemaViolation &&
          e.kind() != ErrorKind::kNoDocumentFound &&
          e.kind() != ErrorKind::kUnrecognizedLabel) {
        throw;
      }
      last_violation = e.what();
      event["status"] = "violation";
      event["error"] = last_violation;
      ctx.record(EventKind::kProviderCall, std::move(event));
    }
    text = base + "\n\nYour previous response was rejected: " + last_violation +
           ". Reply again with a single JSON document in the required format.";
  }
  throw Error(malformed_kind(schema), std::string(to_string(prompt)) +
                                          " output still malformed after " +
                                          std::to_string(options_.max_reasks) +
                                          " re-asks: " + last_violation);
}

PlannerPlan plan_from_document(const json& doc) {
  PlannerPlan plan;
  plan.global_goal = doc.at("global_goal").get<std::string>();
  for (const json& s : doc.at("subtasks")) {
    plan.subtasks.push_back(
        {s.at("id").get<std::string>(), s.at("statement").get<std::string>()});
  }
  if (doc.contains("edges")) {
    for (const json& e : doc["edges"]) {
      plan.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  try {
    (void)build_graph(plan);
  } catch (const Error& e) {
    const std::string field = e.kind() == ErrorKind::kDanglingEdge ||
                                      e.kind() == ErrorKind::kCyclicPlan
                                  ? "edges"
                                  : "subtasks";
    throw Error::schema_violation(field, e.what());
  }
  return plan;
}

PlannerPlan Agents::plan(CallContext& ctx, std::string_view task, int max_subtasks) {
  const std::string limit =
      max_subtasks > 0 ? "at most " + std::to_string(max_subtasks) : "a few";
  PlannerPlan plan;
  invoke(ctx, Prompt::kPlan, {{"task", std::string(task)}, {"limit", limit}},
         SchemaId::kPlan,
         [&](const json& doc) { plan = plan_from_document(doc); });
  return plan;
}

FailureScenario Agents::classify_failure(CallContext& ctx, const TaskNode& node,
                                         std::string_view goal,
                                         std::string_view last_diff) {
  const json doc = invoke(ctx, Prompt::kClassifyFailure,
                          {{"goal", std::string(goal)},
                           {"subtask", node.statement},
                           {"diff", last_diff.empty() ? std::string("(none)")
                                                      : std::string(last_diff)}},
                          SchemaId::kFailureClassification);
  return doc.at("scenario") == "irrelevant" ? FailureScenario::kIrrelevant
                                            : FailureScenario::kTooComplex;
}

std::string format_results(const ResultSet& results) {
  if (results.empty()) return "(none)";
  std::ostringstream out;
  for (const PredecessorResult& r : results) {
    out << "[" << r.node_id << "] " << r.text << "\n";
  }
  std::string s = out.str();
  s.pop_back();
  return s;
}

}  // namespace rulegraph
