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

#include "rulegraph/trace.hpp"

#include <array>
#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

struct KindInfo {
  EventKind kind;
  std::string_view name;
  std::initializer_list<std::string_view> required;
};

const std::array<KindInfo, 13>& kinds() {
  static const std::array<KindInfo, 13> table = {{
      {EventKind::kPlan, "plan", {"status"}},
      {EventKind::kNodeStart, "node_start", {"node", "depth", "statement"}},
      {EventKind::kRulesBuilt, "rules_built", {"node", "attempt", "rules"}},
      {EventKind::kRuleResult,
       "rule_result",
       {"subtask_id", "rule_index", "domain_name", "membership", "antecedent",
        "answer_text"}},
      {EventKind::kFusion,
       "fusion",
       {"node", "attempt", "mode", "clusters", "winner", "layer"}},
      {EventKind::kAssessment,
       "assessment",
       {"node", "attempt", "membership", "diff_text", "passed"}},
      {EventKind::kReprocess, "reprocess", {"node", "attempt", "feedback"}},
      {EventKind::kNodeRemoved, "node_removed", {"node", "reason", "graph"}},
      {EventKind::kNodeSpliced, "node_spliced", {"node", "chain", "graph"}},
      {EventKind::kNodeDone,
       "node_done",
       {"node", "attempts_used", "membership", "answer_text"}},
      {EventKind::kFinal, "final", {"answer_text", "contributing_nodes", "graph"}},
      {EventKind::kProviderCall,
       "provider_call",
       {"run", "node", "role", "attempt", "schema", "status"}},
      {EventKind::kWarning, "warning", {"code", "message"}},
  }};
  return table;
}

const KindInfo& info(EventKind kind) {
  for (const KindInfo& k : kinds()) {
    if (k.kind == kind) return k;
  }
  return kinds().back();
}

}  // namespace

std::string_view to_string(EventKind kind) { return info(kind).name; }

EventKind parse_event_kind(std::string_view text) {
  for (const KindInfo& k : kinds()) {
    if (k.name == text) return k.kind;
  }
  throw Error(ErrorKind::kMalformedRecord,
              "unknown trace event kind '" + std::string(text) + "'");
}

void validate_payload(EventKind kind, const ordered_json& payload) {
  if (!payload.is_object()) {
    throw Error::schema_violation("payload", "trace payload must be an object");
  }
  for (std::string_view field : info(kind).required) {
    if (!payload.contains(field)) {
      throw Error::schema_violation(
          std::string(field),
          "required by " + std::string(to_string(kind)) + " events");
    }
  }
  if (kind == EventKind::kPlan && payload["status"] == "ok") {
    for (std::string_view field : {"global_goal", "subtasks", "edges", "graph"}) {
      if (!payload.contains(field)) {
        throw Error::schema_violation(std::string(field),
                                      "required by successful plan events");
      }
    }
  }
}

const TraceEvent& Trace::append(PendingEvent event) {
  validate_payload(event.kind, event.payload);
  TraceEvent e;
  e.seq = events_.size() + 1;
  e.timestamp_ms = event.timestamp_ms;
  e.kind = event.kind;
  e.payload = std::move(event.payload);
  events_.push_back(std::move(e));
  return events_.back();
}

void Trace::append_all(std::vector<PendingEvent> events) {
  for (PendingEvent& e : events) append(std::move(e));
}

std::string to_line(const TraceEvent& event) {
  ordered_json j;
  j["seq"] = event.seq;
  j["ts"] = event.timestamp_ms;
  j["kind"] = to_string(event.kind);
  j["payload"] = event.payload;
  return j.dump();
}

void write_trace(const std::vector<TraceEvent>& events, std::ostream& sink) {
  if (!sink) throw Error(ErrorKind::kSinkUnavailable, "trace sink unavailable");
  for (const TraceEvent& e : events) sink << to_line(e) << '\n';
  sink.flush();
  if (!sink) throw Error(ErrorKind::kSinkUnavailable, "trace sink write failed");
}

void write_trace_file(const std::vector<TraceEvent>& events,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::kSinkUnavailable, "cannot open trace file " + path);
  }
  write_trace(events, out);
}

std::vector<TraceEvent> read_trace(std::istream& in) {
  std::vector<TraceEvent> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
      TraceEvent e;
      e.seq = j.at("seq").get<std::uint64_t>();
      e.timestamp_ms = j.at("ts").get<std::int64_t>();
      e.kind = parse_event_kind(j.at("kind").get<std::string>());
      e.payload = j.at("payload");
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorKind::kMalformedRecord,
                  "trace line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return out;
}

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch())
      .count();
}

}  // namespace rulegraph
