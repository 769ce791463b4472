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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace rulegraph {

using ordered_json = nlohmann::ordered_json;

enum class EventKind {
  kPlan,
  kNodeStart,
  kRulesBuilt,
  kRuleResult,
  kFusion,
  kAssessment,
  kReprocess,
  kNodeRemoved,
  kNodeSpliced,
  kNodeDone,
  kFinal,
  kProviderCall,
  kWarning,
};

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

// An event before it has been given its place in the run's total order.
struct PendingEvent {
  EventKind kind;
  ordered_json payload;
  std::int64_t timestamp_ms = 0;
};

struct TraceEvent {
  std::uint64_t seq = 0;
  std::int64_t timestamp_ms = 0;
  EventKind kind = EventKind::kWarning;
  ordered_json payload;

  bool operator==(const TraceEvent&) const = default;
};

// Throws Error(kSchemaViolation) naming the first missing payload field.
void validate_payload(EventKind kind, const ordered_json& payload);

// Single-owner, append-only event log. Sequence numbers start at 1.
class Trace {
 public:
  const TraceEvent& append(PendingEvent event);
  void append_all(std::vector<PendingEvent> events);

  const std::vector<TraceEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

 private:
  std::vector<TraceEvent> events_;
};

// Canonical line: {"seq":..,"ts":..,"kind":..,"payload":{..}}.
std::string to_line(const TraceEvent& event);

// One line per event. Throws Error(kSinkUnavailable) if the stream fails.
void write_trace(const std::vector<TraceEvent>& events, std::ostream& sink);
void write_trace_file(const std::vector<TraceEvent>& events,
                      const std::string& path);

std::vector<TraceEvent> read_trace(std::istream& in);

std::int64_t now_ms();

}  // namespace rulegraph
