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
#include <string_view>
#include <vector>

#include "rulegraph/agents.hpp"
#include "rulegraph/error.hpp"
#include "rulegraph/membership.hpp"
#include "rulegraph/mtpg.hpp"

namespace rulegraph {

// Domains the analyst may pick rules from.
class DomainCatalog {
 public:
  explicit DomainCatalog(std::vector<std::string> names);

  // Twenty general domains; the catalog is normally loaded from config.
  static DomainCatalog defaults();
  // Either a JSON array of names or {"domains": [...]}.
  static DomainCatalog from_json(const json& doc);
  static DomainCatalog from_file(const std::string& path);

  const std::vector<std::string>& names() const { return names_; }
  // Catalog spelling of `name` (case-insensitive match), if present.
  std::optional<std::string> find(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

struct DomainRule {
  int index = 0;  // 1..K
  std::string domain_name;
  std::string antecedent;
  MembershipLabel membership = MembershipLabel::kL;
  std::string consequent_prompt;

  bool operator==(const DomainRule&) const = default;
};

struct GlobalRule {
  std::string goal;
  MembershipLabel threshold = kDefaultThreshold;
};

struct RuleSet {
  NodeId subtask_id;
  std::vector<DomainRule> rules;
  GlobalRule global;
};

struct GlobalAssessment {
  MembershipLabel membership = MembershipLabel::kL;
  std::string diff_text;
};

// Subtask statement with the global rule's deviation appended, used as the
// analyst input when a subtask is reprocessed.
std::string reprocess_input(std::string_view statement, std::string_view feedback);

// One analyst call producing exactly `k` rules over distinct catalog domains.
// Malformed output is re-asked; persistent failure throws kMalformedAnalysis.
RuleSet construct_rules(Session& session, const TaskNode& subtask,
                        const DomainCatalog& catalog, int k, GlobalRule global,
                        std::optional<std::string_view> feedback = std::nullopt);

struct RuleFailure {
  int rule_index = 0;
  ErrorKind kind = ErrorKind::kRuleExecutionFailure;
  std::string message;
};

struct RuleRun {
  std::vector<CandidateResult> candidates;  // ascending rule_index
  std::vector<RuleFailure> failures;
};

// Runs every domain rule once, whatever its membership. A failing rule is
// recorded and skipped; kAllRulesFailed is thrown only if none succeeds.
// Rules run in index order so attempt counters stay deterministic.
RuleRun run_rules(Session& session, const RuleSet& ruleset, std::string_view input,
                  const ResultSet& preds);

// Global expert call judging the fused result against the goal. Persistent
// malformed output throws kMalformedAssessment.
GlobalAssessment run_global_rule(Session& session, const GlobalRule& global,
                                 std::string_view subtask_statement,
                                 const SubtaskResult& fused);

ordered_json to_json(const DomainRule& rule, const NodeId& subtask_id);

}  // namespace rulegraph
