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

#include "rulegraph/ruleset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace rulegraph {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string catalog_list(const DomainCatalog& catalog) {
  std::ostringstream out;
  for (const std::string& name : catalog.names()) out << "- " << name << "\n";
  std::string s = out.str();
  if (!s.empty()) s.pop_back();
  return s;
}

}  // namespace

DomainCatalog::DomainCatalog(std::vector<std::string> names)
    : names_(std::move(names)) {
  if (names_.empty()) {
    throw Error(ErrorKind::kInvalidConfig, "domain catalog is empty");
  }
  std::set<std::string> seen;
  for (const std::string& n : names_) {
    if (n.empty() || !seen.insert(lower(n)).second) {
      throw Error(ErrorKind::kInvalidConfig,
                  "domain catalog has an empty or repeated name '" + n + "'");
    }
  }
}

DomainCatalog DomainCatalog::defaults() {
  return DomainCatalog({"Entertainment and Media", "History", "Biology",
                        "Geography", "Science", "Literature", "Sports",
                        "Politics", "Economics", "Technology", "Art", "Music",
                        "Law", "Medicine", "Psychology", "Philosophy",
                        "Mathematics", "Education", "Religion", "Linguistics"});
}

DomainCatalog DomainCatalog::from_json(const json& doc) {
  const json* list = &doc;
  if (doc.is_object() && doc.contains("domains")) list = &doc["domains"];
  if (!list->is_array()) {
    throw Error(ErrorKind::kInvalidConfig,
                "domain catalog must be an array of names");
  }
  std::vector<std::string> names;
  for (const json& n : *list) {
    if (!n.is_string()) {
      throw Error(ErrorKind::kInvalidConfig, "domain names must be strings");
    }
    names.push_back(n.get<std::string>());
  }
  return DomainCatalog(std::move(names));
}

DomainCatalog DomainCatalog::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidConfig, "cannot open catalog " + path);
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw Error(ErrorKind::kInvalidConfig, "catalog " + path + " is not JSON");
  }
  return from_json(doc);
}

std::optional<std::string> DomainCatalog::find(std::string_view name) const {
  const std::string key = lower(name);
  for (const std::string& n : names_) {
    if (lower(n) == key) return n;
  }
  return std::nullopt;
}

std::string reprocess_input(std::string_view statement, std::string_view feedback) {
  std::string out(statement);
  out += "\n\nDeviation from the global goal to correct:\n";
  out += feedback;
  return out;
}

RuleSet construct_rules(Session& session, const TaskNode& subtask,
                        const DomainCatalog& catalog, int k, GlobalRule global,
                        std::optional<std::string_view> feedback) {
  if (k < 1) throw Error(ErrorKind::kInvalidConfig, "rule count must be >= 1");
  if (subtask.kind != NodeKind::kSubtask) {
    throw Error(ErrorKind::kNotASubtask, "rules are built for subtask nodes only");
  }
  const std::string input = feedback ? reprocess_input(subtask.statement, *feedback)
                                     : subtask.statement;
  RuleSet rs;
  rs.subtask_id = subtask.id;
  rs.global = std::move(global);

  session.agents.invoke(
      session.ctx, Prompt::kAnalyzeDomains,
      {{"task", input}, {"catalog", catalog_list(catalog)}, {"k", std::to_string(k)}},
      SchemaId::kRuleset, [&](const json& doc) {
        const json& rules = doc.at("rules");
        if (static_cast<int>(rules.size()) != k) {
          throw Error::schema_violation(
              "rules", "expected exactly " + std::to_string(k) + " rules, got " +
                           std::to_string(rules.size()));
        }
        std::vector<DomainRule> built;
        std::set<std::string> used;
        for (std::size_t i = 0; i < rules.size(); ++i) {
          const json& r = rules[i];
          const std::string path = "rules[" + std::to_string(i) + "].domain";
          auto name = catalog.find(r.at("domain").get<std::string>());
          if (!name) {
            throw Error::schema_violation(path, "domain '" +
                                                    r.at("domain").get<std::string>() +
                                                    "' is not in the catalog");
          }
          if (!used.insert(*name).second) {
            throw Error::schema_violation(path, "domain '" + *name + "' repeated");
          }
          built.push_back({static_cast<int>(i) + 1, *name,
                           r.at("antecedent").get<std::string>(),
                           parse_label(r.at("membership").get<std::string>()),
                           r.at("consequent_prompt").get<std::string>()});
        }
        rs.rules = std::move(built);
      });
  return rs;
}

RuleRun run_rules(Session& session, const RuleSet& ruleset, std::string_view input,
                  const ResultSet& preds) {
  RuleRun run;
  const std::string context = format_results(preds);
  for (const DomainRule& rule : ruleset.rules) {
    try {
      const json doc = session.agents.invoke(
          session.ctx, Prompt::kDomainAnswer,
          {{"consequent_prompt", rule.consequent_prompt},
           {"domain", rule.domain_name},
           {"task", std::string(input)},
           {"context", context}},
          SchemaId::kCandidate);
      run.candidates.push_back({rule.index, rule.domain_name, rule.membership,
                                doc.at("answer").get<std::string>(), ""});
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kScriptMiss) throw;
      run.failures.push_back({rule.index, e.kind(), e.what()});
    }
  }
  if (run.candidates.empty()) {
    throw Error(ErrorKind::kAllRulesFailed,
                "all " + std::to_string(ruleset.rules.size()) + " rules of '" +
                    ruleset.subtask_id + "' failed");
  }
  return run;
}

GlobalAssessment run_global_rule(Session& session, const GlobalRule& global,
                                 std::string_view subtask_statement,
                                 const SubtaskResult& fused) {
  const json doc = session.agents.invoke(
      session.ctx, Prompt::kAssessGoal,
      {{"goal", global.goal},
       {"task", std::string(subtask_statement)},
       {"result", fused.answer_text}},
      SchemaId::kAssessment, nullptr, global.threshold);
  GlobalAssessment out;
  out.membership = parse_label(doc.at("membership").get<std::string>());
  out.diff_text = doc.value("diff_text", std::string());
  return out;
}

ordered_json to_json(const DomainRule& rule, const NodeId& subtask_id) {
  ordered_json j;
  j["subtask_id"] = subtask_id;
  j["rule_index"] = rule.index;
  j["domain_name"] = rule.domain_name;
  j["membership"] = to_string(rule.membership);
  j["antecedent"] = rule.antecedent;
  return j;
}

}  // namespace rulegraph
