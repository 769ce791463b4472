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

#include "rulegraph/fusion.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

std::string numbered_answers(const std::vector<CandidateResult>& candidates) {
  std::ostringstream out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const CandidateResult& c = candidates[i];
    out << (i + 1) << ". [" << c.domain_name << ", membership "
        << to_string(c.membership) << "] " << c.answer_text << "\n";
  }
  std::string s = out.str();
  if (!s.empty()) s.pop_back();
  return s;
}

std::vector<SemanticCluster> group_by_key(std::vector<CandidateResult> candidates) {
  std::vector<SemanticCluster> clusters;
  std::map<std::string, std::size_t> index;
  for (CandidateResult& c : candidates) {
    auto [it, fresh] = index.emplace(c.semantic_key, clusters.size());
    if (fresh) clusters.push_back({c.semantic_key, {}});
    clusters[it->second].members.push_back(std::move(c));
  }
  return clusters;
}

}  // namespace

MembershipLabel SemanticCluster::max_membership() const {
  MembershipLabel best = MembershipLabel::kL;
  for (const CandidateResult& c : members) best = std::max(best, c.membership);
  return best;
}

int SemanticCluster::min_rule_index() const {
  int best = members.empty() ? 0 : members.front().rule_index;
  for (const CandidateResult& c : members) best = std::min(best, c.rule_index);
  return best;
}

std::string_view to_string(ClusterMode mode) {
  return mode == ClusterMode::kModel ? "model" : "lexical";
}

ClusterMode parse_cluster_mode(std::string_view text) {
  if (text == "model") return ClusterMode::kModel;
  if (text == "lexical") return ClusterMode::kLexical;
  throw Error(ErrorKind::kInvalidConfig,
              "cluster mode must be 'model' or 'lexical', got '" +
                  std::string(text) + "'");
}

std::string_view to_string(DecisionLayer layer) {
  switch (layer) {
    case DecisionLayer::kVotes: return "votes";
    case DecisionLayer::kMembership: return "membership";
    case DecisionLayer::kIndex: return "index";
  }
  return "votes";
}

std::string lexical_key(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
    } else if (std::ispunct(c)) {
      continue;
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  return out;
}

namespace {

struct Clustering {
  std::vector<SemanticCluster> clusters;
  ClusterMode mode_used = ClusterMode::kLexical;
};

Clustering cluster_with_fallback(std::vector<CandidateResult> candidates,
                                 ClusterMode mode, Session* session,
                                 std::string_view subtask_statement) {
  if (candidates.empty()) {
    throw Error(ErrorKind::kAllRulesFailed, "no candidates to cluster");
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const CandidateResult& a, const CandidateResult& b) {
                     return a.rule_index < b.rule_index;
                   });
  for (CandidateResult& c : candidates) c.semantic_key = lexical_key(c.answer_text);

  if (mode == ClusterMode::kModel && candidates.size() > 1) {
    if (session == nullptr) {
      throw Error(ErrorKind::kInvalidConfig, "model clustering needs a session");
    }
    const std::size_t n = candidates.size();
    try {
      const json doc = session->agents.invoke(
          session->ctx, Prompt::kClusterCandidates,
          {{"task", std::string(subtask_statement)},
           {"candidates", numbered_answers(candidates)}},
          SchemaId::kFusion, [n](const json& d) {
            if (!d.contains("cluster_keys") || d["cluster_keys"].size() != n) {
              throw Error::schema_violation(
                  "cluster_keys", "expected " + std::to_string(n) + " keys");
            }
          });
      for (std::size_t i = 0; i < n; ++i) {
        candidates[i].semantic_key = doc["cluster_keys"][i].get<std::string>();
      }
      return {group_by_key(std::move(candidates)), ClusterMode::kModel};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kScriptMiss) throw;
      session->ctx.warn("cluster_fallback",
                        std::string("model clustering failed, using lexical keys: ") +
                            e.what());
    }
  }
  return {group_by_key(std::move(candidates)), ClusterMode::kLexical};
}

}  // namespace

std::vector<SemanticCluster> cluster_candidates(std::vector<CandidateResult> candidates,
                                                ClusterMode mode, Session* session,
                                                std::string_view subtask_statement) {
  return cluster_with_fallback(std::move(candidates), mode, session, subtask_statement)
      .clusters;
}

Resolution resolve_conflict(const std::vector<SemanticCluster>& clusters) {
  if (clusters.empty()) {
    throw Error(ErrorKind::kAllRulesFailed, "no clusters to resolve");
  }
  int top_votes = 0;
  for (const SemanticCluster& c : clusters) top_votes = std::max(top_votes, c.votes());
  std::vector<const SemanticCluster*> tied;
  for (const SemanticCluster& c : clusters) {
    if (c.votes() == top_votes) tied.push_back(&c);
  }
  if (tied.size() == 1) return {*tied.front(), DecisionLayer::kVotes};

  MembershipLabel top_membership = MembershipLabel::kL;
  for (const SemanticCluster* c : tied) {
    top_membership = std::max(top_membership, c->max_membership());
  }
  std::erase_if(tied, [&](const SemanticCluster* c) {
    return c->max_membership() != top_membership;
  });
  if (tied.size() == 1) return {*tied.front(), DecisionLayer::kMembership};

  const SemanticCluster* best = *std::min_element(
      tied.begin(), tied.end(), [](const SemanticCluster* a, const SemanticCluster* b) {
        return a->min_rule_index() < b->min_rule_index();
      });
  return {*best, DecisionLayer::kIndex};
}

const CandidateResult& strongest_member(const SemanticCluster& cluster) {
  return *std::min_element(cluster.members.begin(), cluster.members.end(),
                           [](const CandidateResult& a, const CandidateResult& b) {
                             if (a.membership != b.membership) {
                               return a.membership > b.membership;
                             }
                             return a.rule_index < b.rule_index;
                           });
}

SubtaskFusion fuse_subtask(const std::vector<CandidateResult>& candidates,
                           const TaskNode& subtask, const FusionOptions& options,
                           Session* session) {
  SubtaskFusion out;
  Clustering clustering =
      cluster_with_fallback(candidates, options.mode, session, subtask.statement);
  out.clusters = std::move(clustering.clusters);
  out.mode_used = clustering.mode_used;
  Resolution resolution = resolve_conflict(out.clusters);
  out.layer = resolution.layer;

  SubtaskResult& r = out.result;
  r.subtask_id = subtask.id;
  r.answer_text = strongest_member(resolution.winner).answer_text;
  r.winning_cluster = std::move(resolution.winner);

  if (options.synthesize && candidates.size() > 1) {
    if (session == nullptr) {
      throw Error(ErrorKind::kInvalidConfig, "synthesis needs a session");
    }
    std::vector<CandidateResult> rejected;
    for (const SemanticCluster& c : out.clusters) {
      if (c.key == r.winning_cluster.key) continue;
      rejected.insert(rejected.end(), c.members.begin(), c.members.end());
    }
    const json doc = session->agents.invoke(
        session->ctx, Prompt::kFuseSubtask,
        {{"task", subtask.statement},
         {"winners", numbered_answers(r.winning_cluster.members)},
         {"rejected", rejected.empty() ? std::string("(none)")
                                       : numbered_answers(rejected)}},
        SchemaId::kFusion, [](const json& d) {
          if (!d.contains("answer")) {
            throw Error::schema_violation("answer", "fused answer is missing");
          }
        });
    r.answer_text = doc.at("answer").get<std::string>();
  }
  return out;
}

FinalResult fuse_final(const ResultSet& preds, std::string_view original_task,
                       Session& session) {
  if (preds.empty()) {
    throw Error(ErrorKind::kAllPathsFailed, "fusion node has no predecessor results");
  }
  const json doc = session.agents.invoke(
      session.ctx, Prompt::kFuseFinal,
      {{"task", std::string(original_task)}, {"results", format_results(preds)}},
      SchemaId::kFusion, [](const json& d) {
        if (!d.contains("answer")) {
          throw Error::schema_violation("answer", "final answer is missing");
        }
      });
  FinalResult out;
  out.answer_text = doc.at("answer").get<std::string>();
  for (const PredecessorResult& p : preds) out.contributing_nodes.push_back(p.node_id);
  return out;
}

ordered_json to_json(const SubtaskFusion& fusion, int attempt) {
  ordered_json j;
  j["node"] = fusion.result.subtask_id;
  j["attempt"] = attempt;
  j["mode"] = to_string(fusion.mode_used);
  ordered_json clusters = ordered_json::array();
  for (const SemanticCluster& c : fusion.clusters) {
    ordered_json cj;
    cj["key"] = c.key;
    cj["votes"] = c.votes();
    cj["max_membership"] = to_string(c.max_membership());
    ordered_json members = ordered_json::array();
    for (const CandidateResult& m : c.members) members.push_back(m.rule_index);
    cj["members"] = std::move(members);
    clusters.push_back(std::move(cj));
  }
  j["clusters"] = std::move(clusters);
  j["winner"] = fusion.result.winning_cluster.key;
  j["layer"] = to_string(fusion.layer);
  j["answer_text"] = fusion.result.answer_text;
  return j;
}

}  // namespace rulegraph
