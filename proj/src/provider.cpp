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

#include "rulegraph/provider.hpp"

#include "rulegraph/error.hpp"

namespace rulegraph {

std::string_view to_string(RoleKind role) {
  switch (role) {
    case RoleKind::kPlanner: return "PA";
    case RoleKind::kDomainAnalyst: return "DAA";
    case RoleKind::kDomainExpert: return "DEA";
    case RoleKind::kFusionExpert: return "FEA";
    case RoleKind::kGlobalExpert: return "GEA";
  }
  return "PA";
}

RoleKind parse_role_kind(std::string_view text) {
  for (RoleKind r : kAllRoles) {
    if (to_string(r) == text) return r;
  }
  throw Error(ErrorKind::kInvalidConfig,
              "unknown role kind '" + std::string(text) + "'");
}

std::string ContextKey::str() const {
  return run_id + "/" + node_id + "/" + std::string(to_string(role)) + "/" +
         std::to_string(attempt);
}

void attach_parsed(ProviderResponse& response, const ProviderRequest& request) {
  try {
    response.parsed = parse_structured(response.raw_text, request.response_schema);
  } catch (const Error&) {
    response.parsed.reset();
  }
}

}  // namespace rulegraph
