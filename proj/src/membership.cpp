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

#include "rulegraph/membership.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "rulegraph/error.hpp"

namespace rulegraph {
namespace {

struct Alias {
  MembershipLabel label;
  std::string_view token;
  std::string_view long_form;
};

constexpr std::array<Alias, 6> kAliases = {{
    {MembershipLabel::kL, "L", "Low"},
    {MembershipLabel::kLr, "Lr", "Lower"},
    {MembershipLabel::kML, "ML", "Mid-Low"},
    {MembershipLabel::kM, "M", "Medium"},
    {MembershipLabel::kSH, "SH", "Sub-High"},
    {MembershipLabel::kH, "H", "High"},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(MembershipLabel label) {
  return kAliases[rank(label)].token;
}

std::string_view long_name(MembershipLabel label) {
  return kAliases[rank(label)].long_form;
}

MembershipLabel parse_label(std::string_view text) {
  const std::string_view t = trim(text);
  for (const Alias& alias : kAliases) {
    if (iequals(t, alias.token) || iequals(t, alias.long_form)) {
      return alias.label;
    }
  }
  throw Error(ErrorKind::kUnrecognizedLabel,
              "unrecognized membership label '" + std::string(text) + "'");
}

}  // namespace rulegraph
