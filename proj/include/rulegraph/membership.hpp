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

#include <array>
#include <compare>
#include <cstdint>
#include <string_view>

namespace rulegraph {

// Six-level ordinal membership degree. Enumerator values encode the total
// order, so the built-in comparisons are the label order.
enum class MembershipLabel : std::uint8_t {
  kL = 0,   // Low
  kLr = 1,  // Lower
  kML = 2,  // Mid-Low
  kM = 3,   // Medium
  kSH = 4,  // Sub-High
  kH = 5,   // High
};

// Ascending order, L first.
inline constexpr std::array<MembershipLabel, 6> kAllLabels = {
    MembershipLabel::kL, MembershipLabel::kLr, MembershipLabel::kML,
    MembershipLabel::kM, MembershipLabel::kSH, MembershipLabel::kH};

// Default acceptance / reconstruction threshold.
inline constexpr MembershipLabel kDefaultThreshold = MembershipLabel::kML;

constexpr std::uint8_t rank(MembershipLabel label) {
  return static_cast<std::uint8_t>(label);
}

// Canonical short token: "H", "SH", "M", "ML", "Lr", "L".
std::string_view to_string(MembershipLabel label);

// Long form: "High", "Sub-High", "Medium", "Mid-Low", "Lower", "Low".
std::string_view long_name(MembershipLabel label);

// Accepts the short token or long form of a label, case-insensitively, after
// trimming surrounding whitespace. Anything else throws
// Error(kUnrecognizedLabel).
MembershipLabel parse_label(std::string_view text);

// Strictly lower than `threshold`; a label equal to the threshold passes.
constexpr bool below(MembershipLabel label, MembershipLabel threshold) {
  return rank(label) < rank(threshold);
}

}  // namespace rulegraph
