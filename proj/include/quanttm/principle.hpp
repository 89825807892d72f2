#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace quanttm {

// CIAA security objectives. Declaration order is the canonical order used
// for output.
enum class SecurityPrinciple { Confidentiality, Integrity, Availability, Accountability };

using PrincipleSet = std::set<SecurityPrinciple>;

std::string_view to_string(SecurityPrinciple p);

// Accepts full names case-insensitively and the short forms C, I, A, Acc.
std::optional<SecurityPrinciple> parse_principle(std::string_view text);

// Comma-separated list ("C,I", "Availability, Accountability"). Throws
// Error(InvalidValue) on an unknown token.
PrincipleSet parse_principle_list(std::string_view text);

// "{Confidentiality, Availability}"
std::string format_principles(const PrincipleSet& set);

}  // namespace quanttm
