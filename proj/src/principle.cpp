#include "quanttm/principle.hpp"

#include <algorithm>
#include <cctype>

#include "quanttm/errors.hpp"

namespace quanttm {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(SecurityPrinciple p) {
  switch (p) {
    case SecurityPrinciple::Confidentiality: return "Confidentiality";
    case SecurityPrinciple::Integrity: return "Integrity";
    case SecurityPrinciple::Availability: return "Availability";
    case SecurityPrinciple::Accountability: return "Accountability";
  }
  return "?";
}

std::optional<SecurityPrinciple> parse_principle(std::string_view text) {
  std::string t = lower(trim(text));
  if (t == "c" || t == "confidentiality") return SecurityPrinciple::Confidentiality;
  if (t == "i" || t == "integrity") return SecurityPrinciple::Integrity;
  if (t == "a" || t == "availability") return SecurityPrinciple::Availability;
  if (t == "acc" || t == "accountability") return SecurityPrinciple::Accountability;
  return std::nullopt;
}

PrincipleSet parse_principle_list(std::string_view text) {
  PrincipleSet out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto token = trim(text.substr(0, comma));
    if (!token.empty()) {
      auto p = parse_principle(token);
      if (!p) throw Error(ErrorCode::InvalidValue, "unknown security principle '" + std::string(token) + "'");
      out.insert(*p);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_principles(const PrincipleSet& set) {
  std::string out = "{";
  for (auto it = set.begin(); it != set.end(); ++it) {
    if (it != set.begin()) out += ", ";
    out += to_string(*it);
  }
  return out + "}";
}

}  // namespace quanttm
