#include "quanttm/baselines.hpp"

#include <algorithm>
#include <cctype>

namespace quanttm {

std::string_view to_string(OrdinalLevel l) {
  switch (l) {
    case OrdinalLevel::Low: return "Low";
    case OrdinalLevel::Medium: return "Medium";
    case OrdinalLevel::High: return "High";
  }
  return "?";
}

std::optional<OrdinalLevel> parse_level(std::string_view s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "low" || t == "l") return OrdinalLevel::Low;
  if (t == "medium" || t == "m") return OrdinalLevel::Medium;
  if (t == "high" || t == "h") return OrdinalLevel::High;
  return std::nullopt;
}

MatrixPolicy default_matrix_policy() {
  MatrixPolicy p;
  for (int l = 0; l < 3; ++l) {
    for (int s = 0; s < 3; ++s) {
      OrdinalLevel v = OrdinalLevel::Medium;
      if (l == 0 && s == 0) v = OrdinalLevel::Low;
      if ((l == 2 && s >= 1) || (s == 2 && l >= 1)) v = OrdinalLevel::High;
      p.cells[l][s] = v;
    }
  }
  return p;
}

bool is_monotone(const MatrixPolicy& policy) {
  for (int l = 0; l < 3; ++l) {
    for (int s = 0; s < 3; ++s) {
      if (l + 1 < 3 && policy.cells[l + 1][s] < policy.cells[l][s]) return false;
      if (s + 1 < 3 && policy.cells[l][s + 1] < policy.cells[l][s]) return false;
    }
  }
  return true;
}

OrdinalLevel matrix_priority(OrdinalLevel likelihood, OrdinalLevel severity, const MatrixPolicy& policy) {
  return policy.cells[static_cast<int>(likelihood)][static_cast<int>(severity)];
}

MatrixRating rate_matrix(std::string threat_id, OrdinalLevel likelihood, OrdinalLevel severity,
                         const MatrixPolicy& policy) {
  return MatrixRating{std::move(threat_id), likelihood, severity, matrix_priority(likelihood, severity, policy)};
}

std::string_view to_string(DreadGrade g) {
  switch (g) {
    case DreadGrade::Low: return "Low";
    case DreadGrade::Medium: return "Medium";
    case DreadGrade::High: return "High";
    case DreadGrade::Critical: return "Critical";
  }
  return "?";
}

char grade_letter(DreadGrade g) { return to_string(g).front(); }

bool thresholds_valid(const DreadThresholds& t) {
  return t.low_max.rational() >= 0 && t.low_max < t.medium_max && t.medium_max < t.high_max &&
         t.high_max.rational() <= 50;
}

DreadGrade dread_grade(const Rational& sum, const DreadThresholds& t) {
  if (sum <= t.low_max.rational()) return DreadGrade::Low;
  if (sum <= t.medium_max.rational()) return DreadGrade::Medium;
  if (sum <= t.high_max.rational()) return DreadGrade::High;
  return DreadGrade::Critical;
}

std::string ScoreRange::str() const { return is_point() ? lo.str() : lo.str() + "-" + hi.str(); }

std::string DreadAssessment::grade_label() const {
  std::string out(1, grade_letter(grade_lo));
  if (grade_hi != grade_lo) out += std::string("-") + grade_letter(grade_hi);
  return out;
}

std::vector<Violation> validate_dread(const DreadInput& input, const std::string& path) {
  std::vector<Violation> out;
  const std::pair<const char*, const ScoreRange*> parts[] = {
      {"damage", &input.damage},
      {"reproducibility", &input.reproducibility},
      {"exploitability", &input.exploitability},
      {"affected_users", &input.affected_users},
      {"discoverability", &input.discoverability},
  };
  for (auto [name, r] : parts) {
    if (r->lo.rational() < 0 || r->hi.rational() > 10 || r->hi < r->lo) {
      out.push_back({ErrorCode::RangeOutOfBounds, path + "." + name,
                     std::string(name) + " must satisfy 0 <= lo <= hi <= 10, got " + r->str()});
    }
  }
  return out;
}

DreadAssessment dread_score(const DreadInput& input, const DreadThresholds& thresholds) {
  auto v = validate_dread(input, input.threat_id.empty() ? "dread" : input.threat_id);
  if (!v.empty()) throw Error(v.front().code, v.front().message, v.front().path);
  Rational lo = input.damage.lo.rational() + input.reproducibility.lo.rational() + input.exploitability.lo.rational() +
                input.affected_users.lo.rational() + input.discoverability.lo.rational();
  Rational hi = input.damage.hi.rational() + input.reproducibility.hi.rational() + input.exploitability.hi.rational() +
                input.affected_users.hi.rational() + input.discoverability.hi.rational();
  return DreadAssessment{input, ScoreRange{Decimal(lo), Decimal(hi)}, dread_grade(lo, thresholds),
                         dread_grade(hi, thresholds)};
}

}  // namespace quanttm
