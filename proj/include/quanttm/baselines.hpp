#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quanttm/decimal.hpp"
#include "quanttm/errors.hpp"

namespace quanttm {

enum class OrdinalLevel { Low = 0, Medium = 1, High = 2 };

std::string_view to_string(OrdinalLevel l);
std::optional<OrdinalLevel> parse_level(std::string_view s);

// cells[likelihood][severity] -> priority
struct MatrixPolicy {
  std::array<std::array<OrdinalLevel, 3>, 3> cells{};

  bool operator==(const MatrixPolicy&) const = default;
};

// High iff one axis is High and the other at least Medium; Low iff both Low;
// Medium otherwise.
MatrixPolicy default_matrix_policy();

// Raising either axis never lowers the priority.
bool is_monotone(const MatrixPolicy& policy);

OrdinalLevel matrix_priority(OrdinalLevel likelihood, OrdinalLevel severity,
                             const MatrixPolicy& policy = default_matrix_policy());

struct MatrixRating {
  std::string threat_id;
  OrdinalLevel likelihood = OrdinalLevel::Low;
  OrdinalLevel severity = OrdinalLevel::Low;
  OrdinalLevel priority = OrdinalLevel::Low;

  bool operator==(const MatrixRating&) const = default;
};

MatrixRating rate_matrix(std::string threat_id, OrdinalLevel likelihood, OrdinalLevel severity,
                         const MatrixPolicy& policy = default_matrix_policy());

// ---------------------------------------------------------------------------
// DREAD

enum class DreadGrade { Low, Medium, High, Critical };

std::string_view to_string(DreadGrade g);
char grade_letter(DreadGrade g);

// Inclusive upper bounds on the 0..50 sum for Low, Medium and High; any
// larger sum is Critical.
struct DreadThresholds {
  Decimal low_max{12};
  Decimal medium_max{28};
  Decimal high_max{42};

  bool operator==(const DreadThresholds&) const = default;
};

bool thresholds_valid(const DreadThresholds& t);
DreadGrade dread_grade(const Rational& sum, const DreadThresholds& thresholds = {});

// Closed score interval; a point score has lo == hi.
struct ScoreRange {
  Decimal lo;
  Decimal hi;

  static ScoreRange point(Decimal v) { return {v, v}; }
  bool is_point() const { return lo == hi; }
  std::string str() const;

  bool operator==(const ScoreRange&) const = default;
};

struct DreadInput {
  std::string threat_id;
  ScoreRange damage;
  ScoreRange reproducibility;
  ScoreRange exploitability;
  ScoreRange affected_users;
  ScoreRange discoverability;

  bool operator==(const DreadInput&) const = default;
};

struct DreadAssessment {
  DreadInput input;
  ScoreRange sum_range;
  DreadGrade grade_lo = DreadGrade::Low;
  DreadGrade grade_hi = DreadGrade::Low;

  // "M-H", or "C" when both bounds share a grade.
  std::string grade_label() const;
};

std::vector<Violation> validate_dread(const DreadInput& input, const std::string& path);

// Throws Error(RangeOutOfBounds) when a component is outside 0..10 or lo > hi.
DreadAssessment dread_score(const DreadInput& input, const DreadThresholds& thresholds = {});

}  // namespace quanttm
