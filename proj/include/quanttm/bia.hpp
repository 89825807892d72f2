#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quanttm/decimal.hpp"
#include "quanttm/errors.hpp"
#include "quanttm/money.hpp"
#include "quanttm/principle.hpp"

namespace quanttm {

// ---------------------------------------------------------------------------
// Impact factor library

enum class Tangibility { Tangible, Intangible };
enum class LossKind { OneTime, Persistent };

std::string_view to_string(Tangibility t);
std::string_view to_string(LossKind k);
std::optional<Tangibility> parse_tangibility(std::string_view s);
std::optional<LossKind> parse_loss_kind(std::string_view s);

struct ImpactFactor {
  std::string id;
  std::string name;
  Tangibility tangibility = Tangibility::Tangible;
  PrincipleSet applicable_principles;
  LossKind loss_kind = LossKind::OneTime;
  bool builtin = false;

  bool operator==(const ImpactFactor&) const = default;
};

inline constexpr std::string_view kFactorCatalogVersion = "factors/1";

// The 16 built-in factors plus user extensions. Built-ins cannot be
// replaced or removed.
class FactorCatalog {
 public:
  static FactorCatalog builtin();
  static const std::vector<ImpactFactor>& builtin_factors();

  // Throws Error(DuplicateId) on id clash, Error(InvalidValue) when the
  // factor claims to be built-in, has no name, or no principles.
  void add(ImpactFactor factor);

  const ImpactFactor* find(std::string_view id) const;
  const std::vector<ImpactFactor>& factors() const noexcept { return factors_; }
  std::vector<ImpactFactor> extensions() const;

 private:
  std::vector<ImpactFactor> factors_;
};

// Factors whose principles intersect `principles`: built-ins first, then
// tangible before intangible, catalog order otherwise.
std::vector<ImpactFactor> suggest_factors(const PrincipleSet& principles, const FactorCatalog& catalog);

// ---------------------------------------------------------------------------
// CIAA heuristic classification

struct CiaaEntry {
  std::string threat;
  std::vector<std::string> keywords;
  PrincipleSet principles;
};

inline constexpr std::string_view kCiaaTableVersion = "ciaa/1";

const std::vector<CiaaEntry>& ciaa_keyword_table();

struct CiaaMatch {
  PrincipleSet principles;
  std::vector<std::string> matched;  // names of matching table entries
};

// Case-insensitive whole-word keyword match. An empty result means the
// caller must classify manually.
CiaaMatch classify_ciaa_detailed(std::string_view threat_name);
PrincipleSet classify_ciaa(std::string_view threat_name);

// ---------------------------------------------------------------------------
// Loss estimation

struct OneTimeImpact {
  std::string factor_id;
  Money amount;

  bool operator==(const OneTimeImpact&) const = default;
};

// Piecewise-constant recovery: for `days` the business runs at
// `recovery_level` of normal.
struct RecoveryStage {
  Decimal recovery_level;
  Decimal days;

  bool operator==(const RecoveryStage&) const = default;
};

struct PersistentImpact {
  std::string factor_id;
  Money daily_loss;
  std::vector<RecoveryStage> stages;

  bool operator==(const PersistentImpact&) const = default;
};

// Loss estimate for one threat effect of a scenario.
struct BiaRecord {
  std::string scenario_id;  // threat id of the scenario
  std::string effect_id;
  std::vector<OneTimeImpact> one_time;
  std::vector<PersistentImpact> persistent;
  std::optional<Decimal> mtpd_hours;
  std::string currency = "USD";

  bool operator==(const BiaRecord&) const = default;
};

struct FactorLoss {
  std::string factor_id;
  Money amount;

  bool operator==(const FactorLoss&) const = default;
};

struct StageLoss {
  std::string factor_id;
  std::size_t stage_index = 0;
  Money amount;

  bool operator==(const StageLoss&) const = default;
};

struct LossBreakdown {
  Money total;
  Money tangible_total;
  Money intangible_total;
  std::vector<FactorLoss> per_factor;
  std::vector<StageLoss> per_stage_series;
};

// Exact persistent loss: sum over stages of daily * (1 - level) * days.
// With `cap_days`, the stage timeline is cut off after that many days.
Rational persistent_loss_exact(const PersistentImpact& impact, const std::optional<Rational>& cap_days = std::nullopt);

Money compute_persistent_loss(const PersistentImpact& impact);

// Throws Error(UnknownFactor) for an unresolved factor id and
// Error(MixedCurrency) when an amount is not in the record currency.
LossBreakdown compute_scenario_loss(const BiaRecord& record, const FactorCatalog& catalog);

// Structural checks on a record (ranges, currency, factor ids).
std::vector<Violation> validate_record(const BiaRecord& record, const FactorCatalog& catalog,
                                       const std::string& path);

// Non-blocking warnings, e.g. recovery level decreasing between stages.
std::vector<std::string> lint_record(const BiaRecord& record, const FactorCatalog& catalog);

}  // namespace quanttm
