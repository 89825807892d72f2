#pragma once

#include <span>
#include <string>
#include <vector>

#include "quanttm/bia.hpp"
#include "quanttm/money.hpp"
#include "quanttm/threat_model.hpp"

namespace quanttm {

struct EffectContribution {
  std::string effect_id;
  Money amount;

  bool operator==(const EffectContribution&) const = default;
};

// Annualized discounted loss of one threat against one asset.
struct QuantifiedThreat {
  std::string threat_id;
  std::string threat_name;
  std::string asset_id;
  Money q_value;
  Duration duration;
  std::vector<EffectContribution> contributions;

  bool operator==(const QuantifiedThreat&) const = default;
};

// Single loss expectancy of an effect, unrounded: degree times the BIA loss
// with persistent stages cut off at `duration` (one-time losses never
// truncated; Infinite means the full timeline).
Rational loss_expectancy_exact(const ThreatEffect& effect, const Duration& duration, const BiaRecord& record,
                               const FactorCatalog& catalog);

Money loss_expectancy(const ThreatEffect& effect, const Duration& duration, const BiaRecord& record,
                      const FactorCatalog& catalog);

// Finds the record for scenario/effect; throws Error(MissingEstimate).
const BiaRecord& find_estimate(std::span<const BiaRecord> estimates, std::string_view scenario_id,
                               std::string_view effect_id);

// Q = sum over effects of p_initiation * p_success * L(effect). Each
// contribution is rounded once; q_value is their exact sum. An effect's
// duration override, if any, replaces the link duration.
QuantifiedThreat quantify_threat(const ThreatAssetLink& link, const std::string& threat_name,
                                 const ThreatScenario& scenario, std::span<const BiaRecord> estimates,
                                 const FactorCatalog& catalog);

// Descending Q, ties by ascending threat name then asset id.
// Throws Error(MixedCurrency).
std::vector<QuantifiedThreat> rank_by_impact(std::vector<QuantifiedThreat> quantified);

// Ascending MTPD, records without MTPD last; stable.
std::vector<BiaRecord> rank_by_emergency(std::vector<BiaRecord> records);

struct SecurityControl {
  std::string id;
  std::string name;
  Money annual_cost;
  Decimal mitigation_rate;
  std::vector<std::string> mitigated_threat_ids;

  bool operator==(const SecurityControl&) const = default;
};

std::vector<Violation> validate_control(const SecurityControl& control, const std::string& path);

struct RosiResult {
  Money mitigated_impact;
  Money control_cost;
  Money absolute_return;
  bool cost_effective = false;

  bool operator==(const RosiResult&) const = default;
};

// mitigated = rate * sum of Q over the mitigated threats (every link of a
// listed threat counts); return = mitigated - annual cost.
// Throws Error(DanglingReference) for a threat id absent from `quantified`.
RosiResult evaluate_rosi(const SecurityControl& control, std::span<const QuantifiedThreat> quantified);

}  // namespace quanttm
