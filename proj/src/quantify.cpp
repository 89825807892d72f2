#include "quanttm/quantify.hpp"

#include <algorithm>

namespace quanttm {

Rational loss_expectancy_exact(const ThreatEffect& effect, const Duration& duration, const BiaRecord& record,
                               const FactorCatalog& catalog) {
  Rational loss = 0;
  auto cap = duration.days();
  for (const auto& p : record.persistent) {
    if (!catalog.find(p.factor_id)) throw Error(ErrorCode::UnknownFactor, "unknown impact factor '" + p.factor_id + "'");
    if (p.daily_loss.currency() != record.currency) {
      throw Error(ErrorCode::MixedCurrency, "impact in " + p.daily_loss.currency() + " inside a " + record.currency + " record");
    }
    loss += persistent_loss_exact(p, cap);
  }
  for (const auto& o : record.one_time) {
    if (!catalog.find(o.factor_id)) throw Error(ErrorCode::UnknownFactor, "unknown impact factor '" + o.factor_id + "'");
    if (o.amount.currency() != record.currency) {
      throw Error(ErrorCode::MixedCurrency, "impact in " + o.amount.currency() + " inside a " + record.currency + " record");
    }
    loss += Rational(BigInt(o.amount.amount_minor()));
  }
  return effect.degree.rational() * loss;
}

Money loss_expectancy(const ThreatEffect& effect, const Duration& duration, const BiaRecord& record,
                      const FactorCatalog& catalog) {
  return Money::from_minor_exact(loss_expectancy_exact(effect, duration, record, catalog), record.currency);
}

const BiaRecord& find_estimate(std::span<const BiaRecord> estimates, std::string_view scenario_id,
                               std::string_view effect_id) {
  auto it = std::find_if(estimates.begin(), estimates.end(), [&](const BiaRecord& r) {
    return r.scenario_id == scenario_id && r.effect_id == effect_id;
  });
  if (it == estimates.end()) {
    throw Error(ErrorCode::MissingEstimate,
                "no loss estimate for effect '" + std::string(effect_id) + "' of scenario '" + std::string(scenario_id) + "'",
                std::string(scenario_id) + "/" + std::string(effect_id));
  }
  return *it;
}

QuantifiedThreat quantify_threat(const ThreatAssetLink& link, const std::string& threat_name,
                                 const ThreatScenario& scenario, std::span<const BiaRecord> estimates,
                                 const FactorCatalog& catalog) {
  if (scenario.threat_id != link.threat_id) {
    throw Error(ErrorCode::DanglingReference,
                "scenario of '" + scenario.threat_id + "' does not belong to threat '" + link.threat_id + "'");
  }
  QuantifiedThreat out;
  out.threat_id = link.threat_id;
  out.threat_name = threat_name;
  out.asset_id = link.asset_id;
  out.duration = link.duration;

  const Rational probability = link.p_initiation.rational() * link.p_success.rational();
  std::optional<Money> q;
  for (const auto& effect : scenario.effects) {
    const BiaRecord& record = find_estimate(estimates, scenario.threat_id, effect.id);
    const Duration& d = effect.duration_override ? *effect.duration_override : link.duration;
    Money c = Money::from_minor_exact(probability * loss_expectancy_exact(effect, d, record, catalog), record.currency);
    q = q ? *q + c : c;
    out.contributions.push_back({effect.id, std::move(c)});
  }
  out.q_value = q ? *q : Money::zero(estimates.empty() ? "USD" : estimates.front().currency);
  return out;
}

std::vector<QuantifiedThreat> rank_by_impact(std::vector<QuantifiedThreat> quantified) {
  for (const auto& q : quantified) {
    if (q.q_value.currency() != quantified.front().q_value.currency()) {
      throw Error(ErrorCode::MixedCurrency, "cannot rank " + q.q_value.currency() + " against " +
                                                quantified.front().q_value.currency());
    }
  }
  std::sort(quantified.begin(), quantified.end(), [](const QuantifiedThreat& a, const QuantifiedThreat& b) {
    if (a.q_value.amount_minor() != b.q_value.amount_minor()) return a.q_value.amount_minor() > b.q_value.amount_minor();
    if (a.threat_name != b.threat_name) return a.threat_name < b.threat_name;
    if (a.asset_id != b.asset_id) return a.asset_id < b.asset_id;
    return a.threat_id < b.threat_id;
  });
  return quantified;
}

std::vector<BiaRecord> rank_by_emergency(std::vector<BiaRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const BiaRecord& a, const BiaRecord& b) {
    if (!a.mtpd_hours) return false;
    if (!b.mtpd_hours) return true;
    return *a.mtpd_hours < *b.mtpd_hours;
  });
  return records;
}

std::vector<Violation> validate_control(const SecurityControl& control, const std::string& path) {
  std::vector<Violation> out;
  if (control.id.empty()) out.push_back({ErrorCode::InvalidValue, path + ".id", "control id must be non-empty"});
  if (control.annual_cost.amount_minor() < 0) {
    out.push_back({ErrorCode::InvalidValue, path + ".annual_cost", "annual cost must be non-negative"});
  }
  if (control.mitigation_rate.rational() < 0 || control.mitigation_rate.rational() > 1) {
    out.push_back({ErrorCode::InvalidValue, path + ".mitigation_rate",
                   "mitigation rate must lie in [0, 1], got " + control.mitigation_rate.str()});
  }
  if (control.mitigated_threat_ids.empty()) {
    out.push_back({ErrorCode::InvalidValue, path + ".mitigated_threat_ids", "control must mitigate at least one threat"});
  }
  return out;
}

RosiResult evaluate_rosi(const SecurityControl& control, std::span<const QuantifiedThreat> quantified) {
  auto v = validate_control(control, "control");
  if (!v.empty()) throw Error(v.front().code, v.front().message, v.front().path);

  Money exposure = Money::zero(control.annual_cost.currency());
  for (const auto& id : control.mitigated_threat_ids) {
    bool found = false;
    for (const auto& q : quantified) {
      if (q.threat_id != id) continue;
      found = true;
      exposure += q.q_value;
    }
    if (!found) throw Error(ErrorCode::DanglingReference, "control mitigates unknown threat '" + id + "'", id);
  }
  Money mitigated = Money::from_minor_exact(control.mitigation_rate.rational() * Rational(BigInt(exposure.amount_minor())),
                                            exposure.currency());
  Money ret = mitigated - control.annual_cost;
  return RosiResult{mitigated, control.annual_cost, ret, ret.amount_minor() > 0};
}

}  // namespace quanttm
