#include "quanttm/threat_model.hpp"

#include <algorithm>
#include <set>

namespace quanttm {

Duration Duration::hours(Decimal h) {
  if (h.rational() < 0) throw Error(ErrorCode::InvalidValue, "duration must be non-negative, got " + h.str());
  Duration d;
  d.hours_ = std::move(h);
  return d;
}

std::optional<Rational> Duration::days() const {
  if (is_infinite()) return std::nullopt;
  return hours_->rational() / 24;
}

std::string Duration::str() const { return is_infinite() ? "inf" : hours_->str(); }

bool operator<(const Duration& a, const Duration& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return a.hours_value() < b.hours_value();
}

const ThreatEvent* ThreatModel::find_threat(std::string_view id) const {
  auto it = std::find_if(threats.begin(), threats.end(), [&](const auto& t) { return t.id == id; });
  return it == threats.end() ? nullptr : &*it;
}

const Asset* ThreatModel::find_asset(std::string_view id) const {
  auto it = std::find_if(assets.begin(), assets.end(), [&](const auto& a) { return a.id == id; });
  return it == assets.end() ? nullptr : &*it;
}

std::vector<const ThreatAssetLink*> ThreatModel::links_for(std::string_view threat_id) const {
  std::vector<const ThreatAssetLink*> out;
  for (const auto& l : links) {
    if (l.threat_id == threat_id) out.push_back(&l);
  }
  return out;
}

const ThreatEffect* ThreatScenario::find_effect(std::string_view effect_id) const {
  auto it = std::find_if(effects.begin(), effects.end(), [&](const auto& e) { return e.id == effect_id; });
  return it == effects.end() ? nullptr : &*it;
}

std::vector<Violation> validate_effect(const ThreatEffect& effect, const std::string& path) {
  std::vector<Violation> out;
  if (effect.id.empty()) out.push_back({ErrorCode::InvalidValue, path + ".id", "effect id must be non-empty"});
  if (effect.description.empty()) {
    out.push_back({ErrorCode::InvalidValue, path + ".description", "effect description must be non-empty"});
  }
  if (effect.degree.rational() <= 0 || effect.degree.rational() > 1) {
    out.push_back({ErrorCode::InvalidValue, path + ".degree", "degree must lie in (0, 1], got " + effect.degree.str()});
  }
  return out;
}

ThreatEffect make_effect(std::string id, std::string description, Decimal degree, PrincipleSet principles,
                         std::optional<Duration> duration_override) {
  ThreatEffect e{std::move(id), std::move(description), std::move(degree), std::move(duration_override),
                 std::move(principles)};
  auto v = validate_effect(e, "effect");
  if (!v.empty()) throw Error(v.front().code, v.front().message, v.front().path);
  return e;
}

std::vector<Violation> validate_model(const ThreatModel& model) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < model.threats.size(); ++i) {
    const auto& t = model.threats[i];
    std::string path = "threats[" + std::to_string(i) + "]";
    if (t.id.empty()) out.push_back({ErrorCode::InvalidValue, path + ".id", "threat id must be non-empty"});
    if (!seen.insert(t.id).second) {
      out.push_back({ErrorCode::DuplicateId, path + ".id", "duplicate threat id '" + t.id + "'"});
    }
    if (t.name.empty()) out.push_back({ErrorCode::InvalidValue, path + ".name", "threat name must be non-empty"});
  }
  seen.clear();
  for (std::size_t i = 0; i < model.assets.size(); ++i) {
    const auto& a = model.assets[i];
    std::string path = "assets[" + std::to_string(i) + "]";
    if (a.id.empty()) out.push_back({ErrorCode::InvalidValue, path + ".id", "asset id must be non-empty"});
    if (!seen.insert(a.id).second) {
      out.push_back({ErrorCode::DuplicateId, path + ".id", "duplicate asset id '" + a.id + "'"});
    }
    if (a.name.empty()) out.push_back({ErrorCode::InvalidValue, path + ".name", "asset name must be non-empty"});
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < model.links.size(); ++i) {
    const auto& l = model.links[i];
    std::string path = "links[" + std::to_string(i) + "]";
    if (!model.find_threat(l.threat_id)) {
      out.push_back({ErrorCode::DanglingReference, path + ".threat_id", "unknown threat '" + l.threat_id + "'"});
    }
    if (!model.find_asset(l.asset_id)) {
      out.push_back({ErrorCode::DanglingReference, path + ".asset_id", "unknown asset '" + l.asset_id + "'"});
    }
    if (!pairs.emplace(l.threat_id, l.asset_id).second) {
      out.push_back({ErrorCode::DuplicateId, path,
                     "duplicate link (" + l.threat_id + ", " + l.asset_id + ")"});
    }
    for (auto [name, p] : {std::pair{"p_initiation", &l.p_initiation}, std::pair{"p_success", &l.p_success}}) {
      if (p->rational() < 0 || p->rational() > 1) {
        out.push_back({ErrorCode::ProbabilityOutOfRange, path + "." + name,
                       std::string(name) + " must lie in [0, 1], got " + p->str()});
      }
    }
    if (!l.duration.is_infinite() && l.duration.hours_value().rational() < 0) {
      out.push_back({ErrorCode::InvalidValue, path + ".duration", "duration must be non-negative"});
    }
  }
  return out;
}

ThreatModel build_threat_model(std::vector<ThreatEvent> threats, std::vector<Asset> assets,
                               std::vector<ThreatAssetLink> links) {
  ThreatModel model{std::move(threats), std::move(assets), std::move(links)};
  auto violations = validate_model(model);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(v.code, v.message, v.path);
  }
  return model;
}

std::vector<ThreatScenario> translate_to_scenarios(const ThreatModel& model, const EffectMapping& mapping) {
  std::vector<ThreatScenario> out;
  std::set<std::string> mapped;
  std::set<std::string> effect_ids;
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    const auto& [threat_id, effects] = mapping[i];
    std::string path = "mapping[" + std::to_string(i) + "]";
    if (!model.find_threat(threat_id)) {
      throw Error(ErrorCode::DanglingReference, "unknown threat '" + threat_id + "'", path);
    }
    if (!mapped.insert(threat_id).second) {
      throw Error(ErrorCode::DuplicateId, "threat '" + threat_id + "' mapped twice", path);
    }
    if (effects.empty()) {
      throw Error(ErrorCode::InvalidValue, "threat '" + threat_id + "' has no effects", path);
    }
    for (std::size_t j = 0; j < effects.size(); ++j) {
      std::string epath = path + ".effects[" + std::to_string(j) + "]";
      auto v = validate_effect(effects[j], epath);
      if (!v.empty()) throw Error(v.front().code, v.front().message, v.front().path);
      if (!effect_ids.insert(effects[j].id).second) {
        throw Error(ErrorCode::DuplicateId, "duplicate effect id '" + effects[j].id + "'", epath);
      }
    }
    out.push_back(ThreatScenario{threat_id, effects});
  }
  return out;
}

}  // namespace quanttm
