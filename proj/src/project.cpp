#include "quanttm/project.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "quanttm/json_codec.hpp"

namespace quanttm {

namespace codec {

namespace {

[[noreturn]] void malformed(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::MalformedDocument, (path.empty() ? std::string("document") : path) + ": " + what, path);
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& require(const json& j, std::string_view key, const std::string& path) {
  if (!j.is_object()) malformed(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) malformed(join(path, key), "missing field");
  return *it;
}

const json* optional_field(const json& j, std::string_view key, const std::string& path) {
  if (!j.is_object()) malformed(path, "expected an object");
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::string get_string(const json& j, std::string_view key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) malformed(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::string get_string_or(const json& j, std::string_view key, const std::string& path, std::string fallback = {}) {
  const json* v = optional_field(j, key, path);
  if (!v) return fallback;
  if (!v->is_string()) malformed(join(path, key), "expected a string");
  return v->get<std::string>();
}

const json& get_array(const json& j, std::string_view key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_array()) malformed(join(path, key), "expected an array");
  return v;
}

const json& array_or_empty(const json& j, std::string_view key, const std::string& path) {
  static const json empty = json::array();
  const json* v = optional_field(j, key, path);
  if (!v) return empty;
  if (!v->is_array()) malformed(join(path, key), "expected an array");
  return *v;
}

template <typename Fn>
auto decode_list(const json& arr, const std::string& path, Fn fn) {
  std::vector<decltype(fn(arr, path))> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(fn(arr[i], index(path, i)));
  return out;
}

std::vector<std::string> decode_string_list(const json& arr, const std::string& path) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) malformed(index(path, i), "expected a string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

// Re-tag domain errors raised while constructing values (e.g. an unknown
// currency inside Money) with the JSON path.
template <typename Fn>
auto with_path(const std::string& path, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedDocument) throw;
    throw Error(ErrorCode::ValidationFailure, path + ": " + e.what(), path);
  }
}

}  // namespace

json encode(const Decimal& d) {
  if (d.is_integer()) {
    const BigInt& n = numerator(d.rational());
    if (n <= std::numeric_limits<std::int64_t>::max() && n >= std::numeric_limits<std::int64_t>::min()) {
      return json(n.convert_to<std::int64_t>());
    }
  }
  double v = d.to_double();
  if (!(Decimal::from_double(v) == d)) {
    throw Error(ErrorCode::InvalidValue, "decimal " + d.str() + " has too many significant digits to serialize");
  }
  return json(v);
}

Decimal decode_decimal(const json& j, const std::string& path) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) {
      auto u = j.get<std::uint64_t>();
      return Decimal(Rational(BigInt(u)));
    }
    return Decimal(j.get<std::int64_t>());
  }
  if (j.is_number_float()) return Decimal::from_double(j.get<double>());
  if (j.is_string()) {
    try {
      return Decimal::parse(j.get<std::string>());
    } catch (const Error&) {
      malformed(path, "not a decimal number");
    }
  }
  malformed(path, "expected a number");
}

json encode(const Duration& d) { return d.is_infinite() ? json("inf") : encode(d.hours_value()); }

Duration decode_duration(const json& j, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "inf") return Duration::infinite();
  Decimal h = decode_decimal(j, path);
  if (h.rational() < 0) throw Error(ErrorCode::ValidationFailure, path + ": duration must be non-negative", path);
  return Duration::hours(h);
}

json encode(const Money& m) { return json{{"amount_minor", m.amount_minor()}, {"currency", m.currency()}}; }

Money decode_money(const json& j, const std::string& path) {
  const json& amt = require(j, "amount_minor", path);
  if (!amt.is_number_integer()) malformed(join(path, "amount_minor"), "expected an integer");
  std::string cur = get_string(j, "currency", path);
  return with_path(join(path, "currency"), [&] { return Money(amt.get<std::int64_t>(), cur); });
}

json encode(const PrincipleSet& s) {
  json out = json::array();
  for (auto p : s) out.push_back(std::string(to_string(p)));
  return out;
}

PrincipleSet decode_principles(const json& j, const std::string& path) {
  if (!j.is_array()) malformed(path, "expected an array of principles");
  PrincipleSet out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) malformed(index(path, i), "expected a string");
    auto p = parse_principle(j[i].get<std::string>());
    if (!p) malformed(index(path, i), "unknown principle '" + j[i].get<std::string>() + "'");
    out.insert(*p);
  }
  return out;
}

json encode(const ImpactFactor& f) {
  return json{{"id", f.id},
              {"name", f.name},
              {"tangibility", std::string(to_string(f.tangibility))},
              {"principles", encode(f.applicable_principles)},
              {"loss_kind", std::string(to_string(f.loss_kind))},
              {"builtin", f.builtin}};
}

ImpactFactor decode_factor(const json& j, const std::string& path) {
  ImpactFactor f;
  f.id = get_string(j, "id", path);
  f.name = get_string(j, "name", path);
  auto t = parse_tangibility(get_string(j, "tangibility", path));
  if (!t) malformed(join(path, "tangibility"), "expected 'tangible' or 'intangible'");
  f.tangibility = *t;
  f.applicable_principles = decode_principles(require(j, "principles", path), join(path, "principles"));
  auto k = parse_loss_kind(get_string(j, "loss_kind", path));
  if (!k) malformed(join(path, "loss_kind"), "expected 'one_time' or 'persistent'");
  f.loss_kind = *k;
  if (const json* b = optional_field(j, "builtin", path)) {
    if (!b->is_boolean()) malformed(join(path, "builtin"), "expected a boolean");
    f.builtin = b->get<bool>();
  }
  return f;
}

json encode(const ThreatEffect& e) {
  json out{{"id", e.id}, {"description", e.description}, {"degree", encode(e.degree)}, {"principles", encode(e.principles)}};
  if (e.duration_override) out["duration_override"] = encode(*e.duration_override);
  return out;
}

ThreatEffect decode_effect(const json& j, const std::string& path) {
  ThreatEffect e;
  e.id = get_string(j, "id", path);
  e.description = get_string(j, "description", path);
  e.degree = decode_decimal(require(j, "degree", path), join(path, "degree"));
  if (const json* d = optional_field(j, "duration_override", path)) {
    e.duration_override = decode_duration(*d, join(path, "duration_override"));
  }
  if (const json* p = optional_field(j, "principles", path)) e.principles = decode_principles(*p, join(path, "principles"));
  return e;
}

json encode(const ThreatScenario& s) {
  json effects = json::array();
  for (const auto& e : s.effects) effects.push_back(encode(e));
  return json{{"threat_id", s.threat_id}, {"effects", effects}};
}

ThreatScenario decode_scenario(const json& j, const std::string& path) {
  ThreatScenario s;
  s.threat_id = get_string(j, "threat_id", path);
  s.effects = decode_list(get_array(j, "effects", path), join(path, "effects"), decode_effect);
  return s;
}

json encode(const BiaRecord& r) {
  json one_time = json::array();
  for (const auto& o : r.one_time) one_time.push_back({{"factor_id", o.factor_id}, {"amount", encode(o.amount)}});
  json persistent = json::array();
  for (const auto& p : r.persistent) {
    json stages = json::array();
    for (const auto& s : p.stages) {
      stages.push_back({{"recovery_level", encode(s.recovery_level)}, {"days", encode(s.days)}});
    }
    persistent.push_back({{"factor_id", p.factor_id}, {"daily_loss", encode(p.daily_loss)}, {"stages", stages}});
  }
  json out{{"scenario_id", r.scenario_id},
           {"effect_id", r.effect_id},
           {"currency", r.currency},
           {"one_time", one_time},
           {"persistent", persistent}};
  if (r.mtpd_hours) out["mtpd_hours"] = encode(*r.mtpd_hours);
  return out;
}

BiaRecord decode_bia_record(const json& j, const std::string& path) {
  BiaRecord r;
  r.scenario_id = get_string(j, "scenario_id", path);
  r.effect_id = get_string(j, "effect_id", path);
  r.currency = get_string(j, "currency", path);
  r.one_time = decode_list(array_or_empty(j, "one_time", path), join(path, "one_time"),
                           [](const json& o, const std::string& p) {
                             return OneTimeImpact{get_string(o, "factor_id", p),
                                                  decode_money(require(o, "amount", p), join(p, "amount"))};
                           });
  r.persistent = decode_list(
      array_or_empty(j, "persistent", path), join(path, "persistent"), [](const json& o, const std::string& p) {
        PersistentImpact imp;
        imp.factor_id = get_string(o, "factor_id", p);
        imp.daily_loss = decode_money(require(o, "daily_loss", p), join(p, "daily_loss"));
        imp.stages = decode_list(get_array(o, "stages", p), join(p, "stages"), [](const json& s, const std::string& sp) {
          return RecoveryStage{decode_decimal(require(s, "recovery_level", sp), join(sp, "recovery_level")),
                               decode_decimal(require(s, "days", sp), join(sp, "days"))};
        });
        return imp;
      });
  if (const json* m = optional_field(j, "mtpd_hours", path)) r.mtpd_hours = decode_decimal(*m, join(path, "mtpd_hours"));
  return r;
}

json encode(const SecurityControl& c) {
  return json{{"id", c.id},
              {"name", c.name},
              {"annual_cost", encode(c.annual_cost)},
              {"mitigation_rate", encode(c.mitigation_rate)},
              {"mitigated_threat_ids", c.mitigated_threat_ids}};
}

SecurityControl decode_control(const json& j, const std::string& path) {
  SecurityControl c;
  c.id = get_string_or(j, "id", path);
  c.name = get_string_or(j, "name", path);
  c.annual_cost = decode_money(require(j, "annual_cost", path), join(path, "annual_cost"));
  c.mitigation_rate = decode_decimal(require(j, "mitigation_rate", path), join(path, "mitigation_rate"));
  c.mitigated_threat_ids =
      decode_string_list(get_array(j, "mitigated_threat_ids", path), join(path, "mitigated_threat_ids"));
  return c;
}

json encode(const ScoreRange& r) {
  if (r.is_point()) return encode(r.lo);
  return json::array({encode(r.lo), encode(r.hi)});
}

ScoreRange decode_score_range(const json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.size() != 2) malformed(path, "expected [lo, hi]");
    return ScoreRange{decode_decimal(j[0], index(path, 0)), decode_decimal(j[1], index(path, 1))};
  }
  return ScoreRange::point(decode_decimal(j, path));
}

json encode(const DreadInput& d) {
  return json{{"threat_id", d.threat_id},
              {"damage", encode(d.damage)},
              {"reproducibility", encode(d.reproducibility)},
              {"exploitability", encode(d.exploitability)},
              {"affected_users", encode(d.affected_users)},
              {"discoverability", encode(d.discoverability)}};
}

DreadInput decode_dread_input(const json& j, const std::string& path) {
  auto range = [&](std::string_view key) { return decode_score_range(require(j, key, path), join(path, key)); };
  return DreadInput{get_string(j, "threat_id", path), range("damage"), range("reproducibility"),
                    range("exploitability"), range("affected_users"), range("discoverability")};
}

json encode(const DreadAssessment& a) {
  json out = encode(a.input);
  out["sum"] = encode(a.sum_range);
  out["grade"] = a.grade_label();
  out["grade_range"] = json::array({std::string(to_string(a.grade_lo)), std::string(to_string(a.grade_hi))});
  return out;
}

json encode(const MatrixRating& r) {
  return json{{"threat_id", r.threat_id},
              {"likelihood", std::string(to_string(r.likelihood))},
              {"severity", std::string(to_string(r.severity))},
              {"priority", std::string(to_string(r.priority))}};
}

MatrixRating decode_matrix_rating(const json& j, const std::string& path, const MatrixPolicy& policy) {
  auto level = [&](std::string_view key) {
    auto l = parse_level(get_string(j, key, path));
    if (!l) malformed(join(path, key), "expected Low, Medium or High");
    return *l;
  };
  MatrixRating r = rate_matrix(get_string(j, "threat_id", path), level("likelihood"), level("severity"), policy);
  if (optional_field(j, "priority", path)) r.priority = level("priority");
  return r;
}

json encode(const QuantifiedThreat& q) {
  json contributions = json::array();
  for (const auto& c : q.contributions) contributions.push_back({{"effect_id", c.effect_id}, {"amount", encode(c.amount)}});
  return json{{"threat", q.threat_name},
              {"threat_id", q.threat_id},
              {"asset_id", q.asset_id},
              {"q", encode(q.q_value)},
              {"duration", encode(q.duration)},
              {"contributions", contributions}};
}

QuantifiedThreat decode_quantified(const json& j, const std::string& path) {
  QuantifiedThreat q;
  q.threat_name = get_string(j, "threat", path);
  q.threat_id = get_string(j, "threat_id", path);
  q.asset_id = get_string(j, "asset_id", path);
  q.q_value = decode_money(require(j, "q", path), join(path, "q"));
  q.duration = decode_duration(require(j, "duration", path), join(path, "duration"));
  q.contributions = decode_list(get_array(j, "contributions", path), join(path, "contributions"),
                                [](const json& c, const std::string& p) {
                                  return EffectContribution{get_string(c, "effect_id", p),
                                                            decode_money(require(c, "amount", p), join(p, "amount"))};
                                });
  return q;
}

json encode(const RosiResult& r) {
  return json{{"mitigated_impact", encode(r.mitigated_impact)},
              {"control_cost", encode(r.control_cost)},
              {"absolute_return", encode(r.absolute_return)},
              {"cost_effective", r.cost_effective}};
}

json encode(const LossBreakdown& b) {
  json per_factor = json::array();
  for (const auto& f : b.per_factor) per_factor.push_back({{"factor_id", f.factor_id}, {"amount", encode(f.amount)}});
  json stages = json::array();
  for (const auto& s : b.per_stage_series) {
    stages.push_back({{"factor_id", s.factor_id}, {"stage", s.stage_index}, {"amount", encode(s.amount)}});
  }
  return json{{"total", encode(b.total)},
              {"tangible_total", encode(b.tangible_total)},
              {"intangible_total", encode(b.intangible_total)},
              {"per_factor", per_factor},
              {"per_stage_series", stages}};
}

json encode(const ProjectFile& p) {
  const auto& m = p.metadata;
  json rates = json::array();
  for (const auto& r : m.conversion_rates) rates.push_back({{"from", r.from}, {"to", r.to}, {"rate", encode(r.rate)}});
  json metadata{{"name", m.name}, {"currency", m.currency}, {"conversion_rates", rates},
                {"created", m.created}, {"updated", m.updated}, {"notes", m.notes}};

  json threats = json::array();
  for (const auto& t : p.model.threats) threats.push_back({{"id", t.id}, {"name", t.name}, {"description", t.description}});
  json assets = json::array();
  for (const auto& a : p.model.assets) {
    assets.push_back({{"id", a.id}, {"name", a.name}, {"kind", a.kind == AssetKind::Data ? "data" : "functional"},
                      {"description", a.description}});
  }
  json links = json::array();
  for (const auto& l : p.model.links) {
    links.push_back({{"threat_id", l.threat_id}, {"asset_id", l.asset_id}, {"p_initiation", encode(l.p_initiation)},
                     {"p_success", encode(l.p_success)}, {"duration", encode(l.duration)}});
  }
  json scenarios = json::array();
  for (const auto& s : p.scenarios) scenarios.push_back(encode(s));
  json classifications = json::array();
  for (const auto& c : p.classifications) {
    classifications.push_back({{"threat_name", c.threat_name}, {"principles", encode(c.principles)}, {"manual", c.manual}});
  }
  json factors = json::array();
  for (const auto& f : p.factor_extensions) factors.push_back(encode(f));
  json records = json::array();
  for (const auto& r : p.bia_records) records.push_back(encode(r));
  json controls = json::array();
  for (const auto& c : p.controls) controls.push_back(encode(c));

  json policy = json::array();
  for (const auto& row : p.baselines.matrix_policy.cells) {
    json jr = json::array();
    for (auto cell : row) jr.push_back(std::string(to_string(cell)));
    policy.push_back(jr);
  }
  json ratings = json::array();
  for (const auto& r : p.baselines.matrix_ratings) ratings.push_back(encode(r));
  json dread = json::array();
  for (const auto& d : p.baselines.dread_inputs) dread.push_back(encode(d));
  const auto& th = p.baselines.dread_thresholds;
  json baselines{{"matrix_policy", policy},
                 {"dread_thresholds", {{"low_max", encode(th.low_max)}, {"medium_max", encode(th.medium_max)},
                                       {"high_max", encode(th.high_max)}}},
                 {"matrix_ratings", ratings},
                 {"dread", dread}};

  json refs = json::array();
  for (const auto& r : p.reference_values) {
    refs.push_back({{"threat_id", r.threat_id}, {"q", encode(r.q)}, {"source", r.source}});
  }

  return json{{"schema_version", p.schema_version},
              {"metadata", metadata},
              {"threats", threats},
              {"assets", assets},
              {"links", links},
              {"scenarios", scenarios},
              {"classifications", classifications},
              {"factor_extensions", factors},
              {"bia_records", records},
              {"controls", controls},
              {"baselines", baselines},
              {"reference_values", refs}};
}

ProjectFile decode_project(const json& j) {
  if (!j.is_object()) malformed("", "expected a JSON object");
  const json& version = require(j, "schema_version", "");
  if (!version.is_number_integer()) malformed("schema_version", "expected an integer");
  if (version.get<std::int64_t>() != kSchemaVersion) {
    throw Error(ErrorCode::UnknownSchemaVersion,
                "unsupported schema_version " + version.dump() + " (expected " + std::to_string(kSchemaVersion) + ")",
                "schema_version");
  }
  ProjectFile p;
  p.schema_version = kSchemaVersion;

  if (const json* m = optional_field(j, "metadata", "")) {
    p.metadata.name = get_string_or(*m, "name", "metadata");
    p.metadata.currency = get_string_or(*m, "currency", "metadata", "USD");
    p.metadata.created = get_string_or(*m, "created", "metadata");
    p.metadata.updated = get_string_or(*m, "updated", "metadata");
    p.metadata.notes = get_string_or(*m, "notes", "metadata");
    p.metadata.conversion_rates = decode_list(
        array_or_empty(*m, "conversion_rates", "metadata"), "metadata.conversion_rates",
        [](const json& r, const std::string& path) {
          return ConversionRate{get_string(r, "from", path), get_string(r, "to", path),
                                decode_decimal(require(r, "rate", path), join(path, "rate"))};
        });
  }

  p.model.threats = decode_list(array_or_empty(j, "threats", ""), "threats", [](const json& t, const std::string& path) {
    return ThreatEvent{get_string(t, "id", path), get_string(t, "name", path), get_string_or(t, "description", path)};
  });
  p.model.assets = decode_list(array_or_empty(j, "assets", ""), "assets", [](const json& a, const std::string& path) {
    std::string kind = get_string_or(a, "kind", path, "functional");
    if (kind != "functional" && kind != "data") malformed(join(path, "kind"), "expected 'functional' or 'data'");
    return Asset{get_string(a, "id", path), get_string(a, "name", path),
                 kind == "data" ? AssetKind::Data : AssetKind::Functional, get_string_or(a, "description", path)};
  });
  p.model.links = decode_list(array_or_empty(j, "links", ""), "links", [](const json& l, const std::string& path) {
    return ThreatAssetLink{get_string(l, "threat_id", path), get_string(l, "asset_id", path),
                           decode_decimal(require(l, "p_initiation", path), join(path, "p_initiation")),
                           decode_decimal(require(l, "p_success", path), join(path, "p_success")),
                           decode_duration(require(l, "duration", path), join(path, "duration"))};
  });
  p.scenarios = decode_list(array_or_empty(j, "scenarios", ""), "scenarios", decode_scenario);
  p.classifications = decode_list(
      array_or_empty(j, "classifications", ""), "classifications", [](const json& c, const std::string& path) {
        Classification out{get_string(c, "threat_name", path),
                           decode_principles(require(c, "principles", path), join(path, "principles")), false};
        if (const json* m = optional_field(c, "manual", path)) {
          if (!m->is_boolean()) malformed(join(path, "manual"), "expected a boolean");
          out.manual = m->get<bool>();
        }
        return out;
      });
  p.factor_extensions = decode_list(array_or_empty(j, "factor_extensions", ""), "factor_extensions", decode_factor);
  p.bia_records = decode_list(array_or_empty(j, "bia_records", ""), "bia_records", decode_bia_record);
  p.controls = decode_list(array_or_empty(j, "controls", ""), "controls", decode_control);

  if (const json* b = optional_field(j, "baselines", "")) {
    if (const json* policy = optional_field(*b, "matrix_policy", "baselines")) {
      if (!policy->is_array() || policy->size() != 3) malformed("baselines.matrix_policy", "expected a 3x3 array");
      for (std::size_t l = 0; l < 3; ++l) {
        const json& row = (*policy)[l];
        std::string rp = index("baselines.matrix_policy", l);
        if (!row.is_array() || row.size() != 3) malformed(rp, "expected 3 cells");
        for (std::size_t s = 0; s < 3; ++s) {
          auto lv = row[s].is_string() ? parse_level(row[s].get<std::string>()) : std::nullopt;
          if (!lv) malformed(index(rp, s), "expected Low, Medium or High");
          p.baselines.matrix_policy.cells[l][s] = *lv;
        }
      }
    }
    if (const json* t = optional_field(*b, "dread_thresholds", "baselines")) {
      const std::string tp = "baselines.dread_thresholds";
      p.baselines.dread_thresholds = DreadThresholds{decode_decimal(require(*t, "low_max", tp), join(tp, "low_max")),
                                                     decode_decimal(require(*t, "medium_max", tp), join(tp, "medium_max")),
                                                     decode_decimal(require(*t, "high_max", tp), join(tp, "high_max"))};
    }
    const MatrixPolicy policy = p.baselines.matrix_policy;
    p.baselines.matrix_ratings =
        decode_list(array_or_empty(*b, "matrix_ratings", "baselines"), "baselines.matrix_ratings",
                    [&](const json& r, const std::string& path) { return decode_matrix_rating(r, path, policy); });
    p.baselines.dread_inputs = decode_list(array_or_empty(*b, "dread", "baselines"), "baselines.dread", decode_dread_input);
  }

  p.reference_values = decode_list(
      array_or_empty(j, "reference_values", ""), "reference_values", [](const json& r, const std::string& path) {
        return ReferenceValue{get_string(r, "threat_id", path), decode_money(require(r, "q", path), join(path, "q")),
                              get_string_or(r, "source", path)};
      });
  return p;
}

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace codec

FactorCatalog ProjectFile::catalog() const {
  FactorCatalog c = FactorCatalog::builtin();
  for (const auto& f : factor_extensions) c.add(f);
  return c;
}

const ThreatScenario* ProjectFile::find_scenario(std::string_view threat_id) const {
  for (const auto& s : scenarios) {
    if (s.threat_id == threat_id) return &s;
  }
  return nullptr;
}

ProjectFile empty_project(std::string currency, std::string name) {
  if (!is_valid_currency(currency)) throw Error(ErrorCode::InvalidCurrency, "unknown currency '" + currency + "'");
  ProjectFile p;
  p.metadata.currency = std::move(currency);
  p.metadata.name = std::move(name);
  return p;
}

std::vector<Violation> validate_project(const ProjectFile& p) {
  std::vector<Violation> out = validate_model(p.model);
  auto add = [&](ErrorCode code, std::string path, std::string msg) {
    out.push_back({code, std::move(path), std::move(msg)});
  };

  if (p.schema_version != kSchemaVersion) add(ErrorCode::UnknownSchemaVersion, "schema_version", "unsupported version");
  if (!is_valid_currency(p.metadata.currency)) {
    add(ErrorCode::InvalidCurrency, "metadata.currency", "unknown currency '" + p.metadata.currency + "'");
  }
  for (std::size_t i = 0; i < p.metadata.conversion_rates.size(); ++i) {
    const auto& r = p.metadata.conversion_rates[i];
    std::string path = "metadata.conversion_rates[" + std::to_string(i) + "]";
    if (!is_valid_currency(r.from)) add(ErrorCode::InvalidCurrency, path + ".from", "unknown currency '" + r.from + "'");
    if (!is_valid_currency(r.to)) add(ErrorCode::InvalidCurrency, path + ".to", "unknown currency '" + r.to + "'");
    if (r.rate.rational() <= 0) add(ErrorCode::NonPositiveRate, path + ".rate", "rate must be positive");
  }

  std::set<std::string> scenario_threats;
  std::map<std::string, const ThreatScenario*> effects_owner;
  for (std::size_t i = 0; i < p.scenarios.size(); ++i) {
    const auto& s = p.scenarios[i];
    std::string path = "scenarios[" + std::to_string(i) + "]";
    if (!p.model.find_threat(s.threat_id)) {
      add(ErrorCode::DanglingReference, path + ".threat_id", "unknown threat '" + s.threat_id + "'");
    } else if (p.model.links_for(s.threat_id).empty()) {
      add(ErrorCode::DanglingReference, path + ".threat_id", "threat '" + s.threat_id + "' has no asset link");
    }
    if (!scenario_threats.insert(s.threat_id).second) {
      add(ErrorCode::DuplicateId, path + ".threat_id", "second scenario for threat '" + s.threat_id + "'");
    }
    if (s.effects.empty()) add(ErrorCode::InvalidValue, path + ".effects", "scenario needs at least one effect");
    for (std::size_t k = 0; k < s.effects.size(); ++k) {
      std::string epath = path + ".effects[" + std::to_string(k) + "]";
      auto v = validate_effect(s.effects[k], epath);
      out.insert(out.end(), v.begin(), v.end());
      if (!effects_owner.emplace(s.effects[k].id, &s).second) {
        add(ErrorCode::DuplicateId, epath + ".id", "duplicate effect id '" + s.effects[k].id + "'");
      }
    }
  }

  std::set<std::string> names;
  for (std::size_t i = 0; i < p.classifications.size(); ++i) {
    const auto& c = p.classifications[i];
    std::string path = "classifications[" + std::to_string(i) + "]";
    if (c.threat_name.empty()) add(ErrorCode::InvalidValue, path + ".threat_name", "threat name must be non-empty");
    if (!names.insert(c.threat_name).second) {
      add(ErrorCode::DuplicateId, path + ".threat_name", "duplicate classification for '" + c.threat_name + "'");
    }
  }

  FactorCatalog catalog = FactorCatalog::builtin();
  for (std::size_t i = 0; i < p.factor_extensions.size(); ++i) {
    try {
      catalog.add(p.factor_extensions[i]);
    } catch (const Error& e) {
      add(e.code(), "factor_extensions[" + std::to_string(i) + "]", e.what());
    }
  }

  std::set<std::pair<std::string, std::string>> covered;
  for (std::size_t i = 0; i < p.bia_records.size(); ++i) {
    const auto& r = p.bia_records[i];
    std::string path = "bia_records[" + std::to_string(i) + "]";
    const ThreatScenario* s = p.find_scenario(r.scenario_id);
    if (!s) {
      add(ErrorCode::DanglingReference, path + ".scenario_id", "unknown scenario '" + r.scenario_id + "'");
    } else if (!s->find_effect(r.effect_id)) {
      add(ErrorCode::DanglingReference, path + ".effect_id",
          "effect '" + r.effect_id + "' is not part of scenario '" + r.scenario_id + "'");
    }
    if (!covered.emplace(r.scenario_id, r.effect_id).second) {
      add(ErrorCode::DuplicateId, path, "second estimate for " + r.scenario_id + "/" + r.effect_id);
    }
    auto v = validate_record(r, catalog, path);
    out.insert(out.end(), v.begin(), v.end());
  }

  std::set<std::string> control_ids;
  for (std::size_t i = 0; i < p.controls.size(); ++i) {
    const auto& c = p.controls[i];
    std::string path = "controls[" + std::to_string(i) + "]";
    auto v = validate_control(c, path);
    out.insert(out.end(), v.begin(), v.end());
    if (!control_ids.insert(c.id).second) add(ErrorCode::DuplicateId, path + ".id", "duplicate control id '" + c.id + "'");
    for (std::size_t k = 0; k < c.mitigated_threat_ids.size(); ++k) {
      if (!p.model.find_threat(c.mitigated_threat_ids[k])) {
        add(ErrorCode::DanglingReference, path + ".mitigated_threat_ids[" + std::to_string(k) + "]",
            "unknown threat '" + c.mitigated_threat_ids[k] + "'");
      }
    }
  }

  const auto& b = p.baselines;
  if (!is_monotone(b.matrix_policy)) {
    add(ErrorCode::InvalidPolicy, "baselines.matrix_policy", "policy lowers priority when an axis increases");
  }
  if (!thresholds_valid(b.dread_thresholds)) {
    add(ErrorCode::InvalidPolicy, "baselines.dread_thresholds", "thresholds must satisfy 0 <= low < medium < high <= 50");
  }
  std::set<std::string> rated;
  for (std::size_t i = 0; i < b.matrix_ratings.size(); ++i) {
    const auto& r = b.matrix_ratings[i];
    std::string path = "baselines.matrix_ratings[" + std::to_string(i) + "]";
    if (!p.model.find_threat(r.threat_id)) add(ErrorCode::DanglingReference, path + ".threat_id", "unknown threat '" + r.threat_id + "'");
    if (!rated.insert(r.threat_id).second) add(ErrorCode::DuplicateId, path + ".threat_id", "threat rated twice");
    if (r.priority != matrix_priority(r.likelihood, r.severity, b.matrix_policy)) {
      add(ErrorCode::InvalidPolicy, path + ".priority", "priority disagrees with the matrix policy");
    }
  }
  rated.clear();
  for (std::size_t i = 0; i < b.dread_inputs.size(); ++i) {
    const auto& d = b.dread_inputs[i];
    std::string path = "baselines.dread[" + std::to_string(i) + "]";
    if (!p.model.find_threat(d.threat_id)) add(ErrorCode::DanglingReference, path + ".threat_id", "unknown threat '" + d.threat_id + "'");
    if (!rated.insert(d.threat_id).second) add(ErrorCode::DuplicateId, path + ".threat_id", "threat scored twice");
    auto v = validate_dread(d, path);
    out.insert(out.end(), v.begin(), v.end());
  }

  for (std::size_t i = 0; i < p.reference_values.size(); ++i) {
    const auto& r = p.reference_values[i];
    if (!p.model.find_threat(r.threat_id)) {
      add(ErrorCode::DanglingReference, "reference_values[" + std::to_string(i) + "].threat_id",
          "unknown threat '" + r.threat_id + "'");
    }
  }
  return out;
}

ProjectFile load_project(std::string_view bytes) {
  auto is_blank = [](std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
  };
  if (is_blank(bytes)) throw Error(ErrorCode::MalformedDocument, "empty document");
  ProjectFile p = codec::decode_project(codec::parse(bytes));
  auto violations = validate_project(p);
  if (!violations.empty()) {
    std::string msg = "project failed validation:";
    for (const auto& v : violations) msg += "\n  " + v.path + ": " + v.message;
    throw Error(ErrorCode::ValidationFailure, msg, violations.front().path);
  }
  return p;
}

std::string save_project(const ProjectFile& project) { return codec::encode(project).dump(2) + "\n"; }

std::string revision_token(std::string_view canonical_bytes) {
  // FNV-1a, 64 bit.
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical_bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "'", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view bytes) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + tmp.string() + "'", path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "short write to '" + tmp.string() + "'", path);
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot replace '" + path + "': " + ec.message(), path);
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace quanttm
