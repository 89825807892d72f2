#include "quanttm/bia.hpp"

#include <algorithm>
#include <cctype>

namespace quanttm {

namespace {

using P = SecurityPrinciple;
constexpr auto C = P::Confidentiality;
constexpr auto I = P::Integrity;
constexpr auto A = P::Availability;
constexpr auto Acc = P::Accountability;

ImpactFactor builtin_factor(std::string id, std::string name, Tangibility t, PrincipleSet ps, LossKind k) {
  return ImpactFactor{std::move(id), std::move(name), t, std::move(ps), k, true};
}

// Lowercase, every non-alphanumeric run becomes one space, padded with a
// space on both ends so " word " containment is a whole-word match.
std::string normalize_words(std::string_view s) {
  std::string out = " ";
  for (unsigned char c : s) {
    if (std::isalnum(c)) {
      out += static_cast<char>(std::tolower(c));
    } else if (out.back() != ' ') {
      out += ' ';
    }
  }
  if (out.back() != ' ') out += ' ';
  return out;
}

}  // namespace

std::string_view to_string(Tangibility t) { return t == Tangibility::Tangible ? "tangible" : "intangible"; }
std::string_view to_string(LossKind k) { return k == LossKind::OneTime ? "one_time" : "persistent"; }

std::optional<Tangibility> parse_tangibility(std::string_view s) {
  if (s == "tangible") return Tangibility::Tangible;
  if (s == "intangible") return Tangibility::Intangible;
  return std::nullopt;
}

std::optional<LossKind> parse_loss_kind(std::string_view s) {
  if (s == "one_time") return LossKind::OneTime;
  if (s == "persistent") return LossKind::Persistent;
  return std::nullopt;
}

const std::vector<ImpactFactor>& FactorCatalog::builtin_factors() {
  using T = Tangibility;
  using K = LossKind;
  static const std::vector<ImpactFactor> factors = {
      builtin_factor("product_revenue_loss", "Product revenue loss during service disruption", T::Tangible, {I, A},
                     K::Persistent),
      builtin_factor("commercial_agreement_violation", "Violation of commercial agreements with customers",
                     T::Tangible, {C, I, A}, K::OneTime),
      builtin_factor("regulatory_penalties", "Regulatory penalties", T::Tangible, {C, I, A, Acc}, K::OneTime),
      builtin_factor("quality_degradation", "Quality degradation of products", T::Tangible, {I, A}, K::Persistent),
      builtin_factor("technical_investigation", "Technical investigation cost", T::Tangible, {C, I, A, Acc},
                     K::OneTime),
      builtin_factor("defense_improvements", "Defense improvements (incident response, post-mortem analysis, mitigation)",
                     T::Tangible, {C, I, A, Acc}, K::OneTime),
      builtin_factor("customer_breach_notification", "Customer breach notification", T::Tangible, {C}, K::OneTime),
      builtin_factor("legal_fees", "Legal fees and litigation", T::Tangible, {C, I, Acc}, K::OneTime),
      builtin_factor("identity_protection", "Identity-protection services for affected parties", T::Tangible, {C},
                     K::OneTime),
      builtin_factor("crisis_communication", "Public-relations and crisis-communication cost", T::Tangible,
                     {C, I, Acc}, K::OneTime),
      builtin_factor("data_restoration", "Data restoration and integrity rework", T::Tangible, {I}, K::OneTime),
      builtin_factor("compliance_recertification", "Audit and compliance re-certification", T::Tangible, {I, Acc},
                     K::OneTime),
      builtin_factor("insurance_premium_increase", "Insurance premium increase", T::Intangible, {C, I, A, Acc},
                     K::OneTime),
      builtin_factor("lost_future_contract_revenue", "Lost future contract revenue", T::Intangible, {C, I, A},
                     K::OneTime),
      builtin_factor("customer_relationship_degradation", "Customer relationship degradation", T::Intangible,
                     {C, I, A, Acc}, K::Persistent),
      builtin_factor("intellectual_property_loss", "Loss of intellectual property", T::Intangible, {C}, K::OneTime),
  };
  return factors;
}

FactorCatalog FactorCatalog::builtin() {
  FactorCatalog c;
  c.factors_ = builtin_factors();
  return c;
}

void FactorCatalog::add(ImpactFactor factor) {
  if (factor.builtin) throw Error(ErrorCode::InvalidValue, "user factor '" + factor.id + "' cannot be built-in");
  if (factor.id.empty()) throw Error(ErrorCode::InvalidValue, "factor id must be non-empty");
  if (factor.name.empty()) throw Error(ErrorCode::InvalidValue, "factor '" + factor.id + "' needs a name");
  if (factor.applicable_principles.empty()) {
    throw Error(ErrorCode::InvalidValue, "factor '" + factor.id + "' needs at least one principle");
  }
  if (find(factor.id)) throw Error(ErrorCode::DuplicateId, "factor id '" + factor.id + "' already exists");
  factors_.push_back(std::move(factor));
}

const ImpactFactor* FactorCatalog::find(std::string_view id) const {
  auto it = std::find_if(factors_.begin(), factors_.end(), [&](const auto& f) { return f.id == id; });
  return it == factors_.end() ? nullptr : &*it;
}

std::vector<ImpactFactor> FactorCatalog::extensions() const {
  std::vector<ImpactFactor> out;
  std::copy_if(factors_.begin(), factors_.end(), std::back_inserter(out), [](const auto& f) { return !f.builtin; });
  return out;
}

std::vector<ImpactFactor> suggest_factors(const PrincipleSet& principles, const FactorCatalog& catalog) {
  std::vector<ImpactFactor> out;
  for (const auto& f : catalog.factors()) {
    bool hit = std::any_of(f.applicable_principles.begin(), f.applicable_principles.end(),
                           [&](P p) { return principles.count(p) > 0; });
    if (hit) out.push_back(f);
  }
  std::stable_sort(out.begin(), out.end(), [](const ImpactFactor& a, const ImpactFactor& b) {
    if (a.builtin != b.builtin) return a.builtin;
    return a.tangibility == Tangibility::Tangible && b.tangibility == Tangibility::Intangible;
  });
  return out;
}

const std::vector<CiaaEntry>& ciaa_keyword_table() {
  static const std::vector<CiaaEntry> table = {
      {"DDoS", {"ddos", "dos", "denial of service"}, {A}},
      {"Ransomware", {"ransomware"}, {C, A}},
      {"Phishing", {"phishing"}, {C, I}},
      {"SQL injection", {"sql injection", "sqli"}, {C, I}},
      {"XSS", {"xss", "cross site scripting"}, {C, I}},
      {"CSRF", {"csrf", "xsrf", "cross site request forgery"}, {I, Acc}},
      {"XXE", {"xxe", "xml external entity"}, {C, A}},
      {"Insider threat", {"insider", "insider threat"}, {C, I, Acc}},
      {"Malware", {"malware", "virus", "trojan", "worm", "spyware"}, {C, I, A}},
      {"Botnet", {"botnet"}, {A}},
      {"Data theft", {"data theft", "data leak", "data leakage", "data breach", "exfiltration"}, {C}},
      {"Spoofing", {"spoofing", "impersonation"}, {I, Acc}},
      {"Tampering", {"tampering"}, {I}},
      {"Repudiation", {"repudiation"}, {Acc}},
      {"Information disclosure", {"information disclosure"}, {C}},
      {"Privilege escalation", {"privilege escalation", "elevation of privilege"}, {C, I, Acc}},
      {"Supply-chain compromise", {"supply chain", "supply chain compromise"}, {C, I, A}},
      {"Brute force", {"brute force", "credential stuffing", "password spraying"}, {C, Acc}},
      {"Man-in-the-middle", {"man in the middle", "mitm", "adversary in the middle"}, {C, I}},
      {"Deserialization", {"deserialization", "insecure deserialization"}, {C, I, A}},
  };
  return table;
}

CiaaMatch classify_ciaa_detailed(std::string_view threat_name) {
  CiaaMatch out;
  const std::string haystack = normalize_words(threat_name);
  for (const auto& entry : ciaa_keyword_table()) {
    bool hit = std::any_of(entry.keywords.begin(), entry.keywords.end(), [&](const std::string& kw) {
      return haystack.find(normalize_words(kw)) != std::string::npos;
    });
    if (hit) {
      out.principles.insert(entry.principles.begin(), entry.principles.end());
      out.matched.push_back(entry.threat);
    }
  }
  return out;
}

PrincipleSet classify_ciaa(std::string_view threat_name) { return classify_ciaa_detailed(threat_name).principles; }

Rational persistent_loss_exact(const PersistentImpact& impact, const std::optional<Rational>& cap_days) {
  Rational daily(BigInt(impact.daily_loss.amount_minor()));
  Rational total = 0;
  Rational elapsed = 0;
  for (const auto& stage : impact.stages) {
    Rational days = stage.days.rational();
    if (cap_days) {
      Rational left = *cap_days - elapsed;
      if (left <= 0) break;
      if (days > left) days = left;
    }
    total += daily * (1 - stage.recovery_level.rational()) * days;
    elapsed += stage.days.rational();
  }
  return total;
}

Money compute_persistent_loss(const PersistentImpact& impact) {
  return Money::from_minor_exact(persistent_loss_exact(impact), impact.daily_loss.currency());
}

LossBreakdown compute_scenario_loss(const BiaRecord& record, const FactorCatalog& catalog) {
  const std::string& cur = record.currency;
  LossBreakdown out{Money::zero(cur), Money::zero(cur), Money::zero(cur), {}, {}};

  auto add = [&](const std::string& factor_id, const Money& amount) {
    const ImpactFactor* f = catalog.find(factor_id);
    if (!f) throw Error(ErrorCode::UnknownFactor, "unknown impact factor '" + factor_id + "'");
    if (amount.currency() != cur) {
      throw Error(ErrorCode::MixedCurrency, "impact in " + amount.currency() + " inside a " + cur + " record");
    }
    out.total += amount;
    (f->tangibility == Tangibility::Tangible ? out.tangible_total : out.intangible_total) += amount;
    auto it = std::find_if(out.per_factor.begin(), out.per_factor.end(),
                           [&](const FactorLoss& fl) { return fl.factor_id == factor_id; });
    if (it == out.per_factor.end()) {
      out.per_factor.push_back({factor_id, amount});
    } else {
      it->amount += amount;
    }
  };

  for (const auto& p : record.persistent) {
    add(p.factor_id, compute_persistent_loss(p));
    for (std::size_t s = 0; s < p.stages.size(); ++s) {
      const auto& st = p.stages[s];
      Rational stage_loss = Rational(BigInt(p.daily_loss.amount_minor())) *
                            (1 - st.recovery_level.rational()) * st.days.rational();
      out.per_stage_series.push_back({p.factor_id, s, Money::from_minor_exact(stage_loss, cur)});
    }
  }
  for (const auto& o : record.one_time) add(o.factor_id, o.amount);
  return out;
}

std::vector<Violation> validate_record(const BiaRecord& record, const FactorCatalog& catalog,
                                       const std::string& path) {
  std::vector<Violation> out;
  if (!is_valid_currency(record.currency)) {
    out.push_back({ErrorCode::InvalidCurrency, path + ".currency", "unknown currency '" + record.currency + "'"});
  }
  if (record.mtpd_hours && record.mtpd_hours->rational() <= 0) {
    out.push_back({ErrorCode::InvalidValue, path + ".mtpd_hours", "MTPD must be positive"});
  }
  auto check_money = [&](const Money& m, const std::string& p) {
    if (m.currency() != record.currency) {
      out.push_back({ErrorCode::MixedCurrency, p, "amount in " + m.currency() + ", record is " + record.currency});
    }
    if (m.amount_minor() < 0) out.push_back({ErrorCode::InvalidValue, p, "amount must be non-negative"});
  };
  auto check_factor = [&](const std::string& id, const std::string& p) {
    if (!catalog.find(id)) out.push_back({ErrorCode::UnknownFactor, p, "unknown impact factor '" + id + "'"});
  };
  for (std::size_t i = 0; i < record.one_time.size(); ++i) {
    std::string p = path + ".one_time[" + std::to_string(i) + "]";
    check_factor(record.one_time[i].factor_id, p + ".factor_id");
    check_money(record.one_time[i].amount, p + ".amount");
  }
  for (std::size_t i = 0; i < record.persistent.size(); ++i) {
    const auto& imp = record.persistent[i];
    std::string p = path + ".persistent[" + std::to_string(i) + "]";
    check_factor(imp.factor_id, p + ".factor_id");
    check_money(imp.daily_loss, p + ".daily_loss");
    if (imp.stages.empty()) out.push_back({ErrorCode::InvalidValue, p + ".stages", "at least one recovery stage required"});
    for (std::size_t s = 0; s < imp.stages.size(); ++s) {
      std::string sp = p + ".stages[" + std::to_string(s) + "]";
      const auto& st = imp.stages[s];
      if (st.recovery_level.rational() < 0 || st.recovery_level.rational() > 1) {
        out.push_back({ErrorCode::InvalidValue, sp + ".recovery_level",
                       "recovery level must lie in [0, 1], got " + st.recovery_level.str()});
      }
      if (st.days.rational() < 0) {
        out.push_back({ErrorCode::InvalidValue, sp + ".days", "days must be non-negative, got " + st.days.str()});
      }
    }
  }
  return out;
}

std::vector<std::string> lint_record(const BiaRecord& record, const FactorCatalog& catalog) {
  std::vector<std::string> out;
  const std::string where = record.scenario_id + "/" + record.effect_id;
  for (const auto& p : record.persistent) {
    for (std::size_t s = 1; s < p.stages.size(); ++s) {
      if (p.stages[s].recovery_level < p.stages[s - 1].recovery_level) {
        out.push_back(where + ": recovery level of '" + p.factor_id + "' decreases at stage " + std::to_string(s) +
                      " (" + p.stages[s - 1].recovery_level.str() + " -> " + p.stages[s].recovery_level.str() + ")");
      }
    }
    const ImpactFactor* f = catalog.find(p.factor_id);
    if (f && f->loss_kind != LossKind::Persistent) {
      out.push_back(where + ": factor '" + p.factor_id + "' is normally one-time but is estimated as persistent");
    }
  }
  for (const auto& o : record.one_time) {
    const ImpactFactor* f = catalog.find(o.factor_id);
    if (f && f->loss_kind != LossKind::OneTime) {
      out.push_back(where + ": factor '" + o.factor_id + "' is normally persistent but is estimated as one-time");
    }
  }
  return out;
}

}  // namespace quanttm
