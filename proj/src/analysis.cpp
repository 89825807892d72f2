#include "quanttm/analysis.hpp"

#include <algorithm>
#include <map>

#include "quanttm/json_codec.hpp"

namespace quanttm {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\r\n";
}

std::string bar_label(const ProjectFile& p, const QuantifiedThreat& q) {
  if (p.model.links_for(q.threat_id).size() > 1) return q.threat_name + " (" + q.asset_id + ")";
  return q.threat_name;
}

}  // namespace

QuantificationRun run_quantification(const ProjectFile& project) {
  const FactorCatalog catalog = project.catalog();
  QuantificationRun run;

  std::vector<std::string> missing;
  for (const auto& s : project.scenarios) {
    for (const auto& e : s.effects) {
      bool has = std::any_of(project.bia_records.begin(), project.bia_records.end(), [&](const BiaRecord& r) {
        return r.scenario_id == s.threat_id && r.effect_id == e.id;
      });
      if (!has) missing.push_back(s.threat_id + "/" + e.id);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::MissingEstimate, "no loss estimate for effect(s): " + list, missing.front());
  }

  for (const auto& threat : project.model.threats) {
    const ThreatScenario* scenario = project.find_scenario(threat.id);
    if (!scenario) continue;
    for (const ThreatAssetLink* link : project.model.links_for(threat.id)) {
      run.results.push_back(quantify_threat(*link, threat.name, *scenario, project.bia_records, catalog));
    }
  }

  for (const auto& r : project.bia_records) {
    auto w = lint_record(r, catalog);
    run.warnings.insert(run.warnings.end(), w.begin(), w.end());
  }

  for (const auto& ref : project.reference_values) {
    std::optional<Money> computed;
    for (const auto& q : run.results) {
      if (q.threat_id == ref.threat_id) computed = computed ? *computed + q.q_value : q.q_value;
    }
    const ThreatEvent* t = project.model.find_threat(ref.threat_id);
    const std::string name = t ? t->name : ref.threat_id;
    const std::string source = ref.source.empty() ? "" : " (" + ref.source + ")";
    if (!computed) {
      run.notes.push_back("reference value for " + name + source + " has no computed counterpart");
      continue;
    }
    if (computed->currency() != ref.q.currency()) {
      run.notes.push_back("reference value for " + name + source + " is in " + ref.q.currency() +
                          ", computed Q is in " + computed->currency());
      continue;
    }
    // One major unit of slack absorbs terminal rounding of published figures.
    Rational diff = computed->major() - ref.q.major();
    if (diff < 0) diff = -diff;
    if (diff > 1) {
      run.notes.push_back("computed Q for " + name + " is " + computed->str() + " but the reference value" + source +
                          " is " + ref.q.str());
    }
  }
  return run;
}

LossBreakdown scenario_breakdown(const ProjectFile& project, const ThreatScenario& scenario,
                                 const FactorCatalog& catalog) {
  std::optional<LossBreakdown> out;
  for (const auto& e : scenario.effects) {
    for (const auto& r : project.bia_records) {
      if (r.scenario_id != scenario.threat_id || r.effect_id != e.id) continue;
      LossBreakdown b = compute_scenario_loss(r, catalog);
      if (!out) {
        out = std::move(b);
        continue;
      }
      out->total += b.total;
      out->tangible_total += b.tangible_total;
      out->intangible_total += b.intangible_total;
      for (auto& f : b.per_factor) {
        auto it = std::find_if(out->per_factor.begin(), out->per_factor.end(),
                               [&](const FactorLoss& x) { return x.factor_id == f.factor_id; });
        if (it == out->per_factor.end()) {
          out->per_factor.push_back(std::move(f));
        } else {
          it->amount += f.amount;
        }
      }
      out->per_stage_series.insert(out->per_stage_series.end(), b.per_stage_series.begin(), b.per_stage_series.end());
    }
  }
  if (!out) {
    const std::string& cur = project.metadata.currency;
    out = LossBreakdown{Money::zero(cur), Money::zero(cur), Money::zero(cur), {}, {}};
  }
  return *out;
}

std::string export_report(const ProjectFile& /*project*/, const QuantificationRun& run) {
  std::string out = csv_row({"rank", "threat_id", "threat", "asset_id", "duration_hours", "q", "currency", "contributions"});
  if (run.results.empty()) return out;
  auto ranked = rank_by_impact(run.results);
  for (const auto& q : run.results) {
    auto pos = std::find_if(ranked.begin(), ranked.end(), [&](const QuantifiedThreat& r) {
      return r.threat_id == q.threat_id && r.asset_id == q.asset_id;
    });
    std::string contributions;
    for (const auto& c : q.contributions) {
      if (!contributions.empty()) contributions += ";";
      contributions += c.effect_id + "=" + c.amount.major_str();
    }
    out += csv_row({std::to_string(pos - ranked.begin() + 1), q.threat_id, q.threat_name, q.asset_id, q.duration.str(),
                    q.q_value.major_str(), q.q_value.currency(), contributions});
  }
  return out;
}

std::string_view to_string(PlotKind k) {
  switch (k) {
    case PlotKind::ImpactBar: return "impact_bar";
    case PlotKind::TangibleIntangiblePie: return "tangible_intangible_pie";
    case PlotKind::FactorPie: return "factor_pie";
    case PlotKind::RecoveryTimeline: return "recovery_timeline";
  }
  return "?";
}

std::vector<PlotSeries> emit_plot_series(const ProjectFile& project, const QuantificationRun& run) {
  const FactorCatalog catalog = project.catalog();
  std::vector<PlotSeries> out;

  PlotSeries bar{PlotKind::ImpactBar, "", project.metadata.currency, {}, {}, {}};
  if (!run.results.empty()) bar.currency = run.results.front().q_value.currency();
  for (const auto& q : run.results) {
    bar.labels.push_back(bar_label(project, q));
    bar.values.push_back(q.q_value.amount_minor());
  }
  out.push_back(std::move(bar));

  for (const auto& threat : project.model.threats) {
    const ThreatScenario* scenario = project.find_scenario(threat.id);
    if (!scenario) continue;
    LossBreakdown b = scenario_breakdown(project, *scenario, catalog);
    out.push_back(PlotSeries{PlotKind::TangibleIntangiblePie, threat.id, b.total.currency(),
                             {"tangible", "intangible"},
                             {b.tangible_total.amount_minor(), b.intangible_total.amount_minor()}, {}});
    PlotSeries pie{PlotKind::FactorPie, threat.id, b.total.currency(), {}, {}, {}};
    for (const auto& f : b.per_factor) {
      const ImpactFactor* factor = catalog.find(f.factor_id);
      pie.labels.push_back(factor ? factor->name : f.factor_id);
      pie.values.push_back(f.amount.amount_minor());
    }
    out.push_back(std::move(pie));

    for (const auto& effect : scenario->effects) {
      for (const auto& r : project.bia_records) {
        if (r.scenario_id != threat.id || r.effect_id != effect.id) continue;
        for (const auto& p : r.persistent) {
          PlotSeries tl{PlotKind::RecoveryTimeline, threat.id + "/" + effect.id + "/" + p.factor_id, r.currency, {}, {}, {}};
          Rational day = 0;
          for (const auto& st : p.stages) {
            Rational end = day + st.days.rational();
            std::int64_t residual = round_half_up(Rational(BigInt(p.daily_loss.amount_minor())) *
                                                  (1 - st.recovery_level.rational()));
            tl.labels.push_back(Decimal(day).str() + "-" + Decimal(end).str());
            tl.values.push_back(residual);
            tl.steps.push_back(TimelineStep{Decimal(day), Decimal(end), residual});
            day = end;
          }
          out.push_back(std::move(tl));
        }
      }
    }
  }
  return out;
}

nlohmann::json encode_plots(const std::vector<PlotSeries>& series) {
  using nlohmann::json;
  json out = json::array();
  for (const auto& s : series) {
    json j{{"kind", std::string(to_string(s.kind))},
           {"subject", s.subject},
           {"currency", s.currency},
           {"labels", s.labels},
           {"values", s.values}};
    if (s.kind == PlotKind::RecoveryTimeline) {
      json steps = json::array();
      for (const auto& st : s.steps) {
        steps.push_back({{"day_start", codec::encode(st.day_start)},
                         {"day_end", codec::encode(st.day_end)},
                         {"residual_minor", st.residual_minor}});
      }
      j["steps"] = steps;
    }
    out.push_back(std::move(j));
  }
  return out;
}

nlohmann::json encode_run(const QuantificationRun& run) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& q : run.results) out.push_back(codec::encode(q));
  return out;
}

nlohmann::json encode_catalog(const FactorCatalog& catalog) {
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& f : catalog.factors()) factors.push_back(codec::encode(f));
  nlohmann::json table = nlohmann::json::array();
  for (const auto& e : ciaa_keyword_table()) {
    table.push_back({{"threat", e.threat}, {"keywords", e.keywords}, {"principles", codec::encode(e.principles)}});
  }
  return {{"factors_version", std::string(kFactorCatalogVersion)},
          {"factors", factors},
          {"ciaa_version", std::string(kCiaaTableVersion)},
          {"ciaa_keywords", table}};
}

}  // namespace quanttm
