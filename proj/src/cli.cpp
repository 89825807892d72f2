#include "quanttm/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "quanttm/analysis.hpp"
#include "quanttm/json_codec.hpp"

namespace quanttm::cli {

namespace {

using nlohmann::json;

CommandResult failure(const Error& e) {
  std::string msg = "error: " + std::string(to_string(e.code())) + ": " + e.what();
  if (!e.path().empty() && msg.find(e.path()) == std::string::npos) msg += " (at " + e.path() + ")";
  return CommandResult{1, "", msg + "\n"};
}

template <typename Fn>
CommandResult guarded(Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return failure(e);
  } catch (const std::exception& e) {
    return CommandResult{1, "", std::string("error: ") + e.what() + "\n"};
  }
}

ProjectFile load(const std::string& path) { return load_project(read_file(path)); }

void store(const std::string& path, ProjectFile& p) {
  p.metadata.updated = utc_timestamp();
  write_file_atomic(path, save_project(p));
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string threat_table(const std::vector<QuantifiedThreat>& rows, bool with_rank) {
  std::ostringstream out;
  if (with_rank) out << pad("#", 4);
  out << pad("Threat", 20) << pad("Duration", 10) << "Q (per year)\n";
  int rank = 1;
  for (const auto& q : rows) {
    if (with_rank) out << pad(std::to_string(rank++), 4);
    out << pad(q.threat_name, 20) << pad(q.duration.str(), 10) << q.q_value.str() << "\n";
  }
  return out.str();
}

const ThreatEvent* find_threat_by_key(const ProjectFile& p, const std::string& key) {
  if (const ThreatEvent* t = p.model.find_threat(key)) return t;
  for (const auto& t : p.model.threats) {
    if (t.name == key) return &t;
  }
  return nullptr;
}

}  // namespace

std::string resolve_project_path(const std::string& explicit_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (const char* env = std::getenv("QUANTTM_PROJECT"); env && *env) return env;
  throw Error(ErrorCode::IoFailure, "no project given; pass --project or set QUANTTM_PROJECT");
}

CommandResult cmd_init(const std::string& path, const std::string& currency, const std::string& name, bool force) {
  return guarded([&] {
    if (!force && std::filesystem::exists(path)) {
      return CommandResult{1, "", "error: '" + path + "' already exists; use --force to overwrite\n"};
    }
    ProjectFile p = empty_project(currency, name);
    p.metadata.created = p.metadata.updated = utc_timestamp();
    write_file_atomic(path, save_project(p));
    return CommandResult{0, "initialized " + path + " (" + currency + ")\n", ""};
  });
}

CommandResult cmd_validate(const std::string& path, bool as_json) {
  return guarded([&] {
    json doc;
    try {
      doc = codec::parse(read_file(path));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MalformedDocument) throw;
      return failure(e);
    }
    ProjectFile p = codec::decode_project(doc);
    auto violations = validate_project(p);
    std::vector<std::string> warnings;
    if (violations.empty()) {
      FactorCatalog catalog = p.catalog();
      for (const auto& r : p.bia_records) {
        auto w = lint_record(r, catalog);
        warnings.insert(warnings.end(), w.begin(), w.end());
      }
    }
    CommandResult r{violations.empty() ? 0 : 1, "", ""};
    if (as_json) {
      json v = json::array();
      for (const auto& x : violations) {
        v.push_back({{"code", std::string(to_string(x.code))}, {"path", x.path}, {"message", x.message}});
      }
      r.out = json{{"violations", v}, {"warnings", warnings}}.dump(2) + "\n";
    } else {
      for (const auto& x : violations) r.out += std::string(to_string(x.code)) + " at " + x.path + ": " + x.message + "\n";
      if (violations.empty()) r.out += "valid (0 violations)\n";
    }
    for (const auto& w : warnings) r.err += "warning: " + w + "\n";
    return r;
  });
}

CommandResult cmd_classify(const std::string& path, const std::string& threat_name,
                           const std::optional<std::string>& principles, bool as_json) {
  return guarded([&] {
    if (threat_name.empty()) throw Error(ErrorCode::InvalidValue, "threat name must be non-empty");
    ProjectFile p = load(path);
    CiaaMatch match = classify_ciaa_detailed(threat_name);
    Classification c{threat_name, match.principles, false};
    if (principles) {
      c.principles = parse_principle_list(*principles);
      c.manual = true;
    }
    CommandResult r;
    if (c.principles.empty()) {
      r.err = "no built-in entry matches '" + threat_name + "'; classify manually with --principles C,I,A,Acc\n";
    } else {
      auto it = std::find_if(p.classifications.begin(), p.classifications.end(),
                             [&](const Classification& x) { return x.threat_name == threat_name; });
      if (it == p.classifications.end()) {
        p.classifications.push_back(c);
      } else {
        *it = c;
      }
      store(path, p);
    }
    if (as_json) {
      r.out = json{{"name", threat_name},
                   {"principles", codec::encode(c.principles)},
                   {"matched", match.matched},
                   {"manual", c.manual}}
                  .dump(2) +
              "\n";
    } else {
      r.out = threat_name + ": " + format_principles(c.principles) + (c.manual ? " (manual)" : "") + "\n";
    }
    return r;
  });
}

CommandResult cmd_factors(const std::string& path, const std::string& principles, bool as_json) {
  return guarded([&] {
    FactorCatalog catalog = path.empty() ? FactorCatalog::builtin() : load(path).catalog();
    auto factors = suggest_factors(parse_principle_list(principles), catalog);
    CommandResult r;
    if (as_json) {
      json arr = json::array();
      for (const auto& f : factors) arr.push_back(codec::encode(f));
      r.out = arr.dump(2) + "\n";
    } else {
      for (const auto& f : factors) {
        r.out += pad(std::string(to_string(f.tangibility)), 12) + pad(std::string(to_string(f.loss_kind)), 12) + f.name +
                 (f.builtin ? "" : " [custom]") + "\n";
      }
    }
    return r;
  });
}

CommandResult cmd_quantify(const std::string& path, bool rank, bool as_json) {
  return guarded([&] {
    ProjectFile p = load(path);
    QuantificationRun run = run_quantification(p);
    std::vector<QuantifiedThreat> rows = rank ? rank_by_impact(run.results) : run.results;
    CommandResult r;
    if (as_json) {
      QuantificationRun shown{rows, {}, {}};
      r.out = encode_run(shown).dump(2) + "\n";
    } else {
      r.out = threat_table(rows, rank);
    }
    for (const auto& n : run.notes) r.err += "note: " + n + "\n";
    for (const auto& w : run.warnings) r.err += "warning: " + w + "\n";
    return r;
  });
}

CommandResult cmd_rank(const std::string& path, const std::string& by, bool as_json) {
  return guarded([&] {
    if (by == "impact") return cmd_quantify(path, true, as_json);
    if (by != "emergency") throw Error(ErrorCode::InvalidValue, "--by must be 'impact' or 'emergency'");
    ProjectFile p = load(path);
    auto ranked = rank_by_emergency(p.bia_records);
    CommandResult r;
    json arr = json::array();
    std::ostringstream table;
    table << pad("#", 4) << pad("Scenario", 20) << pad("Effect", 28) << "MTPD (h)\n";
    int i = 1;
    for (const auto& rec : ranked) {
      json mtpd = rec.mtpd_hours ? codec::encode(*rec.mtpd_hours) : json(nullptr);
      arr.push_back({{"scenario_id", rec.scenario_id}, {"effect_id", rec.effect_id}, {"mtpd_hours", mtpd}});
      table << pad(std::to_string(i++), 4) << pad(rec.scenario_id, 20) << pad(rec.effect_id, 28)
            << (rec.mtpd_hours ? rec.mtpd_hours->str() : "-") << "\n";
    }
    r.out = as_json ? arr.dump(2) + "\n" : table.str();
    return r;
  });
}

CommandResult cmd_rosi(const std::string& path, const RosiOptions& options, bool as_json) {
  return guarded([&] {
    ProjectFile p = load(path);
    QuantificationRun run = run_quantification(p);
    SecurityControl control;
    if (options.control_id) {
      auto it = std::find_if(p.controls.begin(), p.controls.end(),
                             [&](const SecurityControl& c) { return c.id == *options.control_id; });
      if (it == p.controls.end()) {
        throw Error(ErrorCode::DanglingReference, "unknown control '" + *options.control_id + "'", *options.control_id);
      }
      control = *it;
    } else {
      std::string currency = run.results.empty() ? p.metadata.currency : run.results.front().q_value.currency();
      control.id = "what-if";
      control.name = "what-if control";
      control.annual_cost = Money::from_major(Decimal::parse(options.cost).rational(), currency);
      control.mitigation_rate = Decimal::parse(options.rate);
      for (const auto& key : options.threats) {
        const ThreatEvent* t = find_threat_by_key(p, key);
        if (!t) throw Error(ErrorCode::DanglingReference, "unknown threat '" + key + "'", key);
        control.mitigated_threat_ids.push_back(t->id);
      }
    }
    RosiResult res = evaluate_rosi(control, run.results);
    CommandResult r;
    if (as_json) {
      r.out = codec::encode(res).dump(2) + "\n";
    } else {
      r.out = "mitigated impact: " + res.mitigated_impact.str() + "\n" + "control cost:     " + res.control_cost.str() +
              "\n" + "absolute return:  " + res.absolute_return.str() + "\n" +
              (res.cost_effective ? "cost-effective\n" : "not cost-effective\n");
    }
    return r;
  });
}

CommandResult cmd_compare(const std::string& path, const std::string& method,
                          const std::optional<std::string>& scores_path, bool as_json) {
  return guarded([&] {
    ProjectFile p = load(path);
    std::optional<json> scores;
    if (scores_path) {
      scores = codec::parse(read_file(*scores_path));
      if (!scores->is_array()) throw Error(ErrorCode::MalformedDocument, "scores file must hold a JSON array");
    }
    auto threat_name = [&](const std::string& id) {
      const ThreatEvent* t = p.model.find_threat(id);
      return t ? t->name : id;
    };
    CommandResult r;
    json arr = json::array();
    std::ostringstream table;
    if (method == "dread") {
      std::vector<DreadInput> inputs = p.baselines.dread_inputs;
      if (scores) {
        inputs.clear();
        for (std::size_t i = 0; i < scores->size(); ++i) {
          inputs.push_back(codec::decode_dread_input((*scores)[i], "scores[" + std::to_string(i) + "]"));
        }
      }
      table << pad("Threat", 18) << pad("D", 7) << pad("R", 7) << pad("E", 7) << pad("A", 7) << pad("D", 7)
            << pad("Sum", 12) << "Grade\n";
      for (const auto& in : inputs) {
        DreadAssessment a = dread_score(in, p.baselines.dread_thresholds);
        arr.push_back(codec::encode(a));
        table << pad(threat_name(in.threat_id), 18) << pad(in.damage.str(), 7) << pad(in.reproducibility.str(), 7)
              << pad(in.exploitability.str(), 7) << pad(in.affected_users.str(), 7) << pad(in.discoverability.str(), 7)
              << pad(a.sum_range.str(), 12) << a.grade_label() << "\n";
      }
    } else if (method == "matrix") {
      std::vector<MatrixRating> ratings = p.baselines.matrix_ratings;
      if (scores) {
        ratings.clear();
        for (std::size_t i = 0; i < scores->size(); ++i) {
          json entry = (*scores)[i];
          if (entry.is_object()) entry.erase("priority");
          ratings.push_back(codec::decode_matrix_rating(entry, "scores[" + std::to_string(i) + "]",
                                                        p.baselines.matrix_policy));
        }
      }
      table << pad("Threat", 18) << pad("Likelihood", 12) << pad("Severity", 12) << "Priority\n";
      for (const auto& m : ratings) {
        arr.push_back(codec::encode(m));
        table << pad(threat_name(m.threat_id), 18) << pad(std::string(to_string(m.likelihood)), 12)
              << pad(std::string(to_string(m.severity)), 12) << to_string(m.priority) << "\n";
      }
    } else {
      throw Error(ErrorCode::InvalidValue, "--method must be 'dread' or 'matrix'");
    }
    r.out = as_json ? arr.dump(2) + "\n" : table.str();
    return r;
  });
}

CommandResult cmd_report(const std::string& path, const std::optional<std::string>& out_path) {
  return guarded([&] {
    ProjectFile p = load(path);
    QuantificationRun run = run_quantification(p);
    std::string csv = export_report(p, run);
    CommandResult r;
    if (out_path) {
      write_file_atomic(*out_path, csv);
      r.out = "wrote " + *out_path + "\n";
    } else {
      r.out = csv;
    }
    for (const auto& n : run.notes) r.err += "note: " + n + "\n";
    return r;
  });
}

CommandResult cmd_plots(const std::string& path) {
  return guarded([&] {
    ProjectFile p = load(path);
    return CommandResult{0, encode_plots(emit_plot_series(p, run_quantification(p))).dump(2) + "\n", ""};
  });
}

CommandResult cmd_catalog(const std::optional<std::string>& path) {
  return guarded([&] {
    FactorCatalog catalog = path ? load(*path).catalog() : FactorCatalog::builtin();
    return CommandResult{0, encode_catalog(catalog).dump(2) + "\n", ""};
  });
}

}  // namespace quanttm::cli
