#include "quanttm/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <utility>

#include "quanttm/analysis.hpp"
#include "quanttm/json_codec.hpp"

namespace quanttm {

namespace {

using nlohmann::json;

struct HttpFailure {
  ApiError error;
};

[[noreturn]] void fail(int status, std::string code, std::string message, std::string path = {}) {
  throw HttpFailure{ApiError{status, std::move(code), std::move(message), std::move(path)}};
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::IoFailure:
      return 404;
    case ErrorCode::RevisionConflict:
      return 409;
    default:
      return 422;
  }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, const ApiError& e) { send_json(res, e.to_json(), e.status); }

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) fail(400, "MalformedDocument", "request body must be a JSON object");
  try {
    json body = codec::parse(req.body);
    if (!body.is_object()) fail(400, "MalformedDocument", "request body must be a JSON object");
    return body;
  } catch (const Error& e) {
    fail(400, std::string(to_string(e.code())), e.what(), e.path());
  }
}

struct Snapshot {
  ProjectFile project;
  std::string revision;
};

Snapshot load_snapshot(const std::string& path) {
  std::string bytes = read_file(path);
  return Snapshot{load_project(bytes), revision_token(bytes)};
}

std::string requested_revision(const httplib::Request& req, const json& body) {
  if (body.contains("revision")) {
    if (!body["revision"].is_string()) fail(422, "ValidationFailure", "revision must be a string", "revision");
    return body["revision"].get<std::string>();
  }
  std::string header = req.get_header_value("If-Match");
  if (header.size() >= 2 && header.front() == '"' && header.back() == '"') header = header.substr(1, header.size() - 2);
  if (header.empty()) fail(400, "RevisionConflict", "mutations need a revision token (body \"revision\" or If-Match)");
  return header;
}

void check_revision(const std::string& wanted, const Snapshot& current) {
  if (wanted != current.revision) {
    fail(409, "RevisionConflict", "project changed since revision " + wanted + "; current is " + current.revision);
  }
}

void reject_if_invalid(const ProjectFile& project) {
  auto violations = validate_project(project);
  if (violations.empty()) return;
  json list = json::array();
  for (const auto& v : violations) {
    list.push_back({{"code", std::string(to_string(v.code))}, {"path", v.path}, {"message", v.message}});
  }
  const Violation& first = violations.front();
  ApiError e{422, std::string(to_string(first.code)), first.message, first.path};
  throw HttpFailure{e};
}

std::string persist(const std::string& path, ProjectFile& project) {
  project.metadata.updated = utc_timestamp();
  std::string bytes = save_project(project);
  write_file_atomic(path, bytes);
  return revision_token(bytes);
}

const ThreatEvent* find_threat_by_key(const ProjectFile& p, const std::string& key) {
  if (const ThreatEvent* t = p.model.find_threat(key)) return t;
  for (const auto& t : p.model.threats) {
    if (t.name == key) return &t;
  }
  return nullptr;
}

}  // namespace

json ApiError::to_json() const {
  return json{{"status", status}, {"code", code}, {"message", message}, {"path", path}};
}

ProjectService::ProjectService(ServiceConfig config) : config_(std::move(config)) {}

void ProjectService::install(httplib::Server& server) {
  // Wraps a handler with error translation. Domain errors become ApiError
  // bodies with the offending entity path.
  auto wrap = [](auto handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const HttpFailure& f) {
        send_error(res, f.error);
      } catch (const Error& e) {
        send_error(res, ApiError{status_for(e.code()), std::string(to_string(e.code())), e.what(), e.path()});
      } catch (const std::exception& e) {
        send_error(res, ApiError{422, "InvalidValue", e.what(), ""});
      }
    };
  };
  const std::string& path = config_.project_path;

  server.Get("/project", wrap([&path](const httplib::Request&, httplib::Response& res) {
               Snapshot s = load_snapshot(path);
               res.set_header("ETag", "\"" + s.revision + "\"");
               send_json(res, json{{"revision", s.revision}, {"project", codec::encode(s.project)}});
             }));

  server.Put("/project", wrap([this, &path](const httplib::Request& req, httplib::Response& res) {
               json body = parse_body(req);
               std::string wanted = requested_revision(req, body);
               if (!body.contains("project")) fail(422, "ValidationFailure", "missing field", "project");
               ProjectFile incoming;
               try {
                 incoming = codec::decode_project(body["project"]);
               } catch (const Error& e) {
                 fail(422, std::string(to_string(e.code())), e.what(), "project." + e.path());
               }
               reject_if_invalid(incoming);
               std::lock_guard lock(write_mutex_);
               Snapshot current = load_snapshot(path);
               check_revision(wanted, current);
               std::string revision = persist(path, incoming);
               send_json(res, json{{"revision", revision}});
             }));

  server.Post("/classify", wrap([](const httplib::Request& req, httplib::Response& res) {
                json body = parse_body(req);
                if (!body.contains("name") || !body["name"].is_string() || body["name"].get<std::string>().empty()) {
                  fail(422, "InvalidValue", "name must be a non-empty string", "name");
                }
                CiaaMatch match = classify_ciaa_detailed(body["name"].get<std::string>());
                send_json(res, json{{"name", body["name"]},
                                    {"principles", codec::encode(match.principles)},
                                    {"matched", match.matched}});
              }));

  server.Get("/factors", wrap([&path](const httplib::Request& req, httplib::Response& res) {
               PrincipleSet wanted;
               try {
                 wanted = parse_principle_list(req.get_param_value("principles"));
               } catch (const Error& e) {
                 fail(400, std::string(to_string(e.code())), e.what(), "principles");
               }
               FactorCatalog catalog = load_snapshot(path).project.catalog();
               json out = json::array();
               for (const auto& f : suggest_factors(wanted, catalog)) out.push_back(codec::encode(f));
               send_json(res, out);
             }));

  server.Put(R"(/scenarios/([^/]+)/estimates)",
             wrap([this, &path](const httplib::Request& req, httplib::Response& res) {
               std::string scenario_id = req.matches[1];
               json body = parse_body(req);
               std::string wanted = requested_revision(req, body);
               if (!body.contains("estimates") || !body["estimates"].is_array()) {
                 fail(422, "ValidationFailure", "estimates must be an array", "estimates");
               }
               std::lock_guard lock(write_mutex_);
               Snapshot current = load_snapshot(path);
               if (!current.project.find_scenario(scenario_id)) {
                 fail(404, "NotFound", "no scenario for threat '" + scenario_id + "'", "scenarios/" + scenario_id);
               }
               check_revision(wanted, current);
               std::vector<BiaRecord> records;
               const json& list = body["estimates"];
               for (std::size_t i = 0; i < list.size(); ++i) {
                 std::string at = "estimates[" + std::to_string(i) + "]";
                 json entry = list[i];
                 if (entry.is_object() && !entry.contains("scenario_id")) entry["scenario_id"] = scenario_id;
                 BiaRecord r;
                 try {
                   r = codec::decode_bia_record(entry, at);
                 } catch (const Error& e) {
                   fail(422, std::string(to_string(e.code())), e.what(), e.path());
                 }
                 if (r.scenario_id != scenario_id) {
                   fail(422, "ValidationFailure", "record belongs to scenario '" + r.scenario_id + "'",
                        at + ".scenario_id");
                 }
                 records.push_back(std::move(r));
               }
               ProjectFile updated = current.project;
               std::erase_if(updated.bia_records, [&](const BiaRecord& r) { return r.scenario_id == scenario_id; });
               updated.bia_records.insert(updated.bia_records.end(), records.begin(), records.end());
               reject_if_invalid(updated);
               std::string revision = persist(path, updated);
               send_json(res, json{{"revision", revision}});
             }));

  server.Get("/quantify", wrap([&path](const httplib::Request&, httplib::Response& res) {
               ProjectFile p = load_snapshot(path).project;
               send_json(res, encode_run(run_quantification(p)));
             }));

  server.Get("/rank", wrap([&path](const httplib::Request& req, httplib::Response& res) {
               std::string by = req.has_param("by") ? req.get_param_value("by") : "impact";
               ProjectFile p = load_snapshot(path).project;
               if (by == "impact") {
                 QuantificationRun run = run_quantification(p);
                 run.results = rank_by_impact(run.results);
                 send_json(res, encode_run(run));
               } else if (by == "emergency") {
                 json out = json::array();
                 for (const auto& r : rank_by_emergency(p.bia_records)) {
                   out.push_back({{"scenario_id", r.scenario_id},
                                  {"effect_id", r.effect_id},
                                  {"mtpd_hours", r.mtpd_hours ? codec::encode(*r.mtpd_hours) : json(nullptr)}});
                 }
                 send_json(res, out);
               } else {
                 fail(400, "InvalidValue", "by must be 'impact' or 'emergency'", "by");
               }
             }));

  server.Post("/rosi", wrap([&path](const httplib::Request& req, httplib::Response& res) {
                json body = parse_body(req);
                ProjectFile p = load_snapshot(path).project;
                QuantificationRun run = run_quantification(p);
                SecurityControl control;
                if (body.contains("control_id")) {
                  std::string id = body["control_id"].is_string() ? body["control_id"].get<std::string>() : "";
                  auto it = std::find_if(p.controls.begin(), p.controls.end(),
                                         [&](const SecurityControl& c) { return c.id == id; });
                  if (it == p.controls.end()) fail(404, "NotFound", "unknown control '" + id + "'", "control_id");
                  control = *it;
                } else {
                  if (!body.contains("annual_cost")) fail(422, "ValidationFailure", "missing field", "annual_cost");
                  if (!body.contains("mitigation_rate")) {
                    fail(422, "ValidationFailure", "missing field", "mitigation_rate");
                  }
                  control.id = "what-if";
                  control.name = "what-if control";
                  control.annual_cost = codec::decode_money(body["annual_cost"], "annual_cost");
                  control.mitigation_rate = codec::decode_decimal(body["mitigation_rate"], "mitigation_rate");
                  json threats = body.value("threats", json::array());
                  if (!threats.is_array()) fail(422, "ValidationFailure", "threats must be an array", "threats");
                  for (std::size_t i = 0; i < threats.size(); ++i) {
                    std::string at = "threats[" + std::to_string(i) + "]";
                    if (!threats[i].is_string()) fail(422, "ValidationFailure", "expected a threat id or name", at);
                    const ThreatEvent* t = find_threat_by_key(p, threats[i].get<std::string>());
                    if (!t) fail(422, "DanglingReference", "unknown threat '" + threats[i].get<std::string>() + "'", at);
                    control.mitigated_threat_ids.push_back(t->id);
                  }
                  auto violations = validate_control(control, "");
                  if (!violations.empty()) {
                    std::string at = violations.front().path;
                    if (!at.empty() && at.front() == '.') at.erase(0, 1);
                    fail(422, std::string(to_string(violations.front().code)), violations.front().message, at);
                  }
                }
                send_json(res, codec::encode(evaluate_rosi(control, run.results)));
              }));

  server.Get("/plots", wrap([&path](const httplib::Request&, httplib::Response& res) {
               ProjectFile p = load_snapshot(path).project;
               send_json(res, encode_plots(emit_plot_series(p, run_quantification(p))));
             }));

  server.Get("/report.csv", wrap([&path](const httplib::Request&, httplib::Response& res) {
               ProjectFile p = load_snapshot(path).project;
               res.set_content(export_report(p, run_quantification(p)), "text/csv; charset=utf-8");
             }));

  server.Get("/catalog", wrap([&path](const httplib::Request&, httplib::Response& res) {
               send_json(res, encode_catalog(load_snapshot(path).project.catalog()));
             }));

  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  std::string origin = config_.ui_origin;
  server.set_post_routing_handler([origin](const httplib::Request& req, httplib::Response& res) {
    if (origin.empty() || req.get_header_value("Origin") != origin) return;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Vary", "Origin");
    res.set_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, If-Match");
    res.set_header("Access-Control-Expose-Headers", "ETag");
  });

  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    int status = res.status;
    std::string code = status == 404 ? "NotFound" : "MalformedDocument";
    if (status != 404 && status != 409 && status != 422) status = 400;
    send_error(res, ApiError{status, code, "no route for " + req.method + " " + req.path, req.path});
    return httplib::Server::HandlerResponse::Handled;
  });
}

bool serve(const ServiceConfig& config, const std::string& host, int port) {
  httplib::Server server;
  ProjectService service(config);
  service.install(server);
  return server.listen(host, port);
}

}  // namespace quanttm
