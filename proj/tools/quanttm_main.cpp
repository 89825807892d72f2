#include <CLI11.hpp>

#include <iostream>

#include "quanttm/cli.hpp"
#include "quanttm/errors.hpp"
#include "quanttm/service.hpp"

using namespace quanttm;

namespace {

int emit(const cli::CommandResult& r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quanttm - quantify threat impact from threat models and business impact analysis"};
  app.require_subcommand(1);

  std::string project;
  bool json = false;
  auto add_common = [&](CLI::App* sub, bool with_json = true) {
    sub->add_option("-p,--project", project, "project file (default: $QUANTTM_PROJECT)");
    if (with_json) sub->add_flag("--json", json, "machine-readable output");
  };

  auto* init = app.add_subcommand("init", "create an empty project file");
  std::string init_path, currency = "USD", name;
  bool force = false;
  init->add_option("path", init_path, "project file to create")->required();
  init->add_option("--currency", currency, "ISO-4217 project currency");
  init->add_option("--name", name, "project name");
  init->add_flag("--force", force, "overwrite an existing file");

  auto* validate = app.add_subcommand("validate", "check every project invariant");
  add_common(validate);

  auto* classify = app.add_subcommand("classify", "CIAA classification of a threat name");
  add_common(classify);
  std::string threat_name;
  std::optional<std::string> principles;
  classify->add_option("name", threat_name, "threat name")->required();
  classify->add_option("--principles", principles, "manual override, e.g. C,I,A,Acc");

  auto* factors = app.add_subcommand("factors", "suggest impact factors for a CIAA set");
  add_common(factors);
  std::string factor_principles;
  factors->add_option("--principles", factor_principles, "e.g. A,C")->required();

  auto* quantify = app.add_subcommand("quantify", "annualized discounted loss per threat");
  add_common(quantify);
  bool rank_flag = false;
  quantify->add_flag("--rank", rank_flag, "order by descending Q");

  auto* rank = app.add_subcommand("rank", "rank threats or effects");
  add_common(rank);
  std::string by = "impact";
  rank->add_option("--by", by, "impact or emergency")->check(CLI::IsMember({"impact", "emergency"}));

  auto* rosi = app.add_subcommand("rosi", "return on a security control");
  add_common(rosi);
  cli::RosiOptions rosi_opts;
  auto* cost_opt = rosi->add_option("--cost", rosi_opts.cost, "annual cost in major units");
  auto* rate_opt = rosi->add_option("--rate", rosi_opts.rate, "mitigation rate in [0,1]");
  rosi->add_option("--threat", rosi_opts.threats, "mitigated threat id or name (repeatable)");
  auto* control_opt = rosi->add_option("--control", rosi_opts.control_id, "evaluate a stored control");
  control_opt->excludes(cost_opt)->excludes(rate_opt);

  auto* compare = app.add_subcommand("compare", "baseline DREAD or risk-matrix scoring");
  add_common(compare);
  std::string method;
  std::optional<std::string> scores;
  compare->add_option("--method", method, "dread or matrix")->required()->check(CLI::IsMember({"dread", "matrix"}));
  compare->add_option("--scores", scores, "JSON array of assessments (default: project's stored ones)");

  auto* report = app.add_subcommand("report", "CSV report of quantified threats");
  add_common(report, false);
  std::optional<std::string> report_out;
  report->add_option("-o,--out", report_out, "write to file instead of stdout");

  auto* plots = app.add_subcommand("plots", "chart series as JSON");
  add_common(plots, false);

  auto* catalog = app.add_subcommand("catalog", "factor catalog and CIAA keyword table");
  add_common(catalog, false);

  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  add_common(serve, false);
  std::string host = "127.0.0.1", ui_origin;
  int port = 8750;
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port");
  serve->add_option("--ui-origin", ui_origin, "origin allowed for cross-origin requests");

  CLI11_PARSE(app, argc, argv);

  try {
    if (init->parsed()) return emit(cli::cmd_init(init_path, currency, name, force));
    if (catalog->parsed()) {
      std::optional<std::string> path;
      if (!project.empty() || std::getenv("QUANTTM_PROJECT")) path = cli::resolve_project_path(project);
      return emit(cli::cmd_catalog(path));
    }
    if (factors->parsed()) {
      std::string path = project.empty() && !std::getenv("QUANTTM_PROJECT") ? "" : cli::resolve_project_path(project);
      return emit(cli::cmd_factors(path, factor_principles, json));
    }
    std::string path = cli::resolve_project_path(project);
    if (validate->parsed()) return emit(cli::cmd_validate(path, json));
    if (classify->parsed()) return emit(cli::cmd_classify(path, threat_name, principles, json));
    if (quantify->parsed()) return emit(cli::cmd_quantify(path, rank_flag, json));
    if (rank->parsed()) return emit(cli::cmd_rank(path, by, json));
    if (rosi->parsed()) {
      if (!rosi_opts.control_id && (rosi_opts.cost.empty() || rosi_opts.rate.empty())) {
        std::cerr << "error: give --cost and --rate, or --control\n";
        return 1;
      }
      return emit(cli::cmd_rosi(path, rosi_opts, json));
    }
    if (compare->parsed()) return emit(cli::cmd_compare(path, method, scores, json));
    if (report->parsed()) return emit(cli::cmd_report(path, report_out));
    if (plots->parsed()) return emit(cli::cmd_plots(path));
    if (serve->parsed()) {
      std::cerr << "serving " << path << " on http://" << host << ":" << port << "\n";
      if (!quanttm::serve(ServiceConfig{path, ui_origin}, host, port)) {
        std::cerr << "error: cannot bind " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
  return 1;
}
