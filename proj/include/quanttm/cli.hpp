#pragma once

#include <optional>
#include <string>
#include <vector>

namespace quanttm::cli {

struct CommandResult {
  int exit_code = 0;
  std::string out;  // human table, or JSON when --json
  std::string err;  // diagnostics
};

// Resolves an explicit --project value, falling back to $QUANTTM_PROJECT.
// Throws Error(IoFailure) when neither is set.
std::string resolve_project_path(const std::string& explicit_path);

CommandResult cmd_init(const std::string& path, const std::string& currency, const std::string& name, bool force);
CommandResult cmd_validate(const std::string& path, bool json);

// Classifies `threat_name`; persists the result (heuristic or the manual
// --principles override) into the project's classifications.
CommandResult cmd_classify(const std::string& path, const std::string& threat_name,
                           const std::optional<std::string>& principles, bool json);
CommandResult cmd_factors(const std::string& path, const std::string& principles, bool json);
CommandResult cmd_quantify(const std::string& path, bool rank, bool json);
CommandResult cmd_rank(const std::string& path, const std::string& by, bool json);

struct RosiOptions {
  std::string cost;  // major units, e.g. "540"
  std::string rate;  // e.g. "1.0"
  std::vector<std::string> threats;  // ids or names
  std::optional<std::string> control_id;  // use a stored control instead
};
CommandResult cmd_rosi(const std::string& path, const RosiOptions& options, bool json);

// method: "dread" or "matrix". Without a scores file the project's stored
// baseline assessments are used.
CommandResult cmd_compare(const std::string& path, const std::string& method,
                          const std::optional<std::string>& scores_path, bool json);
CommandResult cmd_report(const std::string& path, const std::optional<std::string>& out_path);
CommandResult cmd_plots(const std::string& path);
CommandResult cmd_catalog(const std::optional<std::string>& path);

}  // namespace quanttm::cli
