#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quanttm/project.hpp"

namespace quanttm {

struct QuantificationRun {
  // One entry per (threat, link) for every threat that has a scenario, in
  // threat-model order.
  std::vector<QuantifiedThreat> results;
  // Differences between computed Q and the project's reference values.
  std::vector<std::string> notes;
  // Non-blocking lint output for the estimates.
  std::vector<std::string> warnings;
};

// Throws Error(MissingEstimate) naming every effect that lacks an estimate.
QuantificationRun run_quantification(const ProjectFile& project);

// Per-threat BIA view: the undiscounted loss of all of a scenario's records.
LossBreakdown scenario_breakdown(const ProjectFile& project, const ThreatScenario& scenario,
                                 const FactorCatalog& catalog);

// RFC-4180 CSV with CRLF line endings, one row per quantified threat in
// model order. Columns: rank, threat_id, threat, asset_id, duration_hours,
// q, currency, contributions ("effect=amount;...").
std::string export_report(const ProjectFile& project, const QuantificationRun& run);

enum class PlotKind { ImpactBar, TangibleIntangiblePie, FactorPie, RecoveryTimeline };
std::string_view to_string(PlotKind k);

struct TimelineStep {
  Decimal day_start;
  Decimal day_end;
  std::int64_t residual_minor = 0;  // daily loss still incurred in the step
};

struct PlotSeries {
  PlotKind kind = PlotKind::ImpactBar;
  std::string subject;  // empty, threat id, or "threat/effect/factor"
  std::string currency;
  std::vector<std::string> labels;
  std::vector<std::int64_t> values;  // minor units
  std::vector<TimelineStep> steps;   // recovery_timeline only
};

std::vector<PlotSeries> emit_plot_series(const ProjectFile& project, const QuantificationRun& run);

nlohmann::json encode_plots(const std::vector<PlotSeries>& series);
nlohmann::json encode_run(const QuantificationRun& run);

// Factor catalog and CIAA keyword table with their version tags.
nlohmann::json encode_catalog(const FactorCatalog& catalog);

}  // namespace quanttm
