#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "quanttm/baselines.hpp"
#include "quanttm/bia.hpp"
#include "quanttm/quantify.hpp"
#include "quanttm/threat_model.hpp"

namespace quanttm {

inline constexpr int kSchemaVersion = 1;

struct ConversionRate {
  std::string from;
  std::string to;
  Decimal rate;

  bool operator==(const ConversionRate&) const = default;
};

struct ProjectMetadata {
  std::string name;
  std::string currency = "USD";
  std::vector<ConversionRate> conversion_rates;
  std::string created;
  std::string updated;
  std::string notes;

  bool operator==(const ProjectMetadata&) const = default;
};

// CIAA set recorded for a threat name, either from the keyword heuristic
// or entered by hand.
struct Classification {
  std::string threat_name;
  PrincipleSet principles;
  bool manual = false;

  bool operator==(const Classification&) const = default;
};

// A previously published or agreed Q for a threat, used to flag drift.
struct ReferenceValue {
  std::string threat_id;
  Money q;
  std::string source;

  bool operator==(const ReferenceValue&) const = default;
};

struct BaselineSettings {
  MatrixPolicy matrix_policy = default_matrix_policy();
  DreadThresholds dread_thresholds;
  std::vector<MatrixRating> matrix_ratings;
  std::vector<DreadInput> dread_inputs;

  bool operator==(const BaselineSettings&) const = default;
};

struct ProjectFile {
  int schema_version = kSchemaVersion;
  ProjectMetadata metadata;
  ThreatModel model;
  std::vector<ThreatScenario> scenarios;
  std::vector<Classification> classifications;
  std::vector<ImpactFactor> factor_extensions;
  std::vector<BiaRecord> bia_records;
  std::vector<SecurityControl> controls;
  BaselineSettings baselines;
  std::vector<ReferenceValue> reference_values;

  // Built-ins plus factor_extensions. Throws if an extension is invalid.
  FactorCatalog catalog() const;
  const ThreatScenario* find_scenario(std::string_view threat_id) const;

  bool operator==(const ProjectFile&) const = default;
};

ProjectFile empty_project(std::string currency = "USD", std::string name = {});

// Every cross-module invariant; empty iff the project is valid.
std::vector<Violation> validate_project(const ProjectFile& project);

// Throws Error(MalformedDocument | UnknownSchemaVersion | ValidationFailure).
ProjectFile load_project(std::string_view bytes);

// Canonical bytes: sorted keys, two-space indent, integral decimals as
// integers, "inf" for infinite durations, trailing newline.
std::string save_project(const ProjectFile& project);

// Stable content hash of canonical bytes, used as an optimistic-concurrency
// token.
std::string revision_token(std::string_view canonical_bytes);

// File helpers. Writes go to a temporary sibling and are renamed into place.
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, std::string_view bytes);

// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

}  // namespace quanttm
