#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quanttm/decimal.hpp"
#include "quanttm/errors.hpp"
#include "quanttm/principle.hpp"

namespace quanttm {

// How long a threat event affects the organization: finite hours or
// Infinite (e.g. a leak compromises confidentiality forever).
class Duration {
 public:
  Duration() = default;
  static Duration hours(Decimal h);
  static Duration infinite() { return Duration(); }

  bool is_infinite() const noexcept { return !hours_.has_value(); }
  // Precondition: !is_infinite().
  const Decimal& hours_value() const { return *hours_; }
  // Hours converted at 24 h/day; nullopt when infinite.
  std::optional<Rational> days() const;
  // "48" or "inf"
  std::string str() const;

  bool operator==(const Duration&) const = default;
  // Infinite compares greater than every finite duration.
  friend bool operator<(const Duration& a, const Duration& b);

 private:
  std::optional<Decimal> hours_;
};

enum class AssetKind { Functional, Data };

struct Asset {
  std::string id;
  std::string name;
  AssetKind kind = AssetKind::Functional;
  std::string description;

  bool operator==(const Asset&) const = default;
};

struct ThreatEvent {
  std::string id;
  std::string name;
  std::string description;

  bool operator==(const ThreatEvent&) const = default;
};

// One element of the threat x asset relation. Probabilities are annual.
struct ThreatAssetLink {
  std::string threat_id;
  std::string asset_id;
  Decimal p_initiation;
  Decimal p_success;
  Duration duration;

  bool operator==(const ThreatAssetLink&) const = default;
};

struct ThreatModel {
  std::vector<ThreatEvent> threats;
  std::vector<Asset> assets;
  std::vector<ThreatAssetLink> links;

  const ThreatEvent* find_threat(std::string_view id) const;
  const Asset* find_asset(std::string_view id) const;
  std::vector<const ThreatAssetLink*> links_for(std::string_view threat_id) const;

  bool operator==(const ThreatModel&) const = default;
};

// Business-level consequence of a threat. `degree` is the compromise ratio
// in (0, 1] that scales the effect's loss.
struct ThreatEffect {
  std::string id;
  std::string description;
  Decimal degree{1};
  std::optional<Duration> duration_override;
  PrincipleSet principles;

  bool operator==(const ThreatEffect&) const = default;
};

// Validated constructor for ThreatEffect; throws Error(InvalidValue).
ThreatEffect make_effect(std::string id, std::string description, Decimal degree,
                         PrincipleSet principles = {},
                         std::optional<Duration> duration_override = std::nullopt);

struct ThreatScenario {
  std::string threat_id;
  std::vector<ThreatEffect> effects;

  const ThreatEffect* find_effect(std::string_view effect_id) const;

  bool operator==(const ThreatScenario&) const = default;
};

using EffectMapping = std::vector<std::pair<std::string, std::vector<ThreatEffect>>>;

// Throws Error(DuplicateId | DanglingReference | ProbabilityOutOfRange |
// InvalidValue) for the first broken invariant.
ThreatModel build_threat_model(std::vector<ThreatEvent> threats, std::vector<Asset> assets,
                               std::vector<ThreatAssetLink> links);

// One scenario per mapped threat, in mapping order; effect order preserved.
std::vector<ThreatScenario> translate_to_scenarios(const ThreatModel& model,
                                                   const EffectMapping& mapping);

std::vector<Violation> validate_model(const ThreatModel& model);

// Violations for a single effect, with paths rooted at `path`.
std::vector<Violation> validate_effect(const ThreatEffect& effect, const std::string& path);

}  // namespace quanttm
