#pragma once

// JSON encoding shared by the project file, the CLI --json output and the
// HTTP API, so all three agree byte-for-byte.

#include <nlohmann/json.hpp>

#include "quanttm/project.hpp"

namespace quanttm::codec {

using nlohmann::json;

json encode(const Decimal& d);
json encode(const Duration& d);
json encode(const Money& m);
json encode(const PrincipleSet& s);
json encode(const ImpactFactor& f);
json encode(const ThreatEffect& e);
json encode(const ThreatScenario& s);
json encode(const BiaRecord& r);
json encode(const SecurityControl& c);
json encode(const ScoreRange& r);
json encode(const DreadInput& d);
json encode(const DreadAssessment& a);
json encode(const MatrixRating& r);
json encode(const QuantifiedThreat& q);
json encode(const RosiResult& r);
json encode(const LossBreakdown& b);
json encode(const ProjectFile& p);

// Decoders throw Error(MalformedDocument) with a JSON path on shape errors.
Decimal decode_decimal(const json& j, const std::string& path);
Duration decode_duration(const json& j, const std::string& path);
Money decode_money(const json& j, const std::string& path);
PrincipleSet decode_principles(const json& j, const std::string& path);
ImpactFactor decode_factor(const json& j, const std::string& path);
ThreatEffect decode_effect(const json& j, const std::string& path);
ThreatScenario decode_scenario(const json& j, const std::string& path);
BiaRecord decode_bia_record(const json& j, const std::string& path);
SecurityControl decode_control(const json& j, const std::string& path);
ScoreRange decode_score_range(const json& j, const std::string& path);
DreadInput decode_dread_input(const json& j, const std::string& path);
MatrixRating decode_matrix_rating(const json& j, const std::string& path, const MatrixPolicy& policy);
QuantifiedThreat decode_quantified(const json& j, const std::string& path);
ProjectFile decode_project(const json& j);

// Parses text, mapping syntax errors to Error(MalformedDocument).
json parse(std::string_view text);

}  // namespace quanttm::codec
