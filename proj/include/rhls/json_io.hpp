#pragma once

// JSON encodings of the library's records. Field names are documented in
// docs/json_schema.md.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "rhls/extremal_solver.hpp"
#include "rhls/hls_operator.hpp"
#include "rhls/special_constants.hpp"
#include "rhls/sphere_quadrature.hpp"

namespace rhls {

std::string hash_to_hex(std::uint64_t h);

void to_json(nlohmann::json& j, const ProblemParams& p);
void to_json(nlohmann::json& j, const RuleDescriptor& d);
void from_json(const nlohmann::json& j, RuleDescriptor& d);
void to_json(nlohmann::json& j, const BoundsReport& r);
void to_json(nlohmann::json& j, const SolverConfig& c);
void to_json(nlohmann::json& j, const SolverReport& r);
void to_json(nlohmann::json& j, const BlowupDiagnostics& d);

/// Descriptor plus hash, the replayable form of a rule.
nlohmann::json rule_to_json(const QuadratureRule& rule);
QuadratureRule rule_from_json(const nlohmann::json& j);

}  // namespace rhls
