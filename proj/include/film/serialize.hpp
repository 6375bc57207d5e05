#pragma once

#include <json.hpp>

#include "film/constructions.hpp"
#include "film/energy.hpp"
#include "film/params.hpp"
#include "film/regimes.hpp"

namespace film {

// Missing keys keep the values already in the target.
void to_json(nlohmann::json& j, const Params& p);
void from_json(const nlohmann::json& j, Params& p);
void to_json(nlohmann::json& j, const PhysicalParams& p);
void from_json(const nlohmann::json& j, PhysicalParams& p);
void to_json(nlohmann::json& j, const EnergyBreakdown& e);
void from_json(const nlohmann::json& j, EnergyBreakdown& e);

void to_json(nlohmann::json& j, const BranchSchedule& b);
void to_json(nlohmann::json& j, const Band& b);
void to_json(nlohmann::json& j, const Layout& l);
void to_json(nlohmann::json& j, const TiledEnergy& t);
// Sidecar of a construction: kind, params, derived scales, schedule, bands
// with their realized widths.
void to_json(nlohmann::json& j, const Construction& c);
void to_json(nlohmann::json& j, const CandidateResult& r);

// {sigma, gamma, regime, name, a, b, upper, lower, scales}.
nlohmann::json regime_report(double sigma, double gamma, double l1 = 1.0, double l2 = 1.0);

}  // namespace film
