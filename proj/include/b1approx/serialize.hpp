#pragma once

#include <json.hpp>

#include "b1approx/constructions.hpp"
#include "b1approx/groupring.hpp"

namespace b1approx {

using json = nlohmann::json;

// rationals as {"num": "...", "den": "..."}; strings keep exactness past 2^53
json rational_json(const mpq_class& q);
mpq_class rational_from_json(const json& j);

json presentation_json(const Presentation& p);
Presentation presentation_from_json(const json& j);

json quotient_json(const FiniteQuotientMap& q);
// source supplied by context (alphabet + relators live with the caller)
FiniteQuotientMap quotient_from_json(const json& j, const Presentation& source);

json invariants_json(const AbelianInvariants& a);

json chain_report_json(const ChainReport& rep);
// decimal rendering, display-only (12 digits); flagged in the header row
std::string chain_report_csv(const ChainReport& rep);

json certificate_json(const RegularityCertificate& c, const Presentation& pres);
RegularityCertificate certificate_from_json(const json& j, const Presentation& pres);

json puchta_json(const PuchtaCertificate& c, const Alphabet& alphabet);

json suite_json(const OracleSuiteSummary& s);

json state_json(const ConstructionState& st);
ConstructionState state_from_json(const json& j);

json condition_reports_json(const std::vector<ConditionReport>& reps);

}  // namespace b1approx
