#pragma once

#include "lowtail/breaking.hpp"
#include "lowtail/empirics.hpp"
#include "lowtail/step_kernel.hpp"
#include "lowtail/symcheck.hpp"
#include "lowtail/var_oracle.hpp"

#include <json.hpp>

namespace lowtail {

// {"measures": [...], "values": [[...]]}
void to_json(nlohmann::json& j, const StepKernel& w);
StepKernel step_kernel_from_json(const nlohmann::json& j);
StepGraphon step_graphon_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const Certificate& c);
void to_json(nlohmann::json& j, const BreakingWitness& w);
void to_json(nlohmann::json& j, const OracleSolution& s);
void to_json(nlohmann::json& j, const AuditReport& r);
void to_json(nlohmann::json& j, const TailEstimate& e);

} // namespace lowtail
