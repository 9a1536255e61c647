#include "lowtail/json_io.hpp"

namespace lowtail {

using nlohmann::json;

void to_json(json& j, const StepKernel& w) {
    j = json{{"measures", w.measures()}, {"values", w.values()}};
}

StepKernel step_kernel_from_json(const json& j) {
    return StepKernel(j.at("measures").get<std::vector<double>>(),
                      j.at("values").get<std::vector<std::vector<double>>>());
}

StepGraphon step_graphon_from_json(const json& j) {
    return StepGraphon(step_kernel_from_json(j));
}

void to_json(json& j, const Certificate& c) {
    j = json{{"verdict", c.certified() ? "certified" : "inconclusive"},
             {"condition_id", c.condition_id},
             {"params", c.params},
             {"min_gap", c.min_gap},
             {"note", c.note},
             {"evidence", c.evidence}};
}

void to_json(json& j, const BreakingWitness& w) {
    j = json{{"graphon", w.graphon},
             {"a", w.a},
             {"b", w.b},
             {"constant_value", w.constant_value},
             {"witness_value", w.witness_value},
             {"margin", w.margin},
             {"constraint_value", w.constraint_value},
             {"target_value", w.target_value}};
}

void to_json(json& j, const OracleSolution& s) {
    j = json{{"graphon", s.graphon},
             {"objective", s.objective},
             {"multiplier", s.multiplier},
             {"constraint_value", s.constraint_value},
             {"constraint_slack", s.constraint_slack},
             {"stationarity_residual", s.stationarity_residual},
             {"interior_blocks", s.interior_blocks},
             {"boundary_blocks", s.boundary_blocks},
             {"restarts_used", s.restarts_used},
             {"converged", s.converged},
             {"near_optima", s.near_optima}};
}

void to_json(json& j, const AuditReport& r) {
    j = json{{"value_floor_bound", r.value_floor_bound},
             {"min_block_value", r.min_block_value},
             {"min_value_ok", r.min_value_ok},
             {"mean_log", r.mean_log},
             {"log_target", r.log_target},
             {"mean_log_ok", r.mean_log_ok},
             {"derivative_identity_gap", r.derivative_identity_gap},
             {"derivative_identity_ok", r.derivative_identity_ok},
             {"boundary_blocks", r.boundary_blocks}};
}

void to_json(json& j, const TailEstimate& e) {
    j = json{{"n", e.n},
             {"p", e.p},
             {"q", e.q},
             {"threshold_ratio", e.threshold_ratio},
             {"trials", e.trials},
             {"hits", e.hits},
             {"p_hat", e.p_hat},
             {"ci_lo", e.ci_lo},
             {"ci_hi", e.ci_hi},
             {"log_prob", e.log_prob},
             {"censored", e.censored},
             {"predicted_rate", e.predicted_rate}};
}

} // namespace lowtail
