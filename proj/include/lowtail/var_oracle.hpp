#pragma once

#include "lowtail/entropy.hpp"
#include "lowtail/graph.hpp"
#include "lowtail/step_kernel.hpp"

#include <cstdint>
#include <vector>

namespace lowtail {

struct SolverOptions {
    int restarts = 20;
    int max_outer = 40;        // multiplier updates
    int max_inner = 600;       // projected-gradient steps per outer iteration
    double feas_tol = 1e-10;   // admissible constraint violation
    double stat_tol = 1e-7;    // descent criticality; a direct first-order
                               // refinement then sharpens the result
    double value_floor = 1e-12; // descent floor (the sparse gradient blows up at 0)
    std::uint64_t seed = 1;
    double budget = kDefaultDensityBudget;
    double near_optimal_window = 1e-7;
};

// Best solution of the discretised lower-tail problem found by multistart
// constrained descent over step graphons on k uniform blocks.
struct OracleSolution {
    explicit OracleSolution(StepGraphon g) : graphon(std::move(g)) {}

    StepGraphon graphon;
    double objective = 0.0;            // E[cost(W)]
    double multiplier = 0.0;           // lambda >= 0, least-squares fit on interior blocks
    double constraint_value = 0.0;     // t(H, W)
    double constraint_slack = 0.0;     // target^m - t(H, W)
    double stationarity_residual = 0.0; // max over interior blocks, NaN if none
    int interior_blocks = 0;
    int boundary_blocks = 0;
    int restarts_used = 0;
    bool converged = false;
    // Distinct block-value vectors (sorted) whose objective comes within
    // near_optimal_window of the best; the minimiser need not be unique.
    std::vector<std::vector<double>> near_optima;
};

// Minimises E[cost(W)] over step graphons W on k uniform blocks subject to
// t(H, W) <= target^{e(H)}. Block values live in [0, p] for the finite-p cost
// (a minimiser never exceeds p) and [0, 1] for the sparse cost. Deterministic
// for a fixed seed, independently of thread count.
OracleSolution solve_lt(const Graph& h, const EntropyFn& cost, double target, int k,
                        const SolverOptions& opts = {});

// Max over interior blocks of |cost'(W_ij) + lambda t'(H, W)_ij|, the
// first-order optimality condition of the constrained problem. Blocks on the
// box boundary are excluded; throws if every block is on the boundary.
double stationarity_residual(const Graph& h, const StepGraphon& w, double lambda,
                             const EntropyFn& cost,
                             double budget = kDefaultDensityBudget);

// Consistency checks for a sparse-mode solution: the minimiser lower bound
// W >= r^{m r^{-m}}, the constraint consequence E[log W] <= log r, and the
// derivative identity E[t'(H,W) W] = e(H) t(H,W).
struct AuditReport {
    double value_floor_bound = 0.0; // r^{m r^{-m}}
    double min_block_value = 0.0;
    bool min_value_ok = false;
    double mean_log = 0.0;
    double log_target = 0.0;
    bool mean_log_ok = false;
    double derivative_identity_gap = 0.0;
    bool derivative_identity_ok = false;
    int boundary_blocks = 0;
};

AuditReport audit_solution(const OracleSolution& sol, const Graph& h, double r,
                           double budget = kDefaultDensityBudget);

} // namespace lowtail
