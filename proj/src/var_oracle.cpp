#include "lowtail/var_oracle.hpp"

#include "lowtail/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace lowtail {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// The k(k+1)/2 free block values of a symmetric matrix on k uniform blocks.
struct BlockVars {
    int k;
    std::vector<double> v; // upper triangle, row-major (i <= j)

    int index(int i, int j) const {
        if (i > j) std::swap(i, j);
        return i * k - i * (i - 1) / 2 + (j - i);
    }
    static int count(int k) { return k * (k + 1) / 2; }
};

StepGraphon to_graphon(const BlockVars& x) {
    int k = x.k;
    std::vector<double> meas(k, 1.0 / k);
    std::vector<std::vector<double>> vals(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) vals[i][j] = vals[j][i] = x.v[x.index(i, j)];
    return StepGraphon(std::move(meas), std::move(vals));
}

// Problem data shared by every restart.
struct Problem {
    const Graph& h;
    EntropyFn cost;
    double target;
    int k;
    double cap;    // p for the finite-p cost, 1 for the sparse cost
    double floor;
    double budget;
    double constraint_target; // target^m

    int nvars() const { return BlockVars::count(k); }

    double weight(int i, int j) const {
        return (i == j ? 1.0 : 2.0) / (static_cast<double>(k) * k);
    }

    double objective(const BlockVars& x) const {
        KahanSum s;
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) s.add(weight(i, j) * cost(x.v[x.index(i, j)]));
        return s.value();
    }

    void objective_gradient(const BlockVars& x, std::vector<double>& grad) const {
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                double v = std::clamp(x.v[x.index(i, j)], floor, cap);
                grad[x.index(i, j)] = weight(i, j) * cost(v, 1);
            }
    }

    double constraint(const BlockVars& x) const {
        return density(h, to_graphon(x), budget);
    }

    // t and its gradient in the free block values, assembled from the
    // functional derivative kernel.
    double constraint_with_gradient(const BlockVars& x, std::vector<double>& grad) const {
        StepGraphon w = to_graphon(x);
        StepKernel deriv = functional_derivative(h, w, budget);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j)
                grad[x.index(i, j)] = weight(i, j) * deriv.value(i, j);
        return density(h, w, budget);
    }
};

struct RestartResult {
    BlockVars x{0, {}};
    double objective = std::numeric_limits<double>::infinity();
    double constraint_value = 0.0;
};

// Augmented-Lagrangian value for the inequality constraint g = t - T <= 0.
double al_value(double objective, double g, double lambda, double rho) {
    double sigma = std::max(0.0, lambda + rho * g);
    return objective + (sigma * sigma - lambda * lambda) / (2.0 * rho);
}

// Inverse of the cost derivative: the value v solving cost'(v) = y.
double inverse_cost_derivative(const Problem& prob, double y) {
    if (prob.cost.is_sparse()) return std::exp(y); // h'(v) = log v
    // I_p'(v) = log(v(1-p)/(p(1-v))): logistic inverse.
    double p = prob.cost.p();
    double c = p / (1.0 - p) * std::exp(y);
    return c / (1.0 + c);
}

// Max interior stationarity residual |cost'(v) + lambda t'(v)| of a point.
double kkt_residual(const Problem& prob, const BlockVars& x, double lambda,
                    const std::vector<bool>& interior) {
    StepKernel deriv = functional_derivative(prob.h, to_graphon(x), prob.budget);
    double res = 0.0;
    for (int i = 0; i < prob.k; ++i)
        for (int j = i; j < prob.k; ++j) {
            int idx = x.index(i, j);
            if (!interior[idx]) continue;
            res = std::max(res, std::abs(prob.cost(x.v[idx], 1) + lambda * deriv.value(i, j)));
        }
    return res;
}

// Refines an AL solution by solving the first-order system directly: interior
// blocks satisfy cost'(v) = -lambda t'(v) (a damped fixed point, since t'
// depends on v) while the multiplier is bisected so the constraint is active.
// Boundary blocks stay pinned. Keeps the refinement only when it lowers the
// stationarity residual without breaking feasibility.
void kkt_polish(const Problem& prob, BlockVars& x) {
    const int n = prob.nvars();
    std::vector<bool> interior(n);
    int n_interior = 0;
    for (int i = 0; i < n; ++i) {
        interior[i] = x.v[i] > prob.floor + 1e-7 && x.v[i] < prob.cap - 1e-7;
        if (interior[i]) ++n_interior;
    }
    if (n_interior == 0) return;

    auto solve_given_multiplier = [&](double lambda) {
        BlockVars v = x;
        for (int pass = 0; pass < 60; ++pass) {
            StepKernel deriv = functional_derivative(prob.h, to_graphon(v), prob.budget);
            double shift = 0.0;
            for (int i = 0; i < prob.k; ++i)
                for (int j = i; j < prob.k; ++j) {
                    int idx = v.index(i, j);
                    if (!interior[idx]) continue;
                    double target =
                        std::clamp(inverse_cost_derivative(prob, -lambda * deriv.value(i, j)),
                                   prob.floor, prob.cap);
                    double next = v.v[idx] + 0.7 * (target - v.v[idx]);
                    shift = std::max(shift, std::abs(next - v.v[idx]));
                    v.v[idx] = next;
                }
            if (shift < 1e-15) break;
        }
        return v;
    };
    auto constraint_excess = [&](double lambda) {
        return prob.constraint(solve_given_multiplier(lambda)) - prob.constraint_target;
    };

    double lambda_hat;
    if (constraint_excess(0.0) <= 0.0) {
        lambda_hat = 0.0; // constraint inactive at the unconstrained optimum
    } else {
        double hi = 1.0;
        while (constraint_excess(hi) > 0.0) {
            hi *= 4.0;
            if (hi > 1e9) return; // no bracket: leave the AL point alone
        }
        lambda_hat = bisect_root(constraint_excess, 0.0, hi, 1e-13 * std::max(1.0, hi));
    }
    BlockVars refined = solve_given_multiplier(lambda_hat);

    double before = kkt_residual(prob, x, lambda_hat, interior);
    double after = kkt_residual(prob, refined, lambda_hat, interior);
    double excess = prob.constraint(refined) - prob.constraint_target;
    if (after <= before && excess <= std::max(1e-9, prob.constraint_target * 1e-9))
        x = refined;
}

// Scales the whole value vector down so t <= T; exact up to the floor clamp,
// since t is homogeneous of degree e(H).
void restore_feasibility(const Problem& prob, BlockVars& x) {
    for (int pass = 0; pass < 4; ++pass) {
        double t = prob.constraint(x);
        if (t <= prob.constraint_target || t <= 0.0) return;
        double c = std::pow(prob.constraint_target / t, 1.0 / prob.h.edge_count());
        for (double& v : x.v) v = std::max(prob.floor, c * v);
    }
    for (double& v : x.v) v *= 1.0 - 1e-13;
}

// Monotone first stage: projected gradient on the objective alone, with every
// trial point pulled back to the feasible set by homogeneous scaling. Iterates
// stay feasible throughout, so the stage can only improve on its start point
// and never hops out of the start's basin.
void feasible_descent(const Problem& prob, BlockVars& x) {
    const int n = prob.nvars();
    restore_feasibility(prob, x);
    std::vector<double> grad(n);
    double step = 0.01 * (prob.cap - prob.floor);
    for (int iter = 0; iter < 400; ++iter) {
        prob.objective_gradient(x, grad);
        double grad_max = 1e-300;
        for (double g : grad) grad_max = std::max(grad_max, std::abs(g));
        double f = prob.objective(x);
        step = std::min(step * 4.0, 0.05 * (prob.cap - prob.floor) / grad_max);
        bool accepted = false;
        for (int bt = 0; bt < 50; ++bt) {
            BlockVars trial = x;
            for (int i = 0; i < n; ++i)
                trial.v[i] = std::clamp(x.v[i] - step * grad[i], prob.floor, prob.cap);
            restore_feasibility(prob, trial);
            double moved = 0.0;
            for (int i = 0; i < n; ++i) moved = std::max(moved, std::abs(trial.v[i] - x.v[i]));
            if (moved < 1e-14) break;
            if (prob.objective(trial) <= f - 1e-6 * moved * moved / step) {
                x = trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
}

RestartResult run_descent(const Problem& prob, const SolverOptions& opts, BlockVars x) {
    const int n = prob.nvars();
    for (double& v : x.v) v = std::clamp(v, prob.floor, prob.cap);

    feasible_descent(prob, x);
    BlockVars x_stage = x; // feasible fallback in case the multiplier loop strays

    double lambda = 0.0;
    // The penalty must be strong relative to the constraint scale, or the
    // first inner solve wanders far from feasibility and loses the basin the
    // start point was chosen for.
    double rho = std::max(100.0, 10.0 / prob.constraint_target);
    double prev_violation = std::numeric_limits<double>::infinity();

    std::vector<double> grad_f(n), grad_t(n), grad(n);
    std::vector<double> x_old(n), g_old(n);

    const double feas_tol = opts.feas_tol;
    const double stat_tol = opts.stat_tol;
    const int max_outer = opts.max_outer;
    const int max_inner = opts.max_inner;

    RestartResult out;
    out.x = x;

    double crit = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < max_outer; ++outer) {
        double inner_tol = std::max(stat_tol, 1e-3 * std::pow(0.25, outer));
        double step = 1.0;
        bool have_prev = false;

        for (int inner = 0; inner < max_inner; ++inner) {
            prob.objective_gradient(x, grad_f);
            double t = prob.constraint_with_gradient(x, grad_t);
            double g = t - prob.constraint_target;
            double sigma = std::max(0.0, lambda + rho * g);
            double f = prob.objective(x);
            double L = al_value(f, g, lambda, rho);
            for (int i = 0; i < n; ++i) grad[i] = grad_f[i] + sigma * grad_t[i];

            // Criticality of the projected gradient step.
            crit = 0.0;
            for (int i = 0; i < n; ++i) {
                double proj = std::clamp(x.v[i] - grad[i], prob.floor, prob.cap);
                crit = std::max(crit, std::abs(proj - x.v[i]));
            }
            if (crit <= inner_tol) break;

            // Barzilai-Borwein step seed, then Armijo backtracking.
            if (have_prev) {
                double sy = 0.0, ss = 0.0;
                for (int i = 0; i < n; ++i) {
                    double s = x.v[i] - x_old[i];
                    double y = grad[i] - g_old[i];
                    sy += s * y;
                    ss += s * s;
                }
                step = sy > 1e-16 ? std::clamp(ss / sy, 1e-8, 1e6) : 1.0;
            }
            // Cap the move at a fraction of the box: one oversized step can
            // hop out of the basin the start point was chosen for.
            double grad_max = 0.0;
            for (int i = 0; i < n; ++i) grad_max = std::max(grad_max, std::abs(grad[i]));
            double max_move = 0.05 * (prob.cap - prob.floor);
            if (step * grad_max > max_move) step = max_move / grad_max;
            x_old = x.v;
            g_old = grad;

            bool accepted = false;
            for (int bt = 0; bt < 60; ++bt) {
                BlockVars trial = x;
                double decrease = 0.0;
                for (int i = 0; i < n; ++i) {
                    trial.v[i] = std::clamp(x_old[i] - step * grad[i], prob.floor, prob.cap);
                    double d = trial.v[i] - x_old[i];
                    decrease += d * d;
                }
                if (decrease == 0.0) break;
                double t_trial = prob.constraint(trial);
                double L_trial = al_value(prob.objective(trial),
                                          t_trial - prob.constraint_target, lambda, rho);
                if (L_trial <= L - 1e-4 * decrease / step) {
                    x = trial;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break; // no admissible step: inner problem is done
            have_prev = true;
        }

        double t = prob.constraint(x);
        double violation = std::max(0.0, t - prob.constraint_target);
        if (violation <= feas_tol && crit <= stat_tol) break;
        lambda = std::max(0.0, lambda + rho * (t - prob.constraint_target));
        if (violation > 0.25 * prev_violation) rho = std::min(rho * 10.0, 1e14);
        prev_violation = violation;
    }

    // If the multiplier loop drifted to a worse basin, fall back to the
    // feasible first-stage point.
    restore_feasibility(prob, x);
    if (prob.objective(x_stage) < prob.objective(x)) x = x_stage;

    BlockVars pre_polish = x;
    kkt_polish(prob, x);
    restore_feasibility(prob, x);
    if (prob.objective(pre_polish) < prob.objective(x)) x = pre_polish;

    out.x = x;
    out.objective = prob.objective(x);
    out.constraint_value = prob.constraint(x);
    return out;
}

std::vector<double> sorted_values(const BlockVars& x) {
    std::vector<double> v = x.v;
    std::sort(v.begin(), v.end());
    return v;
}

bool lexicographically_before(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Deterministic start points: the constant graphon, two-block patterns with
// the first ceil(k/2) blocks grouped, general two-group values, and uniform
// random fills.
BlockVars start_point(const Problem& prob, int index, std::uint64_t seed) {
    const int k = prob.k;
    BlockVars x{k, std::vector<double>(BlockVars::count(k), 0.0)};
    auto fill_two_group = [&](double diag_a, double cross, double diag_b) {
        int half = (k + 1) / 2;
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                bool ia = i < half, ja = j < half;
                double v = ia == ja ? (ia ? diag_a : diag_b) : cross;
                x.v[x.index(i, j)] = v;
            }
    };
    double t = std::clamp(prob.target, prob.floor, prob.cap);
    switch (index) {
        case 0:
            fill_two_group(t, t, t); // constant
            return x;
        case 1:
            fill_two_group(prob.floor, prob.cap, prob.floor); // zero-density shape
            return x;
        case 2:
            fill_two_group(0.5 * t, std::min(prob.cap, 1.5 * t), 0.5 * t);
            return x;
        case 3:
            fill_two_group(prob.floor, prob.cap, prob.cap);
            return x;
        default: {
            std::mt19937_64 rng(splitmix64(seed ^ (0x5851f42d4c957f2dULL * index)));
            auto uniform = [&] {
                return prob.floor +
                       (prob.cap - prob.floor) * ((rng() >> 11) * 0x1.0p-53);
            };
            if (index % 2 == 0) {
                fill_two_group(uniform(), uniform(), uniform());
            } else {
                for (double& v : x.v) v = uniform();
            }
            return x;
        }
    }
}

} // namespace

OracleSolution solve_lt(const Graph& h, const EntropyFn& cost, double target, int k,
                        const SolverOptions& opts) {
    if (k < 1) throw std::invalid_argument("solve_lt: need k >= 1");
    if (h.edge_count() < 1) throw std::invalid_argument("solve_lt: graph needs an edge");
    double cap = cost.is_sparse() ? 1.0 : cost.p();
    if (!(target > 0.0 && target <= cap))
        throw std::domain_error("solve_lt: target must lie in (0, p] or (0, 1]");
    if (std::pow(static_cast<double>(k), h.vertex_count()) > opts.budget)
        throw BudgetError("solve_lt: enumeration budget exceeded at k = " + std::to_string(k));

    Problem prob{h,         cost,
                 target,    k,
                 cap,       opts.value_floor,
                 opts.budget, std::pow(target, h.edge_count())};

    int restarts = std::max(1, opts.restarts);
    std::vector<RestartResult> results(restarts);
    parallel::for_index(static_cast<size_t>(restarts), [&](size_t i) {
        results[i] =
            run_descent(prob, opts, start_point(prob, static_cast<int>(i), opts.seed));
    });

    // Deterministic merge: best objective, ties by lexicographically smallest
    // sorted block-value vector.
    int best = 0;
    for (int i = 1; i < restarts; ++i) {
        double diff = results[i].objective - results[best].objective;
        if (diff < -1e-12 ||
            (std::abs(diff) <= 1e-12 && lexicographically_before(sorted_values(results[i].x),
                                                                 sorted_values(results[best].x))))
            best = i;
    }

    const RestartResult& winner = results[best];
    OracleSolution sol(to_graphon(winner.x));
    sol.objective = winner.objective;
    sol.constraint_value = winner.constraint_value;
    sol.constraint_slack = prob.constraint_target - winner.constraint_value;
    sol.restarts_used = restarts;

    // Interior/boundary split and least-squares multiplier on interior blocks.
    StepKernel deriv = functional_derivative(h, sol.graphon, opts.budget);
    double eps = 1e-9;
    double num = 0.0, den = 0.0;
    int interior = 0, boundary = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            double v = sol.graphon.value(i, j);
            if (v <= opts.value_floor + eps || v >= cap - eps) {
                ++boundary;
                continue;
            }
            ++interior;
            double w = prob.weight(i, j);
            num += w * cost(v, 1) * deriv.value(i, j);
            den += w * deriv.value(i, j) * deriv.value(i, j);
        }
    sol.interior_blocks = interior;
    sol.boundary_blocks = boundary;
    if (interior > 0 && den > 0.0) {
        sol.multiplier = std::max(0.0, -num / den);
        double res = 0.0;
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                double v = sol.graphon.value(i, j);
                if (v <= opts.value_floor + eps || v >= cap - eps) continue;
                res = std::max(res,
                               std::abs(cost(v, 1) + sol.multiplier * deriv.value(i, j)));
            }
        sol.stationarity_residual = res;
    } else {
        sol.multiplier = 0.0;
        sol.stationarity_residual = std::numeric_limits<double>::quiet_NaN();
    }

    // Converged means: feasible, and first-order optimal on interior blocks.
    sol.converged = sol.constraint_slack >= -1e-9 &&
                    (interior == 0 || sol.stationarity_residual <= 1e-6);

    for (const auto& r : results) {
        if (r.objective > sol.objective + opts.near_optimal_window) continue;
        auto vals = sorted_values(r.x);
        bool fresh = true;
        for (const auto& seen : sol.near_optima) {
            double d = 0.0;
            for (size_t i = 0; i < vals.size(); ++i)
                d = std::max(d, std::abs(vals[i] - seen[i]));
            if (d <= 1e-6) {
                fresh = false;
                break;
            }
        }
        if (fresh) sol.near_optima.push_back(std::move(vals));
    }
    return sol;
}

double stationarity_residual(const Graph& h, const StepGraphon& w, double lambda,
                             const EntropyFn& cost, double budget) {
    double cap = cost.is_sparse() ? 1.0 : cost.p();
    StepKernel deriv = functional_derivative(h, w, budget);
    double eps = 1e-9;
    double res = 0.0;
    int interior = 0;
    for (int i = 0; i < w.block_count(); ++i)
        for (int j = i; j < w.block_count(); ++j) {
            double v = w.value(i, j);
            if (v <= eps || v >= cap - eps) continue;
            ++interior;
            res = std::max(res, std::abs(cost(v, 1) + lambda * deriv.value(i, j)));
        }
    if (interior == 0)
        throw std::domain_error("stationarity_residual: every block is on the box boundary");
    return res;
}

AuditReport audit_solution(const OracleSolution& sol, const Graph& h, double r,
                           double budget) {
    if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("audit_solution: need 0 < r <= 1");
    const int m = h.edge_count();
    AuditReport rep;

    double log_r = std::log(r);
    double neg = -m * log_r;
    rep.value_floor_bound = neg > 700.0 ? 0.0 : [&] {
        double log_c = m * std::exp(neg) * log_r;
        return log_c < -745.0 ? 0.0 : std::exp(log_c);
    }();
    rep.min_block_value = sol.graphon.min_value();
    rep.min_value_ok = rep.min_block_value >= rep.value_floor_bound - 1e-9;

    rep.mean_log = sol.graphon.expect([](double v) {
        return v <= 0.0 ? -std::numeric_limits<double>::infinity() : std::log(v);
    });
    rep.log_target = log_r;
    rep.mean_log_ok = rep.mean_log <= log_r + 1e-9;

    StepKernel deriv = functional_derivative(h, sol.graphon, budget);
    KahanSum pairing;
    for (int i = 0; i < sol.graphon.block_count(); ++i)
        for (int j = 0; j < sol.graphon.block_count(); ++j)
            pairing.add(sol.graphon.measure(i) * sol.graphon.measure(j) * deriv.value(i, j) *
                        sol.graphon.value(i, j));
    double t = density(h, sol.graphon, budget);
    rep.derivative_identity_gap = std::abs(pairing.value() - m * t);
    rep.derivative_identity_ok = rep.derivative_identity_gap <= 1e-10;

    int boundary = 0;
    for (int i = 0; i < sol.graphon.block_count(); ++i)
        for (int j = i; j < sol.graphon.block_count(); ++j) {
            double v = sol.graphon.value(i, j);
            if (v <= 1e-9 || v >= 1.0 - 1e-9) ++boundary;
        }
    rep.boundary_blocks = boundary;
    return rep;
}

} // namespace lowtail
