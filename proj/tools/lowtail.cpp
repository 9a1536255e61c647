// Command-line front end: constants, phase curves, gap-function data files,
// replica-symmetry certificates, breaking-witness search, the discretised
// variational solver, and Monte-Carlo tail estimates.
//
// Exit codes: 0 success (certified / witness found), 2 for the negative
// scientific outcomes (inconclusive / no witness), 64 usage errors, 65
// numeric or budget failures.

#include "lowtail/breaking.hpp"
#include "lowtail/empirics.hpp"
#include "lowtail/entropy.hpp"
#include "lowtail/graph.hpp"
#include "lowtail/json_io.hpp"
#include "lowtail/numeric.hpp"
#include "lowtail/phase_curves.hpp"
#include "lowtail/symcheck.hpp"
#include "lowtail/var_oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 2;
constexpr int kExitUsage = 64;
constexpr int kExitNumeric = 65;

using nlohmann::json;
using namespace lowtail;

Graph resolve_graph(const std::string& family, const std::string& graph_file) {
    if (!family.empty()) return Graph::parse_name(family);
    if (!graph_file.empty()) {
        std::ifstream in(graph_file);
        if (!in) throw std::runtime_error("cannot open graph file: " + graph_file);
        return Graph::from_edge_list(in);
    }
    throw CLI::ValidationError("--family or --graph is required");
}

std::string output_path(const std::string& explicit_out, const std::string& default_name) {
    if (!explicit_out.empty()) return explicit_out;
    const char* dir = std::getenv("LOWTAIL_OUTDIR");
    std::string base = dir && *dir ? std::string(dir) : std::string(".");
    if (base.back() != '/') base += '/';
    return base + default_name;
}

EntropyFn parse_mode(const std::string& mode) {
    if (mode == "sparse") return EntropyFn::sparse();
    if (mode.rfind("p=", 0) == 0) return EntropyFn::finite(std::stod(mode.substr(2)));
    throw CLI::ValidationError("--mode must be 'sparse' or 'p=VALUE'");
}

int cmd_constants(bool json_only) {
    SparseConstants c = sparse_constants();
    json j{{"r_upper", c.r_upper}, {"r_lower", c.r_lower}, {"r_trivial", c.r_trivial}};
    json table = json::object();
    for (auto [m, r] : c.r_m_table) table["m" + std::to_string(m)] = r;
    j["r_m"] = table;
    if (!json_only) {
        char buf[32];
        auto three = [&](double v) {
            std::snprintf(buf, sizeof(buf), "%.3f", v);
            return std::string(buf);
        };
        std::cout << "r_upper " << three(c.r_upper) << '\n'
                  << "r_lower " << three(c.r_lower) << '\n'
                  << "r_trivial " << three(c.r_trivial) << '\n';
        for (auto [m, r] : c.r_m_table)
            std::cout << "r_" << m << ' ' << three(r) << '\n';
    }
    std::cout << j.dump() << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lower-tail variational toolkit for subgraph densities in random graphs"};
    app.require_subcommand(1);
    int threads = 0;
    double budget = kDefaultDensityBudget;
    app.add_option("--threads", threads, "cap worker threads (0 = hardware)");
    app.add_option("--budget", budget, "enumeration budget in terms");

    // constants
    bool json_only = false;
    auto* constants = app.add_subcommand("constants", "sparse constants and the r_m table");
    constants->add_flag("--json-only", json_only, "suppress the aligned text block");

    // curve
    std::string curve_kind, curve_out;
    int curve_points = 500;
    auto* curve = app.add_subcommand("curve", "emit a phase-boundary curve as a .dat file");
    curve->add_option("--kind", curve_kind, "upper-q | lower-q | ut-boundary | diagonal")
        ->required();
    curve->add_option("--out", curve_out, "output path (default derived, in $LOWTAIL_OUTDIR)");
    curve->add_option("--points", curve_points, "sample count");

    // gap
    std::string gap_kind, gap_out;
    int gap_points = 1000;
    double gap_p = 0.0, gap_q = 0.0, gap_r = 0.0;
    auto* gap = app.add_subcommand("gap", "emit a gap-function data file");
    gap->add_option("--kind", gap_kind, "lt-k3 | lt-h-k3 | h-exp | bip | bip-sparse")->required();
    gap->add_option("--p", gap_p, "edge density p");
    gap->add_option("--q", gap_q, "threshold q");
    gap->add_option("--r", gap_r, "sparse threshold r");
    gap->add_option("--out", gap_out, "output path");
    gap->add_option("--points", gap_points, "sample count");

    // check
    std::string check_problem, check_family, check_graph;
    double check_p = 0.0, check_q = 0.0, check_r = 0.0;
    CertifyOptions check_opts;
    auto* check = app.add_subcommand("check", "replica-symmetry certificate");
    check->add_option("--problem", check_problem, "lt-k3 | ut-k3 | lt-h-k3 | lt-h")->required();
    check->add_option("--p", check_p, "edge density p");
    check->add_option("--q", check_q, "threshold q");
    check->add_option("--r", check_r, "sparse threshold r");
    check->add_option("--family", check_family, "graph name such as K3, C5, K2,3 (for lt-h)");
    check->add_option("--graph", check_graph, "edge-list file (for lt-h)");
    check->add_option("--tol", check_opts.tol, "gap tolerance for the verdict");
    check->add_option("--evidence-points", check_opts.evidence_points,
                      "size of the recorded evidence grid");

    // break
    bool break_sparse = false;
    double break_p = 0.0, break_q = 0.0, break_r = 0.0;
    auto* brk = app.add_subcommand("break", "search the two-block family for a witness");
    brk->add_flag("--sparse", break_sparse, "sparse problem (use --r)");
    brk->add_option("--p", break_p, "edge density p");
    brk->add_option("--q", break_q, "threshold q");
    brk->add_option("--r", break_r, "sparse threshold r");

    // solve
    std::string solve_family, solve_graph, solve_mode = "sparse";
    double solve_target = 0.0;
    int solve_k = 4, solve_restarts = 20;
    std::uint64_t solve_seed = 1;
    bool solve_audit = false;
    auto* solve = app.add_subcommand("solve", "discretised variational solver");
    solve->add_option("--family", solve_family, "graph name such as K3, C5, K2,3");
    solve->add_option("--graph", solve_graph, "edge-list file");
    solve->add_option("--mode", solve_mode, "sparse | p=VALUE");
    solve->add_option("--target", solve_target, "threshold (q or r)")->required();
    solve->add_option("--k", solve_k, "number of uniform blocks");
    solve->add_option("--restarts", solve_restarts, "multistart count");
    solve->add_option("--seed", solve_seed, "random seed");
    solve->add_flag("--audit", solve_audit, "attach the sparse-mode audit report");

    // simulate
    std::string sim_family = "K3", sim_graph;
    int sim_n = 40;
    double sim_p = 0.5, sim_q = 0.45;
    long long sim_trials = 1000;
    std::uint64_t sim_seed = 1;
    int sim_k = 4;
    bool sim_no_predict = false;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo lower-tail estimate (CSV)");
    simulate->add_option("--family", sim_family, "graph name");
    simulate->add_option("--graph", sim_graph, "edge-list file");
    simulate->add_option("--n", sim_n, "vertices of the sampled graph")->required();
    simulate->add_option("--p", sim_p, "edge probability")->required();
    simulate->add_option("--q", sim_q, "threshold")->required();
    simulate->add_option("--trials", sim_trials, "Monte-Carlo trials")->required();
    simulate->add_option("--seed", sim_seed, "random seed");
    simulate->add_option("--k", sim_k, "oracle blocks for the predicted rate");
    simulate->add_flag("--no-predict", sim_no_predict, "skip the variational prediction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (threads > 0) parallel::set_max_threads(threads);

        if (constants->parsed()) return cmd_constants(json_only);

        if (curve->parsed()) {
            std::string path = output_path(curve_out, "curve-" + curve_kind + ".dat");
            emit_file(curve_kind, {}, curve_points, path);
            std::cout << path << '\n';
            return kExitOk;
        }

        if (gap->parsed()) {
            std::map<std::string, double> params;
            if (gap->count("--p")) params["p"] = gap_p;
            if (gap->count("--q")) params["q"] = gap_q;
            if (gap->count("--r")) params["r"] = gap_r;
            std::string path = output_path(gap_out, "gap-" + gap_kind + ".dat");
            emit_file(gap_kind, params, gap_points, path);
            std::cout << path << '\n';
            return kExitOk;
        }

        if (check->parsed()) {
            Certificate cert;
            if (check_problem == "lt-k3") {
                cert = lt_k3_certificate(check_p, check_q, check_opts);
            } else if (check_problem == "ut-k3") {
                cert = ut_k3_certificate(check_p, check_q, check_opts);
            } else if (check_problem == "lt-h-k3") {
                cert = lt_h_k3_certificate(check_r, check_opts);
            } else if (check_problem == "lt-h") {
                cert = lt_h_general_certificate(resolve_graph(check_family, check_graph),
                                                check_r, check_opts);
            } else {
                throw CLI::ValidationError("unknown --problem: " + check_problem);
            }
            std::cout << json(cert).dump() << '\n';
            return cert.certified() ? kExitOk : kExitNegative;
        }

        if (brk->parsed()) {
            std::optional<BreakingWitness> witness =
                break_sparse ? find_breaking_sparse(break_r) : find_breaking(break_p, break_q);
            if (!witness) {
                std::cout << "none\n";
                return kExitNegative;
            }
            std::cout << json(*witness).dump() << '\n';
            return kExitOk;
        }

        if (solve->parsed()) {
            Graph h = resolve_graph(solve_family, solve_graph);
            EntropyFn mode = parse_mode(solve_mode);
            SolverOptions opts;
            opts.restarts = solve_restarts;
            opts.seed = solve_seed;
            opts.budget = budget;
            OracleSolution sol = solve_lt(h, mode, solve_target, solve_k, opts);
            json j(sol);
            if (solve_audit && mode.is_sparse())
                j["audit"] = audit_solution(sol, h, solve_target, budget);
            std::cout << j.dump() << '\n';
            return kExitOk;
        }

        if (simulate->parsed()) {
            Graph h = resolve_graph(sim_family, sim_graph);
            double lt_value = std::numeric_limits<double>::quiet_NaN();
            if (!sim_no_predict) {
                SolverOptions opts;
                opts.seed = sim_seed;
                opts.budget = budget;
                lt_value =
                    solve_lt(h, EntropyFn::finite(sim_p), sim_q, sim_k, opts).objective;
            }
            TailEstimate est =
                lower_tail_estimate(h, sim_n, sim_p, sim_q, sim_trials, sim_seed, lt_value);
            std::cout << tail_csv_header() << '\n' << tail_csv_row(est) << '\n';
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        // parameter values outside the mathematical domain are usage errors
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}
