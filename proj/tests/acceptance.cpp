// Acceptance suite: one check per headline requirement, each printed as a
// single PASS/FAIL line with its runtime. Exits nonzero if any check fails.

#include "lowtail/breaking.hpp"
#include "lowtail/empirics.hpp"
#include "lowtail/entropy.hpp"
#include "lowtail/graph.hpp"
#include "lowtail/numeric.hpp"
#include "lowtail/phase_curves.hpp"
#include "lowtail/step_kernel.hpp"
#include "lowtail/symcheck.hpp"
#include "lowtail/var_oracle.hpp"
#include "../tests/test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace lowtail;
using namespace lowtail::testing;

namespace {

int g_failures = 0;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& msg) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += msg;
        }
    }
};

void criterion(int id, const std::string& name, double time_limit_s,
               const std::function<Outcome()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = fn();
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt >= time_limit_s)
        o.require(false, "runtime " + std::to_string(dt) + "s exceeds " +
                             std::to_string(time_limit_s) + "s");
    std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", id,
                name.c_str(), dt, o.detail.empty() ? "" : " -- ", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++g_failures;
}

std::string fmt(double x) { return format_double(x); }

Outcome table_reproduction() {
    Outcome o;
    const std::vector<std::pair<int, double>> table{
        {3, 0.686}, {4, 0.735}, {5, 0.770},  {6, 0.795},  {7, 0.815},
        {8, 0.831}, {9, 0.844}, {10, 0.855}, {20, 0.911}, {100, 0.973}};
    for (auto [m, expected] : table) {
        double got = r_m(m);
        o.require(std::abs(got - expected) <= 5e-4,
                  "r_" + std::to_string(m) + " = " + fmt(got) + " vs " + fmt(expected) +
                      " +- 5e-4");
    }
    return o;
}

Outcome sparse_constant_values() {
    Outcome o;
    SparseConstants c = sparse_constants({});
    o.require(std::abs(c.r_upper - 0.466) <= 1e-3, "r_upper = " + fmt(c.r_upper));
    o.require(std::abs(c.r_lower - 0.209) <= 1e-3, "r_lower = " + fmt(c.r_lower));
    o.require(std::abs(c.r_trivial - 0.186) <= 1e-3, "r_trivial = " + fmt(c.r_trivial));
    return o;
}

Outcome origin_slopes() {
    Outcome o;
    double up = upper_q_curve(1e-3) / 1e-3;
    double lo = lower_q_curve(1e-3) / 1e-3;
    o.require(up >= 0.465 && up <= 0.468, "upper slope = " + fmt(up));
    o.require(lo >= 0.205 && lo <= 0.213, "lower slope = " + fmt(lo));
    return o;
}

Outcome certificate_breaking_grid() {
    Outcome o;
    const int np = 50, nq = 50;
    CertifyOptions copts;
    copts.evidence_points = 2;
    std::vector<std::string> row_errors(np);
    parallel::for_index(np, [&](size_t i) {
        double p = 0.01 + (0.5 - 0.01) * static_cast<double>(i) / (np - 1);
        bool prev_witness = true; // witnesses occupy a prefix in q
        bool seen_certified = false;
        std::ostringstream err;
        for (int j = 1; j <= nq; ++j) {
            double q = std::min(p, p * j / nq);
            bool certified = lt_k3_certificate(p, q, copts).certified();
            bool witness = find_breaking(p, q).has_value();
            if (certified && witness)
                err << "both certificate and witness at p=" << fmt(p) << " q=" << fmt(q) << "; ";
            if (witness && !prev_witness)
                err << "witness region not a prefix at p=" << fmt(p) << " q=" << fmt(q) << "; ";
            if (seen_certified && !certified)
                err << "certified region not a suffix at p=" << fmt(p) << " q=" << fmt(q)
                    << "; ";
            prev_witness = witness;
            seen_certified = seen_certified || certified;
        }
        if (!seen_certified) err << "no certified point on slice p=" << fmt(p) << "; ";
        row_errors[i] = err.str();
    });
    for (const auto& e : row_errors) o.require(e.empty(), e);
    return o;
}

Outcome identity_suite() {
    Outcome o;
    std::mt19937_64 rng(1);
    Graph k3 = Graph::complete(3);
    Graph star2 = Graph::star(2);

    // Goodman polynomial identity
    for (int rep = 0; rep < 200 && o.pass; ++rep) {
        double q = uniform(rng);
        double bound = std::min(q, 1.0 - q);
        StepKernel x = random_kernel(rng, 4, -bound, bound);
        StepKernel qk = StepKernel::constant(q);
        double lhs = density(k3, add(qk, x)) + density(k3, subtract(qk, x));
        double rhs = 2 * q * q * q + 6 * q * density(star2, x);
        o.require(std::abs(lhs - rhs) <= 1e-12,
                  "Goodman identity gap " + fmt(lhs - rhs) + " at rep " + std::to_string(rep));
    }
    // swap identity
    for (int rep = 0; rep < 200 && o.pass; ++rep) {
        double a = uniform(rng), b = uniform(rng);
        double diff = density(k3, StepGraphon::bip(a, b)) - density(k3, StepGraphon::bip(b, a));
        o.require(std::abs(diff - 0.25 * std::pow(a - b, 3)) <= 1e-12,
                  "swap identity gap at rep " + std::to_string(rep));
    }
    // derivative pairing identity
    for (const Graph& h : {Graph::complete(3), Graph::cycle(5), Graph::complete(4)}) {
        for (int rep = 0; rep < 200 && o.pass; ++rep) {
            StepGraphon w = random_graphon(rng, 2 + static_cast<int>(rng() % 3));
            StepKernel d = functional_derivative(h, w);
            KahanSum pairing;
            for (int i = 0; i < w.block_count(); ++i)
                for (int j = 0; j < w.block_count(); ++j)
                    pairing.add(w.measure(i) * w.measure(j) * d.value(i, j) * w.value(i, j));
            o.require(std::abs(pairing.value() - h.edge_count() * density(h, w)) <= 1e-12,
                      "derivative identity gap at rep " + std::to_string(rep));
        }
    }
    // scaling identity for h
    for (int rep = 0; rep < 200 && o.pass; ++rep) {
        double s = 0.01 + 0.99 * uniform(rng);
        double x = 0.01 + 0.99 * uniform(rng);
        double gap = sparse_entropy(s * x) -
                     (s * sparse_entropy(x) + s * std::log(s) * x - s + 1.0);
        o.require(std::abs(gap) <= 1e-12, "scaling identity gap " + fmt(gap));
    }
    return o;
}

Outcome inequality_suite() {
    Outcome o;
    std::mt19937_64 rng(2);
    Graph k3 = Graph::complete(3);
    std::vector<Graph> holder_graphs{Graph::complete(3), Graph::cycle(5), Graph::complete(4),
                                     Graph::complete_bipartite(2, 3)};
    for (int rep = 0; rep < 200 && o.pass; ++rep) {
        int k = 1 + static_cast<int>(rng() % 5);
        StepGraphon w = random_graphon(rng, k);
        for (const Graph& h : holder_graphs) {
            double delta = h.max_degree();
            double bound = std::pow(w.expect([&](double v) { return std::pow(v, delta); }),
                                    h.edge_count() / delta);
            o.require(density(h, w) <= bound + 1e-12, "Holder violated at rep " +
                                                          std::to_string(rep));
        }
        // Goodman inequality
        double q = 0.5 * uniform(rng);
        StepKernel u = w.map([&](double v) {
            return std::clamp(2.0 * q - v + 0.3 * uniform(rng), 0.0, 1.0);
        });
        o.require(density(k3, w) + density(k3, u) >= 2 * q * q * q - 1e-12,
                  "Goodman inequality violated at rep " + std::to_string(rep));
        // Jensen consequence of the constraint
        StepGraphon wp = random_graphon(rng, k, 0.05, 1.0);
        for (const Graph& h : {Graph::complete(3), Graph::cycle(5)}) {
            double t = density(h, wp);
            if (t <= 0.0) continue;
            double mean_log = wp.expect([](double v) { return std::log(v); });
            o.require(mean_log <= std::log(t) / h.edge_count() + 1e-12,
                      "Jensen violated at rep " + std::to_string(rep));
        }
    }
    return o;
}

Outcome oracle_vs_certificates() {
    Outcome o;
    Graph k3 = Graph::complete(3);
    SolverOptions opts; // 20 restarts by default
    for (double r : {0.5, 0.6, 0.8}) {
        OracleSolution sol = solve_lt(k3, EntropyFn::sparse(), r, 4, opts);
        o.require(std::abs(sol.objective - sparse_entropy(r)) <= 1e-6,
                  "objective " + fmt(sol.objective) + " vs h(" + fmt(r) + ") = " +
                      fmt(sparse_entropy(r)));
        o.require(sol.converged, "not converged at r = " + fmt(r));
        if (sol.interior_blocks > 0)
            o.require(sol.stationarity_residual <= 1e-6,
                      "stationarity " + fmt(sol.stationarity_residual) + " at r = " + fmt(r));
    }
    for (double r : {0.1, 0.15, 0.18}) {
        auto witness = find_breaking_sparse(r);
        o.require(witness.has_value(), "no two-block witness at r = " + fmt(r));
        OracleSolution sol = solve_lt(k3, EntropyFn::sparse(), r, 4, opts);
        if (witness)
            o.require(sol.objective <= witness->witness_value + 1e-9,
                      "oracle " + fmt(sol.objective) + " above witness " +
                          fmt(witness->witness_value) + " at r = " + fmt(r));
        o.require(sol.objective < sparse_entropy(r) - 1e-3,
                  "oracle " + fmt(sol.objective) + " not below h(" + fmt(r) + ")");
        if (sol.converged && sol.interior_blocks > 0)
            o.require(sol.stationarity_residual <= 1e-6,
                      "stationarity " + fmt(sol.stationarity_residual) + " at r = " + fmt(r));
    }
    return o;
}

Outcome derivative_expansion() {
    Outcome o;
    std::mt19937_64 rng(3);
    const double delta = 1e-4;
    for (const Graph& h : {Graph::complete(3), Graph::cycle(5)}) {
        for (int rep = 0; rep < 50 && o.pass; ++rep) {
            int k = 2 + static_cast<int>(rng() % 3);
            StepGraphon w = random_graphon(rng, k, 0.3, 0.9);
            StepKernel u(w.measures(), random_symmetric(rng, k, 0.1, 1.0));
            StepKernel d = functional_derivative(h, w);
            KahanSum first;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    first.add(w.measure(i) * w.measure(j) * d.value(i, j) * u.value(i, j));
            double increment = density(h, add(w, scale(u, delta))) - density(h, w);
            double err = std::abs(increment - delta * first.value());
            double rel = err / std::abs(increment);
            o.require(rel <= 1e-3, "relative expansion error " + fmt(rel) + " at rep " +
                                       std::to_string(rep));
        }
    }
    return o;
}

Outcome figure_regeneration() {
    Outcome o;
    int file_index = 0;
    auto min_y = [&](const std::string& id, std::map<std::string, double> params) {
        std::string path = "acceptance_fig_" + std::to_string(file_index++) + ".dat";
        emit_file(id, params, 1000, path);
        std::ifstream in(path);
        double x, y, best = 1e300;
        while (in >> x >> y) best = std::min(best, y);
        in.close();
        std::remove(path.c_str());
        return best;
    };
    // tangent-gap panels at p = 0.1: dip iff inconclusive
    for (double q : {0.045, 0.047, 0.05, 0.06}) {
        bool dip = min_y("lt-k3", {{"p", 0.1}, {"q", q}}) < -1e-12;
        bool inconclusive = !lt_k3_certificate(0.1, q).certified();
        o.require(dip == inconclusive,
                  "tangent-gap sign at q = " + fmt(q) + " disagrees with the verdict");
    }
    // two-block gap panels: dip iff the constrained family yields a witness
    for (double r : {0.2, 0.209, 0.21}) {
        bool dip = min_y("bip-sparse", {{"r", r}}) < -1e-12;
        BreakingOptions bopts;
        AdmissibleInterval iv = bip_admissible_sparse(r);
        double best = 1e300;
        for (int i = 0; i <= 20000; ++i) {
            double x = iv.lo + (iv.hi - iv.lo) * i / 20000.0;
            best = std::min(best, bip_gap_sparse(r, x));
        }
        bool family_breaks = best < -bopts.margin_threshold;
        o.require(dip == family_breaks,
                  "two-block gap sign at r = " + fmt(r) + " disagrees with the verdict");
    }
    return o;
}

Outcome empirics_sanity() {
    Outcome o;
    Graph k3 = Graph::complete(3);
    const int n = 40;
    const double p = 0.5;
    const long long trials = 100000;
    SolverOptions opts;
    double lt = solve_lt(k3, EntropyFn::finite(p), 0.45, 4, opts).objective;
    std::vector<double> qs{0.40, 0.42, 0.45, 0.48, 0.50};
    auto grid = lower_tail_grid(k3, n, p, qs, trials, 12345, {0, 0, lt, 0, 0});
    for (size_t i = 1; i < grid.size(); ++i)
        o.require(grid[i - 1].hits <= grid[i].hits,
                  "tail not monotone between q = " + fmt(qs[i - 1]) + " and " + fmt(qs[i]));
    const TailEstimate& main = grid[2];
    o.require(main.hits > 0, "no hits at q = 0.45 with 1e5 trials");
    if (main.hits > 0) {
        double rate = -2.0 * main.log_prob / (static_cast<double>(n) * n);
        o.require(rate > 0.0, "empirical rate not positive");
        o.require(rate <= 3.0 * lt && rate >= lt / 3.0,
                  "empirical rate " + fmt(rate) + " vs variational " + fmt(lt) +
                      " beyond factor 3");
    }
    return o;
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion(1, "r_m table reproduction", 1.0, table_reproduction);
    criterion(2, "sparse constants", 10.0, sparse_constant_values);
    criterion(3, "boundary slopes at the origin", 30.0, origin_slopes);
    criterion(4, "certificate/breaking consistency on the (p,q) grid", 300.0,
              certificate_breaking_grid);
    criterion(5, "polynomial identity suite", 60.0, identity_suite);
    criterion(6, "inequality suite", 60.0, inequality_suite);
    criterion(7, "oracle vs certificates", 300.0, oracle_vs_certificates);
    criterion(8, "first-order expansion of the density", 60.0, derivative_expansion);
    criterion(9, "figure data regeneration by sign pattern", 60.0, figure_regeneration);
    criterion(10, "Monte-Carlo tail sanity", 300.0, empirics_sanity);
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
