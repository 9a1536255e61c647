#include "lowtail/phase_curves.hpp"

#include "lowtail/breaking.hpp"
#include "lowtail/entropy.hpp"
#include "lowtail/numeric.hpp"
#include "lowtail/symcheck.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace lowtail {

double upper_q_curve(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("upper_q_curve: need 0 < p < 1");
    if (p <= 0.5) {
        auto implicit = [p](double q) {
            return relative_entropy(p, q) + 0.5 * q * relative_entropy(p, q, 1);
        };
        // Positive near 0 (value I_p(0)), negative just below p.
        return bisect_root(implicit, 1e-6 * p, p * (1.0 - 1e-7), 1e-10);
    }
    // Certificate boundary by bisection on the verdict.
    CertifyOptions opts;
    opts.evidence_points = 2; // verdict only
    auto certified = [&](double q) {
        return lt_k3_certificate(p, q, opts).certified() ? 1.0 : -1.0;
    };
    if (certified(p * (1.0 - 1e-9)) < 0)
        throw std::runtime_error("upper_q_curve: certificate fails arbitrarily close to q = p");
    return bisect_root(certified, 1e-6 * p, p * (1.0 - 1e-9), 1e-8);
}

double lower_q_curve(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("lower_q_curve: need 0 < p < 1");
    BreakingOptions opts;
    auto breaks = [&](double q) {
        return find_breaking(p, q, opts).has_value() ? 1.0 : -1.0;
    };
    double lo = 1e-3 * p;
    double hi = 0.99 * p;
    if (breaks(lo) < 0)
        throw std::runtime_error("lower_q_curve: no witness near q = 0, bracket invalid");
    if (breaks(hi) > 0)
        throw std::runtime_error("lower_q_curve: witness near q = p, bracket invalid");
    return bisect_root(breaks, lo, hi, 1e-8);
}

double ut_boundary_k3(double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("ut_boundary_k3: need 0 < q < 1");
    if (q == 0.5) return 1.0 / (1.0 + std::exp(2.0)); // two-sided limit
    double base = 1.0 / q - 1.0;
    double expo = 1.0 / (1.0 - 2.0 * q);
    return 1.0 / (1.0 + std::pow(base, expo));
}

double r_m(int m) {
    if (m < 1) throw std::invalid_argument("r_m: need m >= 1");
    auto f = [m](double r) {
        double log_r = std::log(r);
        double rm = m * std::exp(-m * log_r); // m r^{-m}
        double log_c = rm * log_r;
        double c = log_c < -745.0 ? 0.0 : std::exp(log_c);
        double h_c = (c == 0.0 ? 0.0 : c * log_c) - c + 1.0;
        return h_c - sparse_entropy(r) - r * log_r * (log_c - log_r);
    };
    // Negative for small r (the bound c collapses), positive close to 1. The
    // upper end grows toward 1 with m; expand it until the sign flips.
    double hi = 0.99;
    while (f(hi) <= 0.0 && hi < 1.0 - 1e-9) hi = 1.0 - 0.25 * (1.0 - hi);
    return bisect_root(f, 0.35, hi, 1e-9);
}

SparseConstants sparse_constants(const std::vector<int>& ms) {
    SparseConstants out;
    // Root of (3/2) r log r - r + 1 = 0, equivalently h(r) + r h'(r)/2 = 0.
    out.r_upper = bisect_root(
        [](double r) { return 1.5 * r * std::log(r) - r + 1.0; }, 0.01, 0.999, 1e-9);
    out.r_lower = k3_critical_triple().r1;
    // h(r) = 1/2.
    out.r_trivial = bisect_root(
        [](double r) { return sparse_entropy(r) - 0.5; }, 0.01, 0.999, 1e-9);
    out.r_m_table.reserve(ms.size());
    for (int m : ms) out.r_m_table.emplace_back(m, r_m(m));
    return out;
}

double ut_sparse_rate(double delta) {
    if (!(delta > 0.0)) throw std::domain_error("ut_sparse_rate: need delta > 0");
    return std::min(std::pow(delta, 2.0 / 3.0), 2.0 / 3.0 * delta);
}

namespace {

using PointList = std::vector<std::pair<double, double>>;

double require_param(const std::map<std::string, double>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end())
        throw std::invalid_argument("emit: missing parameter '" + key + "'");
    return it->second;
}

// p-grid for phase curves: log-spaced on (0, 1/2] to resolve the slope at the
// origin, uniform above.
std::vector<double> curve_p_grid(int points) {
    std::vector<double> ps;
    ps.reserve(points);
    int n_log = points / 2;
    int n_lin = points - n_log;
    double lo = 1e-4, mid = 0.5, hi = 0.995;
    for (int i = 0; i < n_log; ++i)
        ps.push_back(lo * std::pow(mid / lo,
                                   static_cast<double>(i) / std::max(1, n_log - 1)));
    for (int i = 1; i <= n_lin; ++i)
        ps.push_back(mid + (hi - mid) * static_cast<double>(i) / n_lin);
    return ps;
}

PointList sampled_curve(const std::function<double(double)>& f, const std::vector<double>& xs) {
    PointList pts(xs.size());
    parallel::for_index(xs.size(), [&](size_t i) { pts[i] = {xs[i], f(xs[i])}; });
    return pts;
}

PointList uniform_gap(const std::function<double(double)>& f, double lo, double hi, int n) {
    PointList pts(n);
    parallel::for_index(static_cast<size_t>(n), [&](size_t i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        pts[i] = {x, f(x)};
    });
    return pts;
}

PointList build_points(const std::string& id, const std::map<std::string, double>& params,
                       int points) {
    if (points < 2) throw std::invalid_argument("emit: need at least 2 points");
    if (id == "upper-q") return sampled_curve(upper_q_curve, curve_p_grid(points));
    if (id == "lower-q") return sampled_curve(lower_q_curve, curve_p_grid(points));
    if (id == "ut-boundary") {
        // Not a function of p: emitted as (p(q), q) in path order along q.
        PointList pts(points);
        parallel::for_index(static_cast<size_t>(points), [&](size_t i) {
            double q = 0.005 + (0.995 - 0.005) * static_cast<double>(i) / (points - 1);
            pts[i] = {ut_boundary_k3(q), q};
        });
        return pts;
    }
    if (id == "diagonal") {
        PointList pts(points);
        for (int i = 0; i < points; ++i) {
            double x = static_cast<double>(i) / (points - 1);
            pts[i] = {x, x};
        }
        return pts;
    }
    if (id == "lt-k3") {
        double p = require_param(params, "p");
        double q = require_param(params, "q");
        return uniform_gap([&](double x) { return lt_k3_gap(p, q, x); }, 0.0, p, points);
    }
    if (id == "lt-h-k3") {
        double r = require_param(params, "r");
        return uniform_gap([&](double x) { return lt_h_k3_gap(r, x); }, 0.0, 1.0, points);
    }
    if (id == "h-exp") {
        double r = require_param(params, "r");
        return uniform_gap([&](double x) { return h_exp_gap(r, x); }, 1e-3, 1.0, points);
    }
    if (id == "bip") {
        double p = require_param(params, "p");
        double q = require_param(params, "q");
        AdmissibleInterval iv = bip_admissible(p, q);
        return uniform_gap([&](double x) { return bip_gap(p, q, x); }, iv.lo, iv.hi, points);
    }
    if (id == "bip-sparse") {
        double r = require_param(params, "r");
        AdmissibleInterval iv = bip_admissible_sparse(r);
        return uniform_gap([&](double x) { return bip_gap_sparse(r, x); }, iv.lo, iv.hi,
                           points);
    }
    throw std::invalid_argument("emit: unknown identifier '" + id + "'");
}

} // namespace

void emit_to_stream(const std::string& id, const std::map<std::string, double>& params,
                    int points, std::ostream& out) {
    for (const auto& [x, y] : build_points(id, params, points))
        out << format_double(x) << ' ' << format_double(y) << '\n';
}

void emit_file(const std::string& id, const std::map<std::string, double>& params, int points,
               const std::string& path) {
    // Compute first: a bad identifier or parameter must not leave a file behind.
    PointList pts = build_points(id, params, points);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit: cannot open '" + path + "' for writing");
    for (const auto& [x, y] : pts) out << format_double(x) << ' ' << format_double(y) << '\n';
    if (!out.good()) throw std::runtime_error("emit: write to '" + path + "' failed");
}

std::vector<std::string> registered_emitters() {
    return {"upper-q", "lower-q", "ut-boundary", "diagonal",
            "lt-k3",   "lt-h-k3", "h-exp",       "bip",
            "bip-sparse"};
}

} // namespace lowtail
