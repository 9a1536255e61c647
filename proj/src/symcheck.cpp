#include "lowtail/symcheck.hpp"

#include "lowtail/entropy.hpp"
#include "lowtail/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace lowtail {

namespace {

double pos_part(double a) { return a > 0.0 ? a : 0.0; }

// Splits [lo, hi] at the points where x(1-x) crosses curvature_scale and
// returns the exact minimum of f over the interval. On each resulting piece
// the second derivative of f has a single sign: x(1-x) < curvature_scale
// means convex (minimum located by golden section), otherwise concave
// (minimum at an endpoint). Pieces entirely right of `linear_from` are convex
// regardless (there f has a plain convex tail).
double piecewise_min(const std::function<double(double)>& f, double lo, double hi,
                     double curvature_scale, double linear_from, double xtol) {
    std::vector<double> cuts{lo, hi};
    if (curvature_scale < 0.25) {
        double root = std::sqrt(1.0 - 4.0 * curvature_scale);
        double x_minus = 0.5 * (1.0 - root);
        double x_plus = 0.5 * (1.0 + root);
        for (double x : {x_minus, x_plus})
            if (x > lo && x < hi && x < linear_from) cuts.push_back(x);
    }
    if (linear_from > lo && linear_from < hi) cuts.push_back(linear_from);
    std::sort(cuts.begin(), cuts.end());

    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (b - a < 1e-15) continue;
        double mid = 0.5 * (a + b);
        bool convex = mid >= linear_from || mid * (1.0 - mid) < curvature_scale;
        best = std::min({best, f(a), f(b)});
        if (convex) {
            double xm = golden_section_min(f, a, b, xtol);
            best = std::min(best, f(xm));
        }
    }
    return best;
}

std::vector<std::array<double, 2>> sample_gap(const std::function<double(double)>& f,
                                              double lo, double hi, int n) {
    std::vector<std::array<double, 2>> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        double x = lo + (hi - lo) * i / (n - 1);
        out.push_back({x, f(x)});
    }
    return out;
}

double min_of(const std::vector<std::array<double, 2>>& evidence) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : evidence) m = std::min(m, e[1]);
    return m;
}

} // namespace

double lt_k3_gap(double p, double q, double x) {
    if (!(q > 0.0 && q <= p && p < 1.0))
        throw std::domain_error("lt_k3_gap: need 0 < q <= p < 1");
    double slope = relative_entropy(p, q, 1);
    double t = pos_part(2.0 * q - x);
    return relative_entropy(p, x) - relative_entropy(p, q) +
           slope / (2.0 * q) * (t * t - q * q);
}

double ut_k3_gap(double p, double q, double x) {
    if (!(p > 0.0 && p <= q && q < 1.0))
        throw std::domain_error("ut_k3_gap: need 0 < p <= q < 1");
    double slope = relative_entropy(p, q, 1);
    return relative_entropy(p, x) - relative_entropy(p, q) -
           slope / (2.0 * q) * (x * x - q * q);
}

double lt_h_k3_gap(double r, double x) {
    if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("lt_h_k3_gap: need 0 < r <= 1");
    if (!(x >= 0.0)) throw std::domain_error("lt_h_k3_gap: need x >= 0");
    double slope = std::log(r); // h'(r)
    double t = pos_part(2.0 * r - x);
    return sparse_entropy(x) - sparse_entropy(r) + slope / (2.0 * r) * (t * t - r * r);
}

double h_exp_gap(double r, double x) {
    if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("h_exp_gap: need 0 < r <= 1");
    if (!(x > 0.0)) throw std::domain_error("h_exp_gap: need x > 0");
    return sparse_entropy(x) - sparse_entropy(r) -
           r * std::log(r) * (std::log(x) - std::log(r));
}

Certificate lt_k3_certificate(double p, double q, const CertifyOptions& opts) {
    if (!(q > 0.0 && q <= p && p < 1.0))
        throw std::domain_error("lt_k3_certificate: need 0 < q <= p < 1");
    auto gap = [p, q](double x) { return lt_k3_gap(p, q, x); };

    Certificate cert;
    cert.condition_id = "lt-k3-tangent";
    cert.params = {{"p", p}, {"q", q}};

    bool ok;
    if (p <= 0.5) {
        // On this range the condition holds on all of [0,p] iff it holds at
        // x = p, so a single evaluation decides.
        ok = gap(p) >= -opts.tol;
        cert.note = "decided by the gap at x = p";
    } else {
        // Exact minimisation: where x < 2q the gap has curvature
        // 1/(x(1-x)) + I_p'(q)/q, so it is convex exactly where
        // x(1-x) < q/|I_p'(q)|; past 2q the gap is plainly convex.
        double slope = relative_entropy(p, q, 1); // <= 0 here
        double curvature_scale =
            slope == 0.0 ? std::numeric_limits<double>::infinity() : q / std::abs(slope);
        double min_val =
            piecewise_min(gap, 0.0, p, curvature_scale, std::min(2.0 * q, p), opts.search_xtol);
        ok = min_val >= -opts.tol;
        cert.note = "decided by exact piecewise minimisation on [0,p]";
    }
    cert.evidence = sample_gap(gap, 0.0, p, opts.evidence_points);
    cert.min_gap = std::min(min_of(cert.evidence), gap(p));
    ok = ok && cert.min_gap >= -opts.tol; // recorded evidence must agree
    cert.verdict = ok ? Certificate::Verdict::certified : Certificate::Verdict::inconclusive;
    return cert;
}

Certificate ut_k3_certificate(double p, double q, const CertifyOptions& opts) {
    if (!(p > 0.0 && p <= q && q < 1.0))
        throw std::domain_error("ut_k3_certificate: need 0 < p <= q < 1");
    auto gap = [p, q](double x) { return ut_k3_gap(p, q, x); };

    Certificate cert;
    cert.condition_id = "ut-k3-convex-minorant";
    cert.params = {{"p", p}, {"q", q}};

    double slope = relative_entropy(p, q, 1); // >= 0 here
    double curvature_scale =
        slope == 0.0 ? std::numeric_limits<double>::infinity() : q / slope;
    double min_val = piecewise_min(gap, 0.0, 1.0, curvature_scale, 1.0, opts.search_xtol);
    cert.note = "decided by exact piecewise minimisation on [0,1]";
    cert.evidence = sample_gap(gap, 0.0, 1.0, opts.evidence_points);
    cert.min_gap = std::min(min_of(cert.evidence), min_val);
    cert.verdict = cert.min_gap >= -opts.tol ? Certificate::Verdict::certified
                                             : Certificate::Verdict::inconclusive;
    return cert;
}

Certificate lt_h_k3_certificate(double r, const CertifyOptions& opts) {
    if (!(r > 0.0 && r <= 1.0))
        throw std::domain_error("lt_h_k3_certificate: need 0 < r <= 1");
    auto gap = [r](double x) { return lt_h_k3_gap(r, x); };

    Certificate cert;
    cert.condition_id = "lt-h-k3-tangent";
    cert.params = {{"r", r}};
    // The condition holds on all of [0,1] iff it holds at x = 1.
    cert.note = "decided by the gap at x = 1";
    cert.evidence = sample_gap(gap, 0.0, 1.0, opts.evidence_points);
    cert.min_gap = std::min(min_of(cert.evidence), gap(1.0));
    cert.verdict = gap(1.0) >= -opts.tol && cert.min_gap >= -opts.tol
                       ? Certificate::Verdict::certified
                       : Certificate::Verdict::inconclusive;
    return cert;
}

Certificate lt_h_general_certificate(const Graph& h, double r, const CertifyOptions& opts) {
    if (!(r > 0.0 && r < 1.0))
        throw std::domain_error("lt_h_general_certificate: need 0 < r < 1");
    int m = h.edge_count();
    if (m < 1) throw std::invalid_argument("lt_h_general_certificate: graph needs an edge");

    Certificate cert;
    cert.condition_id = "lt-h-log-tangent";
    cert.params = {{"r", r}, {"m", static_cast<double>(m)}};

    double log_r = std::log(r);
    if (-m * log_r > 700.0) {
        // r^{-m} overflows; the bound c = r^{m r^{-m}} is far below any useful
        // scale and the tangent condition cannot hold.
        cert.verdict = Certificate::Verdict::inconclusive;
        cert.note = "exponent m r^{-m} too large to evaluate; r is far below 1/e";
        cert.min_gap = -std::numeric_limits<double>::infinity();
        return cert;
    }
    double exponent = m * std::exp(-m * log_r); // m r^{-m}
    double log_c = exponent * log_r;
    double c = log_c < -745.0 ? 0.0 : std::exp(log_c);
    cert.params["c"] = c;

    // Gap of h(x) >= h(r) + r h'(r)(log x - log r) at x = c, written in terms
    // of log c so it stays finite when c underflows.
    double h_c = (c == 0.0 ? 0.0 : c * log_c) - c + 1.0;
    double gap_at_c = h_c - sparse_entropy(r) - r * log_r * (log_c - log_r);

    bool ok = r >= std::exp(-1.0) && gap_at_c >= -opts.tol;
    cert.note = r >= std::exp(-1.0)
                    ? "decided by the logarithmic tangent gap at x = c"
                    : "r below 1/e: the tangent condition does not propagate";

    // Evidence: the logarithmic tangent gap on [max(c, eps), 1], log-spaced.
    double lo = std::max(c, 1e-12);
    int n = opts.evidence_points;
    cert.evidence.reserve(n);
    for (int i = 0; i < n; ++i) {
        double x = lo * std::pow(1.0 / lo, static_cast<double>(i) / (n - 1));
        cert.evidence.push_back({x, h_exp_gap(r, x)});
    }
    cert.min_gap = std::min(gap_at_c, min_of(cert.evidence));
    ok = ok && cert.min_gap >= -opts.tol;
    cert.verdict = ok ? Certificate::Verdict::certified : Certificate::Verdict::inconclusive;
    return cert;
}

} // namespace lowtail
