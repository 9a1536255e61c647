#pragma once

#include "lowtail/graph.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace lowtail {

// Outcome of a replica-symmetry check. "certified" means the sufficient
// tangent-line condition holds, so the constant graphon is the unique
// minimiser at these parameters. "inconclusive" only means the condition
// failed; it never claims symmetry breaking.
struct Certificate {
    enum class Verdict { certified, inconclusive };

    Verdict verdict = Verdict::inconclusive;
    std::string condition_id;
    std::map<std::string, double> params;
    std::vector<std::array<double, 2>> evidence; // (x, gap) samples
    double min_gap = 0.0;
    std::string note;

    bool certified() const { return verdict == Verdict::certified; }
};

struct CertifyOptions {
    double tol = 1e-12;       // gap values down to -tol still certify
    int evidence_points = 1024;
    double search_xtol = 1e-10;
};

// Gap of the triangle lower-tail condition:
//   f(x) = I_p(x) - I_p(q) + (I_p'(q)/2q) ((2q-x)_+^2 - q^2),
// nonnegative on [0,p] iff the condition holds; f(q) = f'(q) = 0.
double lt_k3_gap(double p, double q, double x);

// Gap of the triangle upper-tail convex-minorant condition:
//   g(x) = I_p(x) - I_p(q) - (I_p'(q)/2q) (x^2 - q^2), checked on [0,1].
double ut_k3_gap(double p, double q, double x);

// Sparse analogue of lt_k3_gap:
//   f(x) = h(x) - h(r) + (h'(r)/2r) ((2r-x)_+^2 - r^2) on [0,1].
double lt_h_k3_gap(double r, double x);

// Logarithmic tangent gap used by the general-H sparse certificate:
//   f(x) = h(x) - h(r) - r h'(r) (log x - log r), x in (0,1].
double h_exp_gap(double r, double x);

// Lower tail for triangles at finite p: requires 0 < q <= p < 1. For p <= 1/2
// the condition on [0,p] reduces to a single evaluation at x = p; for p > 1/2
// the gap is minimised exactly over its convex/concave pieces.
Certificate lt_k3_certificate(double p, double q, const CertifyOptions& opts = {});

// Upper tail for triangles: requires 0 < p <= q < 1.
Certificate ut_k3_certificate(double p, double q, const CertifyOptions& opts = {});

// Sparse lower tail for triangles: certified iff the gap at x = 1 is
// nonnegative, which happens exactly for r >= 0.466...
Certificate lt_h_k3_certificate(double r, const CertifyOptions& opts = {});

// Sparse lower tail for arbitrary H with m >= 1 edges: computes
// c = r^{m r^{-m}} and certifies iff r >= 1/e and the logarithmic tangent gap
// at x = c is nonnegative.
Certificate lt_h_general_certificate(const Graph& h, double r, const CertifyOptions& opts = {});

} // namespace lowtail
