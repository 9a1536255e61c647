#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lowtail {

// Constants of the sparse problem: r_upper = 0.466... (boundary of the
// certified region for triangles), r_lower = 0.209... (critical value of the
// two-block breaking family), r_trivial = 0.186... (where h(r) = 1/2, below
// which the zero-density witness works), and the table r_m per edge count.
struct SparseConstants {
    double r_upper = 0.0;
    double r_lower = 0.0;
    double r_trivial = 0.0;
    std::vector<std::pair<int, double>> r_m_table;
};

// Boundary of the certified region for the triangle lower tail. For p <= 1/2
// this solves I_p(q) + q I_p'(q)/2 = 0 by bisection to 1e-10; for larger p it
// bisects on the certificate verdict.
double upper_q_curve(double p);

// Supremum of q for which the two-block family breaks symmetry at (p, q),
// located by bisection on the breaking predicate to 1e-8.
double lower_q_curve(double p);

// Upper-tail boundary for triangles: p = 1 / (1 + (1/q - 1)^{1/(1-2q)}), with
// the analytic limit 1/(1+e^2) at q = 1/2.
double ut_boundary_k3(double q);

// Unique root in (0,1) of h(c) = h(r) + r h'(r)(log c - log r) with
// c = r^{m r^{-m}}; the sparse certificate for any H with m edges applies for
// r >= r_m.
double r_m(int m);

SparseConstants sparse_constants(
    const std::vector<int>& ms = {3, 4, 5, 6, 7, 8, 9, 10, 20, 100});

// Reference rate min(delta^{2/3}, 2 delta / 3) for sparse upper-tail plots.
double ut_sparse_rate(double delta);

// Plot-data emission. Files are ASCII, one "x y" pair per line, each number
// in shortest round-trip form. Registered identifiers: curves "upper-q",
// "lower-q", "ut-boundary", "diagonal" and gap functions "lt-k3", "lt-h-k3",
// "h-exp", "bip", "bip-sparse". Gap emitters take parameters p/q or r.
// Curves are sampled over p (the ut-boundary, not a function of p, is emitted
// in path order along its q parameter).
void emit_to_stream(const std::string& id, const std::map<std::string, double>& params,
                    int points, std::ostream& out);
void emit_file(const std::string& id, const std::map<std::string, double>& params,
               int points, const std::string& path);
std::vector<std::string> registered_emitters();

} // namespace lowtail
