#pragma once

#include "lowtail/step_kernel.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace lowtail {

// A two-block graphon that strictly beats the constant graphon in the
// lower-tail problem while respecting the density constraint.
struct BreakingWitness {
    StepGraphon graphon;    // BIP_{a,b}
    double a = 0.0;
    double b = 0.0;
    double constant_value = 0.0; // I_p(q) or h(r)
    double witness_value = 0.0;  // E[cost(witness)], revalidated by enumeration
    double margin = 0.0;         // constant_value - witness_value
    double constraint_value = 0.0; // t(K_3, witness), revalidated by enumeration
    double target_value = 0.0;     // q^3 or r^3
};

struct AdmissibleInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// Thrown when a gap function is evaluated outside its admissible interval;
// carries the interval endpoints.
class AdmissibleRangeError : public std::domain_error {
public:
    AdmissibleRangeError(const std::string& what, AdmissibleInterval interval)
        : std::domain_error(what), interval_(interval) {}
    AdmissibleInterval interval() const noexcept { return interval_; }

private:
    AdmissibleInterval interval_;
};

// The partner value b(x) = sqrt((4q^3 - x^3) / (3x)) that makes
// t(K_3, BIP_{x, b(x)}) equal q^3 exactly.
double bip_partner(double q, double x);

// Admissible x-range [x_min, q] on which b(x) <= cap; x_min is located by
// bisection to 1e-12. cap is p for the finite-p family and 1 for the sparse
// family.
AdmissibleInterval bip_admissible(double p, double q);
AdmissibleInterval bip_admissible_sparse(double r);

// Gap of the constrained two-block family at finite p:
//   f(x) = I_p(x)/2 + I_p(b(x))/2 - I_p(q).
// Negative values certify symmetry breaking at (p, q).
double bip_gap(double p, double q, double x);

// Sparse analogue: f(x) = h(x)/2 + h(b(x))/2 - h(r).
double bip_gap_sparse(double r, double x);

struct BreakingOptions {
    int grid_points = 10000;       // seed grid for the 1-D gap minimisation
    double search_xtol = 1e-12;
    double margin_threshold = 1e-10; // a witness must beat the constant by this
};

// Searches the two-block family for a breaking witness at (p, q): first the
// zero-density witness BIP_{0,p}, then the constrained family by seeded
// golden-section minimisation. Returns the best witness found, if any.
std::optional<BreakingWitness> find_breaking(double p, double q,
                                             const BreakingOptions& opts = {});

// Sparse search at r: tries BIP_{0,1}, the constrained sparse family, and the
// scaling construction from the critical triple.
std::optional<BreakingWitness> find_breaking_sparse(double r,
                                                    const BreakingOptions& opts = {});

// The critical triple (a1, b1, r1): r1 is the largest r for which the sparse
// two-block gap reaches zero inside (0, r); a1 is the location and b1 its
// partner. r1 = 0.209... Computed once and cached.
struct CriticalTriple {
    double a1 = 0.0;
    double b1 = 0.0;
    double r1 = 0.0;
    double gap_at_triple = 0.0; // sparse gap at a1 (<= 0, within bisection slack)
};

const CriticalTriple& k3_critical_triple();

// Scales the critical triple to (s a1, s b1) with s = r / r1 < 1. The density
// constraint transfers exactly by degree-3 homogeneity and the margin is
// strictly positive for r < r1.
BreakingWitness scale_witness(const CriticalTriple& critical, double r);

} // namespace lowtail
