#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace lowtail {

// Thrown when an exact enumeration would exceed its term budget. Results are
// never silently approximated.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Compensated (Kahan) accumulator. Keeps the 1e-12 identity tests honest when
// summing up to ~1e8 terms.
class KahanSum {
public:
    void add(double x) noexcept {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const noexcept { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

// Bracketed bisection. Requires f(lo) and f(hi) of opposite sign (zero counts
// as either). Returns the midpoint of the final bracket of width <= xtol.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol, int max_iter = 300);

// Golden-section minimisation of a unimodal function on [a, b]. Returns the
// abscissa of the minimum located to xtol.
double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double xtol);

namespace parallel {

int max_threads();
void set_max_threads(int n);

// Runs fn(i) for i in [0, n), possibly across threads. Callers write results
// into preallocated slots indexed by i, so the outcome does not depend on the
// schedule.
void for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace parallel

} // namespace lowtail
