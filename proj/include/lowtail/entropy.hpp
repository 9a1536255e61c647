#pragma once

#include <optional>
#include <string>

namespace lowtail {

// x log x with the limit convention 0 log 0 = 0.
double xlogx(double x);

// Relative entropy of Bernoulli(x) against Bernoulli(p),
//   I_p(x) = x log(x/p) + (1-x) log((1-x)/(1-p)),
// with endpoint conventions I_p(0) = log(1/(1-p)) and I_p(1) = log(1/p).
// order 0 needs x in [0,1]; orders 1 and 2 need x in (0,1).
double relative_entropy(double p, double x, int order = 0);

// Sparse cost h(x) = x log x - x + 1 with h(0) = 1; h'(x) = log x, h''(x) = 1/x.
// order 0 needs x >= 0; orders 1 and 2 need x > 0.
double sparse_entropy(double x, int order = 0);

// A packaged cost function: either I_p for a fixed p in (0,1), or h.
class EntropyFn {
public:
    static EntropyFn finite(double p);
    static EntropyFn sparse();

    double operator()(double x, int order = 0) const;
    bool is_sparse() const noexcept { return !p_.has_value(); }
    double p() const; // throws for the sparse kind
    std::string name() const;

private:
    explicit EntropyFn(std::optional<double> p) : p_(p) {}
    std::optional<double> p_;
};

} // namespace lowtail
