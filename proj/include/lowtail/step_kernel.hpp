#pragma once

#include "lowtail/graph.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace lowtail {

inline constexpr double kDefaultDensityBudget = 1e8;

// Symmetric step function on [0,1]^2: k blocks with positive measures summing
// to one and an exactly symmetric k x k value matrix. Values may be signed.
// Immutable after construction; safe to share across threads.
class StepKernel {
public:
    StepKernel(std::vector<double> measures, std::vector<std::vector<double>> values);

    static StepKernel constant(double value);

    int block_count() const noexcept { return static_cast<int>(measures_.size()); }
    const std::vector<double>& measures() const noexcept { return measures_; }
    double measure(int i) const { return measures_.at(i); }
    double value(int i, int j) const { return values_.at(i).at(j); }
    const std::vector<std::vector<double>>& values() const noexcept { return values_; }

    double min_value() const;
    double max_value() const;

    // Entrywise application of f; block structure unchanged.
    StepKernel map(const std::function<double(double)>& f) const;

    // E[f(W)] = sum_ij mu_i mu_j f(v_ij). NaN from f is a domain error; an
    // infinity produced by f (a limit convention such as log 0) propagates.
    double expect(const std::function<double(double)>& f) const;

    // Relabels blocks by perm (new index i holds old block perm[i]).
    StepKernel permuted(const std::vector<int>& perm) const;

    // Splits block i into two equal halves with copied values.
    StepKernel with_split_block(int i) const;

private:
    std::vector<double> measures_;
    std::vector<std::vector<double>> values_;
};

// Rewrites both kernels on the common refinement of their block partitions.
std::pair<StepKernel, StepKernel> common_refinement(const StepKernel& a, const StepKernel& b);

StepKernel add(const StepKernel& a, const StepKernel& b);
StepKernel subtract(const StepKernel& a, const StepKernel& b);
StepKernel scale(const StepKernel& a, double factor);

// A step kernel whose values lie in [0,1]. Values within 1e-12 of the range
// are clamped; anything further out is rejected.
class StepGraphon : public StepKernel {
public:
    explicit StepGraphon(StepKernel kernel);
    StepGraphon(std::vector<double> measures, std::vector<std::vector<double>> values);

    static StepGraphon constant(double value);

    // Two-block graphon: value a on the diagonal blocks [0,1/2]^2 and
    // (1/2,1]^2, value b off-diagonal.
    static StepGraphon bip(double a, double b);
};

// Homomorphism density t(H, W): the exact sum over all block assignments of
// V(H), each weighted by the product of block measures. Signed kernels are
// allowed, so the result may be negative. Throws BudgetError when the number
// of terms k^{v(H)} exceeds the budget.
double density(const Graph& h, const StepKernel& w, double budget = kDefaultDensityBudget);

// Functional derivative t'(H, W): the step kernel D on W's blocks with
// t(H, W + d U) = t(H, W) + d E[D U] + O(d^2) for symmetric U. Satisfies
// E[D W] = e(H) t(H, W). Work is e(H) k^{v(H)} terms, checked against budget.
StepKernel functional_derivative(const Graph& h, const StepGraphon& w,
                                 double budget = kDefaultDensityBudget);

} // namespace lowtail
