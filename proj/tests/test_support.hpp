#pragma once

#include "lowtail/graph.hpp"
#include "lowtail/step_kernel.hpp"

#include <random>
#include <vector>

namespace lowtail::testing {

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
}

inline std::vector<double> random_measures(std::mt19937_64& rng, int k) {
    std::vector<double> m(k);
    double sum = 0.0;
    for (double& v : m) {
        v = 0.05 + uniform(rng);
        sum += v;
    }
    for (double& v : m) v /= sum;
    return m;
}

inline std::vector<std::vector<double>> random_symmetric(std::mt19937_64& rng, int k,
                                                         double lo, double hi) {
    std::vector<std::vector<double>> vals(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) vals[i][j] = vals[j][i] = uniform(rng, lo, hi);
    return vals;
}

inline StepKernel random_kernel(std::mt19937_64& rng, int k, double lo = -1.0, double hi = 1.0) {
    return StepKernel(random_measures(rng, k), random_symmetric(rng, k, lo, hi));
}

inline StepGraphon random_graphon(std::mt19937_64& rng, int k, double lo = 0.0, double hi = 1.0) {
    return StepGraphon(random_measures(rng, k), random_symmetric(rng, k, lo, hi));
}

// Brute-force density: plain nested iteration over all block assignments,
// multiplying measures and edge values directly. Independent of the library's
// enumeration path; used as the oracle for frozen density values.
inline double brute_density(const Graph& h, const StepKernel& w) {
    const int v = h.vertex_count();
    const int k = w.block_count();
    std::vector<int> assign(v, 0);
    double total = 0.0;
    for (;;) {
        double term = 1.0;
        for (int i = 0; i < v; ++i) term *= w.measure(assign[i]);
        for (auto [a, b] : h.edges()) term *= w.value(assign[a], assign[b]);
        total += term;
        int pos = v - 1;
        while (pos >= 0 && assign[pos] == k - 1) assign[pos--] = 0;
        if (pos < 0) break;
        ++assign[pos];
    }
    return total;
}

} // namespace lowtail::testing
