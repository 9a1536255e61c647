#pragma once

#include "lowtail/graph.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace lowtail {

// Adjacency of a sampled graph as bit rows, for fast neighbourhood
// intersections.
class BitAdjacency {
public:
    explicit BitAdjacency(int n);
    int size() const noexcept { return n_; }
    bool get(int u, int v) const;
    void set_edge(int u, int v);
    const std::uint64_t* row(int u) const { return bits_.data() + static_cast<size_t>(u) * words_; }
    int words() const noexcept { return words_; }

private:
    int n_;
    int words_;
    std::vector<std::uint64_t> bits_;
};

// G(n, p) with a platform-independent bit stream; deterministic given seed.
BitAdjacency sample_gnp(int n, double p, std::uint64_t seed);

// Number of triangles, via neighbourhood intersections over edges.
long long triangle_count(const BitAdjacency& g);

// Number of homomorphisms from h into g (ordered, possibly non-injective
// maps preserving edges), by pruned enumeration. Feasible envelope:
// v(h) <= 5 and n <= 200; beyond that a BudgetError is thrown.
double hom_count(const Graph& h, const BitAdjacency& g);

// t(H, G) = hom(H, G) / n^{v(H)} for one sampled G(n, p).
double sample_subgraph_density(const Graph& h, int n, double p, std::uint64_t seed);

struct TailEstimate {
    int n = 0;
    double p = 0.0;
    double q = 0.0;            // density threshold parameter: event is t <= q^{e(H)}
    double threshold_ratio = 0.0; // q / p
    long long trials = 0;
    long long hits = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;        // 95% Wilson interval on the probability
    double ci_hi = 0.0;
    double log_prob = 0.0;     // log p_hat; censored (-inf) when hits == 0
    bool censored = false;
    double predicted_rate = 0.0; // (n^2 / 2) times the variational value, if given
};

// Monte-Carlo estimate of P(t(H, G(n,p)) <= q^{e(H)}). Trials use independent
// per-trial seeds derived from `seed`, so the estimate does not depend on
// thread count. lt_value, when finite, is the variational value used to fill
// predicted_rate.
TailEstimate lower_tail_estimate(
    const Graph& h, int n, double p, double q, long long trials, std::uint64_t seed,
    double lt_value = std::numeric_limits<double>::quiet_NaN());

// Same, for a grid of thresholds with common random numbers: each sampled
// graph is tested against every q, so the hit counts are monotone in q by
// construction.
std::vector<TailEstimate> lower_tail_grid(const Graph& h, int n, double p,
                                          const std::vector<double>& qs, long long trials,
                                          std::uint64_t seed,
                                          const std::vector<double>& lt_values = {});

std::string tail_csv_header();
std::string tail_csv_row(const TailEstimate& e);

} // namespace lowtail
