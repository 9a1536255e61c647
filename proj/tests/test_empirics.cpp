#include "lowtail/empirics.hpp"

#include "lowtail/numeric.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <sstream>

using namespace lowtail;
using doctest::Approx;

TEST_CASE("complete and empty graphs give the exact densities") {
    Graph k3 = Graph::complete(3);
    CHECK(sample_subgraph_density(k3, 3, 1.0, 1) == Approx(6.0 / 27.0).epsilon(1e-15));
    CHECK(sample_subgraph_density(k3, 25, 0.0, 1) == 0.0);
    CHECK(sample_subgraph_density(k3, 25, 1.0, 1) ==
          Approx(25.0 * 24 * 23 / (25.0 * 25 * 25)).epsilon(1e-15));
}

TEST_CASE("homomorphism count equals six times the triangle count") {
    Graph k3 = Graph::complete(3);
    std::mt19937_64 seeds(99);
    for (int rep = 0; rep < 20; ++rep) {
        BitAdjacency g = sample_gnp(30, 0.4, seeds());
        CHECK(hom_count(k3, g) == 6.0 * triangle_count(g));
    }
}

TEST_CASE("edge density matches its expectation under the map-counting convention") {
    Graph k2 = Graph::complete(2);
    const int n = 50;
    const double p = 0.35;
    const int samples = 2000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < samples; ++i) {
        double t = sample_subgraph_density(k2, n, p, 1000 + i);
        sum += t;
        sumsq += t * t;
    }
    double mean = sum / samples;
    double sd = std::sqrt((sumsq / samples - mean * mean) / samples);
    // hom(K2, G) = 2 e(G), so E t = p (n-1) / n
    double expected = p * (n - 1) / n;
    CHECK(std::abs(mean - expected) <= 3.0 * sd + 1e-12);
}

TEST_CASE("density sampling is deterministic in the seed") {
    Graph c4 = Graph::cycle(4);
    CHECK(sample_subgraph_density(c4, 40, 0.3, 777) ==
          sample_subgraph_density(c4, 40, 0.3, 777));
    CHECK(sample_subgraph_density(c4, 40, 0.3, 777) !=
          sample_subgraph_density(c4, 40, 0.3, 778));
}

TEST_CASE("budget envelope is enforced") {
    Graph k3 = Graph::complete(3);
    CHECK_THROWS_AS(sample_subgraph_density(Graph::cycle(6), 20, 0.5, 1), BudgetError);
    CHECK_THROWS_AS(sample_subgraph_density(k3, 2, 0.5, 1), std::invalid_argument);
    BitAdjacency big(300);
    CHECK_THROWS_AS(hom_count(k3, big), BudgetError);
}

TEST_CASE("tail estimates: extremes and the Wilson interval") {
    Graph k3 = Graph::complete(3);
    // deterministic complete graph: the density never drops below threshold
    TailEstimate never = lower_tail_estimate(k3, 20, 1.0, 0.9, 200, 5);
    CHECK(never.hits == 0);
    CHECK(never.censored);
    CHECK(never.ci_hi > 0.0);
    CHECK(never.ci_hi < 0.05);
    CHECK(never.log_prob == -std::numeric_limits<double>::infinity());

    // empty graph: always below threshold
    TailEstimate always = lower_tail_estimate(k3, 20, 0.0, 0.5, 200, 5);
    CHECK(always.hits == 200);
    CHECK(always.p_hat == 1.0);
    CHECK(always.ci_lo > 0.95);

    // threshold at q = p: the density concentrates near p^3, so the event has
    // substantial mass on both sides
    TailEstimate median = lower_tail_estimate(k3, 40, 0.5, 0.5, 400, 5);
    CHECK(median.p_hat > 0.1);
    CHECK(median.p_hat < 0.9);
    CHECK(median.ci_lo <= median.p_hat);
    CHECK(median.p_hat <= median.ci_hi);
}

TEST_CASE("common random numbers make the tail monotone in the threshold") {
    Graph k3 = Graph::complete(3);
    std::vector<double> qs{0.40, 0.43, 0.46, 0.49, 0.52};
    auto grid = lower_tail_grid(k3, 30, 0.55, qs, 500, 31);
    for (size_t i = 1; i < grid.size(); ++i) CHECK(grid[i - 1].hits <= grid[i].hits);
    // identical seeds give identical counts
    auto again = lower_tail_grid(k3, 30, 0.55, qs, 500, 31);
    for (size_t i = 0; i < grid.size(); ++i) CHECK(grid[i].hits == again[i].hits);
}

TEST_CASE("CSV row carries the predicted rate") {
    Graph k3 = Graph::complete(3);
    TailEstimate est = lower_tail_estimate(k3, 20, 0.6, 0.5, 100, 9, 0.01);
    CHECK(est.predicted_rate == Approx(0.5 * 20 * 20 * 0.01).epsilon(1e-12));
    CHECK(tail_csv_header() == "n,p,q,trials,hits,p_hat,ci_lo,ci_hi,predicted_rate");
    std::string row = tail_csv_row(est);
    int commas = 0;
    for (char ch : row) commas += ch == ',';
    CHECK(commas == 8);
    std::istringstream parse(row);
    std::string field;
    std::getline(parse, field, ',');
    CHECK(field == "20");
}
