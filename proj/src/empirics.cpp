#include "lowtail/empirics.hpp"

#include "lowtail/numeric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lowtail {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
    return (rng() >> 11) * 0x1.0p-53; // 53-bit mantissa, identical on all platforms
}

constexpr int kMaxPatternVertices = 5;
constexpr int kMaxSampleVertices = 200;

} // namespace

BitAdjacency::BitAdjacency(int n)
    : n_(n), words_((n + 63) / 64), bits_(static_cast<size_t>(n) * words_, 0) {}

bool BitAdjacency::get(int u, int v) const {
    return (bits_[static_cast<size_t>(u) * words_ + v / 64] >> (v % 64)) & 1ULL;
}

void BitAdjacency::set_edge(int u, int v) {
    bits_[static_cast<size_t>(u) * words_ + v / 64] |= 1ULL << (v % 64);
    bits_[static_cast<size_t>(v) * words_ + u / 64] |= 1ULL << (u % 64);
}

BitAdjacency sample_gnp(int n, double p, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_gnp: need n >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("sample_gnp: need p in [0,1]");
    BitAdjacency g(n);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (uniform01(rng) < p) g.set_edge(i, j);
    return g;
}

long long triangle_count(const BitAdjacency& g) {
    const int n = g.size();
    const int words = g.words();
    long long paths = 0; // ordered pairs summed over edges: 3x the triangle count
    for (int u = 0; u < n; ++u) {
        const std::uint64_t* ru = g.row(u);
        for (int v = u + 1; v < n; ++v) {
            if (!g.get(u, v)) continue;
            const std::uint64_t* rv = g.row(v);
            int common = 0;
            for (int w = 0; w < words; ++w) common += std::popcount(ru[w] & rv[w]);
            paths += common;
        }
    }
    return paths / 3;
}

namespace {

// BFS order with placed-neighbour lists, so every new vertex is constrained by
// as many already-placed vertices as possible.
struct PatternOrder {
    std::vector<int> order;
    std::vector<std::vector<int>> placed_neighbours; // indices into `order`
};

PatternOrder pattern_order(const Graph& h) {
    const int v = h.vertex_count();
    std::vector<std::vector<int>> adj(v);
    for (auto [a, b] : h.edges()) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    PatternOrder out;
    std::vector<bool> seen(v, false);
    auto deg_max = [&](auto pred) {
        int best = -1;
        for (int i = 0; i < v; ++i)
            if (!seen[i] && pred(i) && (best == -1 || adj[i].size() > adj[best].size()))
                best = i;
        return best;
    };
    while (static_cast<int>(out.order.size()) < v) {
        // Prefer a vertex adjacent to one already placed.
        int next = deg_max([&](int i) {
            for (int j : adj[i])
                if (seen[j]) return true;
            return false;
        });
        if (next == -1) next = deg_max([](int) { return true; });
        seen[next] = true;
        out.order.push_back(next);
    }
    std::vector<int> pos(v);
    for (int i = 0; i < v; ++i) pos[out.order[i]] = i;
    out.placed_neighbours.resize(v);
    for (auto [a, b] : h.edges()) {
        int pa = pos[a], pb = pos[b];
        out.placed_neighbours[std::max(pa, pb)].push_back(std::min(pa, pb));
    }
    return out;
}

} // namespace

double hom_count(const Graph& h, const BitAdjacency& g) {
    const int vh = h.vertex_count();
    const int n = g.size();
    if (vh > kMaxPatternVertices || n > kMaxSampleVertices)
        throw BudgetError("hom_count: enumeration feasible only for v(H) <= 5, n <= 200");

    PatternOrder po = pattern_order(h);
    const int words = g.words();
    std::vector<std::uint64_t> cand(static_cast<size_t>(vh) * words);
    std::vector<int> image(vh, 0);

    double count = 0.0;
    std::uint64_t full_tail = n % 64 ? (1ULL << (n % 64)) - 1 : ~0ULL;

    std::function<void(int)> dfs = [&](int level) {
        if (level == vh) {
            count += 1.0;
            return;
        }
        const auto& preds = po.placed_neighbours[level];
        if (preds.empty()) {
            for (int x = 0; x < n; ++x) {
                image[level] = x;
                dfs(level + 1);
            }
            return;
        }
        std::uint64_t* c = cand.data() + static_cast<size_t>(level) * words;
        const std::uint64_t* first = g.row(image[preds[0]]);
        for (int w = 0; w < words; ++w) c[w] = first[w];
        for (size_t i = 1; i < preds.size(); ++i) {
            const std::uint64_t* r = g.row(image[preds[i]]);
            for (int w = 0; w < words; ++w) c[w] &= r[w];
        }
        c[words - 1] &= full_tail;
        for (int w = 0; w < words; ++w) {
            std::uint64_t bits = c[w];
            while (bits) {
                int b = std::countr_zero(bits);
                bits &= bits - 1;
                image[level] = w * 64 + b;
                dfs(level + 1);
            }
        }
    };
    dfs(0);
    return count;
}

double sample_subgraph_density(const Graph& h, int n, double p, std::uint64_t seed) {
    if (n < h.vertex_count())
        throw std::invalid_argument("sample_subgraph_density: need n >= v(H)");
    BitAdjacency g = sample_gnp(n, p, seed);
    const int vh = h.vertex_count();
    double hom;
    if (vh == 3 && h.edge_count() == 3) {
        hom = 6.0 * static_cast<double>(triangle_count(g)); // 6 ordered maps per triangle
    } else {
        hom = hom_count(h, g);
    }
    return hom / std::pow(static_cast<double>(n), vh);
}

namespace {

constexpr double kZ95 = 1.959963984540054;

void fill_wilson(TailEstimate& e) {
    double nt = static_cast<double>(e.trials);
    double ph = static_cast<double>(e.hits) / nt;
    e.p_hat = ph;
    double z2 = kZ95 * kZ95;
    double denom = 1.0 + z2 / nt;
    double centre = (ph + z2 / (2.0 * nt)) / denom;
    double half = kZ95 * std::sqrt(ph * (1.0 - ph) / nt + z2 / (4.0 * nt * nt)) / denom;
    e.ci_lo = std::max(0.0, centre - half);
    e.ci_hi = std::min(1.0, centre + half);
    e.censored = e.hits == 0;
    e.log_prob = e.censored ? -std::numeric_limits<double>::infinity() : std::log(ph);
}

} // namespace

std::vector<TailEstimate> lower_tail_grid(const Graph& h, int n, double p,
                                          const std::vector<double>& qs, long long trials,
                                          std::uint64_t seed,
                                          const std::vector<double>& lt_values) {
    if (trials < 1) throw std::invalid_argument("lower_tail_grid: need trials >= 1");
    if (qs.empty()) throw std::invalid_argument("lower_tail_grid: need at least one threshold");
    const int m = h.edge_count();
    std::vector<double> thresholds(qs.size());
    for (size_t i = 0; i < qs.size(); ++i) thresholds[i] = std::pow(qs[i], m);

    // Chunked trials with per-trial seeds; integer hit counts add up in any
    // order, so the result is thread-count independent.
    int chunks = std::min<long long>(trials, 8LL * parallel::max_threads());
    std::vector<std::vector<long long>> chunk_hits(chunks,
                                                   std::vector<long long>(qs.size(), 0));
    parallel::for_index(static_cast<size_t>(chunks), [&](size_t c) {
        long long begin = trials * static_cast<long long>(c) / chunks;
        long long end = trials * static_cast<long long>(c + 1) / chunks;
        for (long long trial = begin; trial < end; ++trial) {
            std::uint64_t trial_seed =
                splitmix64(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1));
            double t = sample_subgraph_density(h, n, p, trial_seed);
            for (size_t i = 0; i < thresholds.size(); ++i)
                if (t <= thresholds[i]) ++chunk_hits[c][i];
        }
    });

    std::vector<TailEstimate> out(qs.size());
    for (size_t i = 0; i < qs.size(); ++i) {
        TailEstimate e;
        e.n = n;
        e.p = p;
        e.q = qs[i];
        e.threshold_ratio = qs[i] / p;
        e.trials = trials;
        for (int c = 0; c < chunks; ++c) e.hits += chunk_hits[c][i];
        fill_wilson(e);
        double lt = i < lt_values.size() ? lt_values[i]
                                         : std::numeric_limits<double>::quiet_NaN();
        e.predicted_rate = 0.5 * static_cast<double>(n) * n * lt;
        out[i] = e;
    }
    return out;
}

TailEstimate lower_tail_estimate(const Graph& h, int n, double p, double q, long long trials,
                                 std::uint64_t seed, double lt_value) {
    return lower_tail_grid(h, n, p, {q}, trials, seed, {lt_value}).front();
}

std::string tail_csv_header() {
    return "n,p,q,trials,hits,p_hat,ci_lo,ci_hi,predicted_rate";
}

std::string tail_csv_row(const TailEstimate& e) {
    std::ostringstream out;
    out << e.n << ',' << format_double(e.p) << ',' << format_double(e.q) << ',' << e.trials
        << ',' << e.hits << ',' << format_double(e.p_hat) << ',' << format_double(e.ci_lo)
        << ',' << format_double(e.ci_hi) << ',' << format_double(e.predicted_rate);
    return out.str();
}

} // namespace lowtail
