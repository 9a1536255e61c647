#include "lowtail/step_kernel.hpp"

#include "lowtail/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lowtail {

namespace {

void check_measures(const std::vector<double>& measures) {
    if (measures.empty()) throw std::invalid_argument("StepKernel: no blocks");
    double sum = 0.0;
    for (double m : measures) {
        if (!(m > 0.0)) throw std::invalid_argument("StepKernel: block measures must be positive");
        sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("StepKernel: block measures must sum to 1");
}

} // namespace

StepKernel::StepKernel(std::vector<double> measures, std::vector<std::vector<double>> values)
    : measures_(std::move(measures)), values_(std::move(values)) {
    check_measures(measures_);
    size_t k = measures_.size();
    if (values_.size() != k)
        throw std::invalid_argument("StepKernel: value matrix does not match block count");
    for (size_t i = 0; i < k; ++i) {
        if (values_[i].size() != k)
            throw std::invalid_argument("StepKernel: value matrix must be square");
        for (size_t j = 0; j < k; ++j) {
            if (!std::isfinite(values_[i][j]))
                throw std::invalid_argument("StepKernel: values must be finite");
            if (values_[i][j] != values_[j][i])
                throw std::invalid_argument("StepKernel: value matrix must be symmetric");
        }
    }
}

StepKernel StepKernel::constant(double value) {
    return StepKernel({1.0}, {{value}});
}

double StepKernel::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& row : values_)
        for (double v : row) m = std::min(m, v);
    return m;
}

double StepKernel::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& row : values_)
        for (double v : row) m = std::max(m, v);
    return m;
}

StepKernel StepKernel::map(const std::function<double(double)>& f) const {
    auto vals = values_;
    int k = block_count();
    for (int i = 0; i < k; ++i) {
        vals[i][i] = f(vals[i][i]);
        for (int j = i + 1; j < k; ++j) vals[i][j] = vals[j][i] = f(values_[i][j]);
    }
    return StepKernel(measures_, std::move(vals));
}

double StepKernel::expect(const std::function<double(double)>& f) const {
    int k = block_count();
    KahanSum sum;
    bool has_pos_inf = false;
    bool has_neg_inf = false;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double fv = f(values_[i][j]);
            if (std::isnan(fv))
                throw std::domain_error("expect: f undefined at block value " +
                                        format_double(values_[i][j]));
            if (std::isinf(fv)) {
                (fv > 0 ? has_pos_inf : has_neg_inf) = true;
                continue;
            }
            sum.add(measures_[i] * measures_[j] * fv);
        }
    }
    if (has_pos_inf && has_neg_inf)
        throw std::domain_error("expect: f takes both +inf and -inf on block values");
    if (has_pos_inf) return std::numeric_limits<double>::infinity();
    if (has_neg_inf) return -std::numeric_limits<double>::infinity();
    return sum.value();
}

StepKernel StepKernel::permuted(const std::vector<int>& perm) const {
    int k = block_count();
    if (static_cast<int>(perm.size()) != k)
        throw std::invalid_argument("permuted: permutation size mismatch");
    std::vector<double> meas(k);
    std::vector<std::vector<double>> vals(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i) {
        meas[i] = measures_.at(perm[i]);
        for (int j = 0; j < k; ++j) vals[i][j] = values_.at(perm[i]).at(perm[j]);
    }
    return StepKernel(std::move(meas), std::move(vals));
}

StepKernel StepKernel::with_split_block(int split) const {
    int k = block_count();
    if (split < 0 || split >= k) throw std::invalid_argument("with_split_block: bad index");
    std::vector<double> meas;
    std::vector<int> parent;
    for (int i = 0; i < k; ++i) {
        if (i == split) {
            meas.push_back(measures_[i] / 2.0);
            meas.push_back(measures_[i] / 2.0);
            parent.push_back(i);
            parent.push_back(i);
        } else {
            meas.push_back(measures_[i]);
            parent.push_back(i);
        }
    }
    int kk = static_cast<int>(meas.size());
    std::vector<std::vector<double>> vals(kk, std::vector<double>(kk));
    for (int i = 0; i < kk; ++i)
        for (int j = 0; j < kk; ++j) vals[i][j] = values_[parent[i]][parent[j]];
    return StepKernel(std::move(meas), std::move(vals));
}

std::pair<StepKernel, StepKernel> common_refinement(const StepKernel& a, const StepKernel& b) {
    // Merge the cumulative breakpoints of both partitions.
    auto cuts = [](const StepKernel& w) {
        std::vector<double> c;
        double acc = 0.0;
        for (int i = 0; i + 1 < w.block_count(); ++i) {
            acc += w.measure(i);
            c.push_back(acc);
        }
        return c;
    };
    std::vector<double> merged = cuts(a);
    for (double c : cuts(b)) merged.push_back(c);
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](double x, double y) { return std::abs(x - y) < 1e-14; }),
                 merged.end());
    merged.push_back(1.0);

    std::vector<double> meas;
    std::vector<int> idx_a, idx_b;
    double lo = 0.0;
    auto block_of = [](const StepKernel& w, double mid) {
        double acc = 0.0;
        for (int i = 0; i < w.block_count(); ++i) {
            acc += w.measure(i);
            if (mid < acc) return i;
        }
        return w.block_count() - 1;
    };
    for (double hi : merged) {
        double width = hi - lo;
        if (width < 1e-14) { lo = hi; continue; }
        double mid = 0.5 * (lo + hi);
        meas.push_back(width);
        idx_a.push_back(block_of(a, mid));
        idx_b.push_back(block_of(b, mid));
        lo = hi;
    }
    // Remove accumulated drift so the refined measures sum to 1 exactly enough.
    double total = 0.0;
    for (double m : meas) total += m;
    for (double& m : meas) m /= total;

    int kk = static_cast<int>(meas.size());
    std::vector<std::vector<double>> va(kk, std::vector<double>(kk));
    std::vector<std::vector<double>> vb(kk, std::vector<double>(kk));
    for (int i = 0; i < kk; ++i) {
        for (int j = 0; j < kk; ++j) {
            va[i][j] = a.value(idx_a[i], idx_a[j]);
            vb[i][j] = b.value(idx_b[i], idx_b[j]);
        }
    }
    return {StepKernel(meas, std::move(va)), StepKernel(meas, std::move(vb))};
}

namespace {

StepKernel combine(const StepKernel& a, const StepKernel& b,
                   const std::function<double(double, double)>& op) {
    auto [ra, rb] = common_refinement(a, b);
    int k = ra.block_count();
    std::vector<std::vector<double>> vals(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) vals[i][j] = op(ra.value(i, j), rb.value(i, j));
    return StepKernel(ra.measures(), std::move(vals));
}

} // namespace

StepKernel add(const StepKernel& a, const StepKernel& b) {
    return combine(a, b, [](double x, double y) { return x + y; });
}

StepKernel subtract(const StepKernel& a, const StepKernel& b) {
    return combine(a, b, [](double x, double y) { return x - y; });
}

StepKernel scale(const StepKernel& a, double factor) {
    return a.map([factor](double v) { return factor * v; });
}

StepGraphon::StepGraphon(StepKernel kernel)
    : StepKernel([&kernel] {
          double lo = kernel.min_value();
          double hi = kernel.max_value();
          if (lo < -1e-12 || hi > 1.0 + 1e-12)
              throw std::invalid_argument("StepGraphon: values must lie in [0,1]");
          if (lo < 0.0 || hi > 1.0)
              return kernel.map([](double v) { return std::clamp(v, 0.0, 1.0); });
          return kernel;
      }()) {}

StepGraphon::StepGraphon(std::vector<double> measures, std::vector<std::vector<double>> values)
    : StepGraphon(StepKernel(std::move(measures), std::move(values))) {}

StepGraphon StepGraphon::constant(double value) {
    return StepGraphon(StepKernel::constant(value));
}

StepGraphon StepGraphon::bip(double a, double b) {
    return StepGraphon({0.5, 0.5}, {{a, b}, {b, a}});
}

namespace {

// DFS over block assignments of H's vertices. Each vertex carries the list of
// edges to lower-numbered vertices, so edge factors are applied as soon as
// both endpoints are placed.
struct DensityEnumerator {
    const StepKernel& w;
    int v;
    int k;
    std::vector<std::vector<int>> back_edges; // back_edges[i] = neighbours j < i

    DensityEnumerator(const Graph& h, const StepKernel& kernel)
        : w(kernel), v(h.vertex_count()), k(kernel.block_count()), back_edges(v) {
        for (auto [a, b] : h.edges()) back_edges[b].push_back(a);
    }

    // Sums all assignments with the first vertex pinned to block first_block.
    double sum_with_first(int first_block) const {
        std::vector<int> assign(v, 0);
        assign[0] = first_block;
        KahanSum total;
        dfs(1, w.measure(first_block), assign, total);
        return total.value();
    }

    void dfs(int level, double weight, std::vector<int>& assign, KahanSum& total) const {
        if (level == v) {
            total.add(weight);
            return;
        }
        for (int b = 0; b < k; ++b) {
            double wgt = weight * w.measure(b);
            for (int j : back_edges[level]) wgt *= w.value(b, assign[j]);
            if (wgt == 0.0) continue; // subtree contributes nothing
            assign[level] = b;
            dfs(level + 1, wgt, assign, total);
        }
    }
};

} // namespace

double density(const Graph& h, const StepKernel& w, double budget) {
    const int v = h.vertex_count();
    const int k = w.block_count();
    if (std::pow(static_cast<double>(k), v) > budget)
        throw BudgetError("density: " + std::to_string(k) + "^" + std::to_string(v) +
                          " terms exceed budget " + format_double(budget));
    DensityEnumerator enumerator(h, w);
    std::vector<double> partial(k, 0.0);
    const double terms = std::pow(static_cast<double>(k), v);
    if (terms >= (1 << 20) && parallel::max_threads() > 1) {
        parallel::for_index(static_cast<size_t>(k), [&](size_t b) {
            partial[b] = enumerator.sum_with_first(static_cast<int>(b));
        });
    } else {
        for (int b = 0; b < k; ++b) partial[b] = enumerator.sum_with_first(b);
    }
    KahanSum total; // index-ordered reduction, independent of thread schedule
    for (double p : partial) total.add(p);
    return total.value();
}

StepKernel functional_derivative(const Graph& h, const StepGraphon& w, double budget) {
    const int v = h.vertex_count();
    const int k = w.block_count();
    const int m = h.edge_count();
    if (m < 1) throw std::invalid_argument("functional_derivative: graph needs an edge");
    if (m * std::pow(static_cast<double>(k), v) > budget)
        throw BudgetError("functional_derivative: work exceeds budget " + format_double(budget));

    // For each edge (u0, v0) and block pair (a, b): the sum over assignments of
    // the remaining vertices of the measure product times the product over the
    // other edges. Vertices are reordered so u0, v0 come first.
    std::vector<std::vector<double>> deriv(k, std::vector<double>(k, 0.0));
    std::vector<std::vector<KahanSum>> acc(k, std::vector<KahanSum>(k));

    for (auto [u0, v0] : h.edges()) {
        std::vector<int> order;
        order.push_back(u0);
        order.push_back(v0);
        for (int x = 0; x < v; ++x)
            if (x != u0 && x != v0) order.push_back(x);
        std::vector<int> pos(v);
        for (int i = 0; i < v; ++i) pos[order[i]] = i;

        // Back edges in the new order, skipping the distinguished edge itself.
        std::vector<std::vector<int>> back(v);
        for (auto [a, b] : h.edges()) {
            if ((a == u0 && b == v0) || (a == v0 && b == u0)) continue;
            int pa = pos[a], pb = pos[b];
            back[std::max(pa, pb)].push_back(std::min(pa, pb));
        }

        std::vector<int> assign(v, 0);
        std::function<void(int, double)> dfs = [&](int level, double weight) {
            if (level == v) {
                acc[assign[0]][assign[1]].add(weight);
                return;
            }
            for (int b = 0; b < k; ++b) {
                double wgt = weight * w.measure(b);
                for (int j : back[level]) wgt *= w.value(b, assign[j]);
                if (wgt == 0.0) continue;
                assign[level] = b;
                dfs(level + 1, wgt);
            }
        };
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b) {
                assign[0] = a;
                assign[1] = b;
                dfs(2, 1.0); // measures of the pinned pair are not included
            }
        }
    }
    // Symmetrise: each edge term t_e(x,y) is averaged with t_e(y,x), which
    // leaves E[t' U] unchanged for symmetric U.
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            deriv[a][b] = 0.5 * (acc[a][b].value() + acc[b][a].value());
    return StepKernel(w.measures(), std::move(deriv));
}

} // namespace lowtail
