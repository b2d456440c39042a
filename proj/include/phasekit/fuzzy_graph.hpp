#ifndef PHASEKIT_FUZZY_GRAPH_HPP
#define PHASEKIT_FUZZY_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <thread>
#include <utility>
#include <vector>

#include "phasekit/dataset.hpp"
#include "phasekit/errors.hpp"
#include "phasekit/numeric.hpp"

namespace phasekit {

/// Smallest bandwidth the per-node search may return. Reached only when the
/// neighborhood target is infeasible (ties at the nearest-neighbor distance).
constexpr double kSigmaMin = 1e-9;
/// Floor on stored edge weights; keeps weights strictly positive when the
/// exponential underflows.
constexpr double kMinEdgeWeight = 1e-12;
constexpr double kSigmaTolerance = 1e-5;
constexpr int kSigmaMaxIterations = 64;

/// Weighted kNN graph with membership-strength edges
/// w_ij = exp(-(max(0, d(s_i, s_j) - rho_i)) / sigma_i), symmetrized by
/// probabilistic union w + w^T - w o w^T.
struct FuzzyGraph {
    struct Edge {
        std::size_t i = 0;  // i < j
        std::size_t j = 0;
        double weight = 0.0;

        bool operator==(const Edge& other) const = default;
    };

    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<double> rho;    // per-node nearest-neighbor distance
    std::vector<double> sigma;  // per-node bandwidth
    std::vector<std::vector<std::size_t>> knn_indices;  // k entries per node
    std::vector<std::vector<double>> knn_raw_weights;   // aligned with knn_indices
    std::vector<Edge> edges;                            // symmetrized, sorted by (i, j)
    std::vector<std::vector<std::size_t>> adjacency;    // symmetrized neighbor lists

    bool operator==(const FuzzyGraph& other) const = default;
};

namespace detail {

inline double knn_smoothness(const std::vector<double>& dists, double rho, double sigma) {
    double sum = 0.0;
    for (double d : dists) sum += std::exp(-std::max(0.0, d - rho) / sigma);
    return sum;
}

/// Solves sum_j exp(-max(0, d_j - rho)/sigma) = log2(k) for sigma. When the
/// sigma -> 0 limit (the count of neighbors at distance rho) already meets the
/// target, no solution exists and sigma clamps to kSigmaMin.
inline double solve_sigma(const std::vector<double>& dists, double rho, double target) {
    std::size_t at_rho = 0;
    for (double d : dists)
        if (d <= rho) ++at_rho;
    if (static_cast<double>(at_rho) >= target) return kSigmaMin;

    double hi = 1.0;
    while (knn_smoothness(dists, rho, hi) < target && hi < 1e12) hi *= 2.0;
    double lo = kSigmaMin;
    double mid = hi;
    for (int it = 0; it < kSigmaMaxIterations; ++it) {
        mid = 0.5 * (lo + hi);
        const double value = knn_smoothness(dists, rho, mid);
        if (std::fabs(value - target) <= kSigmaTolerance) break;
        if (value < target)
            lo = mid;
        else
            hi = mid;
    }
    return mid;
}

}  // namespace detail

/// Exact kNN fuzzy graph over raw state vectors (Euclidean distance).
/// Per-node searches run in parallel; the result is deterministic.
inline FuzzyGraph build_fuzzy_graph(const Matrix& states, std::size_t k) {
    const std::size_t n = states.rows;
    if (k < 2) throw ConfigError("fuzzy graph requires k >= 2");
    if (n <= k) throw ConfigError("fuzzy graph requires more states than neighbors (n > k)");

    FuzzyGraph graph;
    graph.n = n;
    graph.k = k;
    graph.rho.resize(n);
    graph.sigma.resize(n);
    graph.knn_indices.assign(n, {});
    graph.knn_raw_weights.assign(n, {});

    const double target = std::log2(static_cast<double>(k));
    const std::size_t dim = states.cols;

    auto process_node = [&](std::size_t i) {
        // k smallest distances, ties broken by index.
        std::vector<std::pair<double, std::size_t>> cand;
        cand.reserve(n - 1);
        const double* si = states.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double d2 = 0.0;
            const double* sj = states.row(j);
            for (std::size_t f = 0; f < dim; ++f) {
                const double diff = si[f] - sj[f];
                d2 += diff * diff;
            }
            cand.emplace_back(d2, j);
        }
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());

        std::vector<double> dists(k);
        auto& indices = graph.knn_indices[i];
        indices.resize(k);
        for (std::size_t m = 0; m < k; ++m) {
            dists[m] = std::sqrt(cand[m].first);
            indices[m] = cand[m].second;
        }
        const double rho = dists[0];
        const double sigma = detail::solve_sigma(dists, rho, target);
        graph.rho[i] = rho;
        graph.sigma[i] = sigma;
        auto& weights = graph.knn_raw_weights[i];
        weights.resize(k);
        for (std::size_t m = 0; m < k; ++m)
            weights[m] = std::max(std::exp(-std::max(0.0, dists[m] - rho) / sigma), kMinEdgeWeight);
    };

    const std::size_t n_threads = std::min<std::size_t>(std::thread::hardware_concurrency() > 0
                                                            ? std::thread::hardware_concurrency()
                                                            : 1,
                                                        n);
    if (n_threads > 1 && n > 256) {
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) {
            workers.emplace_back([&, t]() {
                for (std::size_t i = t; i < n; i += n_threads) process_node(i);
            });
        }
        for (auto& w : workers) w.join();
    } else {
        for (std::size_t i = 0; i < n; ++i) process_node(i);
    }

    // Probabilistic union over the directed kNN entries: w <- w + w^T - w o w^T.
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> directed;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < k; ++m) {
            const std::size_t j = graph.knn_indices[i][m];
            const double w = graph.knn_raw_weights[i][m];
            const auto key = std::minmax(i, j);
            auto& slot = directed[{key.first, key.second}];
            if (i < j)
                slot.first = w;
            else
                slot.second = w;
        }
    }
    graph.edges.reserve(directed.size());
    graph.adjacency.assign(n, {});
    for (const auto& [key, raw] : directed) {
        const double w = raw.first + raw.second - raw.first * raw.second;
        graph.edges.push_back({key.first, key.second, w});
        graph.adjacency[key.first].push_back(key.second);
        graph.adjacency[key.second].push_back(key.first);
    }
    for (auto& neighbors : graph.adjacency) std::sort(neighbors.begin(), neighbors.end());
    return graph;
}

inline FuzzyGraph build_fuzzy_graph(const TrajectoryDataset& dataset, std::size_t k) {
    return build_fuzzy_graph(dataset.state_matrix(), k);
}

/// Invariant checks used by tests and debug paths.
inline void validate_fuzzy_graph(const FuzzyGraph& graph) {
    if (graph.n == 0) throw ConfigError("empty fuzzy graph");
    for (std::size_t i = 0; i < graph.n; ++i) {
        if (graph.knn_indices[i].size() != graph.k || graph.knn_raw_weights[i].size() != graph.k)
            throw DataError("node " + std::to_string(i) + " does not have exactly k raw entries");
        for (double w : graph.knn_raw_weights[i])
            if (!(w > 0.0 && w <= 1.0)) throw DataError("raw weight out of (0, 1]");
    }
    for (const auto& edge : graph.edges) {
        if (edge.i >= edge.j || edge.j >= graph.n) throw DataError("bad edge endpoints");
        if (!(edge.weight > 0.0 && edge.weight <= 1.0)) throw DataError("edge weight out of (0, 1]");
    }
}

}  // namespace phasekit

#endif  // PHASEKIT_FUZZY_GRAPH_HPP
