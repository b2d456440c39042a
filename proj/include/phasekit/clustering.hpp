#ifndef PHASEKIT_CLUSTERING_HPP
#define PHASEKIT_CLUSTERING_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "phasekit/assignment.hpp"
#include "phasekit/embedding.hpp"
#include "phasekit/errors.hpp"

namespace phasekit {

/// Agglomerative merge history. Leaves are clusters 0..n-1; the t-th merge
/// creates cluster n+t. merge_cost is the Ward increase
/// (|A||B| / (|A|+|B|)) * ||centroid(A) - centroid(B)||^2 and is
/// non-decreasing across the sequence.
struct Dendrogram {
    struct Merge {
        std::size_t a = 0;  // a < b
        std::size_t b = 0;
        double cost = 0.0;
        std::size_t size = 0;  // of the merged cluster

        bool operator==(const Merge& other) const = default;
    };

    std::size_t n = 0;
    std::vector<Merge> merges;  // n - 1 entries

    bool operator==(const Dendrogram& other) const = default;
};

namespace detail {

struct WardCluster {
    double cx = 0.0;
    double cy = 0.0;
    std::size_t size = 0;
    bool active = false;
};

inline double ward_cost(const WardCluster& a, const WardCluster& b) {
    const double dx = a.cx - b.cx;
    const double dy = a.cy - b.cy;
    const double na = static_cast<double>(a.size);
    const double nb = static_cast<double>(b.size);
    return (na * nb / (na + nb)) * (dx * dx + dy * dy);
}

struct WardCandidate {
    double cost = std::numeric_limits<double>::infinity();
    std::size_t lo = 0;
    std::size_t hi = 0;

    bool operator<(const WardCandidate& other) const {
        if (cost != other.cost) return cost < other.cost;
        if (lo != other.lo) return lo < other.lo;
        return hi < other.hi;
    }
};

}  // namespace detail

/// Greedy Ward agglomeration: at every step merges the pair with minimal
/// Ward cost, ties broken by smallest (lower cluster id, then higher).
/// Per-cluster best-partner caching keeps the common case near O(n^2).
inline Dendrogram build_dendrogram(const std::vector<Point2>& points) {
    const std::size_t n = points.size();
    if (n < 2) throw ConfigError("dendrogram requires at least 2 points");

    const std::size_t slots = 2 * n - 1;
    std::vector<detail::WardCluster> clusters(slots);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {points[i][0], points[i][1], 1, true};

    std::vector<std::size_t> active;
    active.reserve(n);
    for (std::size_t i = 0; i < n; ++i) active.push_back(i);

    std::vector<detail::WardCandidate> best(slots);
    auto rescan = [&](std::size_t s) {
        detail::WardCandidate c;
        for (std::size_t o : active) {
            if (o == s) continue;
            detail::WardCandidate cand{detail::ward_cost(clusters[s], clusters[o]), std::min(s, o),
                                       std::max(s, o)};
            if (cand < c) c = cand;
        }
        best[s] = c;
    };
    for (std::size_t i = 0; i < n; ++i) rescan(i);

    Dendrogram dendrogram;
    dendrogram.n = n;
    dendrogram.merges.reserve(n - 1);

    for (std::size_t t = 0; t + 1 < n; ++t) {
        detail::WardCandidate winner;
        for (std::size_t s : active)
            if (best[s] < winner) winner = best[s];

        const std::size_t a = winner.lo;
        const std::size_t b = winner.hi;
        const std::size_t u = n + t;
        const auto& ca = clusters[a];
        const auto& cb = clusters[b];
        const double total = static_cast<double>(ca.size + cb.size);
        clusters[u] = {(static_cast<double>(ca.size) * ca.cx + static_cast<double>(cb.size) * cb.cx) / total,
                       (static_cast<double>(ca.size) * ca.cy + static_cast<double>(cb.size) * cb.cy) / total,
                       ca.size + cb.size, true};
        clusters[a].active = false;
        clusters[b].active = false;
        dendrogram.merges.push_back({a, b, winner.cost, clusters[u].size});

        active.erase(std::remove_if(active.begin(), active.end(),
                                    [&](std::size_t s) { return s == a || s == b; }),
                     active.end());

        for (std::size_t s : active) {
            if (best[s].lo == a || best[s].hi == a || best[s].lo == b || best[s].hi == b) {
                // Stale partner; recompute against the current active set
                // (the new cluster is not yet listed, handled below).
                rescan(s);
            }
            detail::WardCandidate cand{detail::ward_cost(clusters[s], clusters[u]), std::min(s, u),
                                       std::max(s, u)};
            if (cand < best[s]) best[s] = cand;
        }
        active.push_back(u);
        rescan(u);
    }
    return dendrogram;
}

inline Dendrogram build_dendrogram(const EmbeddedStates& embedding) {
    return build_dendrogram(embedding.coords);
}

/// Stops the merge sequence after n-K merges. Labels are assigned by the
/// order in which each surviving cluster's first member appears, so phase 0
/// is always the earliest-seen cluster.
inline PhaseAssignment cut_dendrogram(const Dendrogram& dendrogram, std::size_t K) {
    const std::size_t n = dendrogram.n;
    if (K < 1 || K > n)
        throw ConfigError("cut requires 1 <= K <= n, got K = " + std::to_string(K));

    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find_root = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t t = 0; t + K < n; ++t) {
        const auto& merge = dendrogram.merges[t];
        parent[find_root(merge.a)] = n + t;
        parent[find_root(merge.b)] = n + t;
    }

    PhaseAssignment assignment;
    assignment.K = K;
    assignment.labels.resize(n);
    std::vector<std::size_t> label_of_root(2 * n - 1, K);
    std::size_t next_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find_root(i);
        if (label_of_root[root] == K) label_of_root[root] = next_label++;
        assignment.labels[i] = label_of_root[root];
    }
    return assignment;
}

inline PhaseAssignment cut_dendrogram(const Dendrogram& dendrogram, std::size_t K,
                                      const std::vector<StateKey>& keys) {
    PhaseAssignment assignment = cut_dendrogram(dendrogram, K);
    if (keys.size() != assignment.labels.size())
        throw DataError("keys length does not match dendrogram leaf count");
    assignment.keys = keys;
    return assignment;
}

}  // namespace phasekit

#endif  // PHASEKIT_CLUSTERING_HPP
