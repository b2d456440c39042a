#ifndef PHASEKIT_EMBEDDING_HPP
#define PHASEKIT_EMBEDDING_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "phasekit/csv.hpp"
#include "phasekit/dataset.hpp"
#include "phasekit/errors.hpp"
#include "phasekit/fuzzy_graph.hpp"
#include "phasekit/rng.hpp"

namespace phasekit {

using Point2 = std::array<double, 2>;

/// 2D embedding of the state set together with the graph it was optimized
/// against. loss_trace[0] is the objective at the random initialization,
/// followed by one entry per epoch.
struct EmbeddedStates {
    std::vector<Point2> coords;
    FuzzyGraph graph;
    std::vector<double> loss_trace;
    std::uint64_t seed = 0;
};

/// Cross entropy between graph weights w_ij and the low-dimensional kernel
/// v_ij = (1 + ||z_i - z_j||^2)^-1, evaluated exactly over the symmetrized
/// edge set. Terms with w = 1 drop the repulsive summand (0 log 0 = 0).
inline double embedding_loss(const FuzzyGraph& graph, const std::vector<Point2>& coords) {
    if (coords.size() != graph.n) throw DataError("coords/graph size mismatch");
    double loss = 0.0;
    for (const auto& edge : graph.edges) {
        const double dx = coords[edge.i][0] - coords[edge.j][0];
        const double dy = coords[edge.i][1] - coords[edge.j][1];
        const double d2 = dx * dx + dy * dy;
        double v = 1.0 / (1.0 + d2);
        v = std::clamp(v, 1e-12, 1.0 - 1e-12);
        const double w = edge.weight;
        loss += w * (std::log(w) - std::log(v));
        if (w < 1.0) loss += (1.0 - w) * (std::log(1.0 - w) - std::log(1.0 - v));
    }
    return loss;
}

namespace detail {
constexpr double kRepulsionClip = 4.0;
constexpr double kDistanceFloorSquared = 1e-6;  // floor of 1e-3 on the distance
}  // namespace detail

/// Stochastic gradient optimization of the embedding objective. Each epoch
/// samples every edge with probability w_ij, applies the attractive gradient
/// to both endpoints, and for each of `negatives_per_edge` uniformly sampled
/// non-neighbors pushes one endpoint away (w treated as 0). The learning rate
/// decays linearly to zero. Sequential and bit-reproducible for a given seed.
inline EmbeddedStates optimize_embedding(const FuzzyGraph& graph, std::size_t epochs,
                                         double learning_rate, std::size_t negatives_per_edge,
                                         std::uint64_t seed) {
    if (epochs < 1) throw ConfigError("optimize_embedding requires epochs >= 1");
    if (learning_rate <= 0.0) throw ConfigError("optimize_embedding requires learning_rate > 0");

    EmbeddedStates result;
    result.graph = graph;
    result.seed = seed;
    Rng rng(seed);

    auto& coords = result.coords;
    coords.resize(graph.n);
    for (auto& z : coords) {
        z[0] = rng.uniform(-10.0, 10.0);
        z[1] = rng.uniform(-10.0, 10.0);
    }
    result.loss_trace.push_back(embedding_loss(graph, coords));

    auto is_neighbor = [&](std::size_t node, std::size_t other) {
        const auto& adj = graph.adjacency[node];
        return std::binary_search(adj.begin(), adj.end(), other);
    };

    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        const double lr = learning_rate *
                          (1.0 - static_cast<double>(epoch) / static_cast<double>(epochs));
        for (const auto& edge : graph.edges) {
            if (!rng.bernoulli(edge.weight)) continue;

            // Attraction: gradient of -log v_ij, bounded by construction.
            {
                auto& zi = coords[edge.i];
                auto& zj = coords[edge.j];
                const double dx = zi[0] - zj[0];
                const double dy = zi[1] - zj[1];
                const double d2 = dx * dx + dy * dy;
                const double coeff = 2.0 / (1.0 + d2);
                zi[0] -= lr * coeff * dx;
                zi[1] -= lr * coeff * dy;
                zj[0] += lr * coeff * dx;
                zj[1] += lr * coeff * dy;
            }

            const std::size_t head = rng.bernoulli(0.5) ? edge.i : edge.j;
            for (std::size_t s = 0; s < negatives_per_edge; ++s) {
                std::size_t other = graph.n;
                for (int attempt = 0; attempt < 8; ++attempt) {
                    const std::size_t candidate = rng.uniform_index(graph.n);
                    if (candidate != head && !is_neighbor(head, candidate)) {
                        other = candidate;
                        break;
                    }
                }
                if (other == graph.n) continue;

                auto& zh = coords[head];
                const auto& zo = coords[other];
                const double dx = zh[0] - zo[0];
                const double dy = zh[1] - zo[1];
                const double d2 = dx * dx + dy * dy;
                if (d2 == 0.0) continue;  // no direction to push along
                const double d2eff = std::max(d2, detail::kDistanceFloorSquared);
                double gx = 2.0 * dx / (d2eff * (1.0 + d2eff));
                double gy = 2.0 * dy / (d2eff * (1.0 + d2eff));
                const double norm = std::sqrt(gx * gx + gy * gy);
                if (norm > detail::kRepulsionClip) {
                    gx *= detail::kRepulsionClip / norm;
                    gy *= detail::kRepulsionClip / norm;
                }
                zh[0] += lr * gx;
                zh[1] += lr * gy;
            }
        }
        result.loss_trace.push_back(embedding_loss(graph, coords));
    }
    return result;
}

struct EmbeddingDefaults {
    static constexpr std::size_t k = 15;
    static constexpr double min_dist = 0.1;  // recorded setting; the kernel v = (1+d^2)^-1 is fixed
    static constexpr std::size_t epochs = 200;
    static constexpr double learning_rate = 1.0;
    static constexpr std::size_t negatives_per_edge = 5;
};

/// Embedding CSV: `episode,step,z0,z1`, one row per state in dataset order.
inline std::string embedding_to_text(const std::vector<Point2>& coords,
                                     const std::vector<StateKey>& keys) {
    if (coords.size() != keys.size()) throw DataError("coords/keys length mismatch");
    std::string out = "episode,step,z0,z1\n";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        out += std::to_string(keys[i].episode);
        out += ',';
        out += std::to_string(keys[i].step);
        out += ',';
        out += format_float(coords[i][0]);
        out += ',';
        out += format_float(coords[i][1]);
        out += '\n';
    }
    return out;
}

struct EmbeddingTable {
    std::vector<Point2> coords;
    std::vector<StateKey> keys;
};

inline EmbeddingTable parse_embedding_text(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "episode,step,z0,z1")
        throw ParseError("embedding file must start with header 'episode,step,z0,z1'", 1);
    EmbeddingTable table;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const std::size_t line_no = li + 1;
        const auto fields = split_csv_line(lines[li]);
        if (fields.size() != 4) throw ParseError("expected 4 fields", line_no);
        StateKey key;
        key.episode = parse_int_field(fields[0], line_no);
        key.step = parse_int_field(fields[1], line_no);
        Point2 z{parse_double_field(fields[2], line_no), parse_double_field(fields[3], line_no)};
        if (!std::isfinite(z[0]) || !std::isfinite(z[1]))
            throw DataError("non-finite embedding coordinate at line " + std::to_string(line_no));
        table.keys.push_back(key);
        table.coords.push_back(z);
    }
    if (table.coords.empty()) throw ParseError("embedding file has no rows");
    return table;
}

inline std::string loss_trace_to_text(const std::vector<double>& trace) {
    std::string out = "epoch,loss\n";
    for (std::size_t e = 0; e < trace.size(); ++e) {
        out += std::to_string(e);
        out += ',';
        out += format_float(trace[e]);
        out += '\n';
    }
    return out;
}

}  // namespace phasekit

#endif  // PHASEKIT_EMBEDDING_HPP
