#ifndef PHASEKIT_SYNTHETIC_HPP
#define PHASEKIT_SYNTHETIC_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phasekit/assignment.hpp"
#include "phasekit/dataset.hpp"
#include "phasekit/errors.hpp"
#include "phasekit/numeric.hpp"
#include "phasekit/rng.hpp"

namespace phasekit {

/// Optional branching rule: on leaving `branch_phase`, the next phase is
/// `target_a` with probability `prob_a`, otherwise `target_b`; the cycle then
/// resumes deterministically from that target.
struct BranchSpec {
    std::size_t branch_phase = 0;
    std::size_t target_a = 0;
    std::size_t target_b = 0;
    double prob_a = 0.5;

    bool operator==(const BranchSpec& other) const = default;
};

/// Configuration of the quasi-periodic oracle generator. Each phase owns one
/// anchor in state space (scaled standard-basis simplex); states are
/// anchor(phase) + Gaussian noise, and actions follow a fixed per-phase linear
/// rule a = M_p * s + eps, so per-phase action generation is exactly additive.
struct SyntheticConfig {
    std::size_t n_phases = 4;
    std::size_t steps_per_phase = 1;
    std::size_t episodes = 1;
    std::size_t steps = 100;  // per episode
    double noise_sigma = 0.05;
    std::optional<BranchSpec> branch;
    std::uint64_t seed = 0;

    // Generator shape knobs.
    std::size_t action_dim = 2;
    std::size_t extra_state_dims = 0;   // pure-noise features appended after the anchors
    double action_noise_sigma = 0.01;   // eps scale in a = M_p * s + eps
    double separation = 6.0;            // minimum anchor distance in units of noise_sigma

    /// Anchored features come first, then the branch-signal feature (when a
    /// branch is configured), then any extra noise features.
    std::size_t state_dim() const {
        return n_phases + (branch ? 1 : 0) + extra_state_dims;
    }

    bool operator==(const SyntheticConfig& other) const = default;
};

inline void validate_synthetic_config(const SyntheticConfig& config) {
    if (config.n_phases < 2) throw ConfigError("synthetic n_phases must be >= 2");
    if (config.steps_per_phase < 1) throw ConfigError("synthetic steps_per_phase must be >= 1");
    if (config.episodes < 1) throw ConfigError("synthetic episodes must be >= 1");
    if (config.steps < 2) throw ConfigError("synthetic steps must be >= 2");
    if (config.noise_sigma < 0.0) throw ConfigError("synthetic noise_sigma must be >= 0");
    if (config.action_noise_sigma < 0.0) throw ConfigError("synthetic action_noise_sigma must be >= 0");
    if (config.action_dim < 1) throw ConfigError("synthetic action_dim must be >= 1");
    if (config.branch) {
        const auto& b = *config.branch;
        if (b.branch_phase >= config.n_phases) throw ConfigError("branch_phase out of range");
        if (b.target_a >= config.n_phases || b.target_b >= config.n_phases)
            throw ConfigError("branch target out of range");
        if (b.target_a == b.target_b) throw ConfigError("branch targets must differ");
        if (b.prob_a < 0.0 || b.prob_a > 1.0) throw ConfigError("branch prob_a must be in [0, 1]");
    }
}

/// Index of the branch-signal feature; only meaningful when a branch is set.
inline std::size_t synthetic_branch_feature_index(const SyntheticConfig& config) {
    return config.n_phases;
}

/// Anchor scale: unit-norm basis vectors, blown up when the noise would bring
/// neighboring anchors closer than `separation * noise_sigma`.
inline double synthetic_anchor_scale(const SyntheticConfig& config) {
    const double base_distance = std::sqrt(2.0);  // between any two scaled basis vectors
    const double required = config.separation * config.noise_sigma;
    return required > base_distance ? required / base_distance : 1.0;
}

inline std::vector<double> synthetic_anchor(const SyntheticConfig& config, std::size_t phase) {
    std::vector<double> anchor(config.state_dim(), 0.0);
    anchor[phase] = synthetic_anchor_scale(config);
    return anchor;
}

namespace detail {
// Dominant weight on feature (p+d) mod P, minor weight on (p+d+1) mod P.
// Keeping the dominant entries well clear of the minor ones makes attribution
// masks unambiguous at the 95%-of-max rule.
constexpr double kSyntheticDominantWeight = 2.0;
constexpr double kSyntheticMinorWeight = 0.4;
constexpr double kSyntheticBranchWeightA = 1.5;
constexpr double kSyntheticBranchSignal = 1.0;
}  // namespace detail

/// The fixed per-phase action matrix M_p (action_dim x state_dim).
inline Matrix synthetic_action_matrix(const SyntheticConfig& config, std::size_t phase) {
    Matrix m(config.action_dim, config.state_dim(), 0.0);
    const std::size_t P = config.n_phases;
    for (std::size_t d = 0; d < config.action_dim; ++d) {
        m.at(d, (phase + d) % P) = detail::kSyntheticDominantWeight;
        m.at(d, (phase + d + 1) % P) = detail::kSyntheticMinorWeight;
    }
    return m;
}

/// Action matrix used inside branch-phase runs; the exit toward target_a adds
/// weight on the branch-signal feature, the exit toward target_b does not.
inline Matrix synthetic_branch_action_matrix(const SyntheticConfig& config, bool exit_to_a) {
    if (!config.branch) throw ConfigError("no branch configured");
    Matrix m = synthetic_action_matrix(config, config.branch->branch_phase);
    if (exit_to_a) {
        const std::size_t bf = synthetic_branch_feature_index(config);
        for (std::size_t d = 0; d < config.action_dim; ++d)
            m.at(d, bf) = detail::kSyntheticBranchWeightA;
    }
    return m;
}

inline FeatureSchema synthetic_schema(const SyntheticConfig& config) {
    FeatureSchema schema;
    const std::size_t ds = config.state_dim();
    for (std::size_t i = 0; i < ds; ++i) {
        if (config.branch && i == synthetic_branch_feature_index(config))
            schema.state_names.push_back("xb");
        else
            schema.state_names.push_back("x" + std::to_string(i));
    }
    for (std::size_t d = 0; d < config.action_dim; ++d)
        schema.action_names.push_back("u" + std::to_string(d));
    return schema;
}

/// Generates a dataset plus its ground-truth phase labels. Pure function of
/// the config (seed included): identical inputs give identical outputs.
inline std::pair<TrajectoryDataset, PhaseAssignment> generate_synthetic(const SyntheticConfig& config) {
    validate_synthetic_config(config);
    Rng rng(config.seed);

    const std::size_t P = config.n_phases;
    const std::size_t ds = config.state_dim();
    const std::size_t da = config.action_dim;
    const double scale = synthetic_anchor_scale(config);
    const std::size_t bf = synthetic_branch_feature_index(config);

    std::vector<Matrix> base_matrices;
    base_matrices.reserve(P);
    for (std::size_t p = 0; p < P; ++p) base_matrices.push_back(synthetic_action_matrix(config, p));
    const Matrix branch_matrix_a = config.branch ? synthetic_branch_action_matrix(config, true) : Matrix{};
    const Matrix branch_matrix_b = config.branch ? synthetic_branch_action_matrix(config, false) : Matrix{};

    TrajectoryDataset dataset;
    dataset.schema = synthetic_schema(config);
    PhaseAssignment truth;
    truth.K = P;

    for (std::size_t e = 0; e < config.episodes; ++e) {
        Episode episode;
        episode.episode_id = static_cast<std::int64_t>(e);

        std::size_t phase = 0;
        std::size_t dwell = 0;
        bool in_branch_run = false;
        bool branch_exit_a = false;
        if (config.branch && phase == config.branch->branch_phase) {
            in_branch_run = true;
            branch_exit_a = rng.bernoulli(config.branch->prob_a);
        }

        for (std::size_t t = 0; t < config.steps; ++t) {
            std::vector<double> state(ds, 0.0);
            state[phase] = scale;
            if (in_branch_run) state[bf] = branch_exit_a ? detail::kSyntheticBranchSignal
                                                         : -detail::kSyntheticBranchSignal;
            for (std::size_t f = 0; f < ds; ++f) state[f] += config.noise_sigma * rng.gaussian();

            const Matrix& m = in_branch_run ? (branch_exit_a ? branch_matrix_a : branch_matrix_b)
                                            : base_matrices[phase];
            std::vector<double> action(da, 0.0);
            for (std::size_t d = 0; d < da; ++d) {
                double acc = 0.0;
                for (std::size_t f = 0; f < ds; ++f) acc += m.at(d, f) * state[f];
                action[d] = acc + config.action_noise_sigma * rng.gaussian();
            }

            episode.states.push_back(std::move(state));
            episode.actions.push_back(std::move(action));
            truth.labels.push_back(phase);
            truth.keys.push_back({episode.episode_id, static_cast<std::int64_t>(t)});

            if (++dwell == config.steps_per_phase) {
                dwell = 0;
                if (in_branch_run) {
                    phase = branch_exit_a ? config.branch->target_a : config.branch->target_b;
                } else {
                    phase = (phase + 1) % P;
                }
                in_branch_run = config.branch && phase == config.branch->branch_phase;
                if (in_branch_run) branch_exit_a = rng.bernoulli(config.branch->prob_a);
            }
        }
        dataset.episodes.push_back(std::move(episode));
    }

    validate_dataset(dataset);
    return {std::move(dataset), std::move(truth)};
}

}  // namespace phasekit

#endif  // PHASEKIT_SYNTHETIC_HPP
