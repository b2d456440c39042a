#ifndef PHASEKIT_DATASET_HPP
#define PHASEKIT_DATASET_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "phasekit/csv.hpp"
#include "phasekit/errors.hpp"
#include "phasekit/numeric.hpp"
#include "phasekit/schema.hpp"

namespace phasekit {

/// One contiguous rollout: aligned state and action vectors, steps 0..len-1.
struct Episode {
    std::int64_t episode_id = 0;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> actions;

    std::size_t length() const { return states.size(); }

    bool operator==(const Episode& other) const = default;
};

/// Identifies one state: which episode it belongs to and its step index.
struct StateKey {
    std::int64_t episode = 0;
    std::int64_t step = 0;

    bool operator==(const StateKey& other) const = default;
};

struct TrajectoryDataset {
    std::vector<Episode> episodes;
    FeatureSchema schema;

    std::size_t state_dim() const { return schema.state_dim(); }
    std::size_t action_dim() const { return schema.action_dim(); }

    std::size_t total_states() const {
        std::size_t n = 0;
        for (const auto& ep : episodes) n += ep.length();
        return n;
    }

    std::size_t total_transitions() const {
        std::size_t n = 0;
        for (const auto& ep : episodes) n += ep.length() - 1;
        return n;
    }

    /// Flat (episode, step) key per state, in file order.
    std::vector<StateKey> state_keys() const {
        std::vector<StateKey> keys;
        keys.reserve(total_states());
        for (const auto& ep : episodes)
            for (std::size_t t = 0; t < ep.length(); ++t)
                keys.push_back({ep.episode_id, static_cast<std::int64_t>(t)});
        return keys;
    }

    /// All states flattened into an n x D_s row-major matrix, in file order.
    Matrix state_matrix() const {
        Matrix m(total_states(), state_dim());
        std::size_t r = 0;
        for (const auto& ep : episodes)
            for (const auto& s : ep.states) {
                std::copy(s.begin(), s.end(), m.row(r));
                ++r;
            }
        return m;
    }

    Matrix action_matrix() const {
        Matrix m(total_states(), action_dim());
        std::size_t r = 0;
        for (const auto& ep : episodes)
            for (const auto& a : ep.actions) {
                std::copy(a.begin(), a.end(), m.row(r));
                ++r;
            }
        return m;
    }

    bool operator==(const TrajectoryDataset& other) const = default;
};

/// Enforces every TrajectoryDataset invariant; throws on the first violation.
inline void validate_dataset(const TrajectoryDataset& dataset) {
    validate_schema(dataset.schema);
    if (dataset.episodes.empty()) throw DataError("dataset contains no episodes");
    const std::size_t ds = dataset.state_dim();
    const std::size_t da = dataset.action_dim();
    for (const auto& ep : dataset.episodes) {
        if (ep.length() < 2)
            throw DataError("episode " + std::to_string(ep.episode_id) +
                            " has fewer than 2 steps");
        if (ep.actions.size() != ep.states.size())
            throw DataError("episode " + std::to_string(ep.episode_id) +
                            " has mismatched state/action counts");
        for (std::size_t t = 0; t < ep.length(); ++t) {
            if (ep.states[t].size() != ds)
                throw SchemaError("episode " + std::to_string(ep.episode_id) + " step " +
                                  std::to_string(t) + ": state has " +
                                  std::to_string(ep.states[t].size()) + " values, schema declares " +
                                  std::to_string(ds));
            if (ep.actions[t].size() != da)
                throw SchemaError("episode " + std::to_string(ep.episode_id) + " step " +
                                  std::to_string(t) + ": action has " +
                                  std::to_string(ep.actions[t].size()) + " values, schema declares " +
                                  std::to_string(da));
            for (double v : ep.states[t])
                if (!std::isfinite(v))
                    throw DataError("non-finite state value in episode " +
                                    std::to_string(ep.episode_id) + " step " + std::to_string(t));
            for (double v : ep.actions[t])
                if (!std::isfinite(v))
                    throw DataError("non-finite action value in episode " +
                                    std::to_string(ep.episode_id) + " step " + std::to_string(t));
        }
    }
}

/// Trajectory CSV: header `episode,step,s_<name>...,a_<name>...`, one row per
/// step, rows sorted by (episode, step), steps consecutive from 0.
inline TrajectoryDataset parse_trajectories_text(std::string_view text, const FeatureSchema& schema) {
    validate_schema(schema);
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty trajectory file");

    const std::size_t ds = schema.state_dim();
    const std::size_t da = schema.action_dim();

    // Header check.
    {
        const auto fields = split_csv_line(lines[0]);
        if (fields.size() != 2 + ds + da)
            throw SchemaError("header has " + std::to_string(fields.size()) +
                              " columns, schema requires " + std::to_string(2 + ds + da));
        if (fields[0] != "episode" || fields[1] != "step")
            throw ParseError("header must start with 'episode,step'", 1);
        for (std::size_t i = 0; i < ds; ++i)
            if (fields[2 + i] != "s_" + schema.state_names[i])
                throw SchemaError("state column " + std::to_string(i) + " is '" + fields[2 + i] +
                                  "', expected 's_" + schema.state_names[i] + "'");
        for (std::size_t i = 0; i < da; ++i)
            if (fields[2 + ds + i] != "a_" + schema.action_names[i])
                throw SchemaError("action column " + std::to_string(i) + " is '" + fields[2 + ds + i] +
                                  "', expected 'a_" + schema.action_names[i] + "'");
    }

    TrajectoryDataset dataset;
    dataset.schema = schema;
    Episode* current = nullptr;
    bool have_episode = false;
    std::int64_t last_episode = 0;

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::size_t line_no = li + 1;
        if (lines[li].empty()) continue;
        const auto fields = split_csv_line(lines[li]);
        if (fields.size() != 2 + ds + da)
            throw ParseError("row has " + std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(2 + ds + da),
                             line_no);
        const std::int64_t episode = parse_int_field(fields[0], line_no);
        const std::int64_t step = parse_int_field(fields[1], line_no);

        if (!have_episode || episode != last_episode) {
            if (have_episode && episode < last_episode)
                throw ParseError("rows not sorted by (episode, step)", line_no);
            dataset.episodes.emplace_back();
            current = &dataset.episodes.back();
            current->episode_id = episode;
            last_episode = episode;
            have_episode = true;
            if (step != 0) throw DataError("non-consecutive steps: episode " +
                                           std::to_string(episode) + " starts at step " +
                                           std::to_string(step));
        } else if (step != static_cast<std::int64_t>(current->length())) {
            throw DataError("non-consecutive steps: episode " + std::to_string(episode) +
                            " jumps to step " + std::to_string(step) + " after step " +
                            std::to_string(current->length() - 1));
        }

        std::vector<double> state(ds), action(da);
        for (std::size_t i = 0; i < ds; ++i) {
            state[i] = parse_double_field(fields[2 + i], line_no);
            if (!std::isfinite(state[i]))
                throw DataError("non-finite value in column s_" + schema.state_names[i] +
                                " at line " + std::to_string(line_no));
        }
        for (std::size_t i = 0; i < da; ++i) {
            action[i] = parse_double_field(fields[2 + ds + i], line_no);
            if (!std::isfinite(action[i]))
                throw DataError("non-finite value in column a_" + schema.action_names[i] +
                                " at line " + std::to_string(line_no));
        }
        current->states.push_back(std::move(state));
        current->actions.push_back(std::move(action));
    }

    validate_dataset(dataset);
    return dataset;
}

inline TrajectoryDataset load_trajectories(const std::string& path, const FeatureSchema& schema) {
    return parse_trajectories_text(read_text_file(path), schema);
}

inline std::string trajectories_to_text(const TrajectoryDataset& dataset) {
    std::string out = "episode,step";
    for (const auto& name : dataset.schema.state_names) out += ",s_" + name;
    for (const auto& name : dataset.schema.action_names) out += ",a_" + name;
    out += "\n";
    for (const auto& ep : dataset.episodes) {
        for (std::size_t t = 0; t < ep.length(); ++t) {
            out += std::to_string(ep.episode_id);
            out += ',';
            out += std::to_string(t);
            for (double v : ep.states[t]) {
                out += ',';
                out += format_float(v);
            }
            for (double v : ep.actions[t]) {
                out += ',';
                out += format_float(v);
            }
            out += '\n';
        }
    }
    return out;
}

inline void write_trajectories(const TrajectoryDataset& dataset, const std::string& path) {
    validate_dataset(dataset);
    write_text_file(path, trajectories_to_text(dataset));
}

/// Per-feature standardization of states (mean 0, sd 1; constant features are
/// left centered). Optional preprocessing in front of the embedding.
inline TrajectoryDataset standardize_states(const TrajectoryDataset& dataset) {
    const std::size_t ds = dataset.state_dim();
    const std::size_t n = dataset.total_states();
    std::vector<double> mean(ds, 0.0), sd(ds, 0.0);
    for (std::size_t f = 0; f < ds; ++f) {
        std::vector<double> column;
        column.reserve(n);
        for (const auto& ep : dataset.episodes)
            for (const auto& s : ep.states) column.push_back(s[f]);
        mean[f] = ordered_mean(column);
        std::vector<double> sq;
        sq.reserve(n);
        for (double v : column) sq.push_back((v - mean[f]) * (v - mean[f]));
        const double var = ordered_sum(std::move(sq)) / static_cast<double>(n);
        sd[f] = std::sqrt(var);
    }
    TrajectoryDataset out = dataset;
    for (auto& ep : out.episodes)
        for (auto& s : ep.states)
            for (std::size_t f = 0; f < ds; ++f)
                s[f] = sd[f] > 0.0 ? (s[f] - mean[f]) / sd[f] : s[f] - mean[f];
    return out;
}

}  // namespace phasekit

#endif  // PHASEKIT_DATASET_HPP
