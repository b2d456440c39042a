#ifndef PHASEKIT_SCHEMA_HPP
#define PHASEKIT_SCHEMA_HPP

#include <set>
#include <string>
#include <vector>

#include "phasekit/csv.hpp"
#include "phasekit/errors.hpp"

namespace phasekit {

/// Named layout of the state and action vectors of a trajectory corpus.
struct FeatureSchema {
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    std::vector<std::string> state_units;   // optional; empty or one entry per state
    std::vector<std::string> action_units;  // optional; empty or one entry per action

    std::size_t state_dim() const { return state_names.size(); }
    std::size_t action_dim() const { return action_names.size(); }

    bool operator==(const FeatureSchema& other) const = default;
};

namespace detail {
inline void check_labels(const std::vector<std::string>& labels, const char* what) {
    if (labels.empty()) throw ConfigError(std::string(what) + " must contain at least one label");
    std::set<std::string> seen;
    for (const auto& label : labels) {
        if (label.empty()) throw ConfigError(std::string(what) + " contains an empty label");
        if (label.find(',') != std::string::npos || label.find('\n') != std::string::npos)
            throw ConfigError(std::string(what) + " label '" + label + "' contains a separator character");
        if (!seen.insert(label).second)
            throw ConfigError(std::string(what) + " label '" + label + "' appears twice");
    }
}
}  // namespace detail

/// Validates label uniqueness and dimensionality; throws ConfigError on violation.
inline void validate_schema(const FeatureSchema& schema) {
    detail::check_labels(schema.state_names, "state_names");
    detail::check_labels(schema.action_names, "action_names");
    if (!schema.state_units.empty() && schema.state_units.size() != schema.state_names.size())
        throw ConfigError("state_units length does not match state_names");
    if (!schema.action_units.empty() && schema.action_units.size() != schema.action_names.size())
        throw ConfigError("action_units length does not match action_names");
}

/// The 17-state / 6-action HalfCheetah-v5 observation layout.
inline FeatureSchema halfcheetah_schema() {
    FeatureSchema s;
    s.state_names = {"Root Z",      "Root Ang",    "B-Thigh",      "B-Shin",      "B-Foot",
                     "F-Thigh",     "F-Shin",      "F-Foot",       "Vel Root X",  "Vel Root Z",
                     "Vel Root Ang", "Vel B-Thigh", "Vel B-Shin",  "Vel B-Foot",  "Vel F-Thigh",
                     "Vel F-Shin",  "Vel F-Foot"};
    s.action_names = {"B-Thigh", "B-Shin", "B-Foot", "F-Thigh", "F-Shin", "F-Foot"};
    s.state_units = {"m",     "rad",   "rad",   "rad",   "rad",   "rad",   "rad",   "rad",  "m/s",
                     "m/s",   "rad/s", "rad/s", "rad/s", "rad/s", "rad/s", "rad/s", "rad/s"};
    s.action_units = {"torque", "torque", "torque", "torque", "torque", "torque"};
    return s;
}

namespace detail {
inline std::vector<std::string> split_name_list(std::string_view value) {
    std::vector<std::string> names;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t pos = value.find(',', start);
        if (pos == std::string_view::npos) pos = value.size();
        std::string_view item = value.substr(start, pos - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        names.emplace_back(item);
        if (pos == value.size()) break;
        start = pos + 1;
    }
    return names;
}
}  // namespace detail

/// Schema file format: `key = value` lines with comma-separated name lists.
/// Keys: state_names (required), action_names (required), state_units,
/// action_units. Lines starting with '#' are comments.
inline FeatureSchema parse_schema_text(std::string_view text) {
    FeatureSchema schema;
    bool have_states = false;
    bool have_actions = false;
    std::size_t line_no = 0;
    for (const auto& line : split_lines(text)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        while (!value.empty() && value.front() == ' ') value.erase(value.begin());
        if (key == "state_names") {
            schema.state_names = detail::split_name_list(value);
            have_states = true;
        } else if (key == "action_names") {
            schema.action_names = detail::split_name_list(value);
            have_actions = true;
        } else if (key == "state_units") {
            schema.state_units = detail::split_name_list(value);
        } else if (key == "action_units") {
            schema.action_units = detail::split_name_list(value);
        } else {
            throw ParseError("unknown schema key '" + key + "'", line_no);
        }
    }
    if (!have_states || !have_actions)
        throw ParseError("schema file must define state_names and action_names");
    validate_schema(schema);
    return schema;
}

inline std::string schema_to_text(const FeatureSchema& schema) {
    auto join = [](const std::vector<std::string>& names) {
        std::string out;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i > 0) out += ", ";
            out += names[i];
        }
        return out;
    };
    std::string out;
    out += "state_names = " + join(schema.state_names) + "\n";
    out += "action_names = " + join(schema.action_names) + "\n";
    if (!schema.state_units.empty()) out += "state_units = " + join(schema.state_units) + "\n";
    if (!schema.action_units.empty()) out += "action_units = " + join(schema.action_units) + "\n";
    return out;
}

inline FeatureSchema load_schema(const std::string& path) {
    return parse_schema_text(read_text_file(path));
}

inline void write_schema(const FeatureSchema& schema, const std::string& path) {
    validate_schema(schema);
    write_text_file(path, schema_to_text(schema));
}

}  // namespace phasekit

#endif  // PHASEKIT_SCHEMA_HPP
