#ifndef PHASEKIT_ASSIGNMENT_HPP
#define PHASEKIT_ASSIGNMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "phasekit/csv.hpp"
#include "phasekit/dataset.hpp"
#include "phasekit/errors.hpp"

namespace phasekit {

/// Per-state phase labels in {0..K-1}, aligned to (episode, step) keys.
struct PhaseAssignment {
    std::vector<std::size_t> labels;
    std::size_t K = 0;
    std::vector<StateKey> keys;  // same length as labels once attached

    bool operator==(const PhaseAssignment& other) const = default;
};

inline void validate_assignment(const PhaseAssignment& assignment) {
    if (assignment.K == 0) throw ConfigError("assignment has K = 0");
    if (!assignment.keys.empty() && assignment.keys.size() != assignment.labels.size())
        throw DataError("assignment keys/labels length mismatch");
    std::vector<std::size_t> occupancy(assignment.K, 0);
    for (std::size_t label : assignment.labels) {
        if (label >= assignment.K)
            throw DataError("label " + std::to_string(label) + " out of range for K = " +
                            std::to_string(assignment.K));
        ++occupancy[label];
    }
    for (std::size_t k = 0; k < assignment.K; ++k)
        if (occupancy[k] == 0) throw DataError("cluster " + std::to_string(k) + " is empty");
}

inline std::string assignment_to_text(const PhaseAssignment& assignment) {
    if (assignment.keys.size() != assignment.labels.size())
        throw DataError("assignment has no (episode, step) keys attached");
    std::string out = "episode,step,phase\n";
    for (std::size_t i = 0; i < assignment.labels.size(); ++i) {
        out += std::to_string(assignment.keys[i].episode);
        out += ',';
        out += std::to_string(assignment.keys[i].step);
        out += ',';
        out += std::to_string(assignment.labels[i]);
        out += '\n';
    }
    return out;
}

inline void write_assignment(const PhaseAssignment& assignment, const std::string& path) {
    write_text_file(path, assignment_to_text(assignment));
}

inline PhaseAssignment parse_assignment_text(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "episode,step,phase")
        throw ParseError("assignment file must start with header 'episode,step,phase'", 1);
    PhaseAssignment assignment;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const std::size_t line_no = li + 1;
        const auto fields = split_csv_line(lines[li]);
        if (fields.size() != 3) throw ParseError("expected 3 fields", line_no);
        StateKey key;
        key.episode = parse_int_field(fields[0], line_no);
        key.step = parse_int_field(fields[1], line_no);
        const long long label = parse_int_field(fields[2], line_no);
        if (label < 0) throw ParseError("negative phase label", line_no);
        assignment.keys.push_back(key);
        assignment.labels.push_back(static_cast<std::size_t>(label));
        assignment.K = std::max(assignment.K, static_cast<std::size_t>(label) + 1);
    }
    validate_assignment(assignment);
    return assignment;
}

inline PhaseAssignment load_assignment(const std::string& path) {
    return parse_assignment_text(read_text_file(path));
}

}  // namespace phasekit

#endif  // PHASEKIT_ASSIGNMENT_HPP
