#ifndef PHASEKIT_ERRORS_HPP
#define PHASEKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace phasekit {

/// Base class for all phasekit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration or out-of-range parameter (CLI exit code 1).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Malformed file content; carries a 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

/// File content disagrees with the declared feature schema.
class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& msg) : Error(msg) {}
};

/// Semantically invalid data: NaN values, misaligned lengths, insufficient samples.
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

/// Filesystem-level failure (CLI exit code 3).
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace phasekit

#endif  // PHASEKIT_ERRORS_HPP
