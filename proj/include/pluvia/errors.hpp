#pragma once

#include <stdexcept>
#include <string>

namespace pluvia {

// Error categories map directly onto CLI exit codes:
// config errors exit 2, data errors exit 3, numeric failures exit 4.
enum class ErrorKind { config = 2, data = 3, numeric = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::config: return "config";
        case ErrorKind::data: return "data";
        case ErrorKind::numeric: return "numeric";
    }
    return "unknown";
}

struct DimensionError : Error {
    explicit DimensionError(const std::string& m) : Error(ErrorKind::config, m) {}
};

struct ParameterError : Error {
    explicit ParameterError(const std::string& m) : Error(ErrorKind::config, m) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorKind::config, m) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error(ErrorKind::data, m) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error(ErrorKind::data, m) {}
};

struct DataError : Error {
    explicit DataError(const std::string& m) : Error(ErrorKind::data, m) {}
};

struct MetricError : Error {
    explicit MetricError(const std::string& m) : Error(ErrorKind::data, m) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& m) : Error(ErrorKind::numeric, m) {}
};

}  // namespace pluvia
