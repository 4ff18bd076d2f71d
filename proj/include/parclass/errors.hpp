#pragma once

#include <stdexcept>
#include <string>

namespace parclass {

// Bad experiment configuration or CLI usage.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input data violates a contract: parse failure, constant label column,
// dimension mismatch, degenerate split, ...
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A task inside a run failed; carries the offending config id.
struct TaskError : std::runtime_error {
    int config_id;
    TaskError(int id, const std::string& what)
        : std::runtime_error("config " + std::to_string(id) + ": " + what),
          config_id(id) {}
};

}  // namespace parclass
