#pragma once

#include <stdexcept>
#include <string>

namespace civicpulse {

/// Configuration or input-schema problem; the CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Failure while executing a pipeline stage; the CLI maps this to exit code 2.
struct PipelineError : std::runtime_error {
    explicit PipelineError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace civicpulse
