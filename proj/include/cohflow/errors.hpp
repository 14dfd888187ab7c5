#pragma once

#include <stdexcept>

namespace cohflow {

// Bad run configuration or invalid arguments to a library entry point.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Trajectory integration produced a non-finite state (field blow-up).
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File read/write failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cohflow
