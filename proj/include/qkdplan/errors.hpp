#pragma once

#include <stdexcept>
#include <string>

namespace qkdplan {

/// Bad or inconsistent input data (files, graphs, parameters).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The request is well-formed but has no feasible answer.
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A QUBO backend failed; message carries the backend name.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qkdplan
