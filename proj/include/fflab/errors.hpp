#pragma once

#include <stdexcept>
#include <string>

namespace fflab {

// Error taxonomy used across the library:
//   InvalidInput   - a precondition or type invariant was violated
//   NoSolution     - a search exhausted its range without an admissible result
//   ResourceLimit  - the request exceeds a documented desk-scale bound
//   ConvergenceFailure - a numeric routine could not meet its residual target
struct InvalidInput : std::invalid_argument {
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

struct NoSolution : std::runtime_error {
  explicit NoSolution(const std::string& what) : std::runtime_error(what) {}
};

struct ResourceLimit : std::runtime_error {
  explicit ResourceLimit(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceFailure : std::runtime_error {
  explicit ConvergenceFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fflab
