#pragma once

#include <stdexcept>
#include <string>

namespace boltzmap {

/// Malformed or inconsistent input data (files, datasets, CSV).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: overflow, non-convergence, non-finite parameters.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A requested computation exceeds the configured work budget.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace boltzmap
