#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

/// Work-cap violations (cell counts, rectangle scans); CLI maps this to exit code 3.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dlab
