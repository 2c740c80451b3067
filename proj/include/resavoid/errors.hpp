#pragma once

#include <stdexcept>
#include <string>

namespace resavoid {

// Thrown when an exact computation would exceed its enumeration or
// subset-expansion budget. Callers can switch to the other exact path.
struct budget_error : std::runtime_error {
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a quantity that is a theorem violates its own inequality or
// two exact routes disagree. Always a bug, never a data problem.
struct invariant_violation : std::logic_error {
  explicit invariant_violation(const std::string& what)
      : std::logic_error(what) {}
};

}  // namespace resavoid
