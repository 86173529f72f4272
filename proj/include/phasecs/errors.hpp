#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace phasecs {

// Precondition violations throw std::invalid_argument via fail_precondition.
// Enumeration refusals carry the cost estimate that tripped the budget so
// callers can report it.
class budget_error : public std::runtime_error {
 public:
  budget_error(const std::string& what, std::uint64_t estimated, std::uint64_t limit)
      : std::runtime_error(what), estimated_cost(estimated), budget(limit) {}

  std::uint64_t estimated_cost;
  std::uint64_t budget;
};

// Failure to read or write an artifact; the harness maps this to its own
// exit code, distinct from validation errors.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail_precondition(const std::string& msg) {
  throw std::invalid_argument(msg);
}

}  // namespace phasecs
