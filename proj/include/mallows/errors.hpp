#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mallows {

/// A simulation ran past its step cap. Carries how far it got.
class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(const std::string& what, std::int64_t steps_taken)
      : std::runtime_error(what), steps_taken_(steps_taken) {}
  std::int64_t steps_taken() const { return steps_taken_; }

 private:
  std::int64_t steps_taken_;
};

/// A numeric routine could not reach its tolerance within its budget.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mallows
