#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stmir {

enum class Errc {
  InvalidSpec,
  StepTooLarge,
  NotIrreducible,
  OrderTooHigh,
  NoConvergence,
  DomainError,
  OutOfConvergenceRegion,
  DegenerateArgument,
  EndpointSingularity,
  InsufficientData,
  NumericalMismatch,
  EmptySweep,
  ConfigError,
};

// Stable identifier, used verbatim in the sweep status column.
std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace stmir
