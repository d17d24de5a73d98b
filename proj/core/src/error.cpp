#include "stmir/error.hpp"

namespace stmir {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::StepTooLarge: return "StepTooLarge";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::OrderTooHigh: return "OrderTooHigh";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::DomainError: return "DomainError";
    case Errc::OutOfConvergenceRegion: return "OutOfConvergenceRegion";
    case Errc::DegenerateArgument: return "DegenerateArgument";
    case Errc::EndpointSingularity: return "EndpointSingularity";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::NumericalMismatch: return "NumericalMismatch";
    case Errc::EmptySweep: return "EmptySweep";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace stmir
