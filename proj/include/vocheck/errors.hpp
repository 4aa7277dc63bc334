#pragma once

#include <stdexcept>
#include <string>

namespace vocheck {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct SingularityError : Error { using Error::Error; };
struct DivergenceError : Error { using Error::Error; };
struct PairingError : Error { using Error::Error; };
struct PrecisionError : Error { using Error::Error; };
struct HypothesisError : Error { using Error::Error; };
struct PositivityError : Error { using Error::Error; };
struct DominationError : Error { using Error::Error; };
struct InapplicabilityError : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

/// Iteration cap reached; carries the best value obtained so far.
struct ConvergenceError : Error {
  double best;
  ConvergenceError(const std::string& what, double best_value)
      : Error(what), best(best_value) {}
};

}  // namespace vocheck
