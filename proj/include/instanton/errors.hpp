#pragma once

#include <stdexcept>
#include <string>

namespace instanton {

// Error taxonomy shared by every module.  All of these are programming-contract or
// numerical-contract violations; callers that want a soft failure catch the base type.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input shapes / forms.
struct DimensionMismatch : Error { using Error::Error; };
struct WrongForm : Error { using Error::Error; };
struct NotAntisymmetric : Error { using Error::Error; };
struct OddDimension : Error { using Error::Error; };
struct NotInGroup : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

// Geometry / quadrature.
struct GaugeSingularity : Error { using Error::Error; };
struct QuadratureBudgetExceeded : Error { using Error::Error; };
struct WidthTooLarge : Error { using Error::Error; };
struct DegenerateParametrization : Error { using Error::Error; };
struct NotDisjoint : Error { using Error::Error; };

// Searches and combinatorics.
struct ConvergenceFailure : Error { using Error::Error; };
struct DimensionBudgetViolated : Error { using Error::Error; };
struct CombinatorialBudgetExceeded : Error { using Error::Error; };

// CLI / configuration.
struct ConfigInvalid : Error { using Error::Error; };

}  // namespace instanton
