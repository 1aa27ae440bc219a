#pragma once

#include <stdexcept>
#include <string>

namespace ptspectra {

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// core_numerics
struct BranchAmbiguity : NumericalError {
  using NumericalError::NumericalError;
};
struct TurningPointOnPath : NumericalError {
  using NumericalError::NumericalError;
};
struct QuadratureFailure : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateLeadingCoefficient : NumericalError {
  using NumericalError::NumericalError;
};
struct StepUnderflow : NumericalError {
  using NumericalError::NumericalError;
};
struct RhsSingular : NumericalError {
  using NumericalError::NumericalError;
};

// airy
struct OverflowRisk : NumericalError {
  using NumericalError::NumericalError;
};
struct SectorViolation : NumericalError {
  using NumericalError::NumericalError;
};

// linear model / shooting
struct WrongModel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IntegrationFailure : NumericalError {
  using NumericalError::NumericalError;
};
struct NormalizationDegenerate : NumericalError {
  using NumericalError::NumericalError;
};

// stokes
struct DegenerateEnergy : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct TracingStalled : NumericalError {
  using NumericalError::NumericalError;
};
struct TurningPairUnavailable : NumericalError {
  using NumericalError::NumericalError;
};

// scaling graph
struct SingularDenominator : NumericalError {
  using NumericalError::NumericalError;
};
struct NoRealCrossing : NumericalError {
  using NumericalError::NumericalError;
};

// secular
struct NotMonotone : NumericalError {
  using NumericalError::NumericalError;
};

// reporting
struct ConfigInvalid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MissingTaskOutput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace ptspectra
