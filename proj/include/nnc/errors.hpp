#pragma once

#include <stdexcept>
#include <string>

namespace nnc {

// Base class for every domain error thrown by the library. Callers that
// want blanket handling (the CLI, batch sweeps) catch this; tests catch the
// concrete types.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NNC_DEFINE_ERROR(Name)    \
  class Name : public Error {     \
   public:                        \
    using Error::Error;           \
  }

NNC_DEFINE_ERROR(DuplicatePoints);
NNC_DEFINE_ERROR(DimensionTooLarge);
NNC_DEFINE_ERROR(EmptyPolytope);
NNC_DEFINE_ERROR(NumericalFailure);
NNC_DEFINE_ERROR(UnboundedCell);
NNC_DEFINE_ERROR(Degenerate);
NNC_DEFINE_ERROR(TooManyActions);
NNC_DEFINE_ERROR(NotOrthogonal);
NNC_DEFINE_ERROR(NotSteadyState);
NNC_DEFINE_ERROR(DegenerateEquilibrium);
NNC_DEFINE_ERROR(MissingSector);
NNC_DEFINE_ERROR(MissingSetpoint);
NNC_DEFINE_ERROR(NoSolution);

#undef NNC_DEFINE_ERROR

// Thrown by the simulator when the state stops being finite (NaN/Inf or a
// norm past the blow-up guard). Carries the time of detection.
class NonFiniteState : public Error {
 public:
  NonFiniteState(const std::string& what, double t) : Error(what), time(t) {}
  double time;
};

}  // namespace nnc
