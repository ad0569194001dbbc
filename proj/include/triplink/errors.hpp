#pragma once

#include <stdexcept>
#include <string>

namespace triplink {

// Common base so callers can catch everything the library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// input file missing / unparsable / structurally invalid
struct IoError : Error {
  using Error::Error;
};

// curve components touch or come closer than the separation floor
struct SeparationError : Error {
  using Error::Error;
};

// vanishing speed or other parametrization degeneracy
struct RegularityError : Error {
  using Error::Error;
};

// potential solve asked for a form whose discrete d is not negligible
struct NotClosedError : Error {
  using Error::Error;
};

// closed form with nonzero periods: no single-valued potential exists
struct NonExactFormError : Error {
  int which_period;
  double value;
  NonExactFormError(int which_period_, double value_, const std::string& msg)
      : Error(msg), which_period(which_period_), value(value_) {}
};

// triple invariant requested for a link with a nonzero pairwise linking number
struct NonBorromeanError : Error {
  int i, j;
  double period;
  NonBorromeanError(int i_, int j_, double period_, const std::string& msg)
      : Error(msg), i(i_), j(j_), period(period_) {}
};

// adaptive integration could not meet its tolerance above the step floor
struct StepError : Error {
  using Error::Error;
};

// a grid node mapped too close to the projection pole
struct SingularityError : Error {
  long node;
  SingularityError(long node_, const std::string& msg) : Error(msg), node(node_) {}
};

// supplied 3-form fails the differential consistency spot-check; residual is
// relative to the sampled 4-form magnitude
struct PhiInconsistentError : Error {
  double residual;
  PhiInconsistentError(double residual_, const std::string& msg)
      : Error(msg), residual(residual_) {}
};

// point inversion requested outside the tube it belongs to
struct OutsideTubeError : Error {
  using Error::Error;
};

// tube radius exceeds what curvature / self-distance allow
struct ReachError : Error {
  using Error::Error;
};

// crossing count stayed degenerate after all retry directions
struct GenericityError : Error {
  using Error::Error;
};

// argument outside the documented domain (bad resolution, negative flux, ...)
struct DomainError : Error {
  using Error::Error;
};

}  // namespace triplink
