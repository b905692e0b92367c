#pragma once

#include <stdexcept>
#include <string>

namespace freegeo {

inline constexpr const char* kVersion = "0.3.0";

/// Numerical tolerances shared by every module.
///
/// `metric` is relative: it scales with the distances being compared.
/// `lp` is absolute on LP residuals and on equalities between norms,
/// pairings and slopes.
struct Tolerances {
  double metric = 1e-9;
  double lp = 1e-9;
};

/// Process-wide tolerances. The CLI may override `lp` once at startup
/// (FREEGEO_TOL); library code only reads.
const Tolerances& tolerances();
void set_tolerances(const Tolerances& tol);

/// Raised for violated preconditions and failed internal checks.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a mathematical precondition of a construction.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A linear program could not be solved to a certified optimum.
class LpFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace freegeo
