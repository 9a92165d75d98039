#pragma once

#include <stdexcept>
#include <string>

namespace snskr {

// Invalid parameters, malformed config, violated type invariants.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A bound-chain precondition failed for this configuration (e.g. decoy
// denominator non-positive after fluctuation widening). The optimizer treats
// these as zero-rate points; the CLI reports them as validation failures.
class ConfigurationError : public ValidationError {
 public:
  explicit ConfigurationError(const std::string& what) : ValidationError(what) {}
};

// Root finder did not converge; carries the last bracket.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double bracket_lo, double bracket_hi)
      : std::runtime_error(what + " [bracket " + std::to_string(bracket_lo) +
                           ", " + std::to_string(bracket_hi) + "]"),
        lo(bracket_lo),
        hi(bracket_hi) {}
  double lo;
  double hi;
};

}  // namespace snskr
