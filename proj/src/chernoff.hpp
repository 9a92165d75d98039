#pragma once

// Chernoff tail-bound inverters. Two directions are needed by the analysis
// chain: estimating an expected value from an observed count (expected_lower,
// expected_upper) and estimating a real value from its expected value
// (real_lower, real_upper). Each bound consumes one failure probability xi.
//
// All functions are pure and reentrant.

namespace snskr::bounds {

struct TailConfig {
  double xi;  // failure probability per bound invocation, 0 < xi < 1

  void validate() const;
};

// Largest E consistent with observing x: returns x/(1+d1) where d1 solves
// (x/(1+d1)) * (d1 - (1+d1)ln(1+d1)) = ln(xi). Result <= x, equality at x=0.
double expected_lower(double x, const TailConfig& cfg);

// Smallest E consistent with observing x: x/(1-d2), d2 in (0,1). For x=0 the
// defining equation degenerates; the Poisson zero-count tail gives ln(1/xi).
double expected_upper(double x, const TailConfig& cfg);

// Upper bound on the realized value given expected value y: (1+d1')y.
double real_upper(double y, const TailConfig& cfg);

// Lower bound on the realized value given expected value y: (1-d2')y,
// clamped to 0 when no d2' in (0,1) satisfies the defining equation
// (which happens whenever y <= ln(1/xi)).
double real_lower(double y, const TailConfig& cfg);

// Bound together with the solved widening parameter delta, for residual
// verification. degenerate marks the clamped/limit branches where no delta
// solves the defining equation.
struct Solved {
  double bound = 0;
  double delta = 0;
  bool degenerate = false;
};

Solved expected_lower_solved(double x, const TailConfig& cfg);
Solved expected_upper_solved(double x, const TailConfig& cfg);
Solved real_upper_solved(double y, const TailConfig& cfg);
Solved real_lower_solved(double y, const TailConfig& cfg);

// Log-domain residuals of the defining equations, evaluated at a solved
// delta; exposed for the verification suite.
double log_residual_expected_lower(double x, double delta, const TailConfig& cfg);
double log_residual_expected_upper(double x, double delta, const TailConfig& cfg);
double log_residual_real_upper(double y, double delta, const TailConfig& cfg);
double log_residual_real_lower(double y, double delta, const TailConfig& cfg);

}  // namespace snskr::bounds
